use std::fmt::Write as _;
use std::io::Read as _;
use std::sync::Arc;

use serde_json::{json, Value};

use lpcoset::parse::{builtin, parse_presentation, parse_subgroup, parse_word};
use lpcoset::pipeline::{enumerate, is_valid_perm_rep, EnumerationConfig, EnumerationResult, ValidityOutcome};
use lpcoset::subgroups::report::{self, Columns};
use lpcoset::subgroups::{self, FiniteIndexSubgroup, LowIndexConfig, SubgroupList};
use lpcoset::{CosetTable, Error, LPresentation, StrategyRegistry};

use crate::{Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),

    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    /// A low-index search that stopped early, with the report of what it found.
    #[error("{source}")]
    Partial { rendered: String, source: Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::Parse { .. }) => 2,
            CliError::Lib(Error::Precondition(_)) => 3,
            CliError::Lib(Error::GaveUp { .. } | Error::Resource(_) | Error::Partial { .. }) => 4,
            CliError::Partial { .. } => 4,
            _ => 1,
        }
    }

    pub fn partial_output(&self) -> Option<&str> {
        match self {
            CliError::Partial { rendered, .. } => Some(rendered),
            _ => None,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_source(path: &str) -> Result<String> {
    let io = |source| CliError::Io { path: path.to_string(), source };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn load(presentation: &str) -> Result<Arc<LPresentation>> {
    let lp = match builtin(presentation) {
        Some(lp) => lp?,
        None => parse_presentation(&read_source(presentation)?)?,
    };
    Ok(Arc::new(lp))
}

fn enumeration_config(cfg: &RunConfig) -> EnumerationConfig {
    EnumerationConfig {
        initial_level: cfg.level.unwrap_or(0),
        initial_max_cosets: cfg.max_cosets as usize,
        escalation_factor: cfg.escalation as usize,
        hard_ceiling: cfg.hard_ceiling as usize,
        reduction_cap: cfg.reduction_cap as usize,
    }
}

fn run_enumeration(cfg: &RunConfig, lp: &LPresentation, subgroup: &str) -> Result<EnumerationResult> {
    let registry = StrategyRegistry::default();
    let strategy = registry.get(&cfg.strategy).ok_or_else(|| {
        CliError::Usage(format!("unknown strategy `{}`; available: {}", cfg.strategy, registry.names().join(", ")))
    })?;
    let sub = parse_subgroup(subgroup, lp.alphabet())?;
    Ok(enumerate(lp, &sub, &enumeration_config(cfg), strategy)?)
}

fn subgroup_of(cfg: &RunConfig, lp: &Arc<LPresentation>, subgroup: &str) -> Result<FiniteIndexSubgroup> {
    let r = run_enumeration(cfg, lp, subgroup)?;
    Ok(FiniteIndexSubgroup::from_enumeration(lp.clone(), &r))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

pub fn index(cfg: &RunConfig, presentation: &str, subgroup: &str) -> Result<String> {
    let lp = load(presentation)?;
    let r = run_enumeration(cfg, &lp, subgroup)?;
    let pair = r.cyclic_pair();
    Ok(match cfg.format {
        Format::Table => {
            let mut out = String::new();
            let _ = writeln!(out, "index: {}", r.index);
            let _ = writeln!(out, "level: {}", r.level_used);
            let _ = writeln!(out, "escalations: {}", r.escalations);
            let _ = writeln!(out, "trace:");
            for e in &r.trace {
                let _ = writeln!(out, "  {e}");
            }
            out
        }
        Format::Csv => {
            let mut out =
                format!("index,level,escalations,cyclic_i,cyclic_j\n{},{},{},", r.index, r.level_used, r.escalations);
            match pair {
                Some((i, j)) => {
                    let _ = writeln!(out, "{i},{j}");
                }
                None => out.push_str(",\n"),
            }
            out
        }
        Format::Json => pretty(&json!({
            "index": r.index,
            "level": r.level_used,
            "escalations": r.escalations,
            "strategy": cfg.strategy,
            "cyclic_pair": pair,
            "trace": r.trace,
            "table": r.table.dump_rows(),
        })),
    })
}

pub fn member(cfg: &RunConfig, presentation: &str, subgroup: &str, word: &str) -> Result<String> {
    let lp = load(presentation)?;
    let u = subgroup_of(cfg, &lp, subgroup)?;
    let w = parse_word(word, lp.alphabet())?;
    let yes = u.contains(&w)?;
    Ok(match cfg.format {
        Format::Table => format!("{yes}\n"),
        Format::Csv => format!("member\n{yes}\n"),
        Format::Json => pretty(&json!({ "member": yes, "index": u.index() })),
    })
}

fn subgroup_report(cfg: &RunConfig, u: &FiniteIndexSubgroup) -> String {
    let alphabet = u.owner().alphabet();
    let gens: Vec<String> = u.generators().iter().map(|g| alphabet.format_word(g)).collect();
    match cfg.format {
        Format::Table => {
            let mut out = format!("index: {}\ngenerators:\n", u.index());
            for g in &gens {
                let _ = writeln!(out, "  {g}");
            }
            out
        }
        Format::Csv => {
            let mut out = format!("field,value\nindex,{}\n", u.index());
            for g in &gens {
                let _ = writeln!(out, "generator,{g}");
            }
            out
        }
        Format::Json => pretty(&json!({
            "index": u.index(),
            "generators": gens,
            "table": u.table().dump_rows(),
        })),
    }
}

pub fn core(cfg: &RunConfig, presentation: &str, subgroup: &str) -> Result<String> {
    let lp = load(presentation)?;
    let u = subgroup_of(cfg, &lp, subgroup)?;
    let h = subgroups::core(&u, cfg.reduction_cap as usize)?;
    Ok(subgroup_report(cfg, &h))
}

pub fn intersect(cfg: &RunConfig, presentation: &str, subgroup: &str, subgroup2: &str) -> Result<String> {
    let lp = load(presentation)?;
    let u = subgroup_of(cfg, &lp, subgroup)?;
    let v = subgroup_of(cfg, &lp, subgroup2)?;
    Ok(subgroup_report(cfg, &subgroups::intersect(&u, &v)?))
}

pub struct LowIndexOptions {
    pub max_index: usize,
    pub normal: bool,
    pub maximal: bool,
    pub list: bool,
    pub max_candidates: Option<usize>,
}

fn low_index_report(cfg: &RunConfig, list: &SubgroupList, opts: &LowIndexOptions) -> String {
    let cols = Columns { normal: opts.normal, maximal: opts.maximal };
    match cfg.format {
        Format::Table => {
            let mut out = report::counts_table(list, cols);
            if opts.list {
                out.push('\n');
                out.push_str(&report::subgroup_lines(list));
            }
            out
        }
        Format::Csv => report::counts_csv(list, cols),
        Format::Json => {
            let mut v = report::to_json(list);
            if !opts.list {
                v.as_object_mut().expect("report object").remove("subgroups");
            }
            pretty(&v)
        }
    }
}

pub fn low_index(cfg: &RunConfig, presentation: &str, opts: &LowIndexOptions) -> Result<String> {
    let lp = load(presentation)?;
    let defaults = LowIndexConfig::default();
    let config = LowIndexConfig {
        level: cfg.level.unwrap_or(defaults.level),
        reduction_cap: cfg.reduction_cap as usize,
        max_candidates: opts.max_candidates.unwrap_or(defaults.max_candidates),
    };
    let flags = opts.normal || opts.maximal || opts.list;
    match subgroups::low_index(&lp, opts.max_index, &config) {
        Ok(mut list) => {
            if flags {
                subgroups::mark_normal_and_maximal(&mut list);
            }
            Ok(low_index_report(cfg, &list, opts))
        }
        Err(Error::Partial { reason, partial }) => {
            let mut list = *partial;
            if flags {
                subgroups::mark_normal_and_maximal(&mut list);
            }
            let rendered = low_index_report(cfg, &list, opts);
            Err(CliError::Partial { rendered, source: Error::Partial { reason, partial: Box::new(list) } })
        }
        Err(e) => Err(e.into()),
    }
}

/// Reads a tab-separated dump, or the `table` field of a JSON report.
fn read_table(text: &str, rank: usize) -> Result<CosetTable> {
    if !text.trim_start().starts_with('{') {
        return Ok(CosetTable::parse_dump(text, rank)?);
    }
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    let rows: Vec<Vec<u32>> = v
        .get("table")
        .cloned()
        .map(serde_json::from_value)
        .transpose()
        .map_err(|e| Error::parse(0, format!("bad `table` field: {e}")))?
        .ok_or_else(|| Error::parse(0, "JSON input has no `table` field"))?;
    Ok(CosetTable::from_dump_rows(rank, &rows)?)
}

fn validity_report(cfg: &RunConfig, lp: &LPresentation, outcome: &ValidityOutcome) -> String {
    let names = lp.endomorphism_names();
    let visited: Vec<String> = outcome.visited.iter().map(|e| e.display(names)).collect();
    let witness = outcome.witness.as_ref().map(|w| {
        (lp.alphabet().format_word(&w.relator), w.endo.display(names), w.coset + 1, w.moved_to + 1, w.image.to_string())
    });
    match cfg.format {
        Format::Table => {
            let mut out = String::new();
            match &witness {
                None => {
                    let _ = writeln!(out, "valid");
                    let _ = writeln!(out, "visited: {}", visited.join(", "));
                }
                Some((r, e, c, d, img)) => {
                    let _ = writeln!(out, "invalid");
                    let _ = writeln!(out, "relator: {r}");
                    let _ = writeln!(out, "endomorphism: {e}");
                    let _ = writeln!(out, "image: {img}");
                    let _ = writeln!(out, "coset: {c} -> {d}");
                }
            }
            out
        }
        Format::Csv => match &witness {
            None => "verdict,relator,endomorphism,coset,moved_to\nvalid,,,,\n".to_string(),
            Some((r, e, c, d, _)) => format!("verdict,relator,endomorphism,coset,moved_to\ninvalid,{r},{e},{c},{d}\n"),
        },
        Format::Json => pretty(&json!({
            "valid": outcome.is_valid(),
            "visited": visited,
            "witness": witness.map(|(r, e, c, d, img)| json!({
                "relator": r, "endomorphism": e, "coset": c, "moved_to": d, "image": img,
            })),
        })),
    }
}

pub fn validate(cfg: &RunConfig, presentation: &str, table: &str) -> Result<String> {
    let lp = load(presentation)?;
    let t = read_table(&read_source(table)?, lp.rank())?;
    let outcome = is_valid_perm_rep(&lp, &t.to_perm_rep(), cfg.reduction_cap as usize)?;
    Ok(validity_report(cfg, &lp, &outcome))
}

pub fn strategies() -> String {
    let registry = StrategyRegistry::default();
    let mut out = String::new();
    for s in registry.iter() {
        let _ = writeln!(out, "{:<8} {}", s.name(), s.description());
    }
    out
}
