//! Text, CSV and JSON renderings of a subgroup list.

use std::fmt::Write as _;

use serde::Serialize;

use super::{IndexCount, SubgroupList};

fn cell(v: Option<usize>) -> String {
    v.map(|n| n.to_string()).unwrap_or_default()
}

/// Which flag columns to show next to the subgroup counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Columns {
    pub normal: bool,
    pub maximal: bool,
}

fn header(cols: Columns) -> Vec<&'static str> {
    let mut h = vec!["index", "subgroups"];
    if cols.normal {
        h.push("normal");
    }
    if cols.maximal {
        h.push("maximal");
    }
    h
}

fn row(c: &IndexCount, cols: Columns) -> Vec<String> {
    let mut r = vec![c.index.to_string(), c.subgroups.to_string()];
    if cols.normal {
        r.push(cell(c.normal));
    }
    if cols.maximal {
        r.push(cell(c.maximal));
    }
    r
}

/// Aligned table with one row per index.
pub fn counts_table(list: &SubgroupList, cols: Columns) -> String {
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        let padded: Vec<String> = cells.iter().map(|c| format!("{c:>9}")).collect();
        let _ = writeln!(out, "{}", padded.join(" ").trim_end());
    };
    line(&mut out, &header(cols).iter().map(|s| s.to_string()).collect::<Vec<_>>());
    for c in list.counts() {
        line(&mut out, &row(&c, cols));
    }
    out
}

pub fn counts_csv(list: &SubgroupList, cols: Columns) -> String {
    let mut out = header(cols).join(",");
    out.push('\n');
    for c in list.counts() {
        out.push_str(&row(&c, cols).join(","));
        out.push('\n');
    }
    out
}

/// One line per subgroup: index, flags and generators.
pub fn subgroup_lines(list: &SubgroupList) -> String {
    let mut out = String::new();
    for (i, e) in list.entries().iter().enumerate() {
        let u = &e.subgroup;
        let alphabet = u.owner().alphabet();
        let flag = |f: Option<bool>, s: &str| if f == Some(true) { s.to_string() } else { String::new() };
        let gens: Vec<String> = u.generators().iter().map(|g| alphabet.format_word(g)).collect();
        let _ = writeln!(
            out,
            "#{:<4} index {:<3} {:<6} {:<7} <{}>",
            i + 1,
            u.index(),
            flag(e.normal, "normal"),
            flag(e.maximal, "maximal"),
            gens.join(", ")
        );
    }
    out
}

#[derive(Serialize)]
struct JsonSubgroup {
    index: usize,
    normal: Option<bool>,
    maximal: Option<bool>,
    generators: Vec<String>,
    /// 1-based coset table rows.
    table: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    max_index: usize,
    counts: &'a [IndexCount],
    subgroups: Vec<JsonSubgroup>,
}

pub fn to_json(list: &SubgroupList) -> serde_json::Value {
    let counts = list.counts();
    let subgroups = list
        .entries()
        .iter()
        .map(|e| {
            let u = &e.subgroup;
            JsonSubgroup {
                index: u.index(),
                normal: e.normal,
                maximal: e.maximal,
                generators: u.generators().iter().map(|g| u.owner().alphabet().format_word(g)).collect(),
                table: u.table().dump_rows(),
            }
        })
        .collect();
    serde_json::to_value(JsonReport { max_index: list.max_index(), counts: &counts, subgroups })
        .expect("report serializes")
}
