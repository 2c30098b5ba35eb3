//! Validity of a permutation representation for an L-presented group, and
//! the index computation that escalates the truncation level until a valid
//! coset table is found.
//!
//! A representation `φ` coming from a covering presentation is valid when
//! every relator `r^δ` (`r` iterated, `δ` in the endomorphism monoid) lies in
//! its kernel. The monoid is searched breadth-first; a node `δ` whose
//! kernel contains the kernel of an already visited node's representation
//! needs no descendants, since their relator images are then images of
//! already-covered ones under a homomorphism.

use std::collections::VecDeque;

use serde::Serialize;

use crate::coset_enum::{todd_coxeter, CosetTable, EnumerationStrategy, Limits, TcOutcome};
use crate::error::{Error, Result};
use crate::perms::{kernel_contained, Containment, Permutation, PermutationRep};
use crate::presentations::{LPresentation, SubgroupSpec};
use crate::words::{EndoWord, Word};

/// Default cap on the image group size in the kernel-containment test.
pub const DEFAULT_REDUCTION_CAP: usize = 100_000;

/// Hard ceiling for the cap doubling in [`cyclic_reduction_pair`].
pub const REDUCTION_CAP_CEILING: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Valid,
    Invalid,
}

/// An iterated relator whose image under some monoid element is not in the
/// kernel.
#[derive(Clone, Debug)]
pub struct InvalidWitness {
    /// Position of the relator in the iterated relator list.
    pub relator_index: usize,
    pub relator: Word,
    pub endo: EndoWord,
    /// The image of `relator^endo` under the representation.
    pub image: Permutation,
    /// A coset moved by that image, and where it goes.
    pub coset: usize,
    pub moved_to: usize,
}

#[derive(Clone, Debug)]
pub struct ValidityOutcome {
    pub verdict: Verdict,
    pub witness: Option<InvalidWitness>,
    /// The visited set; always starts with the identity.
    pub visited: Vec<EndoWord>,
    /// Every monoid element whose relator images were checked, in order.
    pub checked: Vec<EndoWord>,
}

impl ValidityOutcome {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

fn check_fixed(lp: &LPresentation, phi: &PermutationRep) -> Result<()> {
    if phi.rank() != lp.rank() {
        return Err(Error::Input(format!(
            "representation has {} generators, presentation has {}",
            phi.rank(),
            lp.rank()
        )));
    }
    for q in lp.fixed() {
        if !phi.word_image(q).is_identity() {
            return Err(Error::Precondition(format!(
                "fixed relator {} is not in the kernel of the representation",
                lp.alphabet().format_word(q)
            )));
        }
    }
    Ok(())
}

/// Returns the first iterated relator with a non-trivial image under `rep`.
fn first_failure(lp: &LPresentation, rep: &PermutationRep) -> Option<(usize, Permutation)> {
    lp.iterated().iter().enumerate().find_map(|(i, r)| {
        let img = rep.word_image(r);
        (!img.is_identity()).then_some((i, img))
    })
}

fn witness(lp: &LPresentation, endo: EndoWord, (i, image): (usize, Permutation)) -> InvalidWitness {
    let coset = image.first_moved().expect("non-identity image");
    InvalidWitness {
        relator_index: i,
        relator: lp.iterated()[i].clone(),
        endo,
        moved_to: image.image(coset),
        image,
        coset,
    }
}

/// Decides whether `phi` induces a homomorphism of the L-presented group.
///
/// The fixed relators are a precondition and must already lie in the kernel.
/// The identity's relator images are checked before the monoid search
/// starts; the search itself dequeues first-in first-out, checks relators
/// before trying to reduce, and only expands nodes that reduce to nothing
/// visited so far. An `Unknown` containment answer counts as "no reduction".
pub fn is_valid_perm_rep(lp: &LPresentation, phi: &PermutationRep, cap: usize) -> Result<ValidityOutcome> {
    check_fixed(lp, phi)?;
    let id = lp.identity_endo();
    let mut checked = vec![id.clone()];
    if let Some(fail) = first_failure(lp, phi) {
        return Ok(ValidityOutcome {
            verdict: Verdict::Invalid,
            witness: Some(witness(lp, id.clone(), fail)),
            visited: vec![id],
            checked,
        });
    }

    let mut visited: Vec<(EndoWord, PermutationRep)> = vec![(id.clone(), phi.clone())];
    let mut queue: VecDeque<(EndoWord, PermutationRep)> = VecDeque::new();
    for d in id.descendants() {
        let rep = phi.precompose(&lp.endomorphisms()[d.factors()[0]]);
        queue.push_back((d, rep));
    }

    while let Some((delta, rep)) = queue.pop_front() {
        checked.push(delta.clone());
        if let Some(fail) = first_failure(lp, &rep) {
            log::debug!("validity: relator image under {:?} is {}", delta.factors(), fail.1);
            return Ok(ValidityOutcome {
                verdict: Verdict::Invalid,
                witness: Some(witness(lp, delta, fail)),
                visited: visited.into_iter().map(|(e, _)| e).collect(),
                checked,
            });
        }
        let reduces = visited.iter().any(|(_, sigma_rep)| kernel_contained(sigma_rep, &rep, cap) == Containment::Yes);
        if !reduces {
            for d in delta.descendants() {
                let child = rep.precompose(&lp.endomorphisms()[d.factors()[0]]);
                queue.push_back((d, child));
            }
            visited.push((delta, rep));
        }
    }
    Ok(ValidityOutcome {
        verdict: Verdict::Valid,
        witness: None,
        visited: visited.into_iter().map(|(e, _)| e).collect(),
        checked,
    })
}

/// For a single endomorphism `σ`, the least `j` and then least `i < j` with
/// `σ^j ⤳ σ^i`. Containment answers cut short by the cap trigger a retry
/// with a doubled cap, up to [`REDUCTION_CAP_CEILING`].
pub fn cyclic_reduction_pair(lp: &LPresentation, phi: &PermutationRep, cap: usize) -> Result<(usize, usize)> {
    if lp.endomorphisms().len() != 1 {
        return Err(Error::Input(format!(
            "cyclic reduction needs exactly one endomorphism, found {}",
            lp.endomorphisms().len()
        )));
    }
    let sigma = &lp.endomorphisms()[0];
    let mut cap = cap.max(1);
    loop {
        let mut powers = vec![phi.clone()];
        let mut unknown = false;
        let found = 'search: loop {
            let j = powers.len();
            let next = powers[j - 1].precompose(sigma);
            for (i, earlier) in powers.iter().enumerate() {
                match kernel_contained(earlier, &next, cap) {
                    Containment::Yes => break 'search (i, j),
                    Containment::Unknown => unknown = true,
                    Containment::No => {}
                }
            }
            if unknown {
                break 'search (0, 0);
            }
            powers.push(next);
        };
        if !unknown {
            return Ok(found);
        }
        if cap >= REDUCTION_CAP_CEILING {
            return Err(Error::Resource(format!(
                "image groups exceed the reduction cap ceiling {REDUCTION_CAP_CEILING}"
            )));
        }
        cap = (cap * 2).min(REDUCTION_CAP_CEILING);
    }
}

/// Validity through the single-endomorphism shortcut: with
/// `(i, j) = cyclic_reduction_pair(..)`, the representation is valid iff the
/// fixed relators and all `r^{σ^k}` for `k < j` are in the kernel.
pub fn cyclic_validity(lp: &LPresentation, phi: &PermutationRep, cap: usize) -> Result<(bool, (usize, usize))> {
    let (i, j) = cyclic_reduction_pair(lp, phi, cap)?;
    let sigma = &lp.endomorphisms()[0];
    let fixed_ok = lp.fixed().iter().all(|q| phi.word_image(q).is_identity());
    let mut rep = phi.clone();
    let mut ok = fixed_ok;
    for _ in 0..j {
        if first_failure(lp, &rep).is_some() {
            ok = false;
            break;
        }
        rep = rep.precompose(sigma);
    }
    Ok((ok, (i, j)))
}

/// Folds an invalid closed table: every coset is identified with its image
/// under the failing relator, and the quotient is returned standardized.
pub fn fold_invalid(table: &CosetTable, witness: &InvalidWitness) -> CosetTable {
    let n = table.num_cosets();
    debug_assert_eq!(witness.image.degree(), n);
    let pairs: Vec<(usize, usize)> =
        (0..n).filter(|&c| witness.image.image(c) != c).map(|c| (c, witness.image.image(c))).collect();
    assert!(!pairs.is_empty(), "folding with a witness that moves nothing");
    table.quotient(pairs)
}

/// Folds until the table is valid for `lp`. Returns the valid table and the
/// indices seen after each fold.
pub fn fold_to_validity(
    lp: &LPresentation,
    table: CosetTable,
    cap: usize,
) -> Result<(CosetTable, ValidityOutcome, Vec<usize>)> {
    let mut table = table;
    let mut history = Vec::new();
    loop {
        let outcome = is_valid_perm_rep(lp, &table.to_perm_rep(), cap)?;
        match &outcome.witness {
            None => return Ok((table, outcome, history)),
            Some(w) => {
                table = fold_invalid(&table, w);
                history.push(table.num_cosets());
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub initial_level: usize,
    pub initial_max_cosets: usize,
    pub escalation_factor: usize,
    pub hard_ceiling: usize,
    pub reduction_cap: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            initial_level: 0,
            initial_max_cosets: 1 << 14,
            escalation_factor: 4,
            hard_ceiling: 1_000_000,
            reduction_cap: DEFAULT_REDUCTION_CAP,
        }
    }
}

impl EnumerationConfig {
    fn validate(&self) -> Result<()> {
        if self.initial_max_cosets == 0 || self.hard_ceiling == 0 || self.reduction_cap == 0 {
            return Err(Error::Input("coset limits and reduction cap must be positive".into()));
        }
        if self.escalation_factor < 2 {
            return Err(Error::Input("escalation factor must be at least 2".into()));
        }
        Ok(())
    }
}

/// One line of the structured trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Overflow { level: usize, max_cosets: usize, live: usize },
    Escalation { level: usize, max_cosets: usize },
    Closed { level: usize, index: usize },
    Fold { relator: usize, endo: Vec<usize>, coset: usize, index: usize },
    Verdict { valid: bool, index: usize, visited: usize },
    CyclicShortcut { i: usize, j: usize },
}

impl std::fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TraceEvent::Overflow { level, max_cosets, live } => {
                write!(f, "tc-overflow level={level} max_cosets={max_cosets} live={live}")
            }
            TraceEvent::Escalation { level, max_cosets } => {
                write!(f, "escalation level={level} max_cosets={max_cosets}")
            }
            TraceEvent::Closed { level, index } => write!(f, "tc-closed level={level} index={index}"),
            TraceEvent::Fold { relator, endo, coset, index } => {
                write!(f, "fold relator={relator} endo={endo:?} coset={} index={index}", coset + 1)
            }
            TraceEvent::Verdict { valid, index, visited } => {
                write!(f, "verdict valid={valid} index={index} visited={visited}")
            }
            TraceEvent::CyclicShortcut { i, j } => write!(f, "cyclic-shortcut i={i} j={j}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationResult {
    pub table: CosetTable,
    pub rep: PermutationRep,
    pub index: usize,
    pub level_used: usize,
    pub escalations: usize,
    pub validity: ValidityOutcome,
    pub trace: Vec<TraceEvent>,
}

impl EnumerationResult {
    /// The `(i, j)` pair recorded when the presentation has one endomorphism.
    pub fn cyclic_pair(&self) -> Option<(usize, usize)> {
        self.trace.iter().find_map(|e| match e {
            TraceEvent::CyclicShortcut { i, j } => Some((*i, *j)),
            _ => None,
        })
    }
}

fn emit(trace: &mut Vec<TraceEvent>, e: TraceEvent) {
    log::info!("{e}");
    trace.push(e);
}

/// Computes the index of the subgroup, raising the truncation level and the
/// coset limit geometrically whenever enumeration overflows. Gives up only at
/// the hard ceiling; that is never a claim of infinite index.
pub fn enumerate(
    lp: &LPresentation,
    sub: &SubgroupSpec,
    config: &EnumerationConfig,
    strategy: &dyn EnumerationStrategy,
) -> Result<EnumerationResult> {
    config.validate()?;
    for g in sub.generators() {
        g.check_rank(lp.rank())?;
    }
    let mut level = config.initial_level;
    let mut max_cosets = config.initial_max_cosets.min(config.hard_ceiling);
    let mut escalations = 0;
    let mut trace = Vec::new();
    loop {
        let fp = lp.covering_presentation(level);
        match todd_coxeter(&fp, sub, &Limits::with_max_cosets(max_cosets), strategy)? {
            TcOutcome::Overflow(o) => {
                emit(&mut trace, TraceEvent::Overflow { level, max_cosets, live: o.live });
                if max_cosets >= config.hard_ceiling {
                    return Err(Error::GaveUp { ceiling: config.hard_ceiling, level, escalations });
                }
                level += 1;
                max_cosets = max_cosets.saturating_mul(config.escalation_factor).min(config.hard_ceiling);
                escalations += 1;
                emit(&mut trace, TraceEvent::Escalation { level, max_cosets });
            }
            TcOutcome::Closed(mut table) => {
                emit(&mut trace, TraceEvent::Closed { level, index: table.num_cosets() });
                loop {
                    let rep = table.to_perm_rep();
                    let validity = is_valid_perm_rep(lp, &rep, config.reduction_cap)?;
                    emit(
                        &mut trace,
                        TraceEvent::Verdict {
                            valid: validity.is_valid(),
                            index: table.num_cosets(),
                            visited: validity.visited.len(),
                        },
                    );
                    match &validity.witness {
                        Some(w) => {
                            table = fold_invalid(&table, w);
                            emit(
                                &mut trace,
                                TraceEvent::Fold {
                                    relator: w.relator_index,
                                    endo: w.endo.factors().to_vec(),
                                    coset: w.coset,
                                    index: table.num_cosets(),
                                },
                            );
                        }
                        None => {
                            if lp.endomorphisms().len() == 1 {
                                let (i, j) = cyclic_reduction_pair(lp, &rep, config.reduction_cap)?;
                                emit(&mut trace, TraceEvent::CyclicShortcut { i, j });
                            }
                            return Ok(EnumerationResult {
                                index: table.num_cosets(),
                                rep,
                                table,
                                level_used: level,
                                escalations,
                                validity,
                                trace,
                            });
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset_enum::Felsch;
    use crate::parse::parse_subgroup;
    use crate::presentations::{basilica, grigorchuk};

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn basilica_phi() -> PermutationRep {
        PermutationRep::new(3, vec![p("(1,2,3)", 3), p("(2,3)", 3)]).unwrap()
    }

    #[test]
    fn basilica_example_is_valid() {
        let lp = basilica();
        let out = is_valid_perm_rep(&lp, &basilica_phi(), 1000).unwrap();
        assert!(out.is_valid());
        let visited: Vec<usize> = out.visited.iter().map(|e| e.len()).collect();
        assert_eq!(visited, vec![0, 1, 2]);
        assert_eq!(cyclic_reduction_pair(&lp, &basilica_phi(), 1000).unwrap(), (1, 3));
        assert_eq!(cyclic_validity(&lp, &basilica_phi(), 1000).unwrap(), (true, (1, 3)));
    }

    #[test]
    fn finite_presentation_needs_no_search() {
        let lp = LPresentation::from_finite(&basilica().covering_presentation(0));
        let out = is_valid_perm_rep(&lp, &basilica_phi(), 1000).unwrap();
        assert!(out.is_valid());
        assert_eq!(out.visited.len(), 1);
    }

    #[test]
    fn abelian_quotient_is_valid() {
        let lp = basilica();
        let phi = PermutationRep::new(2, vec![p("(1,2)", 2), Permutation::identity(2)]).unwrap();
        let out = is_valid_perm_rep(&lp, &phi, 100).unwrap();
        assert!(out.is_valid());
        for e in &out.checked {
            let r = &lp.iterated()[0];
            assert!(phi.word_image(&e.composite().apply(r).unwrap()).is_identity());
        }
    }

    #[test]
    fn trivial_rep_pair() {
        let phi = PermutationRep::new(1, vec![Permutation::identity(1); 2]).unwrap();
        assert_eq!(cyclic_reduction_pair(&basilica(), &phi, 10).unwrap(), (0, 1));
    }

    #[test]
    fn fixed_relator_violation_is_precondition_error() {
        let lp = grigorchuk();
        let bad = PermutationRep::new(
            3,
            vec![p("(1,2,3)", 3), Permutation::identity(3), Permutation::identity(3), Permutation::identity(3)],
        )
        .unwrap();
        assert!(matches!(is_valid_perm_rep(&lp, &bad, 100), Err(Error::Precondition(_))));
    }

    #[test]
    fn basilica_index_three() {
        let lp = basilica();
        let sub = parse_subgroup("a^3, b, a*b*a", lp.alphabet()).unwrap();
        let r = enumerate(&lp, &sub, &EnumerationConfig::default(), &Felsch).unwrap();
        assert_eq!(r.index, 3);
        assert_eq!(r.level_used, 0);
        assert_eq!(r.escalations, 0);
        assert_eq!(r.cyclic_pair(), Some((1, 3)));
    }

    #[test]
    fn grigorchuk_small_indices() {
        let lp = grigorchuk();
        let whole = SubgroupSpec::whole(4);
        assert_eq!(enumerate(&lp, &whole, &EnumerationConfig::default(), &Felsch).unwrap().index, 1);
        let sub = parse_subgroup("b,c,d,a*b*a,a*c*a,a*d*a", lp.alphabet()).unwrap();
        assert_eq!(enumerate(&lp, &sub, &EnumerationConfig::default(), &Felsch).unwrap().index, 2);
    }

    #[test]
    fn bad_config_rejected() {
        let lp = basilica();
        let cfg = EnumerationConfig { escalation_factor: 1, ..Default::default() };
        assert!(enumerate(&lp, &SubgroupSpec::whole(2), &cfg, &Felsch).is_err());
    }
}
