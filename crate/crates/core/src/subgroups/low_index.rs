use std::collections::HashSet;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::coset_enum::{CosetTable, RelatorSet, UNDEFINED};
use crate::error::{Error, Result};
use crate::pipeline::{fold_to_validity, DEFAULT_REDUCTION_CAP};
use crate::presentations::{FinitePresentation, LPresentation};
use crate::words::Letter;

use super::{is_normal, is_subgroup_of, FiniteIndexSubgroup, SubgroupList};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowIndexConfig {
    /// Truncation level of the covering presentation searched.
    pub level: usize,
    pub reduction_cap: usize,
    /// Give up, returning the subgroups found so far, after this many
    /// candidate tables.
    pub max_candidates: usize,
}

impl Default for LowIndexConfig {
    fn default() -> Self {
        LowIndexConfig { level: 1, reduction_cap: DEFAULT_REDUCTION_CAP, max_candidates: 50_000_000 }
    }
}

struct Search<'a> {
    max_index: usize,
    cols: usize,
    rels: &'a RelatorSet,
}

#[derive(Clone)]
struct State {
    entries: Vec<u32>,
    live: usize,
    pending: Vec<(u32, u32)>,
}

impl State {
    fn get(&self, c: usize, col: usize, cols: usize) -> u32 {
        self.entries[c * cols + col]
    }
}

impl Search<'_> {
    fn set(&self, s: &mut State, c: usize, col: usize, d: usize) -> bool {
        let cols = self.cols;
        let e = s.get(c, col, cols);
        if e != UNDEFINED {
            return e as usize == d;
        }
        if s.get(d, col ^ 1, cols) != UNDEFINED {
            return false;
        }
        s.entries[c * cols + col] = d as u32;
        s.entries[d * cols + (col ^ 1)] = c as u32;
        s.pending.push((c as u32, col as u32));
        true
    }

    /// Scans `w` from `c`, deducing a single missing entry. False on a
    /// contradiction.
    fn scan(&self, s: &mut State, c: usize, w: &[Letter]) -> bool {
        let cols = self.cols;
        let n = w.len();
        let (mut f, mut i) = (c, 0);
        while i < n {
            let e = s.get(f, w[i].code(), cols);
            if e == UNDEFINED {
                break;
            }
            f = e as usize;
            i += 1;
        }
        if i == n {
            return f == c;
        }
        let (mut b, mut j) = (c, n);
        while j > i {
            let e = s.get(b, w[j - 1].code() ^ 1, cols);
            if e == UNDEFINED {
                break;
            }
            b = e as usize;
            j -= 1;
        }
        if j == i {
            return f == b;
        }
        if j == i + 1 {
            return self.set(s, f, w[i].code(), b);
        }
        true
    }

    fn propagate(&self, s: &mut State) -> bool {
        while let Some((c, col)) = s.pending.pop() {
            let (c, col) = (c as usize, col as usize);
            let d = s.get(c, col, self.cols) as usize;
            for w in self.rels.starting_with(col) {
                if !self.scan(s, c, w) {
                    return false;
                }
            }
            for w in self.rels.starting_with(col ^ 1) {
                if !self.scan(s, d, w) {
                    return false;
                }
            }
        }
        true
    }

    fn run<F>(&self, s: State, pos: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[u32], usize) -> ControlFlow<()>,
    {
        let cols = self.cols;
        let mut pos = pos;
        while pos < s.live * cols && s.entries[pos] != UNDEFINED {
            pos += 1;
        }
        if pos == s.live * cols {
            return visit(&s.entries[..pos], s.live);
        }
        let (c, col) = (pos / cols, pos % cols);
        for d in 0..s.live {
            if s.get(d, col ^ 1, cols) != UNDEFINED {
                continue;
            }
            let mut t = s.clone();
            if self.set(&mut t, c, col, d) && self.propagate(&mut t) {
                self.run(t, pos + 1, visit)?;
            }
        }
        if s.live < self.max_index {
            let mut t = s;
            t.live += 1;
            let d = t.live - 1;
            if self.set(&mut t, c, col, d) && self.propagate(&mut t) {
                self.run(t, pos + 1, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Visits every standardized coset table of index at most `max_index` for a
/// finite presentation, each exactly once. The visitor receives the
/// row-major entries and the index.
pub fn covering_subgroup_tables<F>(fp: &FinitePresentation, max_index: usize, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[u32], usize) -> ControlFlow<()>,
{
    if max_index == 0 {
        return ControlFlow::Continue(());
    }
    let rels = RelatorSet::new(fp.relators(), fp.rank());
    let cols = 2 * fp.rank();
    let search = Search { max_index, cols, rels: &rels };
    let mut s = State { entries: vec![UNDEFINED; max_index * cols], live: 1, pending: Vec::new() };
    // relators of length one kill a generator outright
    for w in rels.relators() {
        if w.len() == 1 {
            let col = w.letters()[0].code();
            if !search.set(&mut s, 0, col, 0) {
                return ControlFlow::Continue(());
            }
        }
    }
    if !search.propagate(&mut s) {
        return ControlFlow::Continue(());
    }
    search.run(s, 0, &mut visit)
}

/// All subgroups of index at most `max_index`.
///
/// Tables of a covering presentation are folded until valid and the results
/// deduplicated. Normal and maximal flags are left unset.
pub fn low_index(lp: &Arc<LPresentation>, max_index: usize, config: &LowIndexConfig) -> Result<SubgroupList> {
    let fp = lp.covering_presentation(config.level);
    let rank = lp.rank();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut found: Vec<FiniteIndexSubgroup> = Vec::new();
    let mut candidates = 0usize;
    let mut failure: Option<Error> = None;
    let flow = covering_subgroup_tables(&fp, max_index, |entries, n| {
        candidates += 1;
        if candidates > config.max_candidates {
            return ControlFlow::Break(());
        }
        let rows: Vec<Vec<u32>> = entries.chunks(2 * rank).map(<[u32]>::to_vec).collect();
        let step = CosetTable::from_rows(rank, &rows).and_then(|t| fold_to_validity(lp, t, config.reduction_cap));
        match step {
            Ok((table, _, _)) => {
                let table = table.standardize();
                if seen.insert(table.canonical_key()) {
                    found.push(FiniteIndexSubgroup::trusted(lp.clone(), table));
                }
                log::trace!("candidate {candidates} of index {n}");
                ControlFlow::Continue(())
            }
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let list = SubgroupList::new(max_index, found);
    if flow.is_break() {
        return Err(Error::Partial {
            reason: format!("stopped after {} candidate tables", config.max_candidates),
            partial: Box::new(list),
        });
    }
    Ok(list)
}

/// Sets the normal and maximal flag of every entry. A subgroup of index at
/// least 2 is maximal when no proper subgroup of the list other than the
/// whole group contains it.
pub fn mark_normal_and_maximal(list: &mut SubgroupList) {
    let snapshot: Vec<FiniteIndexSubgroup> = list.entries().iter().map(|e| e.subgroup.clone()).collect();
    for e in list.entries_mut() {
        let u = &e.subgroup;
        e.normal = Some(is_normal(u));
        e.maximal = Some(
            u.index() >= 2 && !snapshot.iter().any(|v| v.index() > 1 && v.index() < u.index() && is_subgroup_of(u, v)),
        );
    }
}
