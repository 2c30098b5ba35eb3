//! Todd-Coxeter coset enumeration for finite presentations.
//!
//! Cosets are numbered from 0 internally (coset 0 is the subgroup itself);
//! text formats print them from 1. Columns follow the letter encoding of
//! [`crate::words::Letter`]: generator `i` is column `2i`, its inverse `2i+1`.

mod felsch;
mod hlt;
mod strategy;

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::perms::{Permutation, PermutationRep};
use crate::presentations::{FinitePresentation, SubgroupSpec};
use crate::words::{Letter, Word};

pub use felsch::Felsch;
pub use hlt::Hlt;
pub use strategy::{EnumerationStrategy, StrategyRegistry};

pub(crate) const UNDEFINED: u32 = u32::MAX;

/// Resource limits for a single enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of simultaneously live cosets.
    pub max_cosets: usize,
    /// Maximum number of coset definitions over the whole run.
    pub max_steps: usize,
}

impl Limits {
    pub fn with_max_cosets(max_cosets: usize) -> Self {
        Limits { max_cosets, max_steps: max_cosets.saturating_mul(8) }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::with_max_cosets(1_000_000)
    }
}

/// The limit was hit before the table closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Overflow {
    pub live: usize,
    pub defined: usize,
}

#[derive(Clone, Debug)]
pub enum TcOutcome {
    Closed(CosetTable),
    Overflow(Overflow),
}

impl TcOutcome {
    pub fn closed(self) -> Option<CosetTable> {
        match self {
            TcOutcome::Closed(t) => Some(t),
            TcOutcome::Overflow(_) => None,
        }
    }
}

/// Cyclically reduced relators together with all cyclic conjugates of each
/// relator and its inverse, grouped by first letter.
#[derive(Clone, Debug)]
pub struct RelatorSet {
    relators: Vec<Word>,
    by_first: Vec<Vec<Vec<Letter>>>,
}

impl RelatorSet {
    pub fn new(relators: &[Word], rank: usize) -> Self {
        let mut cyclic: Vec<Word> = Vec::new();
        for r in relators {
            let c = r.cyclically_reduced();
            if !c.is_empty() && !cyclic.contains(&c) {
                cyclic.push(c);
            }
        }
        let mut by_first: Vec<Vec<Vec<Letter>>> = vec![Vec::new(); 2 * rank];
        for r in &cyclic {
            for w in [r.clone(), r.invert()] {
                let l = w.letters();
                for shift in 0..l.len() {
                    let rotated: Vec<Letter> = l[shift..].iter().chain(&l[..shift]).copied().collect();
                    let bucket = &mut by_first[rotated[0].code()];
                    if !bucket.contains(&rotated) {
                        bucket.push(rotated);
                    }
                }
            }
        }
        RelatorSet { relators: cyclic, by_first }
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub(crate) fn starting_with(&self, column: usize) -> &[Vec<Letter>] {
        &self.by_first[column]
    }
}

/// A partial or closed coset table with union-find coincidence handling.
#[derive(Clone, Debug)]
pub struct CosetTable {
    rank: usize,
    entries: Vec<u32>,
    parent: Vec<u32>,
    live: usize,
    closed: bool,
    deductions: Vec<(u32, u32)>,
    record_deductions: bool,
}

impl PartialEq for CosetTable {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.live_rows() == other.live_rows()
    }
}

impl Eq for CosetTable {}

impl CosetTable {
    /// A table with the single coset 0 and no entries.
    pub fn new(rank: usize) -> Self {
        CosetTable {
            rank,
            entries: vec![UNDEFINED; 2 * rank],
            parent: vec![0],
            live: 1,
            closed: rank == 0,
            deductions: Vec::new(),
            record_deductions: false,
        }
    }

    /// Builds a closed table from complete, 0-based rows in column order.
    pub fn from_rows(rank: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Input("a coset table needs at least one coset".into()));
        }
        let cols = 2 * rank;
        let mut entries = Vec::with_capacity(n * cols);
        for (c, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Input(format!("row {} has {} entries, expected {cols}", c + 1, row.len())));
            }
            for &d in row {
                if d as usize >= n {
                    return Err(Error::Input(format!("row {} references coset {} of {n}", c + 1, d + 1)));
                }
            }
            entries.extend_from_slice(row);
        }
        for c in 0..n {
            for col in 0..cols {
                let d = entries[c * cols + col] as usize;
                if entries[d * cols + (col ^ 1)] as usize != c {
                    return Err(Error::Input(format!(
                        "inconsistent table: coset {} column {} is not inverted by coset {}",
                        c + 1,
                        col,
                        d + 1
                    )));
                }
            }
        }
        let t = CosetTable {
            rank,
            entries,
            parent: (0..n as u32).collect(),
            live: n,
            closed: true,
            deductions: Vec::new(),
            record_deductions: false,
        };
        if t.reachable_from_base().len() != n {
            return Err(Error::Input("coset table is not transitive".into()));
        }
        Ok(t)
    }

    /// Builds a closed table from the permutation images of the generators.
    pub fn from_perm_rep(rep: &PermutationRep) -> Result<Self> {
        let n = rep.degree();
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|p| {
                (0..rep.rank())
                    .flat_map(|g| [rep.generator(g).image(p) as u32, rep.generator_inverse(g).image(p) as u32])
                    .collect()
            })
            .collect();
        CosetTable::from_rows(rep.rank(), &rows)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn columns(&self) -> usize {
        2 * self.rank
    }

    /// Number of live cosets; the index once the table is closed.
    pub fn num_cosets(&self) -> usize {
        self.live
    }

    /// Number of coset ids ever allocated, live or dead.
    pub fn total_defined(&self) -> usize {
        self.parent.len()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn is_live(&self, c: usize) -> bool {
        c < self.parent.len() && self.parent[c] as usize == c
    }

    #[inline]
    pub fn entry(&self, c: usize, column: usize) -> Option<usize> {
        let e = self.entries[c * 2 * self.rank + column];
        (e != UNDEFINED).then_some(e as usize)
    }

    #[inline]
    pub(crate) fn raw(&self, c: usize, column: usize) -> u32 {
        self.entries[c * 2 * self.rank + column]
    }

    #[inline]
    fn put(&mut self, c: usize, column: usize, d: u32) {
        let cols = 2 * self.rank;
        self.entries[c * cols + column] = d;
    }

    pub fn act(&self, c: usize, l: Letter) -> Option<usize> {
        self.entry(c, l.code())
    }

    /// Follows `w` letter by letter from `start`.
    pub fn trace(&self, start: usize, w: &Word) -> Option<usize> {
        let mut c = start;
        for &l in w.letters() {
            c = self.act(c, l)?;
        }
        Some(c)
    }

    /// Live rows in id order; dead cosets are skipped.
    pub fn live_rows(&self) -> Vec<Vec<u32>> {
        let cols = self.columns();
        (0..self.parent.len())
            .filter(|&c| self.is_live(c))
            .map(|c| self.entries[c * cols..(c + 1) * cols].to_vec())
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        (0..self.parent.len())
            .filter(|&c| self.is_live(c))
            .all(|c| (0..self.columns()).all(|col| self.raw(c, col) != UNDEFINED))
    }

    /// True when the table is complete, every relator closes at every coset
    /// and every subgroup generator closes at coset 0.
    pub fn satisfies(&self, relators: &[Word], subgroup: &[Word]) -> bool {
        if !self.is_complete() {
            return false;
        }
        let live: Vec<usize> = (0..self.parent.len()).filter(|&c| self.is_live(c)).collect();
        relators.iter().all(|r| live.iter().all(|&c| self.trace(c, r) == Some(c)))
            && subgroup.iter().all(|g| self.trace(0, g) == Some(0))
    }

    fn reachable_from_base(&self) -> Vec<usize> {
        let mut seen = vec![false; self.parent.len()];
        let mut order = vec![0];
        seen[0] = true;
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            i += 1;
            for col in 0..self.columns() {
                if let Some(d) = self.entry(c, col) {
                    if !seen[d] {
                        seen[d] = true;
                        order.push(d);
                    }
                }
            }
        }
        order
    }

    // ---- construction primitives used by the strategies ----

    pub(crate) fn set_recording(&mut self, on: bool) {
        self.record_deductions = on;
        if !on {
            self.deductions.clear();
        }
    }

    pub(crate) fn pop_deduction(&mut self) -> Option<(usize, usize)> {
        self.deductions.pop().map(|(c, col)| (c as usize, col as usize))
    }

    /// Allocates a fresh coset as the target of `(c, column)`.
    pub(crate) fn define(&mut self, c: usize, column: usize, limits: &Limits) -> Result<usize, Overflow> {
        if self.live >= limits.max_cosets || self.parent.len() >= limits.max_steps {
            return Err(Overflow { live: self.live, defined: self.parent.len() });
        }
        let d = self.parent.len();
        self.parent.push(d as u32);
        self.entries.extend(std::iter::repeat_n(UNDEFINED, self.columns()));
        self.live += 1;
        self.set_edge(c, column, d);
        Ok(d)
    }

    /// Sets `c·x = d` and `d·x⁻¹ = c`; both entries must be undefined.
    pub(crate) fn set_edge(&mut self, c: usize, column: usize, d: usize) {
        debug_assert_eq!(self.raw(c, column), UNDEFINED);
        debug_assert_eq!(self.raw(d, column ^ 1), UNDEFINED);
        self.put(c, column, d as u32);
        self.put(d, column ^ 1, c as u32);
        if self.record_deductions {
            self.deductions.push((c as u32, column as u32));
        }
    }

    pub(crate) fn find(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut x = c;
        while self.parent[x] as usize != root {
            let next = self.parent[x] as usize;
            self.parent[x] = root as u32;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize, queue: &mut VecDeque<usize>) {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return;
        }
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.parent[kill] = keep as u32;
        self.live -= 1;
        queue.push_back(kill);
    }

    /// Identifies cosets `a` and `b` and processes every consequence. The
    /// smaller id survives, so coset 0 is never killed.
    pub fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = VecDeque::new();
        self.union(a, b, &mut queue);
        while let Some(dead) = queue.pop_front() {
            for col in 0..self.columns() {
                let target = self.raw(dead, col);
                if target == UNDEFINED {
                    continue;
                }
                let target = target as usize;
                self.put(target, col ^ 1, UNDEFINED);
                let mu = self.find(dead);
                let nu = self.find(target);
                if let Some(e) = self.entry(mu, col) {
                    self.union(nu, e, &mut queue);
                } else if let Some(e) = self.entry(nu, col ^ 1) {
                    self.union(mu, e, &mut queue);
                } else {
                    self.set_edge(mu, col, nu);
                }
            }
        }
    }

    /// Scans `w` from `c` in both directions, defining new cosets to close
    /// the gap. Ends with a deduction or a coincidence when the scan meets.
    pub(crate) fn scan_and_fill(&mut self, c: usize, w: &[Letter], limits: &Limits) -> Result<(), Overflow> {
        let n = w.len();
        if n == 0 {
            return Ok(());
        }
        let mut f = c;
        let mut i = 0;
        let mut b = c;
        let mut j = n;
        loop {
            while i < j {
                match self.entry(f, w[i].code()) {
                    Some(next) => {
                        f = next;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                match self.entry(b, w[j - 1].inverse().code()) {
                    Some(next) => {
                        b = next;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            if j == i + 1 {
                self.set_edge(f, w[i].code(), b);
                return Ok(());
            }
            self.define(f, w[i].code(), limits)?;
        }
    }

    /// Scans `w` from `c` without defining cosets; records a deduction when
    /// exactly one entry is missing and a coincidence when the ends disagree.
    pub(crate) fn scan_and_deduce(&mut self, c: usize, w: &[Letter]) {
        let n = w.len();
        let mut f = c;
        let mut i = 0;
        while i < n {
            match self.entry(f, w[i].code()) {
                Some(next) => {
                    f = next;
                    i += 1;
                }
                None => break,
            }
        }
        if i == n {
            if f != c {
                self.coincidence(f, c);
            }
            return;
        }
        let mut b = c;
        let mut j = n;
        while j > i {
            match self.entry(b, w[j - 1].inverse().code()) {
                Some(next) => {
                    b = next;
                    j -= 1;
                }
                None => break,
            }
        }
        if j == i {
            if f != b {
                self.coincidence(f, b);
            }
        } else if j == i + 1 {
            self.set_edge(f, w[i].code(), b);
        }
    }

    // ---- closed-table operations ----

    /// Renumbers live cosets densely, preserving their relative order.
    pub fn compact(&self) -> CosetTable {
        let mut new_id = vec![UNDEFINED; self.parent.len()];
        let mut n = 0u32;
        for (c, slot) in new_id.iter_mut().enumerate() {
            if self.is_live(c) {
                *slot = n;
                n += 1;
            }
        }
        let cols = self.columns();
        let mut entries = Vec::with_capacity(n as usize * cols);
        for c in 0..self.parent.len() {
            if self.is_live(c) {
                for col in 0..cols {
                    let e = self.raw(c, col);
                    entries.push(if e == UNDEFINED { UNDEFINED } else { new_id[e as usize] });
                }
            }
        }
        CosetTable {
            rank: self.rank,
            entries,
            parent: (0..n).collect(),
            live: n as usize,
            closed: self.closed,
            deductions: Vec::new(),
            record_deductions: false,
        }
    }

    /// Relabels cosets in breadth-first discovery order from coset 0,
    /// scanning columns in order. Two closed tables describe the same
    /// subgroup iff their standardized forms are equal.
    pub fn standardize(&self) -> CosetTable {
        let t = if self.live == self.parent.len() { self.clone() } else { self.compact() };
        let order = t.reachable_from_base();
        let mut new_id = vec![UNDEFINED; t.parent.len()];
        for (i, &c) in order.iter().enumerate() {
            new_id[c] = i as u32;
        }
        let cols = t.columns();
        let mut entries = Vec::with_capacity(order.len() * cols);
        for &c in &order {
            for col in 0..cols {
                let e = t.raw(c, col);
                entries.push(if e == UNDEFINED { UNDEFINED } else { new_id[e as usize] });
            }
        }
        CosetTable {
            rank: t.rank,
            entries,
            parent: (0..order.len() as u32).collect(),
            live: order.len(),
            closed: t.closed,
            deductions: Vec::new(),
            record_deductions: false,
        }
    }

    /// Flat entries of a compact table, usable as a canonical sort key.
    pub fn canonical_key(&self) -> Vec<u32> {
        self.live_rows().concat()
    }

    pub fn to_perm_rep(&self) -> PermutationRep {
        assert!(self.closed, "permutation representation of an open coset table");
        let t = if self.live == self.parent.len() { self.clone() } else { self.compact() };
        let n = t.live;
        let gens = (0..t.rank)
            .map(|g| {
                Permutation::from_images((0..n).map(|c| t.raw(c, 2 * g) as usize).collect())
                    .expect("closed table columns are bijections")
            })
            .collect();
        PermutationRep::new(n, gens).expect("consistent degree")
    }

    /// Identifies `c` with `d` in a closed table and returns the standardized
    /// quotient.
    pub fn merged(&self, c: usize, d: usize) -> CosetTable {
        self.quotient([(c, d)])
    }

    /// Identifies every given pair and returns the standardized quotient.
    pub fn quotient(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> CosetTable {
        assert!(self.closed, "quotient of an open coset table");
        let mut t = self.clone();
        t.set_recording(false);
        for (c, d) in pairs {
            let c = t.find(c);
            let d = t.find(d);
            if c != d {
                t.coincidence(c, d);
            }
        }
        t.standardize()
    }

    /// One line per coset: tab-separated 1-based targets, all generator
    /// columns first, then all inverse columns.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in self.dump_rows() {
            let line: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            let _ = writeln!(out, "{}", line.join("\t"));
        }
        out
    }

    /// Rows in dump column order with 1-based targets (0 marks undefined).
    pub fn dump_rows(&self) -> Vec<Vec<u32>> {
        let order: Vec<usize> = (0..self.rank).map(|g| 2 * g).chain((0..self.rank).map(|g| 2 * g + 1)).collect();
        let t = self.compact();
        (0..t.live).map(|c| order.iter().map(|&col| t.raw(c, col).wrapping_add(1)).collect()).collect()
    }

    /// Inverse of [`CosetTable::dump_rows`]; rows may also list only the
    /// generator columns.
    pub fn from_dump_rows(rank: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        let mut internal = vec![vec![UNDEFINED; 2 * rank]; n];
        for (c, row) in rows.iter().enumerate() {
            if row.len() != rank && row.len() != 2 * rank {
                return Err(Error::Input(format!(
                    "row {} has {} entries, expected {} or {}",
                    c + 1,
                    row.len(),
                    rank,
                    2 * rank
                )));
            }
            for (k, &e) in row.iter().enumerate() {
                if e == 0 || e as usize > n {
                    return Err(Error::Input(format!("row {} has out-of-range target {e}", c + 1)));
                }
                let col = if k < rank { 2 * k } else { 2 * (k - rank) + 1 };
                internal[c][col] = e - 1;
            }
        }
        if rows.iter().all(|r| r.len() == rank) {
            for g in 0..rank {
                for c in 0..n {
                    let d = internal[c][2 * g] as usize;
                    if internal[d][2 * g + 1] != UNDEFINED {
                        return Err(Error::Input(format!("generator column {} is not a permutation", g + 1)));
                    }
                    internal[d][2 * g + 1] = c as u32;
                }
            }
        }
        CosetTable::from_rows(rank, &internal)
    }

    pub fn parse_dump(text: &str, rank: usize) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| Error::parse(i + 1, format!("bad coset number `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        CosetTable::from_dump_rows(rank, &rows)
    }
}

/// Runs coset enumeration for `subgroup` in the group presented by `fp`.
pub fn todd_coxeter(
    fp: &FinitePresentation,
    subgroup: &SubgroupSpec,
    limits: &Limits,
    strategy: &dyn EnumerationStrategy,
) -> Result<TcOutcome> {
    if limits.max_cosets == 0 || limits.max_steps == 0 {
        return Err(Error::Input("coset limits must be positive".into()));
    }
    let rank = fp.rank();
    for g in subgroup.generators() {
        g.check_rank(rank)?;
    }
    let rels = RelatorSet::new(fp.relators(), rank);
    let mut table = CosetTable::new(rank);
    if let Err(o) = strategy.run(&mut table, &rels, subgroup.generators(), limits) {
        log::debug!("{}: overflow at {} live / {} defined cosets", strategy.name(), o.live, o.defined);
        return Ok(TcOutcome::Overflow(o));
    }
    table.set_recording(false);
    assert!(table.is_complete(), "strategy {} returned an incomplete table", strategy.name());
    // consistency sweep; a complete table stays complete under coincidences
    loop {
        let before = table.live;
        for c in 0..table.parent.len() {
            for r in rels.relators() {
                if table.is_live(c) {
                    table.scan_and_deduce(c, r.letters());
                }
            }
        }
        for g in subgroup.generators() {
            table.scan_and_deduce(0, g.letters());
        }
        if table.live == before {
            break;
        }
    }
    table.closed = true;
    let table = table.standardize();
    debug_assert!(table.satisfies(fp.relators(), subgroup.generators()));
    Ok(TcOutcome::Closed(table))
}
