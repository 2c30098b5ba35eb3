//! Finite-index subgroups of an L-presented group: membership, equality,
//! normality, intersections, cores and the low-index subgroup search.

mod low_index;
pub mod report;

use std::collections::VecDeque;
use std::sync::Arc;

use crate::coset_enum::CosetTable;
use crate::error::{Error, Result};
use crate::perms::{image_group, kernel_generators, PermutationRep};
use crate::pipeline::{is_valid_perm_rep, EnumerationResult};
use crate::presentations::LPresentation;
use crate::words::{Letter, Word};

pub use low_index::{covering_subgroup_tables, low_index, mark_normal_and_maximal, LowIndexConfig};

/// A subgroup of finite index, held as a valid standardized coset table.
#[derive(Clone, Debug)]
pub struct FiniteIndexSubgroup {
    owner: Arc<LPresentation>,
    table: CosetTable,
    rep: PermutationRep,
    generators: Vec<Word>,
}

impl FiniteIndexSubgroup {
    /// Wraps a closed table after checking that it is valid for `owner`.
    pub fn from_table(owner: Arc<LPresentation>, table: &CosetTable, cap: usize) -> Result<Self> {
        let table = table.standardize();
        let rep = table.to_perm_rep();
        let outcome = is_valid_perm_rep(&owner, &rep, cap)?;
        if !outcome.is_valid() {
            return Err(Error::Input("coset table is not valid for the presentation".into()));
        }
        Ok(Self::trusted(owner, table))
    }

    pub fn from_enumeration(owner: Arc<LPresentation>, result: &EnumerationResult) -> Self {
        Self::trusted(owner, result.table.standardize())
    }

    /// For tables already known to be valid and standardized.
    pub(crate) fn trusted(owner: Arc<LPresentation>, table: CosetTable) -> Self {
        let rep = table.to_perm_rep();
        let generators = schreier_generators(&table);
        FiniteIndexSubgroup { owner, table, rep, generators }
    }

    pub fn owner(&self) -> &Arc<LPresentation> {
        &self.owner
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn rep(&self) -> &PermutationRep {
        &self.rep
    }

    /// Schreier generators of the stabilizer of coset 0.
    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn index(&self) -> usize {
        self.table.num_cosets()
    }

    pub fn contains(&self, w: &Word) -> Result<bool> {
        contains(self, w)
    }
}

/// Breadth-first representative words for every coset of a closed table.
pub fn coset_representatives(table: &CosetTable) -> Vec<Word> {
    let n = table.num_cosets();
    let mut reps: Vec<Option<Word>> = vec![None; n];
    reps[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for col in 0..table.columns() {
            let d = table.entry(c, col).expect("closed table");
            if reps[d].is_none() {
                let w = reps[c].as_ref().unwrap().multiply(&Word::letter(Letter::from_code(col)));
                reps[d] = Some(w);
                queue.push_back(d);
            }
        }
    }
    reps.into_iter().map(|w| w.expect("transitive table")).collect()
}

/// Schreier generators `u_c · x · u_{c·x}⁻¹` of the coset-0 stabilizer,
/// freely reduced, trivial ones and duplicates dropped.
pub fn schreier_generators(table: &CosetTable) -> Vec<Word> {
    let reps = coset_representatives(table);
    let mut out: Vec<Word> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (c, u) in reps.iter().enumerate() {
        for g in 0..table.rank() {
            let d = table.entry(c, 2 * g).expect("closed table");
            let s = u.multiply(&Word::letter(Letter::generator(g))).multiply(&reps[d].invert());
            if !s.is_empty() && seen.insert(s.clone()) {
                out.push(s);
            }
        }
    }
    out
}

/// Membership: `w` lies in the subgroup iff it fixes coset 0.
pub fn contains(u: &FiniteIndexSubgroup, w: &Word) -> Result<bool> {
    w.check_rank(u.owner.rank())?;
    Ok(u.table.trace(0, w) == Some(0))
}

fn same_owner(u: &FiniteIndexSubgroup, v: &FiniteIndexSubgroup) -> bool {
    Arc::ptr_eq(&u.owner, &v.owner) || *u.owner == *v.owner
}

fn check_same_owner(u: &FiniteIndexSubgroup, v: &FiniteIndexSubgroup) -> Result<()> {
    if same_owner(u, v) {
        Ok(())
    } else {
        Err(Error::Input("subgroups belong to different presentations".into()))
    }
}

pub fn subgroup_equal(u: &FiniteIndexSubgroup, v: &FiniteIndexSubgroup) -> bool {
    same_owner(u, v) && u.index() == v.index() && u.table.canonical_key() == v.table.canonical_key()
}

/// `u ≤ v`, decided by membership of `u`'s generators in `v`.
pub fn is_subgroup_of(u: &FiniteIndexSubgroup, v: &FiniteIndexSubgroup) -> bool {
    same_owner(u, v)
        && v.index() <= u.index()
        && u.index().is_multiple_of(v.index())
        && u.generators.iter().all(|g| v.table.trace(0, g) == Some(0))
}

/// Normality via conjugates of the generators by every generator and its
/// inverse.
pub fn is_normal(u: &FiniteIndexSubgroup) -> bool {
    let rank = u.owner.rank();
    (0..rank).all(|x| {
        let x = Word::letter(Letter::generator(x));
        u.generators.iter().all(|g| {
            u.table.trace(0, &g.conjugate(&x)) == Some(0) && u.table.trace(0, &g.conjugate(&x.invert())) == Some(0)
        })
    })
}

/// `U ∩ V` as the stabilizer of `(0, 0)` in the product action.
pub fn intersect(u: &FiniteIndexSubgroup, v: &FiniteIndexSubgroup) -> Result<FiniteIndexSubgroup> {
    check_same_owner(u, v)?;
    let cols = u.table.columns();
    let mut ids = std::collections::HashMap::from([((0usize, 0usize), 0u32)]);
    let mut pairs = vec![(0usize, 0usize)];
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (c, d) = pairs[i];
        let mut row = Vec::with_capacity(cols);
        for col in 0..cols {
            let next = (u.table.entry(c, col).unwrap(), v.table.entry(d, col).unwrap());
            let id = *ids.entry(next).or_insert_with(|| {
                pairs.push(next);
                (pairs.len() - 1) as u32
            });
            row.push(id);
        }
        rows.push(row);
        i += 1;
    }
    // the kernel of the product action is the intersection of both kernels
    let table = CosetTable::from_rows(u.owner.rank(), &rows)?.standardize();
    debug_assert!(
        is_valid_perm_rep(&u.owner, &table.to_perm_rep(), crate::pipeline::DEFAULT_REDUCTION_CAP)
            .map_or(true, |o| o.is_valid()),
        "intersection of valid subgroups failed validation"
    );
    Ok(FiniteIndexSubgroup::trusted(u.owner.clone(), table))
}

/// The core of `U`: the kernel of its coset action, held as the regular
/// action of the image group on itself.
pub fn core(u: &FiniteIndexSubgroup, cap: usize) -> Result<FiniteIndexSubgroup> {
    let group = image_group(&u.rep, cap)
        .ok()
        .ok_or_else(|| Error::Resource(format!("image group has more than {cap} elements")))?;
    let rank = u.owner.rank();
    let inverses: Vec<_> = u.rep.generators().iter().map(|p| p.inverse()).collect();
    let rows: Vec<Vec<u32>> = group
        .elements()
        .iter()
        .map(|e| {
            (0..rank)
                .flat_map(|g| {
                    let fwd = group.position(&e.then(u.rep.generator(g))).unwrap() as u32;
                    let back = group.position(&e.then(&inverses[g])).unwrap() as u32;
                    [fwd, back]
                })
                .collect()
        })
        .collect();
    let table = CosetTable::from_rows(rank, &rows)?.standardize();
    let mut h = FiniteIndexSubgroup::trusted(u.owner.clone(), table);
    // the kernel's Schreier generators with respect to the image-group traversal
    h.generators = kernel_generators(&u.rep, &group);
    Ok(h)
}

/// A subgroup together with its normal/maximal flags, once computed.
#[derive(Clone, Debug)]
pub struct SubgroupEntry {
    pub subgroup: FiniteIndexSubgroup,
    pub normal: Option<bool>,
    pub maximal: Option<bool>,
}

/// All subgroups up to some index, sorted by index and then by standardized
/// table.
#[derive(Clone, Debug)]
pub struct SubgroupList {
    max_index: usize,
    entries: Vec<SubgroupEntry>,
}

/// Counts for one index.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct IndexCount {
    pub index: usize,
    pub subgroups: usize,
    pub normal: Option<usize>,
    pub maximal: Option<usize>,
}

impl SubgroupList {
    pub(crate) fn new(max_index: usize, mut subgroups: Vec<FiniteIndexSubgroup>) -> Self {
        subgroups.sort_by_cached_key(|s| (s.index(), s.table.canonical_key()));
        subgroups.dedup_by(|a, b| subgroup_equal(a, b));
        SubgroupList {
            max_index,
            entries: subgroups
                .into_iter()
                .map(|subgroup| SubgroupEntry { subgroup, normal: None, maximal: None })
                .collect(),
        }
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    pub fn entries(&self) -> &[SubgroupEntry] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [SubgroupEntry] {
        &mut self.entries
    }

    pub fn with_index(&self, index: usize) -> impl Iterator<Item = &SubgroupEntry> {
        self.entries.iter().filter(move |e| e.subgroup.index() == index)
    }

    /// One row per index `1..=max_index`. The index-1 row never reports a
    /// maximal count.
    pub fn counts(&self) -> Vec<IndexCount> {
        (1..=self.max_index)
            .map(|index| {
                let rows: Vec<&SubgroupEntry> = self.with_index(index).collect();
                let count = |f: fn(&SubgroupEntry) -> Option<bool>| -> Option<usize> {
                    rows.iter().map(|e| f(e).map(usize::from)).sum::<Option<usize>>()
                };
                IndexCount {
                    index,
                    subgroups: rows.len(),
                    normal: count(|e| e.normal),
                    maximal: if index == 1 { None } else { count(|e| e.maximal) },
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset_enum::Felsch;
    use crate::parse::{parse_subgroup, parse_word};
    use crate::pipeline::{enumerate, EnumerationConfig};
    use crate::presentations::basilica;

    fn basilica_u() -> FiniteIndexSubgroup {
        let lp = Arc::new(basilica());
        let sub = parse_subgroup("a^3, b, a*b*a", lp.alphabet()).unwrap();
        let r = enumerate(&lp, &sub, &EnumerationConfig::default(), &Felsch).unwrap();
        FiniteIndexSubgroup::from_enumeration(lp, &r)
    }

    fn word(u: &FiniteIndexSubgroup, s: &str) -> Word {
        parse_word(s, u.owner().alphabet()).unwrap()
    }

    #[test]
    fn membership() {
        let u = basilica_u();
        assert!(!u.contains(&word(&u, "a")).unwrap());
        assert!(u.contains(&Word::identity()).unwrap());
        assert!(u.contains(&word(&u, "b^2*a^3")).unwrap());
        for g in u.generators() {
            assert!(u.contains(g).unwrap());
        }
        // rank of a free subgroup of index 3 in F2
        assert_eq!(u.generators().len(), 4);
    }

    #[test]
    fn normality_and_core() {
        let u = basilica_u();
        assert!(!is_normal(&u));
        let h = core(&u, 1000).unwrap();
        assert_eq!(h.index(), 6);
        assert!(is_normal(&h));
        assert!(is_subgroup_of(&h, &u));
        for g in h.generators() {
            assert!(h.contains(g).unwrap());
        }
        let again = core(&h, 1000).unwrap();
        assert!(subgroup_equal(&again, &h));
    }

    #[test]
    fn intersections() {
        let u = basilica_u();
        assert!(subgroup_equal(&intersect(&u, &u).unwrap(), &u));
        let h = core(&u, 1000).unwrap();
        assert_eq!(intersect(&u, &h).unwrap().index(), 6);
        let lp = u.owner().clone();
        let whole =
            FiniteIndexSubgroup::from_table(lp, &CosetTable::from_rows(2, &[vec![0, 0, 0, 0]]).unwrap(), 10).unwrap();
        assert!(subgroup_equal(&intersect(&u, &whole).unwrap(), &u));
        assert!(is_normal(&whole));
    }

    #[test]
    fn invalid_table_rejected() {
        // [a, a^b] = [(1,2), (1,3)] is not trivial
        let lp = Arc::new(basilica());
        let t = CosetTable::from_perm_rep(
            &PermutationRep::new(
                3,
                vec![
                    crate::perms::Permutation::parse_cycles("(1,2)", 3).unwrap(),
                    crate::perms::Permutation::parse_cycles("(2,3)", 3).unwrap(),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        assert!(FiniteIndexSubgroup::from_table(lp, &t, 100).is_err());
    }
}
