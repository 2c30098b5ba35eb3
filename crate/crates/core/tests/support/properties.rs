//! Exhaustive and seeded-random property checks, shared by the core test
//! suite and the acceptance runner. Each check returns a short summary on
//! success and the first counterexample on failure.
//!
//! The oracles here use plain vectors of signed letters and image arrays so
//! that they do not depend on the code under test.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use lpcoset::coset_enum::{todd_coxeter, CosetTable, Felsch, Hlt, Limits};
use lpcoset::parse::{parse_subgroup, parse_word_list};
use lpcoset::perms::{reduces_to, Permutation, PermutationRep, Reduction};
use lpcoset::pipeline::{fold_to_validity, DEFAULT_REDUCTION_CAP};
use lpcoset::presentations::{basilica, burnside, grigorchuk, FinitePresentation, LPresentation};
use lpcoset::subgroups::{low_index, LowIndexConfig};
use lpcoset::words::{compare, Alphabet, EndoWord, FreeEndomorphism, Word};

pub type Check = Result<String, String>;

fn random_signed(rng: &mut StdRng, rank: usize, max_len: usize) -> Vec<i32> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=rank as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect()
}

/// Stack-based free reduction.
fn reduce_signed(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn invert_signed(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|x| -x).collect()
}

fn substitute(images: &[Vec<i32>], w: &[i32]) -> Vec<i32> {
    let mut out = Vec::new();
    for &x in w {
        let img = &images[(x.unsigned_abs() - 1) as usize];
        if x > 0 {
            out.extend_from_slice(img);
        } else {
            out.extend(invert_signed(img));
        }
    }
    reduce_signed(&out)
}

type Perm = Vec<usize>;

fn perm_then(p: &Perm, q: &Perm) -> Perm {
    p.iter().map(|&i| q[i]).collect()
}

fn perm_inverse(p: &Perm) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn perm_of_word(gens: &[Perm], w: &[i32], degree: usize) -> Perm {
    let mut acc: Perm = (0..degree).collect();
    for &x in w {
        let g = &gens[(x.unsigned_abs() - 1) as usize];
        acc = if x > 0 { perm_then(&acc, g) } else { perm_then(&acc, &perm_inverse(g)) };
    }
    acc
}

fn random_perm(rng: &mut StdRng, degree: usize) -> Perm {
    let mut p: Perm = (0..degree).collect();
    for i in (1..degree).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

fn to_rep(gens: &[Perm]) -> PermutationRep {
    let degree = gens.first().map_or(1, Vec::len);
    PermutationRep::new(degree, gens.iter().map(|g| Permutation::from_images(g.clone()).unwrap()).collect()).unwrap()
}

/// Free reduction, group laws, endomorphism substitution and permutation
/// images, each against the plain-vector oracle.
pub fn free_reduction_and_homomorphisms(cases: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let rank = 3;
    for case in 0..cases {
        let raw_u = random_signed(&mut rng, rank, 24);
        let raw_v = random_signed(&mut rng, rank, 24);
        let u = Word::from_signed(&raw_u, rank).map_err(|e| e.to_string())?;
        let v = Word::from_signed(&raw_v, rank).map_err(|e| e.to_string())?;
        let fail = |what: &str| Err(format!("case {case}: {what} for u = {raw_u:?}, v = {raw_v:?}"));

        if u.to_signed() != reduce_signed(&raw_u) {
            return fail("reduction differs from the oracle");
        }
        if Word::reduce(u.letters().iter().copied()) != u {
            return fail("reduction is not idempotent");
        }
        if u.letters().windows(2).any(|p| p[0] == p[1].inverse()) {
            return fail("reduced word has a cancelling pair");
        }
        let mut uv = raw_u.clone();
        uv.extend_from_slice(&raw_v);
        if u.multiply(&v).to_signed() != reduce_signed(&uv) {
            return fail("product differs from the oracle");
        }
        if !u.multiply(&u.invert()).is_empty() || u.invert().invert() != u {
            return fail("inverse law");
        }
        if u.multiply(&v).invert() != v.invert().multiply(&u.invert()) {
            return fail("inverse of a product");
        }

        let images: Vec<Vec<i32>> = (0..rank).map(|_| reduce_signed(&random_signed(&mut rng, rank, 4))).collect();
        let images2: Vec<Vec<i32>> = (0..rank).map(|_| reduce_signed(&random_signed(&mut rng, rank, 3))).collect();
        let phi = FreeEndomorphism::new(images.iter().map(|w| Word::from_signed(w, rank).unwrap()).collect())
            .map_err(|e| e.to_string())?;
        let psi = FreeEndomorphism::new(images2.iter().map(|w| Word::from_signed(w, rank).unwrap()).collect())
            .map_err(|e| e.to_string())?;
        let phi_u = phi.apply(&u).map_err(|e| e.to_string())?;
        if phi_u.to_signed() != substitute(&images, &raw_u) {
            return fail("substitution differs from the oracle");
        }
        if phi.apply(&u.multiply(&v)).unwrap() != phi_u.multiply(&phi.apply(&v).unwrap()) {
            return fail("endomorphism is not multiplicative");
        }
        let composed = phi.compose(&psi).map_err(|e| e.to_string())?;
        if composed.apply(&u).unwrap().to_signed() != substitute(&images2, &substitute(&images, &raw_u)) {
            return fail("composition applies the first map first");
        }

        let degree = rng.gen_range(1..=7);
        let gens: Vec<Perm> = (0..rank).map(|_| random_perm(&mut rng, degree)).collect();
        let rep = to_rep(&gens);
        let img_uv = rep.word_image(&u.multiply(&v));
        if img_uv.images().iter().map(|&x| x as usize).collect::<Vec<_>>()
            != perm_of_word(&gens, &reduce_signed(&uv), degree)
        {
            return fail("permutation image differs from the oracle");
        }
        if img_uv != rep.word_image(&u).then(&rep.word_image(&v)) {
            return fail("permutation image is not multiplicative");
        }
        let pre = rep.precompose(&phi);
        if pre.word_image(&u) != rep.word_image(&phi_u) {
            return fail("precomposition");
        }
    }
    Ok(format!("{cases} random cases"))
}

fn all_endo_words(monoid: &Arc<[FreeEndomorphism]>, rank: usize, max_len: usize) -> Vec<EndoWord> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for f in 0..monoid.len() {
                let mut x: Vec<usize> = w.clone();
                x.push(f);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.into_iter().map(|f| EndoWord::new(f, monoid.clone(), rank).unwrap()).collect()
}

/// `compare` is a total order on all monoid words up to the given length,
/// and the breadth-first expansion by prepending lists them in that order.
pub fn endo_order(max_len: usize) -> Check {
    let a = Word::from_signed(&[1], 2).unwrap();
    let b = Word::from_signed(&[2], 2).unwrap();
    let monoid: Arc<[FreeEndomorphism]> = Arc::from(vec![
        FreeEndomorphism::new(vec![b.pow(2), a.clone()]).unwrap(),
        FreeEndomorphism::new(vec![b.clone(), a.clone()]).unwrap(),
    ]);
    let words = all_endo_words(&monoid, 2, max_len);
    let n = words.len();
    for x in &words {
        for y in &words {
            let xy = compare(x, y);
            if xy != compare(y, x).reverse() {
                return Err(format!("antisymmetry fails on {:?}, {:?}", x.factors(), y.factors()));
            }
            if xy.is_eq() != (x.factors() == y.factors()) {
                return Err(format!("order not strict on {:?}, {:?}", x.factors(), y.factors()));
            }
        }
    }
    let mut sorted = words.clone();
    sorted.sort_by(compare);
    for (i, x) in sorted.iter().enumerate() {
        // transitivity: everything after x is larger than x
        if sorted[i + 1..].iter().any(|y| compare(x, y).is_ge()) {
            return Err(format!("transitivity fails after {:?}", x.factors()));
        }
    }
    let mut queue = VecDeque::from([EndoWord::identity(monoid.clone(), 2)]);
    let mut bfs = Vec::new();
    while let Some(w) = queue.pop_front() {
        if w.len() < max_len {
            queue.extend(w.descendants());
        }
        bfs.push(w);
    }
    if bfs.len() != n || bfs.iter().zip(&sorted).any(|(x, y)| x.factors() != y.factors()) {
        return Err("breadth-first order differs from the sorted order".into());
    }
    // composites agree with applying factors one by one, first factor first
    let w = Word::from_signed(&[1, 2, -1, 2, 2], 2).unwrap();
    for x in words.iter().filter(|x| x.len() <= 4) {
        let mut direct = w.clone();
        for &f in x.factors() {
            direct = monoid[f].apply(&direct).unwrap();
        }
        if x.composite().apply(&w).unwrap() != direct {
            return Err(format!("composite of {:?} applies factors in the wrong order", x.factors()));
        }
    }
    Ok(format!("{n} monoid words up to length {max_len}"))
}

/// Order of the group generated by `gens`, by closure under right
/// multiplication.
fn group_order(gens: &[Perm]) -> usize {
    let degree = gens.first().map_or(1, Vec::len);
    let id: Perm = (0..degree).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = perm_then(&p, g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

/// `ker(σφ) ≤ ker(δφ)` iff the diagonal group of `(σφ, δφ)` is no larger
/// than the image of `σφ`.
fn kernel_contained_oracle(sigma: &[Perm], delta: &[Perm]) -> bool {
    let n = sigma[0].len();
    let diagonal: Vec<Perm> =
        sigma.iter().zip(delta).map(|(s, d)| s.iter().copied().chain(d.iter().map(|&x| x + n)).collect()).collect();
    group_order(&diagonal) == group_order(sigma)
}

fn images_under(rep: &PermutationRep, e: &EndoWord) -> Vec<Perm> {
    let phi = e.composite();
    (0..rep.rank()).map(|g| rep.word_image(phi.image(g)).images().iter().map(|&x| x as usize).collect()).collect()
}

/// Reflexivity and transitivity of `reduces_to`, and agreement with the
/// diagonal-group oracle, on random representations of the Basilica and
/// Grigorchuk monoids.
pub fn reduction_laws(samples: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut compared = 0;
    let mut chains = 0;
    for lp in [basilica(), grigorchuk()] {
        let rank = lp.rank();
        let words = all_endo_words(lp.endomorphisms(), rank, 3);
        for _ in 0..samples {
            let degree = rng.gen_range(2..=5);
            let gens: Vec<Perm> = (0..rank).map(|_| random_perm(&mut rng, degree)).collect();
            let rep = to_rep(&gens);
            let pick = |rng: &mut StdRng| words[rng.gen_range(0..words.len())].clone();
            let (d, s, t) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let ask = |x: &EndoWord, y: &EndoWord| match reduces_to(x, y, &rep, 1 << 20).unwrap() {
                Reduction::Yes(_) => Some(true),
                Reduction::No => Some(false),
                Reduction::Unknown => None,
            };
            if ask(&d, &d) != Some(true) {
                return Err(format!("reduces_to is not reflexive at {:?}", d.factors()));
            }
            for (x, y) in [(&d, &s), (&s, &t), (&d, &t)] {
                let expected = kernel_contained_oracle(&images_under(&rep, y), &images_under(&rep, x));
                if ask(x, y) != Some(expected) {
                    return Err(format!(
                        "reduces_to({:?}, {:?}) disagrees with the diagonal-group oracle on degree {degree}",
                        x.factors(),
                        y.factors()
                    ));
                }
                compared += 1;
            }
            if ask(&d, &s) == Some(true) && ask(&s, &t) == Some(true) {
                chains += 1;
                if ask(&d, &t) != Some(true) {
                    return Err(format!(
                        "transitivity fails on {:?}, {:?}, {:?}",
                        d.factors(),
                        s.factors(),
                        t.factors()
                    ));
                }
            }
        }
    }
    Ok(format!("{compared} oracle comparisons, {chains} transitivity chains"))
}

struct Fixture {
    name: &'static str,
    fp: FinitePresentation,
    subgroup: &'static str,
    index: usize,
}

fn fp(names: &[&str], relators: &str) -> FinitePresentation {
    let alphabet = Alphabet::new(names.iter().copied()).unwrap();
    let rels = parse_word_list(relators, &alphabet).unwrap();
    FinitePresentation::new(alphabet, rels).unwrap()
}

fn fixtures() -> Vec<Fixture> {
    let ab = ["a", "b"];
    vec![
        Fixture { name: "Z/6", fp: fp(&["a"], "a^6"), subgroup: "", index: 6 },
        Fixture { name: "S3", fp: fp(&ab, "a^2, b^3, (a*b)^2"), subgroup: "", index: 6 },
        Fixture { name: "Q8", fp: fp(&ab, "a^4, a^2*b^-2, b^-1*a*b*a"), subgroup: "", index: 8 },
        Fixture { name: "A4", fp: fp(&ab, "a^2, b^3, (a*b)^3"), subgroup: "", index: 12 },
        Fixture { name: "S4 over C3", fp: fp(&ab, "a^2, b^3, (a*b)^4"), subgroup: "b", index: 8 },
        Fixture { name: "A5", fp: fp(&ab, "a^2, b^3, (a*b)^5"), subgroup: "", index: 60 },
        Fixture { name: "Z^2", fp: fp(&ab, "[a,b]"), subgroup: "a^2, b^3", index: 6 },
        Fixture {
            name: "Basilica level 1",
            fp: basilica().covering_presentation(1),
            subgroup: "a^3, b, a*b*a",
            index: 3,
        },
        Fixture {
            name: "Grigorchuk level 1",
            fp: grigorchuk().covering_presentation(1),
            subgroup: "b, c, d, a*b*a, a*c*a, a*d*a",
            index: 2,
        },
        Fixture {
            name: "burnside(1,3) level 1",
            fp: burnside(1, 3).unwrap().covering_presentation(1),
            subgroup: "",
            index: 3,
        },
    ]
}

/// Felsch and HLT produce the same standardized table on every fixture.
pub fn strategy_independence() -> Check {
    let all = fixtures();
    for f in &all {
        let sub = parse_subgroup(f.subgroup, f.fp.alphabet()).unwrap();
        let mut keys = Vec::new();
        for (label, outcome) in [
            ("felsch", todd_coxeter(&f.fp, &sub, &Limits::default(), &Felsch)),
            ("hlt", todd_coxeter(&f.fp, &sub, &Limits::default(), &Hlt)),
        ] {
            let table = outcome
                .map_err(|e| e.to_string())?
                .closed()
                .ok_or_else(|| format!("{}: {label} overflowed", f.name))?;
            if table.num_cosets() != f.index {
                return Err(format!("{}: {label} found {} cosets, expected {}", f.name, table.num_cosets(), f.index));
            }
            if !table.satisfies(f.fp.relators(), sub.generators()) {
                return Err(format!("{}: {label} table does not satisfy the relators", f.name));
            }
            keys.push(table.standardize().canonical_key());
        }
        if keys[0] != keys[1] {
            return Err(format!("{}: strategies disagree", f.name));
        }
    }
    Ok(format!("{} fixtures", all.len()))
}

fn keys(lp: &Arc<LPresentation>, n: usize, level: usize) -> Result<Vec<Vec<u32>>, String> {
    let cfg = LowIndexConfig { level, ..LowIndexConfig::default() };
    let list = low_index(lp, n, &cfg).map_err(|e| e.to_string())?;
    Ok(list.entries().iter().map(|e| e.subgroup.table().canonical_key()).collect())
}

/// The low-index result on Basilica does not depend on the covering level.
pub fn level_invariance(max_index: usize) -> Check {
    let lp = Arc::new(basilica());
    let base = keys(&lp, max_index, 0)?;
    for level in [1, 2] {
        if keys(&lp, max_index, level)? != base {
            return Err(format!("level {level} differs from level 0 at index ≤ {max_index}"));
        }
    }
    Ok(format!("{} subgroups at levels 0, 1, 2", base.len()))
}

fn all_perms(degree: usize) -> Vec<Perm> {
    if degree == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_perms(degree - 1) {
        for pos in 0..degree {
            let mut q = p.clone();
            q.insert(pos, degree - 1);
            out.push(q);
        }
    }
    out
}

fn orbit_of_zero(gens: &[Perm]) -> usize {
    let mut seen = HashSet::from([0usize]);
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        for g in gens {
            for y in [g[x], perm_inverse(g)[x]] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    seen.len()
}

/// Every transitive action of degree at most `max_index` satisfying the
/// covering relators of the given level, folded to validity and
/// deduplicated, gives exactly the low-index list.
pub fn brute_force_oracle(max_index: usize, level: usize) -> Check {
    let lp = Arc::new(basilica());
    let relators: Vec<Vec<i32>> = lp.covering_presentation(level).relators().iter().map(Word::to_signed).collect();
    let mut oracle: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut actions = 0;
    let mut folded_actions = 0;
    for degree in 1..=max_index {
        let perms = all_perms(degree);
        let id: Perm = (0..degree).collect();
        for a in &perms {
            for b in &perms {
                let gens = [a.clone(), b.clone()];
                if orbit_of_zero(&gens) != degree || relators.iter().any(|r| perm_of_word(&gens, r, degree) != id) {
                    continue;
                }
                actions += 1;
                let table = CosetTable::from_perm_rep(&to_rep(&gens)).map_err(|e| e.to_string())?;
                let (folded, _, history) =
                    fold_to_validity(&lp, table, DEFAULT_REDUCTION_CAP).map_err(|e| e.to_string())?;
                folded_actions += usize::from(!history.is_empty());
                let folded = folded.standardize();
                oracle.insert(folded.canonical_key(), folded.num_cosets());
            }
        }
    }
    let mut expected: Vec<Vec<u32>> = oracle.into_keys().collect();
    expected.sort();
    let mut got = keys(&lp, max_index, LowIndexConfig::default().level)?;
    got.sort();
    if got != expected {
        return Err(format!("low_index found {} subgroups, brute force {}", got.len(), expected.len()));
    }
    Ok(format!(
        "{actions} transitive actions at level {level} ({folded_actions} folded) give the same {} subgroups",
        got.len()
    ))
}

/// Counts the standardized tables the backtrack search visits, for use as a
/// cross-check of `covering_subgroup_tables` against brute force.
pub fn covering_table_count(fp: &FinitePresentation, max_index: usize) -> Vec<usize> {
    let mut counts = vec![0; max_index];
    let _ = lpcoset::subgroups::covering_subgroup_tables(fp, max_index, |_, n| {
        counts[n - 1] += 1;
        ControlFlow::Continue(())
    });
    counts
}
