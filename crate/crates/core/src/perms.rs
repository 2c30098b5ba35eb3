//! Permutations, permutation representations of the free group, image
//! groups, and the kernel-containment test behind the reduction relation.
//!
//! Permutations act on the right: the image of a word is the product of its
//! letters' permutations taken left to right, so point `p` is first moved by
//! the first letter.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{EndoWord, FreeEndomorphism, Letter, Word};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation of `0..n` from its image list.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Input(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|i| i as u32).collect() })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// Smallest moved point, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &j)| *i as u32 != j).map(|(i, _)| i)
    }

    /// Parses cycle notation with 1-based points, e.g. `(1,2,3)(4,5)`; `()`
    /// is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Input(format!("malformed cycle notation `{s}`")))?;
            rest = body.1;
            if body.0.is_empty() {
                continue;
            }
            let points = body
                .0
                .split(',')
                .map(|p| match p.parse::<usize>() {
                    Ok(k) if k >= 1 && k <= degree => Ok(k - 1),
                    _ => Err(Error::Input(format!("bad point `{p}` for degree {degree}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            for (i, &p) in points.iter().enumerate() {
                if seen[p] {
                    return Err(Error::Input(format!("point {} repeated in `{s}`", p + 1)));
                }
                seen[p] = true;
                images[p] = points[(i + 1) % points.len()];
            }
        }
        Permutation::from_images(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut any = false;
        for start in 0..self.images.len() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            any = true;
            write!(f, "({}", start + 1)?;
            seen[start] = true;
            let mut p = self.image(start);
            while p != start {
                seen[p] = true;
                write!(f, ",{}", p + 1)?;
                p = self.image(p);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A homomorphism from the free group to a symmetric group, fixed by one
/// permutation per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermutationRep {
    degree: usize,
    gens: Vec<Permutation>,
    inverses: Vec<Permutation>,
}

impl PermutationRep {
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        if let Some(p) = gens.iter().find(|p| p.degree() != degree) {
            return Err(Error::Input(format!("permutation {p} does not have degree {degree}")));
        }
        let inverses = gens.iter().map(Permutation::inverse).collect();
        Ok(PermutationRep { degree, gens, inverses })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generator(&self, g: usize) -> &Permutation {
        &self.gens[g]
    }

    pub fn generator_inverse(&self, g: usize) -> &Permutation {
        &self.inverses[g]
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    #[inline]
    pub fn letter_image(&self, l: Letter) -> &Permutation {
        if l.is_inverse() {
            &self.inverses[l.generator_index()]
        } else {
            &self.gens[l.generator_index()]
        }
    }

    /// Follows `w` from `point`.
    pub fn apply_word(&self, point: usize, w: &Word) -> usize {
        w.letters().iter().fold(point, |p, &l| self.letter_image(l).image(p))
    }

    pub fn word_image(&self, w: &Word) -> Permutation {
        let images = (0..self.degree).map(|p| self.apply_word(p, w) as u32).collect();
        Permutation { images }
    }

    /// The representation `x ↦ self(e(x))`: apply `e`, then `self`.
    pub fn precompose(&self, e: &FreeEndomorphism) -> PermutationRep {
        let gens: Vec<Permutation> = e.images().iter().map(|w| self.word_image(w)).collect();
        let inverses = gens.iter().map(Permutation::inverse).collect();
        PermutationRep { degree: self.degree, gens, inverses }
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.iter().all(Permutation::is_identity)
    }
}

/// Checks the rep has one permutation per generator of the given rank.
fn check_rank(phi: &PermutationRep, rank: usize) -> Result<()> {
    if phi.rank() == rank {
        Ok(())
    } else {
        Err(Error::Input(format!("representation of rank {} used with alphabet of rank {rank}", phi.rank())))
    }
}

pub fn word_image(phi: &PermutationRep, w: &Word) -> Result<Permutation> {
    w.check_rank(phi.rank())?;
    Ok(phi.word_image(w))
}

/// The representation `x ↦ phi(e(x))`, folding the factors of `e` from the
/// right so that composite words are never expanded.
pub fn endo_image(phi: &PermutationRep, e: &EndoWord) -> Result<PermutationRep> {
    let monoid = e.monoid();
    if let Some(f) = monoid.first() {
        check_rank(phi, f.rank())?;
    }
    Ok(e.factors().iter().rev().fold(phi.clone(), |rep, &f| rep.precompose(&monoid[f])))
}

/// The elements of the image group with breadth-first shortest
/// representative words (ties broken by generator order).
#[derive(Clone, Debug)]
pub struct ImageGroup {
    elements: Vec<Permutation>,
    words: Vec<Word>,
    index: HashMap<Permutation, usize>,
}

impl ImageGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn position(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// True when the group is abelian, checked on generator images.
    pub fn is_abelian(&self, phi: &PermutationRep) -> bool {
        let g = phi.generators();
        g.iter().all(|x| g.iter().all(|y| x.then(y) == y.then(x)))
    }
}

#[derive(Clone, Debug)]
pub enum ImageGroupResult {
    Elements(ImageGroup),
    CapExceeded,
}

impl ImageGroupResult {
    pub fn ok(self) -> Option<ImageGroup> {
        match self {
            ImageGroupResult::Elements(g) => Some(g),
            ImageGroupResult::CapExceeded => None,
        }
    }
}

/// Breadth-first closure of the generator images under right multiplication.
pub fn image_group(phi: &PermutationRep, cap: usize) -> ImageGroupResult {
    let id = Permutation::identity(phi.degree());
    let mut elements = vec![id.clone()];
    let mut words = vec![Word::identity()];
    let mut index = HashMap::from([(id, 0)]);
    let mut i = 0;
    while i < elements.len() {
        for g in 0..phi.rank() {
            let next = elements[i].then(phi.generator(g));
            if !index.contains_key(&next) {
                if elements.len() >= cap {
                    return ImageGroupResult::CapExceeded;
                }
                index.insert(next.clone(), elements.len());
                words.push(words[i].multiply(&Word::letter(Letter::generator(g))));
                elements.push(next);
            }
        }
        i += 1;
    }
    ImageGroupResult::Elements(ImageGroup { elements, words, index })
}

/// Schreier generators `u·x·(rep of ux)⁻¹` of the kernel of `phi`, freely
/// reduced, without the trivial ones.
pub fn kernel_generators(phi: &PermutationRep, group: &ImageGroup) -> Vec<Word> {
    let mut out = Vec::new();
    for (u, elem) in group.elements.iter().enumerate() {
        for g in 0..phi.rank() {
            let ux = elem.then(phi.generator(g));
            let v = group.index[&ux];
            let s = group.words[u].multiply(&Word::letter(Letter::generator(g))).multiply(&group.words[v].invert());
            if !s.is_empty() && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Certifies `delta ⤳ sigma`: the assignment `x^{σφ} ↦ x^{δφ}` extends to a
/// homomorphism on the image of `σφ`. Holds the generator image pairs only.
#[derive(Clone, Debug)]
pub struct ReductionWitness {
    pub source: EndoWord,
    pub target: EndoWord,
    /// `(x^{σφ}, x^{δφ})` for each generator `x`.
    pub generator_images: Vec<(Permutation, Permutation)>,
}

#[derive(Clone, Debug)]
pub enum Reduction {
    Yes(ReductionWitness),
    No,
    Unknown,
}

impl Reduction {
    pub fn is_yes(&self) -> bool {
        matches!(self, Reduction::Yes(_))
    }
}

/// Outcome of the kernel-containment test on two representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Yes,
    No,
    Unknown,
}

/// Decides `ker(sigma_rep) ≤ ker(delta_rep)`.
///
/// Enumerates the image of `sigma_rep` breadth-first while carrying the
/// matching element of the image of `delta_rep` along the same word. A
/// Schreier generator `u·x·(rep of ux)⁻¹` lies in `ker(delta_rep)` exactly
/// when both routes to the element `ux` agree on the delta side.
pub fn kernel_contained(sigma_rep: &PermutationRep, delta_rep: &PermutationRep, cap: usize) -> Containment {
    debug_assert_eq!(sigma_rep.rank(), delta_rep.rank());
    if sigma_rep.generators() == delta_rep.generators() {
        return Containment::Yes;
    }
    if delta_rep.is_trivial() {
        return Containment::Yes;
    }
    let id_s = Permutation::identity(sigma_rep.degree());
    let id_d = Permutation::identity(delta_rep.degree());
    let mut sigma_elems = vec![id_s.clone()];
    let mut delta_elems = vec![id_d];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(id_s, 0)]);
    let mut i = 0;
    while i < sigma_elems.len() {
        for g in 0..sigma_rep.rank() {
            let s = sigma_elems[i].then(sigma_rep.generator(g));
            let d = delta_elems[i].then(delta_rep.generator(g));
            match index.get(&s) {
                Some(&k) => {
                    if delta_elems[k] != d {
                        return Containment::No;
                    }
                }
                None => {
                    if sigma_elems.len() >= cap {
                        return Containment::Unknown;
                    }
                    index.insert(s.clone(), sigma_elems.len());
                    sigma_elems.push(s);
                    delta_elems.push(d);
                }
            }
        }
        i += 1;
    }
    Containment::Yes
}

/// Tests `delta ⤳_φ sigma`, i.e. `ker(σφ) ≤ ker(δφ)`.
pub fn reduces_to(delta: &EndoWord, sigma: &EndoWord, phi: &PermutationRep, cap: usize) -> Result<Reduction> {
    let delta_rep = endo_image(phi, delta)?;
    let sigma_rep = endo_image(phi, sigma)?;
    Ok(match kernel_contained(&sigma_rep, &delta_rep, cap) {
        Containment::Yes => Reduction::Yes(ReductionWitness {
            source: delta.clone(),
            target: sigma.clone(),
            generator_images: sigma_rep.gens.into_iter().zip(delta_rep.gens).collect(),
        }),
        Containment::No => Reduction::No,
        Containment::Unknown => Reduction::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::basilica;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    /// The Basilica example representation a ↦ (1,2,3), b ↦ (2,3).
    fn basilica_phi() -> PermutationRep {
        PermutationRep::new(3, vec![p("(1,2,3)", 3), p("(2,3)", 3)]).unwrap()
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(p("(1,2,3)", 3).to_string(), "(1,2,3)");
        assert_eq!(p("()", 4).to_string(), "()");
        assert_eq!(p("(1,3)(2,4)", 4).to_string(), "(1,3)(2,4)");
        assert!(Permutation::parse_cycles("(1,1)", 3).is_err());
        assert!(Permutation::parse_cycles("(1,4)", 3).is_err());
        assert!(Permutation::parse_cycles("1,2", 3).is_err());
    }

    #[test]
    fn word_images() {
        let phi = basilica_phi();
        let a = Word::letter(Letter::generator(0));
        assert_eq!(phi.word_image(&a).to_string(), "(1,2,3)");
        assert!(phi.word_image(&Word::reduce([Letter::generator(0), Letter::inverse_of(0)])).is_identity());
        let lp = basilica();
        let sigma = &lp.endomorphisms()[0];
        assert!(phi.word_image(sigma.image(0)).is_identity());
    }

    #[test]
    fn basilica_endo_images() {
        let lp = basilica();
        let phi = basilica_phi();
        let s1 = endo_image(&phi, &lp.endo_word(vec![0]).unwrap()).unwrap();
        assert_eq!(s1.generator(0).to_string(), "()");
        assert_eq!(s1.generator(1).to_string(), "(1,2,3)");
        let s2 = endo_image(&phi, &lp.endo_word(vec![0, 0]).unwrap()).unwrap();
        assert_eq!(s2.generator(0).to_string(), "(1,3,2)");
        assert_eq!(s2.generator(1).to_string(), "()");
        let s3 = endo_image(&phi, &lp.endo_word(vec![0, 0, 0]).unwrap()).unwrap();
        assert_eq!(s3.generator(0).to_string(), "()");
        assert_eq!(s3.generator(1).to_string(), "(1,3,2)");
        assert_eq!(endo_image(&phi, &lp.identity_endo()).unwrap(), phi);
    }

    #[test]
    fn image_group_orders() {
        assert_eq!(image_group(&basilica_phi(), 100).ok().unwrap().order(), 6);
        let triv = PermutationRep::new(3, vec![Permutation::identity(3); 2]).unwrap();
        assert_eq!(image_group(&triv, 100).ok().unwrap().order(), 1);
        let c2 = PermutationRep::new(2, vec![p("(1,2)", 2)]).unwrap();
        assert_eq!(image_group(&c2, 100).ok().unwrap().order(), 2);
        assert!(matches!(image_group(&basilica_phi(), 5), ImageGroupResult::CapExceeded));
    }

    #[test]
    fn basilica_reductions() {
        let lp = basilica();
        let phi = basilica_phi();
        let s = |k: usize| lp.endo_word(vec![0; k]).unwrap();
        assert!(reduces_to(&s(3), &s(1), &phi, 1000).unwrap().is_yes());
        assert!(matches!(reduces_to(&s(1), &s(0), &phi, 1000).unwrap(), Reduction::No));
        assert!(matches!(reduces_to(&s(2), &s(1), &phi, 1000).unwrap(), Reduction::No));
        for k in 0..5 {
            assert!(reduces_to(&s(k), &s(k), &phi, 1000).unwrap().is_yes());
        }
    }

    #[test]
    fn everything_reduces_onto_a_trivial_image() {
        let lp = basilica();
        // φ′: a ↦ (), b ↦ (1,2); then σφ′ sends b ↦ a-image = ()
        let phi = PermutationRep::new(2, vec![Permutation::identity(2), p("(1,2)", 2)]).unwrap();
        let s1 = lp.endo_word(vec![0]).unwrap();
        assert!(endo_image(&phi, &s1).unwrap().is_trivial());
        assert!(reduces_to(&s1, &lp.identity_endo(), &phi, 100).unwrap().is_yes());
    }

    #[test]
    fn kernel_generators_lie_in_kernel() {
        let phi = basilica_phi();
        let g = image_group(&phi, 100).ok().unwrap();
        let gens = kernel_generators(&phi, &g);
        // free of rank 1 + 6·(2 − 1) = 7
        assert_eq!(gens.len(), 7);
        assert!(gens.iter().all(|w| phi.word_image(w).is_identity()));
    }
}
