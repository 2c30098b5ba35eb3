//! Free-group words, endomorphisms of the free group, and the free monoid
//! generated by a finite set of endomorphisms.
//!
//! Letters are encoded as small integers: generator `i` is `2 * i`, its
//! inverse is `2 * i + 1`. The same code doubles as the column index of a
//! coset table, so hot loops never touch generator names.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or the inverse of a generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(u32);

impl Letter {
    pub fn generator(index: usize) -> Self {
        Letter(2 * index as u32)
    }

    pub fn inverse_of(index: usize) -> Self {
        Letter(2 * index as u32 + 1)
    }

    /// Builds a letter from the signed one-based convention (`3` is the third
    /// generator, `-3` its inverse).
    pub fn from_signed(signed: i32) -> Option<Self> {
        match signed.cmp(&0) {
            Ordering::Greater => Some(Letter::generator(signed as usize - 1)),
            Ordering::Less => Some(Letter::inverse_of((-signed) as usize - 1)),
            Ordering::Equal => None,
        }
    }

    pub fn to_signed(self) -> i32 {
        let g = self.generator_index() as i32 + 1;
        if self.is_inverse() {
            -g
        } else {
            g
        }
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }

    /// Column index in a coset table.
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn generator_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    #[inline]
    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

/// Generator names, mapped to letter codes once at parse time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Input(format!("duplicate generator name `{name}`")));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    /// Renders a word with `*` products and `^-1` for inverses. The empty
    /// word prints as `1`.
    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        // collapse runs of the same letter into powers
        let mut parts = Vec::new();
        let letters = word.letters();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let run = (j - i) as i64;
            let name = self.name(letters[i].generator_index());
            let exp = if letters[i].is_inverse() { -run } else { run };
            if exp == 1 {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i = j;
        }
        parts.join("*")
    }
}

/// A freely reduced word in the free group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Reduces a sequence of signed one-based generator indices, rejecting any
    /// index outside an alphabet of the given rank.
    pub fn from_signed(letters: &[i32], rank: usize) -> Result<Self> {
        let mut out = Vec::with_capacity(letters.len());
        for &s in letters {
            match Letter::from_signed(s) {
                Some(l) if l.generator_index() < rank => out.push(l),
                _ => return Err(Error::Input(format!("letter {s} outside alphabet of rank {rank}"))),
            }
        }
        Ok(Word::reduce(out))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn to_signed(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.to_signed()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every letter belongs to an alphabet of the given rank.
    pub fn fits(&self, rank: usize) -> bool {
        self.0.iter().all(|l| l.generator_index() < rank)
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        if self.fits(rank) {
            Ok(())
        } else {
            Err(Error::Input(format!("word {self:?} is not over an alphabet of rank {rank}")))
        }
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `by⁻¹ · self · by`
    pub fn conjugate(&self, by: &Word) -> Word {
        by.invert().multiply(self).multiply(by)
    }

    /// `u⁻¹ v⁻¹ u v`
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.invert().multiply(&v.invert()).multiply(u).multiply(v)
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..exponent.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// Cyclically reduced conjugate of this word.
    pub fn cyclically_reduced(&self) -> Word {
        let mut start = 0;
        let mut end = self.0.len();
        while end - start >= 2 && self.0[start] == self.0[end - 1].inverse() {
            start += 1;
            end -= 1;
        }
        Word(self.0[start..end].to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_signed())
    }
}

/// An endomorphism of the free group, given by the image of each generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeEndomorphism {
    images: Vec<Word>,
}

impl FreeEndomorphism {
    pub fn new(images: Vec<Word>) -> Result<Self> {
        let rank = images.len();
        for w in &images {
            w.check_rank(rank)?;
        }
        Ok(FreeEndomorphism { images })
    }

    pub fn identity(rank: usize) -> Self {
        FreeEndomorphism { images: (0..rank).map(|i| Word::letter(Letter::generator(i))).collect() }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &Word {
        &self.images[generator]
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        w.check_rank(self.rank())?;
        Ok(self.apply_unchecked(w))
    }

    /// Substitutes each letter by its image; inverse letters by the inverted
    /// image.
    pub(crate) fn apply_unchecked(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for &l in w.letters() {
            let img = &self.images[l.generator_index()];
            let push = |out: &mut Vec<Letter>, x: Letter| {
                if out.last() == Some(&x.inverse()) {
                    out.pop();
                } else {
                    out.push(x);
                }
            };
            if l.is_inverse() {
                for &x in img.letters().iter().rev() {
                    push(&mut out, x.inverse());
                }
            } else {
                for &x in img.letters() {
                    push(&mut out, x);
                }
            }
        }
        Word(out)
    }

    /// The endomorphism applying `self` first, then `second`.
    pub fn compose(&self, second: &FreeEndomorphism) -> Result<FreeEndomorphism> {
        if self.rank() != second.rank() {
            return Err(Error::Input(format!(
                "cannot compose endomorphisms of ranks {} and {}",
                self.rank(),
                second.rank()
            )));
        }
        Ok(FreeEndomorphism { images: self.images.iter().map(|w| second.apply_unchecked(w)).collect() })
    }
}

/// An element of the free monoid generated by an ordered endomorphism list.
///
/// Factors `[f1, .., fn]` act as the product `f1 ⋯ fn` with right actions:
/// `f1` is applied first. The empty factor list is the identity. The
/// composite map is computed lazily, since its images can grow
/// exponentially with the length.
#[derive(Clone)]
pub struct EndoWord {
    factors: Vec<usize>,
    monoid: Arc<[FreeEndomorphism]>,
    rank: usize,
    composite: OnceLock<FreeEndomorphism>,
}

impl EndoWord {
    pub fn identity(monoid: Arc<[FreeEndomorphism]>, rank: usize) -> Self {
        EndoWord { factors: Vec::new(), monoid, rank, composite: OnceLock::new() }
    }

    pub fn new(factors: Vec<usize>, monoid: Arc<[FreeEndomorphism]>, rank: usize) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&f| f >= monoid.len()) {
            return Err(Error::Input(format!("endomorphism index {bad} out of range")));
        }
        if monoid.iter().any(|e| e.rank() != rank) {
            return Err(Error::Input("endomorphism rank mismatch".into()));
        }
        Ok(EndoWord { factors, monoid, rank, composite: OnceLock::new() })
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn monoid(&self) -> &Arc<[FreeEndomorphism]> {
        &self.monoid
    }

    pub fn composite(&self) -> &FreeEndomorphism {
        self.composite.get_or_init(|| {
            let mut acc = FreeEndomorphism::identity(self.rank);
            for &f in &self.factors {
                acc = acc.compose(&self.monoid[f]).expect("ranks checked at construction");
            }
            acc
        })
    }

    /// `ψ · self` for every `ψ` in monoid order.
    pub fn descendants(&self) -> Vec<EndoWord> {
        (0..self.monoid.len())
            .map(|psi| {
                let mut factors = Vec::with_capacity(self.factors.len() + 1);
                factors.push(psi);
                factors.extend_from_slice(&self.factors);
                let composite = OnceLock::new();
                if let Some(c) = self.composite.get() {
                    let _ = composite.set(self.monoid[psi].compose(c).expect("same rank"));
                }
                EndoWord { factors, monoid: self.monoid.clone(), rank: self.rank, composite }
            })
            .collect()
    }

    /// Human-readable form using the given endomorphism names, e.g. `sigma^2`
    /// or `phi1*phi2`; the identity prints as `id`.
    pub fn display(&self, names: &[String]) -> String {
        if self.factors.is_empty() {
            return "id".into();
        }
        if self.factors.iter().all(|&f| f == self.factors[0]) && self.factors.len() > 1 {
            return format!("{}^{}", names[self.factors[0]], self.factors.len());
        }
        self.factors.iter().map(|&f| names[f].as_str()).collect::<Vec<_>>().join("*")
    }
}

/// Length first; at equal length the rightmost differing factor decides.
pub fn compare(u: &EndoWord, v: &EndoWord) -> Ordering {
    u.factors.len().cmp(&v.factors.len()).then_with(|| u.factors.iter().rev().cmp(v.factors.iter().rev()))
}

impl PartialEq for EndoWord {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for EndoWord {}

impl PartialOrd for EndoWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EndoWord {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(self, other)
    }
}

impl fmt::Debug for EndoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndoWord{:?}", self.factors)
    }
}
