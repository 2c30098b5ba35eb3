//! Finite presentations, finite L-presentations and their truncated covering
//! presentations, plus the built-in example groups.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::words::{Alphabet, EndoWord, FreeEndomorphism, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePresentation {
    alphabet: Alphabet,
    relators: Vec<Word>,
}

impl FinitePresentation {
    /// Drops empty relators and exact duplicates, keeping first occurrences.
    pub fn new(alphabet: Alphabet, relators: impl IntoIterator<Item = Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for r in relators {
            r.check_rank(alphabet.rank())?;
            if !r.is_empty() && seen.insert(r.clone()) {
                out.push(r);
            }
        }
        Ok(FinitePresentation { alphabet, relators: out })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

/// The quadruple of generators, fixed relators, endomorphisms and iterated
/// relators.
#[derive(Clone, Debug)]
pub struct LPresentation {
    alphabet: Alphabet,
    fixed: Vec<Word>,
    endomorphisms: Arc<[FreeEndomorphism]>,
    endomorphism_names: Vec<String>,
    iterated: Vec<Word>,
}

impl PartialEq for LPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.fixed == other.fixed
            && self.endomorphisms[..] == other.endomorphisms[..]
            && self.iterated == other.iterated
    }
}

impl Eq for LPresentation {}

impl LPresentation {
    pub fn new(
        alphabet: Alphabet,
        fixed: Vec<Word>,
        endomorphisms: Vec<(String, FreeEndomorphism)>,
        iterated: Vec<Word>,
    ) -> Result<Self> {
        let rank = alphabet.rank();
        for w in fixed.iter().chain(&iterated) {
            w.check_rank(rank)?;
        }
        for (name, e) in &endomorphisms {
            if e.rank() != rank {
                return Err(Error::Input(format!(
                    "endomorphism `{name}` maps {} generators, alphabet has {rank}",
                    e.rank()
                )));
            }
        }
        let (endomorphism_names, endos): (Vec<_>, Vec<_>) = endomorphisms.into_iter().unzip();
        Ok(LPresentation {
            alphabet,
            fixed: fixed.into_iter().filter(|w| !w.is_empty()).collect(),
            endomorphisms: Arc::from(endos),
            endomorphism_names,
            iterated: iterated.into_iter().filter(|w| !w.is_empty()).collect(),
        })
    }

    /// Embeds a finite presentation with all relators iterated and no
    /// endomorphisms.
    pub fn from_finite(fp: &FinitePresentation) -> Self {
        LPresentation {
            alphabet: fp.alphabet.clone(),
            fixed: Vec::new(),
            endomorphisms: Arc::from(Vec::new()),
            endomorphism_names: Vec::new(),
            iterated: fp.relators.clone(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank()
    }

    pub fn fixed(&self) -> &[Word] {
        &self.fixed
    }

    pub fn iterated(&self) -> &[Word] {
        &self.iterated
    }

    pub fn endomorphisms(&self) -> &Arc<[FreeEndomorphism]> {
        &self.endomorphisms
    }

    pub fn endomorphism_names(&self) -> &[String] {
        &self.endomorphism_names
    }

    pub fn identity_endo(&self) -> EndoWord {
        EndoWord::identity(self.endomorphisms.clone(), self.rank())
    }

    pub fn endo_word(&self, factors: Vec<usize>) -> Result<EndoWord> {
        EndoWord::new(factors, self.endomorphisms.clone(), self.rank())
    }

    /// The finite presentation using fixed relators plus all images of the
    /// iterated relators under endomorphism words of length at most `level`.
    pub fn covering_presentation(&self, level: usize) -> FinitePresentation {
        let mut seen: HashSet<Word> = HashSet::new();
        let mut relators = Vec::new();
        for q in &self.fixed {
            if seen.insert(q.clone()) {
                relators.push(q.clone());
            }
        }
        let mut frontier: Vec<Word> = Vec::new();
        for r in &self.iterated {
            if seen.insert(r.clone()) {
                relators.push(r.clone());
            }
            frontier.push(r.clone());
        }
        for _ in 0..level {
            let mut next = Vec::new();
            for w in &frontier {
                for e in self.endomorphisms.iter() {
                    let img = e.apply_unchecked(w);
                    if img.is_empty() {
                        continue;
                    }
                    if seen.insert(img.clone()) {
                        relators.push(img.clone());
                    }
                    next.push(img);
                }
            }
            // images of identical words coincide, so only distinct ones need expanding
            next.sort();
            next.dedup();
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        FinitePresentation { alphabet: self.alphabet.clone(), relators }
    }

    /// Serializes in the line-oriented presentation file format.
    pub fn to_file_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_list = |ws: &[Word]| ws.iter().map(|w| self.alphabet.format_word(w)).collect::<Vec<_>>().join(", ");
        writeln!(f, "generators: {}", self.alphabet.names().join(" "))?;
        if !self.fixed.is_empty() {
            writeln!(f, "fixed: {}", fmt_list(&self.fixed))?;
        }
        for (name, e) in self.endomorphism_names.iter().zip(self.endomorphisms.iter()) {
            let maps: Vec<String> = e
                .images()
                .iter()
                .enumerate()
                .map(|(i, w)| format!("{} -> {}", self.alphabet.name(i), self.alphabet.format_word(w)))
                .collect();
            writeln!(f, "endomorphism {name}: {}", maps.join(", "))?;
        }
        if !self.iterated.is_empty() {
            writeln!(f, "iterated: {}", fmt_list(&self.iterated))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubgroupSpec {
    generators: Vec<Word>,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<Word>, rank: usize) -> Result<Self> {
        for g in &generators {
            g.check_rank(rank)?;
        }
        Ok(SubgroupSpec { generators })
    }

    pub fn trivial() -> Self {
        SubgroupSpec::default()
    }

    /// The subgroup generated by every generator of the alphabet.
    pub fn whole(rank: usize) -> Self {
        SubgroupSpec { generators: (0..rank).map(|i| Word::letter(Letter::generator(i))).collect() }
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }
}

/// The Grigorchuk group.
pub fn grigorchuk() -> LPresentation {
    let x = Alphabet::new(["a", "b", "c", "d"]).unwrap();
    let g = |s: &str| letters(&x, s);
    let fixed = vec![g("aa"), g("bb"), g("cc"), g("dd"), g("bcd")];
    let sigma = FreeEndomorphism::new(vec![g("aca"), g("d"), g("b"), g("c")]).unwrap();
    let iterated = vec![g("ad").pow(4), g("adacac").pow(4)];
    LPresentation::new(x, fixed, vec![("sigma".into(), sigma)], iterated).unwrap()
}

/// Product of single-character generator names.
fn letters(x: &Alphabet, s: &str) -> Word {
    Word::reduce(s.chars().map(|c| Letter::generator(x.index_of(&c.to_string()).expect("builtin name"))))
}

/// The Basilica group.
pub fn basilica() -> LPresentation {
    let x = Alphabet::new(["a", "b"]).unwrap();
    let a = letters(&x, "a");
    let b = letters(&x, "b");
    let sigma = FreeEndomorphism::new(vec![b.pow(2), a.clone()]).unwrap();
    let rel = Word::commutator(&a, &a.conjugate(&b));
    LPresentation::new(x, vec![], vec![("sigma".into(), sigma)], vec![rel]).unwrap()
}

/// The free Burnside group of exponent `m` on `n` generators `a1..an`, with
/// an auxiliary generator `t`.
pub fn burnside(n: usize, m: usize) -> Result<LPresentation> {
    if n == 0 || m == 0 {
        return Err(Error::Input("burnside(n, m) needs n, m >= 1".into()));
    }
    let mut names: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    names.push("t".into());
    let x = Alphabet::new(names)?;
    let t = Word::letter(Letter::generator(n));
    let mut endos = Vec::with_capacity(2 * n);
    for i in 0..n {
        for (inv, suffix) in [(false, ""), (true, "^-1")] {
            let l = if inv { Letter::inverse_of(i) } else { Letter::generator(i) };
            let mut images: Vec<Word> = (0..n).map(|j| Word::letter(Letter::generator(j))).collect();
            images.push(t.multiply(&Word::letter(l)));
            endos.push((format!("sigma_a{}{suffix}", i + 1), FreeEndomorphism::new(images)?));
        }
    }
    LPresentation::new(x, vec![t.clone()], endos, vec![t.pow(m as i64)])
}
