//! Coset enumeration and low-index subgroups for finitely L-presented groups.
//!
//! A finite L-presentation `⟨X | Q | Φ | R⟩` defines the quotient of the free
//! group on `X` by the normal closure of `Q` together with every image of `R`
//! under the monoid generated by `Φ`. Subgroups of finite index are found by
//! enumerating cosets over a truncated, finite covering presentation and then
//! checking, with a finite search through the monoid, that the resulting
//! permutation representation respects every iterated relator.

pub mod coset_enum;
pub mod error;
pub mod parse;
pub mod perms;
pub mod pipeline;
pub mod presentations;
pub mod subgroups;
pub mod words;

pub use coset_enum::{todd_coxeter, CosetTable, EnumerationStrategy, Felsch, Hlt, Limits, StrategyRegistry, TcOutcome};
pub use error::{Error, Result};
pub use perms::{Permutation, PermutationRep};
pub use pipeline::{enumerate, is_valid_perm_rep, EnumerationConfig, EnumerationResult, Verdict};
pub use presentations::{FinitePresentation, LPresentation, SubgroupSpec};
pub use subgroups::{FiniteIndexSubgroup, LowIndexConfig, SubgroupList};
pub use words::{Alphabet, EndoWord, FreeEndomorphism, Letter, Word};
