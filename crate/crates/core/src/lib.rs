//! Delay analysis for streaming string transducers (SSTs).
//!
//! An SST updates a fixed set of string registers with copyless substitutions
//! while scanning its input, and emits a designated register at the end.  Two
//! runs with the same output can still build it in wildly different orders;
//! this crate measures how different with the ℓ-delay: the output is split
//! into maximal blocks whose primitive root has length at most ℓ, and the
//! per-time weight difference is compared at the block boundaries (cuts).
//!
//! On top of the measure the crate provides
//! - the substitution monoid, SST syntax/semantics and a text format ([`subst`],
//!   [`seq`], [`sst`], [`parse`]),
//! - origin maps, weights, factorizations and the delay measures ([`origin`],
//!   [`factor`], [`measure`]),
//! - generic lazy automata with products, determinization, inclusion and the
//!   inverse image of a regular language under an SST ([`automata`]),
//! - the finite automaton recognizing the delay resynchronizer
//!   D_{k,ℓ,S} ([`resync`]),
//! - inclusion/equivalence and variable minimization modulo delay ([`decide`]),
//! - interval pumping and the completeness toolkit ([`pump`]),
//! - a bundled example corpus and the aggregated self-check ([`corpus`],
//!   [`check`]).

pub mod alphabet;
pub mod subst;
pub mod seq;
pub mod sst;
pub mod parse;

pub mod origin;
pub mod factor;
pub mod measure;

pub mod automata;
pub mod resync;
pub mod decide;
pub mod pump;

pub mod corpus;
pub mod check;

pub use alphabet::{Alphabet, Letter, VarId, VarSet};
pub use measure::ResyncParams;
pub use subst::{SstCtx, Substitution, Sym};
pub use seq::SubstSeq;
pub use sst::Sst;
