//! The finite automaton recognizing the delay resynchronizer D_{k,ℓ,S}.
//!
//! Pipeline: word-level predicate automata over marked letters (periodic
//! words, cut markings, next-cut, mismatch windows), lifted to marked
//! substitution sequences through the inverse-image construction, combined
//! into the characterization of the complement over endmarked outputs, then
//! complemented, intersected with the endmarked-output language and projected
//! through the endmarker-removing morphism.

mod build;
mod characterization;
mod mdpair;
pub mod marks;
mod wordpred;

pub use build::{build_resync, BuildStats, BuiltResync};
pub use characterization::{characterization_nfa, marked_characterization_nfa, CharacterizationNfa, MarkedCharacterization};
pub use mdpair::{md_predicate, mism_predicate, MdKind, MdPairNfa, MismPairNfa};
pub use wordpred::{cut_marking_nfa, period_dfa, t_end_word_dfa, WordPredicate};

use crate::automata::{inverse_sst, LiftNfa};
use crate::subst::Substitution;

/// The Cut predicate: 2-marked substitution sequences whose mark 1 sits on an
/// ℓ-cut of the output (mark 2 unconstrained by this predicate).
pub fn cut_predicate(subs: &[Substitution], ell: usize) -> LiftNfa {
    let ctx = subs[0].ctx().clone();
    let word = wordpred::cut_at_mark1(&ctx.alphabet, ell);
    inverse_sst(subs, 2, &word)
}

/// The NextCut predicate: 2-marked sequences with mark 2 on the first cut
/// strictly after mark 1.
pub fn nextcut_predicate(subs: &[Substitution], ell: usize) -> LiftNfa {
    let ctx = subs[0].ctx().clone();
    let word = wordpred::next_cut_marks(&ctx.alphabet, ell);
    inverse_sst(subs, 2, &word)
}

/// Debug-only re-exports used by the size probes.
#[doc(hidden)]
pub use wordpred::{cut_at_mark1 as dbg_cut_at_mark1, next_cut_marks as dbg_next_cut_marks, first_cut_mark2 as dbg_first_cut_mark2};
