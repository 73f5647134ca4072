//! Streaming string transducers: syntax, runs and bounded-length semantics.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::alphabet::Letter;
use crate::seq::{SubstSeq, Word};
use crate::subst::{SstCtx, Substitution};

pub type StateId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SstBuildError {
    #[error("unknown state index {0}")]
    UnknownState(usize),
    #[error("transition letter outside the alphabet")]
    UnknownLetter,
    #[error("final state {0} has no final output substitution")]
    MissingFinalOutput(usize),
    #[error("final output given for non-final state {0}")]
    SpuriousFinalOutput(usize),
    #[error("substitution context differs from the transducer context")]
    CtxMismatch,
}

/// A nondeterministic SST.  Every final state carries exactly one final
/// output substitution.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sst {
    pub name: String,
    ctx: Arc<SstCtx>,
    states: Vec<String>,
    initial: BTreeSet<StateId>,
    final_: BTreeSet<StateId>,
    transitions: Vec<(StateId, Letter, StateId, Substitution)>,
    final_out: Vec<Option<Substitution>>,
}

/// One accepting run: the visited states, the input, and the substitution
/// sequence (transition substitutions followed by the final output one, so
/// the sequence is one longer than the input).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Run {
    pub states: Vec<StateId>,
    pub input: Word,
    pub subs: SubstSeq,
}

impl Sst {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        ctx: Arc<SstCtx>,
        states: Vec<String>,
        initial: impl IntoIterator<Item = StateId>,
        final_: impl IntoIterator<Item = StateId>,
        transitions: Vec<(StateId, Letter, StateId, Substitution)>,
        final_out: Vec<(StateId, Substitution)>,
    ) -> Result<Self, SstBuildError> {
        let n = states.len();
        let initial: BTreeSet<StateId> = initial.into_iter().collect();
        let final_: BTreeSet<StateId> = final_.into_iter().collect();
        for &q in initial.iter().chain(final_.iter()) {
            if q >= n {
                return Err(SstBuildError::UnknownState(q));
            }
        }
        for (q, a, q2, s) in &transitions {
            if *q >= n || *q2 >= n {
                return Err(SstBuildError::UnknownState((*q).max(*q2)));
            }
            if !ctx.alphabet.contains(*a) {
                return Err(SstBuildError::UnknownLetter);
            }
            if **s.ctx() != *ctx {
                return Err(SstBuildError::CtxMismatch);
            }
        }
        let mut fo: Vec<Option<Substitution>> = vec![None; n];
        for (q, s) in final_out {
            if q >= n {
                return Err(SstBuildError::UnknownState(q));
            }
            if !final_.contains(&q) {
                return Err(SstBuildError::SpuriousFinalOutput(q));
            }
            if **s.ctx() != *ctx {
                return Err(SstBuildError::CtxMismatch);
            }
            fo[q] = Some(s);
        }
        for &q in &final_ {
            if fo[q].is_none() {
                return Err(SstBuildError::MissingFinalOutput(q));
            }
        }
        Ok(Sst { name: name.into(), ctx, states, initial, final_, transitions, final_out: fo })
    }

    pub fn ctx(&self) -> &Arc<SstCtx> {
        &self.ctx
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> &BTreeSet<StateId> {
        &self.initial
    }

    pub fn final_states(&self) -> &BTreeSet<StateId> {
        &self.final_
    }

    pub fn transitions(&self) -> &[(StateId, Letter, StateId, Substitution)] {
        &self.transitions
    }

    pub fn final_output(&self, q: StateId) -> Option<&Substitution> {
        self.final_out[q].as_ref()
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    /// Deterministic: single initial state and at most one transition per
    /// (state, letter).
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() != 1 {
            return false;
        }
        let mut seen = BTreeSet::new();
        for (q, a, _, _) in &self.transitions {
            if !seen.insert((*q, *a)) {
                return false;
            }
        }
        true
    }

    /// Single variable, every image of the output variable of shape `O u`:
    /// the transducer only appends, i.e. behaves as a finite transducer.
    pub fn is_rational(&self) -> bool {
        use crate::subst::Sym;
        if self.ctx.vars.len() != 1 {
            return false;
        }
        let o = self.ctx.output();
        let append_only = |s: &Substitution| {
            let img = s.image(o);
            img.first() == Some(&Sym::Var(o)) && img[1..].iter().all(|x| matches!(x, Sym::Let(_)))
        };
        self.transitions.iter().all(|(_, _, _, s)| append_only(s))
            && self.final_.iter().all(|&q| append_only(self.final_out[q].as_ref().unwrap()))
    }

    /// All substitutions occurring on transitions or as final outputs.
    pub fn substitution_set(&self) -> Vec<Substitution> {
        let mut out: Vec<Substitution> = Vec::new();
        for (_, _, _, s) in &self.transitions {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
        for s in self.final_out.iter().flatten() {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
        out
    }

    /// Maximal number of letters any single substitution emits.
    pub fn max_step_output(&self) -> usize {
        self.substitution_set().iter().map(|s| s.letter_count()).max().unwrap_or(0)
    }

    /// All accepting runs on `u`, each with its substitution sequence.
    pub fn enumerate_runs(&self, u: &[Letter]) -> Vec<Run> {
        let mut runs = Vec::new();
        let mut stack: Vec<(StateId, usize, Vec<StateId>, Vec<Substitution>)> = self
            .initial
            .iter()
            .map(|&q| (q, 0, vec![q], Vec::new()))
            .collect();
        while let Some((q, pos, states, subs)) = stack.pop() {
            if pos == u.len() {
                if self.final_.contains(&q) {
                    let mut items = subs.clone();
                    items.push(self.final_out[q].clone().unwrap());
                    runs.push(Run {
                        states: states.clone(),
                        input: u.to_vec(),
                        subs: SubstSeq::new(self.ctx.clone(), items).unwrap(),
                    });
                }
                continue;
            }
            for (p, a, p2, s) in &self.transitions {
                if *p == q && *a == u[pos] {
                    let mut states2 = states.clone();
                    states2.push(*p2);
                    let mut subs2 = subs.clone();
                    subs2.push(s.clone());
                    stack.push((*p2, pos + 1, states2, subs2));
                }
            }
        }
        runs.sort_by(|a, b| a.states.cmp(&b.states));
        runs
    }

    /// L(T) up to input length `max_len`: the set of pairs (u, τ(ρ)).
    pub fn language(&self, max_len: usize) -> Vec<(Word, SubstSeq)> {
        let mut out: Vec<(Word, SubstSeq)> = Vec::new();
        for u in all_words(&self.ctx, max_len) {
            for run in self.enumerate_runs(&u) {
                let elem = (u.clone(), run.subs);
                if !out.contains(&elem) {
                    out.push(elem);
                }
            }
        }
        out
    }

    /// R(T) up to input length `max_len`: the set of pairs (input, output).
    pub fn relation(&self, max_len: usize) -> BTreeSet<(Word, Word)> {
        self.language(max_len)
            .into_iter()
            .map(|(u, seq)| (u, seq.out_word()))
            .collect()
    }
}

/// All words over the context alphabet up to the given length.
pub fn all_words(ctx: &SstCtx, max_len: usize) -> Vec<Word> {
    let letters: Vec<Letter> = ctx.alphabet.letters().collect();
    let mut out: Vec<Word> = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
