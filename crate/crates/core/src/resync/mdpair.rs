//! Weight-difference and mismatch predicates over pairs of marked sequences.
//!
//! The weight-difference automaton runs the relevance lift on both components
//! (claims over the 2-state before/after word automaton for one mark) and
//! counts, per step, the difference between the numbers of letters each side
//! produces left of its mark.  The counter saturates outside [−α, α]; its
//! final value is 0 exactly when the two marked positions coincide.

use std::sync::Arc;

use crate::alphabet::{Letter, VarId};
use crate::automata::{Automaton, LiftNfa, LiftState, WordTable};
use crate::subst::Substitution;

use super::marks::{MarkedAlphabet, MarkedLetter, MarkedSubst, MARK1};
use super::wordpred::{self, decode_payload};

/// Which weight-difference language to recognize.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MdKind {
    /// max-diff ≤ α.
    Le,
    /// max-diff > α.
    Gt,
    /// max-diff ≤ α and the marks coincide.
    LeEq,
    /// max-diff ≤ α and the marks differ.
    LeNeq,
}

/// The before/after relevance word automaton for one mark, with counts: a
/// letter consumed before or at the mark counts 1.
pub fn relevance_table(letters: &[Letter], mark: u8) -> WordTable {
    let syms = wordpred::marked_universe(letters);
    let mut delta = vec![vec![Vec::new(); syms.len()]; 2];
    for (li, l) in syms.iter().enumerate() {
        if l.has(mark) {
            delta[0][li].push((1, 1));
        } else {
            delta[0][li].push((0, 1));
            delta[1][li].push((1, 0));
        }
    }
    WordTable::new(syms, delta, vec![0], vec![vec![], vec![0]])
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MdState {
    left: LiftState,
    right: LiftState,
    /// Saturating counter of the running weight difference.
    diff: i32,
    overflow: bool,
    raw_left: u8,
    raw_right: u8,
}

/// The pair automaton for one mark over a marked substitution alphabet.
pub struct MdPairNfa {
    pub alphabet: Arc<MarkedAlphabet>,
    lift: LiftNfa,
    alpha: i32,
    kind: MdKind,
    mark: u8,
}

impl MdPairNfa {
    pub fn new(
        alphabet: Arc<MarkedAlphabet>,
        ctx_vars: usize,
        output: VarId,
        letters: &[Letter],
        alpha: usize,
        kind: MdKind,
        mark: u8,
    ) -> Self {
        let table = Arc::new(relevance_table(letters, mark));
        let lift = LiftNfa::new(table, alphabet.clone(), ctx_vars, output);
        MdPairNfa { alphabet, lift, alpha: alpha as i32, kind, mark }
    }

    fn raw_count(&self, sym: u32) -> u8 {
        self.alphabet.subs[sym as usize].mark_count(self.mark).min(2) as u8
    }
}

impl Automaton for MdPairNfa {
    type Sym = (u32, u32);
    type St = MdState;

    fn alphabet(&self) -> Vec<(u32, u32)> {
        let n = self.alphabet.len() as u32;
        let mut out = Vec::with_capacity((n * n) as usize);
        for l in 0..n {
            for r in 0..n {
                out.push((l, r));
            }
        }
        out
    }

    fn initials(&self) -> Vec<MdState> {
        vec![MdState {
            left: self.lift.initial_state(),
            right: self.lift.initial_state(),
            diff: 0,
            overflow: false,
            raw_left: 0,
            raw_right: 0,
        }]
    }

    fn succ(&self, st: &MdState, sym: &(u32, u32)) -> Vec<MdState> {
        let raw_left = (st.raw_left + self.raw_count(sym.0)).min(2);
        let raw_right = (st.raw_right + self.raw_count(sym.1)).min(2);
        if raw_left > 1 || raw_right > 1 {
            return Vec::new();
        }
        let lefts = self.lift.succ_counted(&st.left, sym.0);
        let rights = self.lift.succ_counted(&st.right, sym.1);
        let mut out = Vec::with_capacity(lefts.len() * rights.len());
        for (l, cl) in lefts.iter() {
            for (r, cr) in rights.iter() {
                let (diff, overflow) = if st.overflow {
                    (0, true)
                } else {
                    let d = st.diff + *cl as i32 - *cr as i32;
                    if d.abs() > self.alpha {
                        (0, true)
                    } else {
                        (d, false)
                    }
                };
                out.push(MdState {
                    left: l.clone(),
                    right: r.clone(),
                    diff,
                    overflow,
                    raw_left,
                    raw_right,
                });
            }
        }
        out
    }

    fn is_accepting(&self, st: &MdState) -> bool {
        if st.raw_left != 1 || st.raw_right != 1 {
            return false;
        }
        if self.lift.accept_payloads(&st.left).is_empty()
            || self.lift.accept_payloads(&st.right).is_empty()
        {
            return false;
        }
        match self.kind {
            MdKind::Le => !st.overflow,
            MdKind::Gt => st.overflow,
            MdKind::LeEq => !st.overflow && st.diff == 0,
            MdKind::LeNeq => !st.overflow && st.diff != 0,
        }
    }
}

/// The spec-level predicate over pairs of 1-marked sequences (mark 1).
pub fn md_predicate(subs: &[Substitution], alpha: usize, kind: MdKind) -> MdPairNfa {
    let ctx = subs[0].ctx().clone();
    let alphabet = MarkedAlphabet::close(subs, 1);
    let letters = ctx.alphabet.letters_with_end();
    MdPairNfa::new(alphabet, ctx.vars.len(), ctx.output(), &letters, alpha, kind, MARK1)
}

/// Pair automaton whose sides run a payload-reporting word predicate; accepts
/// when both sides accept with payloads (d, σ₁), (d, σ₂) sharing the distance
/// and differing on the letter.
pub struct PayloadPairNfa {
    pub alphabet: Arc<MarkedAlphabet>,
    lift: LiftNfa,
    /// Required syntactic mark occurrences per side, per mark (None = free).
    raw_req: [Option<u8>; 2],
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PayloadPairState {
    left: LiftState,
    right: LiftState,
    raws: [u8; 4], // left mark1, left mark2, right mark1, right mark2
}

impl PayloadPairNfa {
    pub fn new(
        alphabet: Arc<MarkedAlphabet>,
        ctx_vars: usize,
        output: VarId,
        table: WordTable,
        raw_req: [Option<u8>; 2],
    ) -> Self {
        let lift = LiftNfa::new(Arc::new(table), alphabet.clone(), ctx_vars, output);
        PayloadPairNfa { alphabet, lift, raw_req }
    }

    fn raws_ok(&self, raws: &[u8; 4]) -> bool {
        for (m, req) in self.raw_req.iter().enumerate() {
            if let Some(r) = req {
                if raws[m] != *r || raws[2 + m] != *r {
                    return false;
                }
            }
        }
        true
    }

    fn raws_plausible(&self, raws: &[u8; 4]) -> bool {
        for (m, req) in self.raw_req.iter().enumerate() {
            if let Some(r) = req {
                if raws[m] > *r || raws[2 + m] > *r {
                    return false;
                }
            }
        }
        true
    }
}

impl Automaton for PayloadPairNfa {
    type Sym = (u32, u32);
    type St = PayloadPairState;

    fn alphabet(&self) -> Vec<(u32, u32)> {
        let n = self.alphabet.len() as u32;
        let mut out = Vec::with_capacity((n * n) as usize);
        for l in 0..n {
            for r in 0..n {
                out.push((l, r));
            }
        }
        out
    }

    fn initials(&self) -> Vec<PayloadPairState> {
        vec![PayloadPairState {
            left: self.lift.initial_state(),
            right: self.lift.initial_state(),
            raws: [0; 4],
        }]
    }

    fn succ(&self, st: &PayloadPairState, sym: &(u32, u32)) -> Vec<PayloadPairState> {
        let ml = &self.alphabet.subs[sym.0 as usize];
        let mr = &self.alphabet.subs[sym.1 as usize];
        let raws = [
            (st.raws[0] + ml.mark_count(MARK1).min(2) as u8).min(2),
            (st.raws[1] + ml.mark_count(super::marks::MARK2).min(2) as u8).min(2),
            (st.raws[2] + mr.mark_count(MARK1).min(2) as u8).min(2),
            (st.raws[3] + mr.mark_count(super::marks::MARK2).min(2) as u8).min(2),
        ];
        if !self.raws_plausible(&raws) {
            return Vec::new();
        }
        let lefts = self.lift.succ_counted(&st.left, sym.0);
        let rights = self.lift.succ_counted(&st.right, sym.1);
        let mut out = Vec::with_capacity(lefts.len() * rights.len());
        for (l, _) in lefts.iter() {
            for (r, _) in rights.iter() {
                out.push(PayloadPairState { left: l.clone(), right: r.clone(), raws });
            }
        }
        out
    }

    fn is_accepting(&self, st: &PayloadPairState) -> bool {
        if !self.raws_ok(&st.raws) {
            return false;
        }
        let pl = self.lift.accept_payloads(&st.left);
        if pl.is_empty() {
            return false;
        }
        let pr = self.lift.accept_payloads(&st.right);
        for &a in &pl {
            let (da, la) = decode_payload(a);
            for &b in &pr {
                let (db, lb) = decode_payload(b);
                if da == db && la != lb {
                    return true;
                }
            }
        }
        false
    }
}

pub type MismPairNfa = PayloadPairNfa;

/// The mismatch predicate: marks (i, j₁)/(i, j₂) with a shared offset
/// j−i ∈ [0, ℓ²] and differing letters at the mark-2 positions.
pub fn mism_predicate(subs: &[Substitution], ell: usize) -> MismPairNfa {
    let ctx = subs[0].ctx().clone();
    let alphabet = MarkedAlphabet::close(subs, 2);
    let table = wordpred::mism_side(&ctx.alphabet, ell * ell);
    PayloadPairNfa::new(alphabet, ctx.vars.len(), ctx.output(), table, [Some(1), Some(1)])
}

/// The absolute-position mismatch predicate (the i = 0 case): mark 2 at the
/// same position ≤ ℓ² on both sides with differing letters; mark 1 absent.
pub fn abs_mism_predicate(
    alphabet: Arc<MarkedAlphabet>,
    ctx_vars: usize,
    output: VarId,
    sigma: &crate::alphabet::Alphabet,
    ell: usize,
) -> PayloadPairNfa {
    let table = wordpred::abs_mark2(sigma, ell * ell);
    PayloadPairNfa::new(alphabet, ctx_vars, output, table, [Some(0), Some(1)])
}

/// Marks a letter universe helper re-export for tests.
pub fn marked_letter_universe(letters: &[Letter]) -> Vec<MarkedLetter> {
    wordpred::marked_universe(letters)
}

/// Encodes a marked pair sequence as a word over pair ids; `None` when some
/// item is not in the alphabet (e.g. multiple marks on one occurrence beyond
/// the closure arity).
pub fn encode_pair_word(
    alphabet: &MarkedAlphabet,
    left: &[MarkedSubst],
    right: &[MarkedSubst],
) -> Option<Vec<(u32, u32)>> {
    if left.len() != right.len() {
        return None;
    }
    left.iter()
        .zip(right.iter())
        .map(|(l, r)| Some((alphabet.id_of(l)?, alphabet.id_of(r)?)))
        .collect()
}
