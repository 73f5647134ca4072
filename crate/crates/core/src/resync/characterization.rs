//! Assembly of the characterization automaton: the language of convolutions
//! λ⊗μ of endmarked-output sequences that are *not* in the resynchronizer.
//!
//! Six product terms over 2-marked pairs implement the case split "some
//! common cut i with small difference is followed by next cuts with a large
//! difference / different next cuts / a nearby mismatch", plus the i = 0
//! variants using first-cut and absolute-position predicates.  The union is
//! projected onto plain substitution pairs by folding the mark placements
//! into the transitions.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::automata::{Automaton, Interner, LiftNfa, LiftState, WordTable};
use crate::measure::ResyncParams;
use crate::subst::SstCtx;

use super::marks::{MarkedAlphabet, MARK1, MARK2};
use super::mdpair::{MdKind, MdPairNfa, PayloadPairNfa};
use super::wordpred;

/// A component of a term, with interned states.
pub(crate) trait PairPart: Send + Sync {
    fn init(&self) -> Vec<u32>;
    fn succ(&self, q: u32, sym: (u32, u32)) -> Arc<Vec<u32>>;
    fn accepting(&self, q: u32) -> bool;
}

pub(crate) struct Interned<A: Automaton<Sym = (u32, u32)>> {
    a: A,
    interner: Mutex<Interner<A::St>>,
    memo: Mutex<HashMap<(u32, (u32, u32)), Arc<Vec<u32>>>>,
}

impl<A: Automaton<Sym = (u32, u32)>> Interned<A> {
    pub fn new(a: A) -> Self {
        Interned { a, interner: Mutex::new(Interner::new()), memo: Mutex::new(HashMap::new()) }
    }
}

impl<A: Automaton<Sym = (u32, u32)>> PairPart for Interned<A>
where
    A: Send + Sync,
    A::St: Send + Sync,
{
    fn init(&self) -> Vec<u32> {
        let mut interner = self.interner.lock().unwrap();
        self.a.initials().into_iter().map(|st| interner.intern(st).0).collect()
    }

    fn succ(&self, q: u32, sym: (u32, u32)) -> Arc<Vec<u32>> {
        if let Some(hit) = self.memo.lock().unwrap().get(&(q, sym)) {
            return hit.clone();
        }
        let st = self.interner.lock().unwrap().states[q as usize].clone();
        let succs = self.a.succ(&st, &sym);
        let mut interner = self.interner.lock().unwrap();
        let mut ids: Vec<u32> = succs.into_iter().map(|s| interner.intern(s).0).collect();
        drop(interner);
        ids.sort_unstable();
        ids.dedup();
        let ids = Arc::new(ids);
        self.memo.lock().unwrap().insert((q, sym), ids.clone());
        ids
    }

    fn accepting(&self, q: u32) -> bool {
        let st = self.interner.lock().unwrap().states[q as usize].clone();
        self.a.is_accepting(&st)
    }
}

/// One side of a pair running a lifted word predicate, with syntactic mark
/// requirements for that side.
pub(crate) struct SideLiftNfa {
    lift: Arc<LiftNfa>,
    left: bool,
    raw_req: [Option<u8>; 2],
}

impl SideLiftNfa {
    pub fn new(lift: Arc<LiftNfa>, left: bool, raw_req: [Option<u8>; 2]) -> Self {
        SideLiftNfa { lift, left, raw_req }
    }
}

impl Automaton for SideLiftNfa {
    type Sym = (u32, u32);
    type St = (LiftState, [u8; 2]);

    fn alphabet(&self) -> Vec<(u32, u32)> {
        let n = self.lift.alphabet.len() as u32;
        let mut out = Vec::with_capacity((n * n) as usize);
        for l in 0..n {
            for r in 0..n {
                out.push((l, r));
            }
        }
        out
    }

    fn initials(&self) -> Vec<Self::St> {
        vec![(self.lift.initial_state(), [0, 0])]
    }

    fn succ(&self, st: &Self::St, sym: &(u32, u32)) -> Vec<Self::St> {
        let my = if self.left { sym.0 } else { sym.1 };
        let msub = &self.lift.alphabet.subs[my as usize];
        let raws = [
            (st.1[0] + msub.mark_count(MARK1).min(2) as u8).min(2),
            (st.1[1] + msub.mark_count(MARK2).min(2) as u8).min(2),
        ];
        for (m, req) in self.raw_req.iter().enumerate() {
            if let Some(r) = req {
                if raws[m] > *r {
                    return Vec::new();
                }
            }
        }
        self.lift
            .succ_counted(&st.0, my)
            .iter()
            .map(|(s, _)| (s.clone(), raws))
            .collect()
    }

    fn is_accepting(&self, st: &Self::St) -> bool {
        for (m, req) in self.raw_req.iter().enumerate() {
            if let Some(r) = req {
                if st.1[m] != *r {
                    return false;
                }
            }
        }
        !self.lift.accept_payloads(&st.0).is_empty()
    }
}

/// Synchronized conjunction of parts.
pub(crate) struct TermNfa {
    pub parts: Vec<Arc<dyn PairPart>>,
    syms: Vec<(u32, u32)>,
}

impl TermNfa {
    fn new(parts: Vec<Arc<dyn PairPart>>, n_syms: u32) -> Self {
        let mut syms = Vec::with_capacity((n_syms * n_syms) as usize);
        for l in 0..n_syms {
            for r in 0..n_syms {
                syms.push((l, r));
            }
        }
        TermNfa { parts, syms }
    }

    pub(crate) fn initials(&self) -> Vec<Vec<u32>> {
        let mut acc: Vec<Vec<u32>> = vec![Vec::new()];
        for part in &self.parts {
            let inits = part.init();
            let mut next = Vec::new();
            for prefix in &acc {
                for &i in &inits {
                    let mut p = prefix.clone();
                    p.push(i);
                    next.push(p);
                }
            }
            acc = next;
        }
        acc
    }

    pub(crate) fn succ(&self, st: &[u32], sym: (u32, u32)) -> Vec<Vec<u32>> {
        let mut acc: Vec<Vec<u32>> = vec![Vec::with_capacity(self.parts.len())];
        for (pi, part) in self.parts.iter().enumerate() {
            let succs = part.succ(st[pi], sym);
            if succs.is_empty() {
                return Vec::new();
            }
            let mut next = Vec::with_capacity(acc.len() * succs.len());
            for prefix in &acc {
                for &s in succs.iter() {
                    let mut p = prefix.clone();
                    p.push(s);
                    next.push(p);
                }
            }
            acc = next;
        }
        acc
    }

    pub(crate) fn accepting(&self, st: &[u32]) -> bool {
        self.parts.iter().enumerate().all(|(pi, p)| p.accepting(st[pi]))
    }
}

/// Union of the six terms over marked substitution pairs.
pub struct MarkedCharacterization {
    pub alphabet: Arc<MarkedAlphabet>,
    pub(crate) terms: Vec<TermNfa>,
}

impl Automaton for MarkedCharacterization {
    type Sym = (u32, u32);
    type St = (u8, Vec<u32>);

    fn alphabet(&self) -> Vec<(u32, u32)> {
        self.terms[0].syms.clone()
    }

    fn initials(&self) -> Vec<Self::St> {
        let mut out = Vec::new();
        for (ti, term) in self.terms.iter().enumerate() {
            for init in term.initials() {
                out.push((ti as u8, init));
            }
        }
        out
    }

    fn succ(&self, st: &Self::St, sym: &(u32, u32)) -> Vec<Self::St> {
        self.terms[st.0 as usize]
            .succ(&st.1, *sym)
            .into_iter()
            .map(|s| (st.0, s))
            .collect()
    }

    fn is_accepting(&self, st: &Self::St) -> bool {
        self.terms[st.0 as usize].accepting(&st.1)
    }
}

/// The characterization over plain (unmarked) substitution pairs: the
/// mark-projected union intersected with "both outputs end with the
/// endmarker".
pub struct CharacterizationNfa {
    pub marked: Arc<MarkedCharacterization>,
    tt: Arc<LiftNfa>,
    n_plain: u32,
}

impl CharacterizationNfa {
    pub fn plain_alphabet_len(&self) -> u32 {
        self.n_plain
    }
}

impl Automaton for CharacterizationNfa {
    type Sym = (u32, u32);
    type St = ((u8, Vec<u32>), LiftState, LiftState);

    fn alphabet(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity((self.n_plain * self.n_plain) as usize);
        for l in 0..self.n_plain {
            for r in 0..self.n_plain {
                out.push((l, r));
            }
        }
        out
    }

    fn initials(&self) -> Vec<Self::St> {
        let tt0 = self.tt.initial_state();
        self.marked
            .initials()
            .into_iter()
            .map(|m| (m, tt0.clone(), tt0.clone()))
            .collect()
    }

    fn succ(&self, st: &Self::St, sym: &(u32, u32)) -> Vec<Self::St> {
        let mut marked_succs = Vec::new();
        for &mi in &self.marked.alphabet.variants[sym.0 as usize] {
            for &mj in &self.marked.alphabet.variants[sym.1 as usize] {
                marked_succs.extend(self.marked.succ(&st.0, &(mi, mj)));
            }
        }
        let marked_succs = crate::automata::dedup(marked_succs);
        let tls: Vec<LiftState> =
            self.tt.succ_counted(&st.1, sym.0).iter().map(|(s, _)| s.clone()).collect();
        let trs: Vec<LiftState> =
            self.tt.succ_counted(&st.2, sym.1).iter().map(|(s, _)| s.clone()).collect();
        let mut out = Vec::new();
        for m in &marked_succs {
            for tl in &tls {
                for tr in &trs {
                    out.push((m.clone(), tl.clone(), tr.clone()));
                }
            }
        }
        out
    }

    fn is_accepting(&self, st: &Self::St) -> bool {
        self.marked.is_accepting(&st.0)
            && !self.tt.accept_payloads(&st.1).is_empty()
            && !self.tt.accept_payloads(&st.2).is_empty()
    }
}

fn det_min(table: WordTable) -> WordTable {
    table.determinize().minimize()
}

/// Builds the marked-level union of terms for the endmarked set S′ of the
/// parameters.
pub fn marked_characterization_nfa(p: &ResyncParams) -> MarkedCharacterization {
    let ctx: &Arc<SstCtx> = p.ctx();
    let bases = p.endmarked_set();
    let alphabet = MarkedAlphabet::close(&bases, 2);
    let nvars = ctx.vars.len();
    let output = ctx.output();
    let letters = ctx.alphabet.letters_with_end();

    let cut_table = Arc::new(det_min(WordTable::from_nfa(&wordpred::cut_at_mark1(&ctx.alphabet, p.ell))));
    let nextcut_table =
        Arc::new(det_min(WordTable::from_nfa(&wordpred::next_cut_marks(&ctx.alphabet, p.ell))));
    let firstcut_table =
        Arc::new(det_min(WordTable::from_nfa(&wordpred::first_cut_mark2(&ctx.alphabet, p.ell))));

    let side =
        |table: &Arc<WordTable>, left: bool, raw_req: [Option<u8>; 2]| -> Arc<dyn PairPart> {
            let lift = Arc::new(LiftNfa::new(table.clone(), alphabet.clone(), nvars, output));
            Arc::new(Interned::new(SideLiftNfa::new(lift, left, raw_req)))
        };

    let cut_l = side(&cut_table, true, [Some(1), None]);
    let cut_r = side(&cut_table, false, [Some(1), None]);
    let nextcut_l = side(&nextcut_table, true, [Some(1), Some(1)]);
    let nextcut_r = side(&nextcut_table, false, [Some(1), Some(1)]);
    let firstcut_l = side(&firstcut_table, true, [Some(0), Some(1)]);
    let firstcut_r = side(&firstcut_table, false, [Some(0), Some(1)]);

    let md = |alpha: usize, kind: MdKind, mark: u8| -> Arc<dyn PairPart> {
        Arc::new(Interned::new(MdPairNfa::new(
            alphabet.clone(),
            nvars,
            output,
            &letters,
            alpha,
            kind,
            mark,
        )))
    };
    let emd1 = md(p.k, MdKind::LeEq, MARK1);
    let md2_gt = md(p.k, MdKind::Gt, MARK2);
    let md2_neq = md(p.k, MdKind::LeNeq, MARK2);

    let mism: Arc<dyn PairPart> = Arc::new(Interned::new(PayloadPairNfa::new(
        alphabet.clone(),
        nvars,
        output,
        wordpred::mism_side(&ctx.alphabet, p.ell * p.ell),
        [Some(1), Some(1)],
    )));
    let abs: Arc<dyn PairPart> = Arc::new(Interned::new(PayloadPairNfa::new(
        alphabet.clone(),
        nvars,
        output,
        wordpred::abs_mark2(&ctx.alphabet, p.ell * p.ell),
        [Some(0), Some(1)],
    )));

    let n = alphabet.len() as u32;
    let terms = vec![
        // common cut with small diff, next cuts with a large diff
        TermNfa::new(
            vec![
                cut_l.clone(),
                cut_r.clone(),
                emd1.clone(),
                nextcut_l.clone(),
                nextcut_r.clone(),
                md2_gt.clone(),
            ],
            n,
        ),
        // common cut with small diff, different next cuts (small diff)
        TermNfa::new(
            vec![cut_l.clone(), cut_r.clone(), emd1.clone(), nextcut_l, nextcut_r, md2_neq.clone()],
            n,
        ),
        // common cut with small diff, mismatch within ℓ² of it
        TermNfa::new(vec![cut_l, cut_r, emd1, mism], n),
        // i = 0: first cuts with a large diff
        TermNfa::new(vec![firstcut_l.clone(), firstcut_r.clone(), md2_gt], n),
        // i = 0: different first cuts with a small diff
        TermNfa::new(vec![firstcut_l, firstcut_r, md2_neq], n),
        // i = 0: mismatch within the first ℓ² positions
        TermNfa::new(vec![abs], n),
    ];
    MarkedCharacterization { alphabet, terms }
}

/// The characterization over plain pairs of S′: accepts λ⊗μ with both
/// outputs endmarked and (λ, μ) outside the resynchronizer.
pub fn characterization_nfa(p: &ResyncParams) -> CharacterizationNfa {
    let marked = Arc::new(marked_characterization_nfa(p));
    let ctx = p.ctx();
    let bases = p.endmarked_set();
    let n_plain = bases.len() as u32;
    let plain_alphabet = MarkedAlphabet::close(&bases, 0);
    let tt_table = Arc::new(WordTable::from_nfa(&wordpred::t_end_word_dfa(&ctx.alphabet)));
    let tt = Arc::new(LiftNfa::new(tt_table, plain_alphabet, ctx.vars.len(), ctx.output()));
    CharacterizationNfa { marked, tt, n_plain }
}
