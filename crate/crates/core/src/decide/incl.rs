//! Inclusion and equivalence modulo a delay resynchronizer.
//!
//! T₁ is (k,ℓ)-included in T₂ iff every (u, λ) in L(T₁) has some (u, μ) in
//! L(T₂) with (λ, μ) in D_{k,ℓ,S}, S the union of the two substitution sets.
//! This reduces to NFA inclusion of the run language of T₁ into the
//! input-threaded resynchronizer restricted on its second component to T₂.

use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::alphabet::{Alphabet, Letter, VarSet};
use crate::automata::{
    inclusion, Automaton, AutomatonError, Budget, InclusionOutcome,
};
use crate::measure::ResyncParams;
use crate::resync::{build_resync, BuiltResync};
use crate::seq::{SubstSeq, Word};
use crate::sst::Sst;
use crate::subst::{SstCtx, Substitution};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    Holds,
    Fails,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub input: Word,
    pub run: SubstSeq,
    /// For equivalence: which inclusion failed.
    pub direction: Option<&'static str>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DecideStats {
    pub explored: usize,
    pub wall: Duration,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub counterexample: Option<Counterexample>,
    pub stats: DecideStats,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }
}

/// Builds the shared context of two transducers (letters and variables are
/// united by name; the output variables must agree).
pub fn union_context(t1: &Sst, t2: &Sst) -> Result<Arc<SstCtx>, AutomatonError> {
    let c1 = t1.ctx();
    let c2 = t2.ctx();
    let out1 = c1.vars.name(c1.output());
    let out2 = c2.vars.name(c2.output());
    if out1 != out2 {
        return Err(AutomatonError::Resource(format!(
            "output variables differ ({out1} vs {out2})"
        )));
    }
    let mut letters: Vec<String> = c1.alphabet.letters().map(|l| c1.alphabet.name(l).to_string()).collect();
    for l in c2.alphabet.letters() {
        let n = c2.alphabet.name(l);
        if !letters.iter().any(|x| x == n) {
            letters.push(n.to_string());
        }
    }
    let mut vars: Vec<String> = c1.vars.vars().map(|v| c1.vars.name(v).to_string()).collect();
    for v in c2.vars.vars() {
        let n = c2.vars.name(v);
        if !vars.iter().any(|x| x == n) {
            vars.push(n.to_string());
        }
    }
    let alphabet = Alphabet::new(letters).map_err(|e| AutomatonError::Resource(e.to_string()))?;
    let vars = VarSet::new(vars, out1).map_err(|e| AutomatonError::Resource(e.to_string()))?;
    Ok(SstCtx::new(alphabet, vars))
}

/// Embeds all of an SST's substitutions into a context.
pub(crate) fn embedded_subs(t: &Sst, ctx: &Arc<SstCtx>) -> Vec<Substitution> {
    t.substitution_set().iter().map(|s| s.embed(ctx)).collect()
}

/// Input-tagged symbols: `(Some(a), s)` pairs an input letter with a
/// substitution, `(None, s)` is the final step carrying the final-output
/// substitution.
pub type InSym = (Option<Letter>, u32);

/// The input-threaded resynchronizer over Σ × S × S with an end tag: words
/// (a₁,s₁,t₁)…(aₙ,sₙ,tₙ)(END,s,t) whose substitution components lie in
/// D_{k,ℓ,S}.
pub struct DInNfa {
    pub resync: Arc<BuiltResync>,
    pub sigma: Vec<Letter>,
}

/// Symbols of [`DInNfa`]: input letter (None = end tag) and both components.
pub type DInSym = (Option<Letter>, u32, u32);

/// Builds D^in as an automaton; the resynchronizer is built first.
pub fn build_d_in(p: &ResyncParams, sigma: &Alphabet, budget: Budget) -> Result<DInNfa, AutomatonError> {
    let resync = Arc::new(build_resync(p, budget)?);
    Ok(DInNfa { resync, sigma: sigma.letters().collect() })
}

impl Automaton for DInNfa {
    type Sym = DInSym;
    type St = (u32, bool);

    fn alphabet(&self) -> Vec<DInSym> {
        let n = self.resync.params.subs().len() as u32;
        let mut out = Vec::new();
        for s in 0..n {
            for t in 0..n {
                for a in &self.sigma {
                    out.push((Some(*a), s, t));
                }
                out.push((None, s, t));
            }
        }
        out
    }

    fn initials(&self) -> Vec<(u32, bool)> {
        vec![(self.resync.dfa.init(), false)]
    }

    fn succ(&self, st: &(u32, bool), sym: &DInSym) -> Vec<(u32, bool)> {
        if st.1 {
            return Vec::new();
        }
        let si = match self.resync.dfa.sym_index(&(sym.1, sym.2)) {
            Some(si) => si,
            None => return Vec::new(),
        };
        vec![(self.resync.dfa.step_id(st.0, si), sym.0.is_none())]
    }

    fn is_accepting(&self, st: &(u32, bool)) -> bool {
        st.1 && self.resync.dfa.is_accepting_id(st.0)
    }
}

/// The run language of an SST over input-tagged symbols.
pub(crate) struct RunLanguage {
    pub t: Sst,
    pub subs: Vec<Substitution>,
    pub sub_ids: Vec<usize>,
    pub fin_ids: Vec<Option<usize>>,
    pub syms: Vec<InSym>,
}

impl RunLanguage {
    pub fn new(t: &Sst, ctx: &Arc<SstCtx>, set: &[Substitution], syms: Vec<InSym>) -> Self {
        let sub_ids = t
            .transitions()
            .iter()
            .map(|(_, _, _, s)| set.iter().position(|x| *x == s.embed(ctx)).expect("transition substitution in S"))
            .collect();
        let fin_ids = (0..t.states().len())
            .map(|q| {
                t.final_output(q)
                    .map(|s| set.iter().position(|x| *x == s.embed(ctx)).expect("final substitution in S"))
            })
            .collect();
        RunLanguage { t: t.clone(), subs: set.to_vec(), sub_ids, fin_ids, syms }
    }
}

impl Automaton for RunLanguage {
    type Sym = InSym;
    type St = (usize, bool);

    fn alphabet(&self) -> Vec<InSym> {
        self.syms.clone()
    }

    fn initials(&self) -> Vec<(usize, bool)> {
        self.t.initial().iter().map(|&q| (q, false)).collect()
    }

    fn succ(&self, st: &(usize, bool), sym: &InSym) -> Vec<(usize, bool)> {
        if st.1 {
            return Vec::new();
        }
        match sym.0 {
            Some(a) => self
                .t
                .transitions()
                .iter()
                .enumerate()
                .filter(|(ti, (q, b, _, _))| *q == st.0 && *b == a && self.sub_ids[*ti] == sym.1 as usize)
                .map(|(_, (_, _, q2, _))| (*q2, false))
                .collect(),
            None => {
                if self.t.final_states().contains(&st.0) && self.fin_ids[st.0] == Some(sym.1 as usize) {
                    vec![(st.0, true)]
                } else {
                    Vec::new()
                }
            }
        }
    }

    fn is_accepting(&self, st: &(usize, bool)) -> bool {
        st.1
    }
}

/// D^in restricted on its second component to the runs of `t2`, projected to
/// the first component.
struct MatchedBy {
    resync: Arc<BuiltResync>,
    t2: Sst,
    sub_ids2: Vec<usize>,
    fin_ids2: Vec<Option<usize>>,
    syms: Vec<InSym>,
}

impl Automaton for MatchedBy {
    type Sym = InSym;
    type St = (u32, usize, bool);

    fn alphabet(&self) -> Vec<InSym> {
        self.syms.clone()
    }

    fn initials(&self) -> Vec<Self::St> {
        let d0 = self.resync.dfa.init();
        self.t2.initial().iter().map(|&q| (d0, q, false)).collect()
    }

    fn succ(&self, st: &Self::St, sym: &InSym) -> Vec<Self::St> {
        if st.2 {
            return Vec::new();
        }
        let mut out = Vec::new();
        match sym.0 {
            Some(a) => {
                for (ti, (q, b, q2, _)) in self.t2.transitions().iter().enumerate() {
                    if *q == st.1 && *b == a {
                        let pair = (sym.1, self.sub_ids2[ti] as u32);
                        if let Some(si) = self.resync.dfa.sym_index(&pair) {
                            out.push((self.resync.dfa.step_id(st.0, si), *q2, false));
                        }
                    }
                }
            }
            None => {
                if self.t2.final_states().contains(&st.1) {
                    if let Some(fi) = self.fin_ids2[st.1] {
                        let pair = (sym.1, fi as u32);
                        if let Some(si) = self.resync.dfa.sym_index(&pair) {
                            out.push((self.resync.dfa.step_id(st.0, si), st.1, true));
                        }
                    }
                }
            }
        }
        out
    }

    fn is_accepting(&self, st: &Self::St) -> bool {
        st.2 && self.resync.dfa.is_accepting_id(st.0)
    }
}

fn decode_counterexample(ctx: &Arc<SstCtx>, set: &[Substitution], word: &[InSym]) -> Counterexample {
    let input: Word = word.iter().filter_map(|(a, _)| *a).collect();
    let items: Vec<Substitution> = word.iter().map(|(_, s)| set[*s as usize].clone()).collect();
    Counterexample {
        input,
        run: SubstSeq::new(ctx.clone(), items).expect("counterexample over the shared context"),
        direction: None,
    }
}

/// Decides T₁ ⊆_{k,ℓ} T₂.
pub fn check_inclusion(t1: &Sst, t2: &Sst, k: usize, ell: usize, budget: Budget) -> Result<Verdict, AutomatonError> {
    let start = Instant::now();
    let ctx = union_context(t1, t2)?;
    let mut set = embedded_subs(t1, &ctx);
    for s in embedded_subs(t2, &ctx) {
        if !set.contains(&s) {
            set.push(s);
        }
    }
    let params = ResyncParams::new(k, ell, set.clone());
    let set = params.subs().to_vec();
    let resync = Arc::new(build_resync(&params, budget)?);
    check_inclusion_against(t1, t2, &ctx, &set, resync, budget, start)
}

pub(crate) fn check_inclusion_against(
    t1: &Sst,
    t2: &Sst,
    ctx: &Arc<SstCtx>,
    set: &[Substitution],
    resync: Arc<BuiltResync>,
    budget: Budget,
    start: Instant,
) -> Result<Verdict, AutomatonError> {
    let mut syms: Vec<InSym> = Vec::new();
    for s in 0..set.len() as u32 {
        for a in ctx.alphabet.letters() {
            syms.push((Some(a), s));
        }
        syms.push((None, s));
    }
    let a1 = RunLanguage::new(t1, ctx, set, syms.clone());
    let sub_ids2 = t2
        .transitions()
        .iter()
        .map(|(_, _, _, s)| set.iter().position(|x| *x == s.embed(ctx)).expect("in S"))
        .collect();
    let fin_ids2 = (0..t2.states().len())
        .map(|q| t2.final_output(q).map(|s| set.iter().position(|x| *x == s.embed(ctx)).expect("in S")))
        .collect();
    let b = MatchedBy { resync, t2: t2.clone(), sub_ids2, fin_ids2, syms };
    let (outcome, explored) = inclusion(&a1, &b, budget)?;
    let stats = DecideStats { explored, wall: start.elapsed() };
    Ok(match outcome {
        InclusionOutcome::Included => Verdict { outcome: Outcome::Holds, counterexample: None, stats },
        InclusionOutcome::Counterexample(w) => Verdict {
            outcome: Outcome::Fails,
            counterexample: Some(decode_counterexample(ctx, set, &w)),
            stats,
        },
    })
}

/// Decides T₁ ≡_{k,ℓ} T₂ (both inclusions; the first failure is reported).
pub fn check_equivalence(t1: &Sst, t2: &Sst, k: usize, ell: usize, budget: Budget) -> Result<Verdict, AutomatonError> {
    let start = Instant::now();
    let ctx = union_context(t1, t2)?;
    let mut set = embedded_subs(t1, &ctx);
    for s in embedded_subs(t2, &ctx) {
        if !set.contains(&s) {
            set.push(s);
        }
    }
    let params = ResyncParams::new(k, ell, set.clone());
    let set = params.subs().to_vec();
    let resync = Arc::new(build_resync(&params, budget)?);
    let fwd = check_inclusion_against(t1, t2, &ctx, &set, resync.clone(), budget, start)?;
    if let Outcome::Fails = fwd.outcome {
        let mut v = fwd;
        if let Some(c) = &mut v.counterexample {
            c.direction = Some("left-into-right");
        }
        return Ok(v);
    }
    let bwd = check_inclusion_against(t2, t1, &ctx, &set, resync, budget, start)?;
    let mut v = bwd;
    if let Some(c) = &mut v.counterexample {
        c.direction = Some("right-into-left");
    }
    Ok(v)
}
