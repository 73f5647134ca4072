//! Variable minimization modulo delay.
//!
//! Whether some SST with at most `m` variables is (k,ℓ)-equivalent to `T` is
//! decided against the language of all sequences over the bounded
//! substitution set S_{r,m} with r = 2k + p (p the largest per-step output of
//! `T`): more output per step than that would immediately break the delay
//! bound.  The nondeterministic variant is an inclusion into the
//! input-threaded resynchronizer applied to that language; the deterministic
//! variant solves a safety game on the determinized projection.

use std::sync::Arc;
use std::time::Instant;

use crate::alphabet::{Alphabet, Letter, VarId, VarSet};
use crate::automata::{determinize, inclusion, Automaton, AutomatonError, Budget, InclusionOutcome};
use crate::measure::ResyncParams;
use crate::resync::{build_resync, BuiltResync};
use crate::sst::Sst;
use crate::subst::{SstCtx, Substitution, Sym};

use super::game::{solve_safety, Player, SafetyGame};
use super::incl::{Counterexample, DecideStats, InSym, Outcome, RunLanguage, Verdict};

/// Caps for the bounded substitution enumeration.
#[derive(Clone, Copy, Debug)]
pub struct VarminCfg {
    pub max_r: usize,
    pub max_m: usize,
}

impl Default for VarminCfg {
    fn default() -> Self {
        VarminCfg { max_r: 3, max_m: 2 }
    }
}

/// All copyless substitutions over the first `m` target variables with at
/// most `r` letters in total, identity on the remaining variables of the
/// context.  `target_vars` lists the m variable ids (the first is the output
/// variable).
pub fn enumerate_bounded_subs(
    ctx: &Arc<SstCtx>,
    target_vars: &[VarId],
    r: usize,
) -> Vec<Substitution> {
    let letters: Vec<Letter> = ctx.alphabet.letters().collect();
    // all words over (avail vars ∪ Σ) using each var at most once, with a
    // per-call letter budget; returns (word, used-vars-mask, letters-used)
    fn words(
        letters: &[Letter],
        avail: &[VarId],
        used: u32,
        budget: usize,
        maxlen: usize,
    ) -> Vec<(Vec<Sym>, u32, usize)> {
        let mut out = vec![(Vec::new(), used, 0usize)];
        if maxlen == 0 {
            return out;
        }
        let mut frontier = vec![(Vec::<Sym>::new(), used, 0usize)];
        for _ in 0..maxlen {
            let mut next = Vec::new();
            for (word, used, spent) in &frontier {
                for &l in letters {
                    if spent + 1 <= budget {
                        let mut w = word.clone();
                        w.push(Sym::Let(l));
                        next.push((w, *used, spent + 1));
                    }
                }
                for (vi, &v) in avail.iter().enumerate() {
                    if used & (1 << vi) == 0 {
                        let mut w = word.clone();
                        w.push(Sym::Var(v));
                        next.push((w, used | (1 << vi), *spent));
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        out
    }

    let m = target_vars.len();
    let maxlen = r + m;
    // assign images var by var, sharing the used-variable mask and budget
    let mut partial: Vec<(Vec<Vec<Sym>>, u32, usize)> = vec![(Vec::new(), 0, 0)];
    for _ in 0..m {
        let mut next = Vec::new();
        for (images, used, spent) in &partial {
            for (word, used2, extra) in words(&letters, target_vars, *used, r - spent, maxlen) {
                let mut imgs = images.clone();
                imgs.push(word);
                next.push((imgs, used2, spent + extra));
            }
        }
        partial = next;
    }
    let mut out = Vec::new();
    for (images, _, _) in partial {
        let mut full: Vec<Vec<Sym>> = ctx.vars.vars().map(|v| vec![Sym::Var(v)]).collect();
        for (i, img) in images.into_iter().enumerate() {
            full[target_vars[i].0 as usize] = img;
        }
        if let Ok(s) = Substitution::new(ctx.clone(), full) {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// The context and pieces shared by both variable-minimization variants.
struct VarminSetup {
    ctx: Arc<SstCtx>,
    set: Vec<Substitution>,
    bounded_ids: Vec<usize>,
    resync: Arc<BuiltResync>,
    t: Sst,
}

fn setup(t: &Sst, k: usize, ell: usize, m: usize, cfg: VarminCfg, budget: Budget) -> Result<VarminSetup, AutomatonError> {
    if m == 0 {
        return Err(AutomatonError::Resource("m must be at least 1 (the output variable)".into()));
    }
    if m > cfg.max_m {
        return Err(AutomatonError::Resource(format!("m = {m} exceeds the cap {}", cfg.max_m)));
    }
    let p = t.max_step_output();
    let r = 2 * k + p;
    if r > cfg.max_r {
        return Err(AutomatonError::Resource(format!(
            "r = 2k + p = {r} exceeds the cap {} (k = {k}, per-step output {p})",
            cfg.max_r
        )));
    }
    // context: T's variables plus fresh ones up to m target variables; the
    // first target variable is T's output variable
    let c = t.ctx();
    let out_name = c.vars.name(c.output()).to_string();
    let mut names: Vec<String> = c.vars.vars().map(|v| c.vars.name(v).to_string()).collect();
    let mut target_names: Vec<String> = vec![out_name.clone()];
    let mut next = 1usize;
    while target_names.len() < m {
        let candidate = format!("V{next}");
        next += 1;
        if names.contains(&candidate) {
            continue;
        }
        names.push(candidate.clone());
        target_names.push(candidate);
    }
    let letters: Vec<String> = c.alphabet.letters().map(|l| c.alphabet.name(l).to_string()).collect();
    let ctx = SstCtx::new(
        Alphabet::new(letters).map_err(|e| AutomatonError::Resource(e.to_string()))?,
        VarSet::new(names, &out_name).map_err(|e| AutomatonError::Resource(e.to_string()))?,
    );
    let target_vars: Vec<VarId> = target_names.iter().map(|n| ctx.vars.lookup(n).unwrap()).collect();

    let mut set: Vec<Substitution> = t.substitution_set().iter().map(|s| s.embed(&ctx)).collect();
    let mut bounded_ids = Vec::new();
    for s in enumerate_bounded_subs(&ctx, &target_vars, r) {
        match set.iter().position(|x| *x == s) {
            Some(i) => bounded_ids.push(i),
            None => {
                bounded_ids.push(set.len());
                set.push(s);
            }
        }
    }
    let params = ResyncParams::new(k, ell, set.clone());
    let set = params.subs().to_vec();
    let resync = Arc::new(build_resync(&params, budget)?);
    Ok(VarminSetup { ctx, set, bounded_ids, resync, t: t.clone() })
}

/// Does some nondeterministic SST with at most `m` variables realize `t` up
/// to (k,ℓ)-delay?
pub fn varmin_nondet(
    t: &Sst,
    k: usize,
    ell: usize,
    m: usize,
    cfg: VarminCfg,
    budget: Budget,
) -> Result<Verdict, AutomatonError> {
    let start = Instant::now();
    let s = setup(t, k, ell, m, cfg, budget)?;
    let mut syms: Vec<InSym> = Vec::new();
    for i in 0..s.set.len() as u32 {
        for a in s.ctx.alphabet.letters() {
            syms.push((Some(a), i));
        }
        syms.push((None, i));
    }
    let a1 = RunLanguage::new(&s.t, &s.ctx, &s.set, syms.clone());

    /// D^in applied to all sequences over the bounded set.
    struct AnyBounded {
        resync: Arc<BuiltResync>,
        bounded: Vec<usize>,
        syms: Vec<InSym>,
    }
    impl Automaton for AnyBounded {
        type Sym = InSym;
        type St = (u32, bool);

        fn alphabet(&self) -> Vec<InSym> {
            self.syms.clone()
        }

        fn initials(&self) -> Vec<(u32, bool)> {
            vec![(self.resync.dfa.init(), false)]
        }

        fn succ(&self, st: &(u32, bool), sym: &InSym) -> Vec<(u32, bool)> {
            if st.1 {
                return Vec::new();
            }
            let done = sym.0.is_none();
            self.bounded
                .iter()
                .filter_map(|&tid| self.resync.dfa.sym_index(&(sym.1, tid as u32)))
                .map(|si| (self.resync.dfa.step_id(st.0, si), done))
                .collect()
        }

        fn is_accepting(&self, st: &(u32, bool)) -> bool {
            st.1 && self.resync.dfa.is_accepting_id(st.0)
        }
    }
    let b = AnyBounded { resync: s.resync.clone(), bounded: s.bounded_ids.clone(), syms };
    let (outcome, explored) = inclusion(&a1, &b, budget)?;
    let stats = DecideStats { explored, wall: start.elapsed() };
    Ok(match outcome {
        InclusionOutcome::Included => Verdict { outcome: Outcome::Holds, counterexample: None, stats },
        InclusionOutcome::Counterexample(w) => {
            let input = w.iter().filter_map(|(a, _)| *a).collect();
            let items = w.iter().map(|(_, i)| s.set[*i as usize].clone()).collect();
            Verdict {
                outcome: Outcome::Fails,
                counterexample: Some(Counterexample {
                    input,
                    run: crate::seq::SubstSeq::new(s.ctx.clone(), items).unwrap(),
                    direction: None,
                }),
                stats,
            }
        }
    })
}

/// Does some deterministic SST with at most `m` variables realize `t` up to
/// (k,ℓ)-delay?  Solves the safety game on the determinized projection of
/// D^in onto its second component.
pub fn varmin_det(
    t: &Sst,
    k: usize,
    ell: usize,
    m: usize,
    cfg: VarminCfg,
    budget: Budget,
) -> Result<Verdict, AutomatonError> {
    let start = Instant::now();
    let s = setup(t, k, ell, m, cfg, budget)?;
    let letters: Vec<Letter> = s.ctx.alphabet.letters().collect();

    // M = {(u, μ) | ∃(u, λ) ∈ L(T): (λ, μ) ∈ D}, μ over the bounded set;
    // symbols tag the input letter with μ's component
    let msyms: Vec<(Option<Letter>, u32)> = {
        let mut out = Vec::new();
        for &tid in &s.bounded_ids {
            for &a in &letters {
                out.push((Some(a), tid as u32));
            }
            out.push((None, tid as u32));
        }
        out
    };
    struct MNfa {
        resync: Arc<BuiltResync>,
        t: Sst,
        sub_ids: Vec<usize>,
        fin_ids: Vec<Option<usize>>,
        syms: Vec<(Option<Letter>, u32)>,
    }
    impl Automaton for MNfa {
        type Sym = (Option<Letter>, u32);
        type St = (u32, usize, bool);

        fn alphabet(&self) -> Vec<Self::Sym> {
            self.syms.clone()
        }

        fn initials(&self) -> Vec<Self::St> {
            self.t.initial().iter().map(|&q| (self.resync.dfa.init(), q, false)).collect()
        }

        fn succ(&self, st: &Self::St, sym: &Self::Sym) -> Vec<Self::St> {
            if st.2 {
                return Vec::new();
            }
            let mut out = Vec::new();
            match sym.0 {
                Some(a) => {
                    for (ti, (q, b, q2, _)) in self.t.transitions().iter().enumerate() {
                        if *q == st.1 && *b == a {
                            if let Some(si) =
                                self.resync.dfa.sym_index(&(self.sub_ids[ti] as u32, sym.1))
                            {
                                out.push((self.resync.dfa.step_id(st.0, si), *q2, false));
                            }
                        }
                    }
                }
                None => {
                    if self.t.final_states().contains(&st.1) {
                        if let Some(fi) = self.fin_ids[st.1] {
                            if let Some(si) = self.resync.dfa.sym_index(&(fi as u32, sym.1)) {
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
    let sub_ids = s
        .t
        .transitions()
        .iter()
        .map(|(_, _, _, x)| s.set.iter().position(|y| *y == x.embed(&s.ctx)).unwrap())
        .collect();
    let fin_ids = (0..s.t.states().len())
        .map(|q| s.t.final_output(q).map(|x| s.set.iter().position(|y| *y == x.embed(&s.ctx)).unwrap()))
        .collect();
    let m_nfa = MNfa { resync: s.resync.clone(), t: s.t.clone(), sub_ids, fin_ids, syms: msyms };
    let m_dfa = determinize(&m_nfa, budget)?;

    // dom(R(T)) as a DFA over Σ
    struct Dom {
        t: Sst,
        letters: Vec<Letter>,
    }
    impl Automaton for Dom {
        type Sym = Letter;
        type St = usize;

        fn alphabet(&self) -> Vec<Letter> {
            self.letters.clone()
        }

        fn initials(&self) -> Vec<usize> {
            self.t.initial().iter().copied().collect()
        }

        fn succ(&self, st: &usize, sym: &Letter) -> Vec<usize> {
            self.t
                .transitions()
                .iter()
                .filter(|(q, a, _, _)| q == st && a == sym)
                .map(|(_, _, q2, _)| *q2)
                .collect()
        }

        fn is_accepting(&self, st: &usize) -> bool {
            self.t.final_states().contains(st)
        }
    }
    let dom_dfa = determinize(&Dom { t: s.t.clone(), letters: letters.clone() }, budget)?;

    // the game: input positions (mq, dq); output positions (mq, dq, a)
    let n_m = m_dfa.n_states();
    let n_d = dom_dfa.n_states();
    let n_input = n_m * n_d;
    let n_total = n_input + n_m * n_d * letters.len();
    let input_pos = |mq: u32, dq: u32| (mq as usize) * n_d + dq as usize;
    let output_pos = |mq: u32, dq: u32, ai: usize| n_input + ((mq as usize) * n_d + dq as usize) * letters.len() + ai;

    let good_end: Vec<bool> = (0..n_m as u32)
        .map(|mq| {
            s.bounded_ids.iter().any(|&tid| {
                m_dfa
                    .sym_index(&(None, tid as u32))
                    .map(|si| m_dfa.is_accepting_id(m_dfa.step_id(mq, si)))
                    .unwrap_or(false)
            })
        })
        .collect();

    let mut owner = vec![Player::Safe; n_total];
    let mut moves: Vec<Vec<usize>> = vec![Vec::new(); n_total];
    let mut unsafe_positions = vec![false; n_total];
    for mq in 0..n_m as u32 {
        for dq in 0..n_d as u32 {
            let ip = input_pos(mq, dq);
            owner[ip] = Player::Reach;
            unsafe_positions[ip] = dom_dfa.is_accepting_id(dq) && !good_end[mq as usize];
            for (ai, _) in letters.iter().enumerate() {
                moves[ip].push(output_pos(mq, dq, ai));
            }
            for (ai, &a) in letters.iter().enumerate() {
                let op = output_pos(mq, dq, ai);
                owner[op] = Player::Safe;
                let dq2 = dom_dfa.step_id(dq, dom_dfa.sym_index(&a).unwrap());
                for &tid in &s.bounded_ids {
                    if let Some(si) = m_dfa.sym_index(&(Some(a), tid as u32)) {
                        moves[op].push(input_pos(m_dfa.step_id(mq, si), dq2));
                    }
                }
                if moves[op].is_empty() {
                    // no substitution choice: losing for the output player
                    unsafe_positions[op] = true;
                    moves[op].push(op);
                }
            }
        }
    }
    let game = SafetyGame { owner, moves, unsafe_positions };
    let safe = solve_safety(&game);
    let initial = input_pos(m_dfa.init(), dom_dfa.init());
    let stats = DecideStats { explored: n_total, wall: start.elapsed() };
    Ok(Verdict {
        outcome: if safe[initial] { Outcome::Holds } else { Outcome::Fails },
        counterexample: None,
        stats,
    })
}
