//! The resynchronizer automaton: complement of the characterization within
//! endmarked pairs, restricted to sequences applying the endmark at the last
//! step, then projected through the endmarker-removing morphism.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{
    determinize, determinize_complement, relabel_image, Automaton, AutomatonError, Budget,
    ExplicitDfa, LiftNfa, WordTable,
};
use crate::measure::ResyncParams;
use crate::seq::SubstSeq;

use super::characterization::marked_characterization_nfa;
use super::marks::MarkedAlphabet;
use super::wordpred;

/// Per-stage sizes of the construction.
#[derive(Clone, Debug, Default)]
pub struct BuildStats {
    pub term_dfa_states: Vec<usize>,
    pub tt_dfa_states: usize,
    pub final_states: usize,
    pub final_transitions: usize,
}

/// The built resynchronizer: a DFA over pairs of indices into `params.subs()`.
pub struct BuiltResync {
    pub dfa: ExplicitDfa<(u32, u32)>,
    pub params: ResyncParams,
    pub stats: BuildStats,
}

impl BuiltResync {
    /// Membership of a pair of sequences over S.  Pairs of different length
    /// or with substitutions outside S are rejected.
    pub fn contains(&self, l: &SubstSeq, m: &SubstSeq) -> bool {
        if l.len() != m.len() {
            return false;
        }
        let mut word = Vec::with_capacity(l.len());
        for (a, b) in l.items().iter().zip(m.items().iter()) {
            match (self.params.index_of(a), self.params.index_of(b)) {
                (Some(x), Some(y)) => word.push((x as u32, y as u32)),
                _ => return false,
            }
        }
        let q = self
            .dfa
            .run_indices(word.iter().map(|s| self.dfa.sym_index(s).expect("pair symbol present")));
        self.dfa.is_accepting_id(q)
    }
}

struct TermProjected<'a> {
    term: &'a super::characterization::TermNfa,
    alphabet: Arc<MarkedAlphabet>,
    n_plain: u32,
}

impl<'a> Automaton for TermProjected<'a> {
    type Sym = (u32, u32);
    type St = Vec<u32>;

    fn alphabet(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity((self.n_plain * self.n_plain) as usize);
        for l in 0..self.n_plain {
            for r in 0..self.n_plain {
                out.push((l, r));
            }
        }
        out
    }

    fn initials(&self) -> Vec<Vec<u32>> {
        self.term.initials()
    }

    fn succ(&self, st: &Vec<u32>, sym: &(u32, u32)) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for &mi in &self.alphabet.variants[sym.0 as usize] {
            for &mj in &self.alphabet.variants[sym.1 as usize] {
                out.extend(self.term.succ(st, (mi, mj)));
            }
        }
        out
    }

    fn is_accepting(&self, st: &Vec<u32>) -> bool {
        self.term.accepting(st)
    }
}

/// Pairs where both components' outputs lie in (Σ∖⊣)*⊣.
struct TtPair {
    lift: Arc<LiftNfa>,
    n_plain: u32,
}

impl Automaton for TtPair {
    type Sym = (u32, u32);
    type St = (crate::automata::LiftState, crate::automata::LiftState);

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
        vec![(self.lift.initial_state(), self.lift.initial_state())]
    }

    fn succ(&self, st: &Self::St, sym: &(u32, u32)) -> Vec<Self::St> {
        let ls = self.lift.succ_counted(&st.0, sym.0);
        let rs = self.lift.succ_counted(&st.1, sym.1);
        let mut out = Vec::with_capacity(ls.len() * rs.len());
        for (l, _) in ls.iter() {
            for (r, _) in rs.iter() {
                out.push((l.clone(), r.clone()));
            }
        }
        out
    }

    fn is_accepting(&self, st: &Self::St) -> bool {
        !self.lift.accept_payloads(&st.0).is_empty() && !self.lift.accept_payloads(&st.1).is_empty()
    }
}

fn stage<T>(name: &'static str, r: Result<T, AutomatonError>) -> Result<T, AutomatonError> {
    r.map_err(|e| match e {
        AutomatonError::BudgetExceeded { budget, .. } => {
            AutomatonError::BudgetExceeded { budget, stage: name }
        }
        other => other,
    })
}

/// Adds the empty word to a DFA's language via a fresh initial state.
fn with_epsilon(dfa: &ExplicitDfa<(u32, u32)>) -> ExplicitDfa<(u32, u32)> {
    let syms = dfa.syms().to_vec();
    let n = dfa.n_states();
    let mut delta: Vec<Vec<u32>> = (0..n)
        .map(|q| (0..syms.len()).map(|si| dfa.step_id(q as u32, si)).collect())
        .collect();
    let mut accepting: Vec<bool> = (0..n).map(|q| dfa.is_accepting_id(q as u32)).collect();
    let init_row: Vec<u32> = (0..syms.len()).map(|si| dfa.step_id(dfa.init(), si)).collect();
    delta.push(init_row);
    accepting.push(true);
    ExplicitDfa::from_parts(syms, n as u32, accepting, delta)
}

/// Builds the DFA recognizing D_{k,ℓ,S} over pairs of indices into S.
pub fn build_resync(p: &ResyncParams, budget: Budget) -> Result<BuiltResync, AutomatonError> {
    let ctx = p.ctx().clone();
    let marked = marked_characterization_nfa(p);
    let bases = p.endmarked_set();
    let n_plain = bases.len() as u32;
    let n_s = p.subs().len() as u32;
    let mut stats = BuildStats::default();

    // complement each projected term
    let mut term_dfas: Vec<ExplicitDfa<(u32, u32)>> = Vec::new();
    for (ti, term) in marked.terms.iter().enumerate() {
        let projected = TermProjected { term, alphabet: marked.alphabet.clone(), n_plain };
        let dfa = stage(
            match ti {
                0 => "complement of the next-cut large-difference term",
                1 => "complement of the distinct-next-cut term",
                2 => "complement of the near-mismatch term",
                3 => "complement of the first-cut large-difference term",
                4 => "complement of the distinct-first-cut term",
                _ => "complement of the prefix-mismatch term",
            },
            determinize_complement(&projected, budget),
        )?;
        stats.term_dfa_states.push(dfa.n_states());
        term_dfas.push(dfa);
    }

    // both outputs endmarked
    let plain_alphabet = MarkedAlphabet::close(&bases, 0);
    let tt_table = Arc::new(WordTable::from_nfa(&wordpred::t_end_word_dfa(&ctx.alphabet)));
    let tt = TtPair {
        lift: Arc::new(LiftNfa::new(tt_table, plain_alphabet, ctx.vars.len(), ctx.output())),
        n_plain,
    };
    let tt_dfa = stage("endmarked-output language", determinize(&tt, budget))?;
    stats.tt_dfa_states = tt_dfa.n_states();

    // restriction to sequences whose endmarked substitution comes last
    let end_dfa = {
        let syms: Vec<(u32, u32)> = {
            let mut out = Vec::new();
            for l in 0..n_plain {
                for r in 0..n_plain {
                    out.push((l, r));
                }
            }
            out
        };
        let is_end = |s: u32| s >= n_s;
        let delta: Vec<Vec<u32>> = (0..3u32)
            .map(|q| {
                syms.iter()
                    .map(|&(l, r)| match (q, is_end(l), is_end(r)) {
                        (0, false, false) => 0,
                        (0, true, true) => 1,
                        _ => 2,
                    })
                    .collect()
            })
            .collect();
        ExplicitDfa::from_parts(syms, 0, vec![false, true, false], delta)
    };

    // conjunction of all stages, deterministic throughout
    struct All {
        terms: Vec<ExplicitDfa<(u32, u32)>>,
        tt: ExplicitDfa<(u32, u32)>,
        end: ExplicitDfa<(u32, u32)>,
        syms: Vec<(u32, u32)>,
    }
    impl Automaton for All {
        type Sym = (u32, u32);
        type St = Vec<u32>;

        fn alphabet(&self) -> Vec<(u32, u32)> {
            self.syms.clone()
        }

        fn initials(&self) -> Vec<Vec<u32>> {
            let mut st: Vec<u32> = self.terms.iter().map(|d| d.init()).collect();
            st.push(self.tt.init());
            st.push(self.end.init());
            vec![st]
        }

        fn succ(&self, st: &Vec<u32>, sym: &(u32, u32)) -> Vec<Vec<u32>> {
            let mut next = Vec::with_capacity(st.len());
            for (i, d) in self.terms.iter().enumerate() {
                next.push(d.step_id(st[i], d.sym_index(sym).unwrap()));
            }
            let k = self.terms.len();
            next.push(self.tt.step_id(st[k], self.tt.sym_index(sym).unwrap()));
            next.push(self.end.step_id(st[k + 1], self.end.sym_index(sym).unwrap()));
            vec![next]
        }

        fn is_accepting(&self, st: &Vec<u32>) -> bool {
            let k = self.terms.len();
            self.terms.iter().enumerate().all(|(i, d)| d.is_accepting_id(st[i]))
                && self.tt.is_accepting_id(st[k])
                && self.end.is_accepting_id(st[k + 1])
        }
    }
    let syms: Vec<(u32, u32)> = {
        let mut out = Vec::new();
        for l in 0..n_plain {
            for r in 0..n_plain {
                out.push((l, r));
            }
        }
        out
    };
    let all = All { terms: term_dfas, tt: tt_dfa, end: end_dfa, syms };

    // endmarker-removing morphism on pair symbols
    let mut psi: HashMap<(u32, u32), (u32, u32)> = HashMap::new();
    for l in 0..n_plain {
        for r in 0..n_plain {
            psi.insert((l, r), (l % n_s, r % n_s));
        }
    }
    let image = relabel_image(all, &psi)?;
    let dfa = stage("final determinization", determinize(&image, budget))?;
    let dfa = with_epsilon(&dfa);
    stats.final_states = dfa.n_states();
    stats.final_transitions = dfa.n_states() * dfa.syms().len();

    Ok(BuiltResync { dfa, params: p.clone(), stats })
}
