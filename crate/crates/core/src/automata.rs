//! Generic finite automata over arbitrary finite symbol sets.
//!
//! Automata are given by a lazy successor interface; constructions (products,
//! subset determinization, relabelings, the inverse image under an SST) stay
//! lazy until materialized.  Every exploration is guarded by a state budget
//! and fails loudly when it is exceeded.

mod explicit;
mod inclusion;
mod invsst;
mod ops;

pub use explicit::{ExplicitDfa, ExplicitNfa};
pub use inclusion::{inclusion, inclusion_naive, InclusionOutcome};
pub use invsst::{inverse_sst, LiftClaim, LiftNfa, LiftState, WordTable};
pub use ops::{product, relabel_image, relabel_preimage, ProductMode, ProductNfa, RelabelImage};

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

/// Exploration limits.  `max_states` counts distinct discovered states per
/// construction.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_states: 1_000_000 }
    }
}

impl Budget {
    pub fn new(max_states: usize) -> Self {
        Budget { max_states }
    }
}

#[derive(Debug, Error)]
pub enum AutomatonError {
    #[error("state budget of {budget} states exceeded during {stage}")]
    BudgetExceeded { budget: usize, stage: &'static str },
    #[error("symbol sets differ")]
    SymbolMismatch,
    #[error("morphism is not total on the source symbols")]
    PartialMorphism,
    #[error("resource limit: {0}")]
    Resource(String),
}

/// A nondeterministic finite automaton with a lazy successor function.
/// `alphabet` must return the same finite symbol list on every call, and
/// `succ` must be a function of its arguments.
pub trait Automaton {
    type Sym: Clone + Eq + Hash + Ord + Debug;
    type St: Clone + Eq + Hash + Debug;

    fn alphabet(&self) -> Vec<Self::Sym>;
    fn initials(&self) -> Vec<Self::St>;
    fn succ(&self, st: &Self::St, sym: &Self::Sym) -> Vec<Self::St>;
    fn is_accepting(&self, st: &Self::St) -> bool;

    /// Membership of one word.
    fn accepts(&self, word: &[Self::Sym]) -> bool {
        let mut layer: Vec<Self::St> = dedup(self.initials());
        for sym in word {
            let mut next = Vec::new();
            for st in &layer {
                next.extend(self.succ(st, sym));
            }
            layer = dedup(next);
            if layer.is_empty() {
                return false;
            }
        }
        layer.iter().any(|st| self.is_accepting(st))
    }
}

pub(crate) fn dedup<T: Eq + Hash + Clone>(items: Vec<T>) -> Vec<T> {
    let mut seen = std::collections::HashSet::new();
    items.into_iter().filter(|x| seen.insert(x.clone())).collect()
}

/// Interns states of a lazy automaton during exploration.
pub(crate) struct Interner<St: Eq + Hash + Clone> {
    pub ids: HashMap<St, u32>,
    pub states: Vec<St>,
}

impl<St: Eq + Hash + Clone> Interner<St> {
    pub fn new() -> Self {
        Interner { ids: HashMap::new(), states: Vec::new() }
    }

    pub fn intern(&mut self, st: St) -> (u32, bool) {
        if let Some(&id) = self.ids.get(&st) {
            return (id, false);
        }
        let id = self.states.len() as u32;
        self.ids.insert(st.clone(), id);
        self.states.push(st);
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }
}

/// Materializes the reachable part of a lazy automaton.
pub fn materialize<A: Automaton>(a: &A, budget: Budget) -> Result<ExplicitNfa<A::Sym>, AutomatonError> {
    let syms = a.alphabet();
    let mut interner = Interner::new();
    let mut queue = std::collections::VecDeque::new();
    let mut initials = Vec::new();
    for st in dedup(a.initials()) {
        let (id, fresh) = interner.intern(st);
        if fresh {
            queue.push_back(id);
        }
        initials.push(id);
    }
    let mut delta: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut accepting: Vec<bool> = Vec::new();
    while let Some(id) = queue.pop_front() {
        if interner.len() > budget.max_states {
            return Err(AutomatonError::BudgetExceeded { budget: budget.max_states, stage: "materialize" });
        }
        let st = interner.states[id as usize].clone();
        while delta.len() <= id as usize {
            delta.push(Vec::new());
            accepting.push(false);
        }
        accepting[id as usize] = a.is_accepting(&st);
        let mut row = Vec::with_capacity(syms.len());
        for sym in &syms {
            let mut targets = Vec::new();
            for succ in dedup(a.succ(&st, sym)) {
                let (tid, fresh) = interner.intern(succ);
                if fresh {
                    queue.push_back(tid);
                }
                targets.push(tid);
            }
            targets.sort_unstable();
            row.push(targets);
        }
        delta[id as usize] = row;
    }
    // states discovered late may not have rows yet
    while delta.len() < interner.len() {
        let id = delta.len();
        accepting.push(a.is_accepting(&interner.states[id]));
        delta.push(vec![Vec::new(); syms.len()]);
    }
    Ok(ExplicitNfa::from_parts(syms, initials, accepting, delta))
}

/// Subset construction.  The result is total (an implicit empty-set sink is
/// materialized as a real state).
pub fn determinize<A: Automaton>(a: &A, budget: Budget) -> Result<ExplicitDfa<A::Sym>, AutomatonError> {
    let syms = a.alphabet();
    let mut inner: Interner<A::St> = Interner::new();
    let intern_set = |inner: &mut Interner<A::St>, mut set: Vec<A::St>| -> Vec<u32> {
        let mut ids: Vec<u32> = set.drain(..).map(|st| inner.intern(st).0).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    };
    let mut subsets: Interner<Vec<u32>> = Interner::new();
    let init = intern_set(&mut inner, dedup(a.initials()));
    let (init_id, _) = subsets.intern(init);
    let mut queue = std::collections::VecDeque::from([init_id]);
    let mut delta: Vec<Vec<u32>> = Vec::new();
    let mut accepting: Vec<bool> = Vec::new();
    while let Some(id) = queue.pop_front() {
        if subsets.len() > budget.max_states || inner.len() > budget.max_states {
            return Err(AutomatonError::BudgetExceeded { budget: budget.max_states, stage: "determinize" });
        }
        let subset = subsets.states[id as usize].clone();
        while delta.len() <= id as usize {
            delta.push(Vec::new());
            accepting.push(false);
        }
        accepting[id as usize] =
            subset.iter().any(|&sid| a.is_accepting(&inner.states[sid as usize]));
        let mut row = Vec::with_capacity(syms.len());
        for sym in &syms {
            let mut targets: Vec<A::St> = Vec::new();
            for &sid in &subset {
                let st = inner.states[sid as usize].clone();
                targets.extend(a.succ(&st, sym));
            }
            let next = intern_set(&mut inner, dedup(targets));
            let (tid, fresh) = subsets.intern(next);
            if fresh {
                queue.push_back(tid);
            }
            row.push(tid);
        }
        delta[id as usize] = row;
    }
    while delta.len() < subsets.len() {
        let id = delta.len();
        accepting.push(
            subsets.states[id]
                .iter()
                .any(|&sid| a.is_accepting(&inner.states[sid as usize])),
        );
        delta.push(vec![id as u32; syms.len()]);
    }
    Ok(ExplicitDfa::from_parts(syms, init_id, accepting, delta))
}

/// Complement through determinization.
pub fn determinize_complement<A: Automaton>(
    a: &A,
    budget: Budget,
) -> Result<ExplicitDfa<A::Sym>, AutomatonError> {
    let mut dfa = determinize(a, budget)?;
    dfa.negate();
    Ok(dfa)
}

/// Shortest accepted word (BFS over reachable states), or `None` when the
/// language is empty.
pub fn emptiness_witness<A: Automaton>(
    a: &A,
    budget: Budget,
) -> Result<Option<Vec<A::Sym>>, AutomatonError> {
    let syms = a.alphabet();
    let mut interner: Interner<A::St> = Interner::new();
    let mut queue = std::collections::VecDeque::new();
    for st in dedup(a.initials()) {
        if a.is_accepting(&st) {
            return Ok(Some(Vec::new()));
        }
        let (id, fresh) = interner.intern(st);
        if fresh {
            queue.push_back((id, Vec::new()));
        }
    }
    while let Some((id, word)) = queue.pop_front() {
        if interner.len() > budget.max_states {
            return Err(AutomatonError::BudgetExceeded { budget: budget.max_states, stage: "emptiness" });
        }
        let st = interner.states[id as usize].clone();
        for sym in &syms {
            for succ in dedup(a.succ(&st, sym)) {
                let mut w2 = word.clone();
                w2.push(sym.clone());
                if a.is_accepting(&succ) {
                    return Ok(Some(w2));
                }
                let (tid, fresh) = interner.intern(succ);
                if fresh {
                    queue.push_back((tid, w2));
                }
            }
        }
    }
    Ok(None)
}

/// Enumerates the accepted words up to `max_len`; the brute-force language
/// oracle used by the tests.
pub fn enumerate_language<A: Automaton>(a: &A, max_len: usize) -> Vec<Vec<A::Sym>> {
    let syms = a.alphabet();
    let mut out = Vec::new();
    let mut layer: Vec<(Vec<A::Sym>, Vec<A::St>)> = vec![(Vec::new(), dedup(a.initials()))];
    for len in 0..=max_len {
        for (word, states) in &layer {
            if states.iter().any(|st| a.is_accepting(st)) {
                out.push(word.clone());
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for (word, states) in &layer {
            for sym in &syms {
                let mut succs = Vec::new();
                for st in states {
                    succs.extend(a.succ(st, sym));
                }
                let succs = dedup(succs);
                if !succs.is_empty() {
                    let mut w2 = word.clone();
                    w2.push(sym.clone());
                    next.push((w2, succs));
                }
            }
        }
        layer = next;
    }
    out
}
