//! Language inclusion with antichain pruning and shortest counterexamples.

use std::collections::{HashMap, VecDeque};

use super::{dedup, determinize, Automaton, AutomatonError, Budget};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InclusionOutcome<S> {
    Included,
    /// A shortest word accepted by the left operand and rejected by the
    /// right one; ties are broken by the symbol order of the left alphabet.
    Counterexample(Vec<S>),
}

/// Checks `L(a) ⊆ L(b)` by exploring pairs (left state, right subset),
/// pruning pairs subsumed by an already-visited pair with a smaller subset.
/// Exploration is breadth-first, so a counterexample is shortest.  Also
/// reports the number of explored pairs.
pub fn inclusion<A, B>(
    a: &A,
    b: &B,
    budget: Budget,
) -> Result<(InclusionOutcome<A::Sym>, usize), AutomatonError>
where
    A: Automaton,
    B: Automaton<Sym = A::Sym>,
{
    let mut s1 = a.alphabet();
    let mut s2 = b.alphabet();
    s1.sort();
    s2.sort();
    if s1 != s2 {
        return Err(AutomatonError::SymbolMismatch);
    }
    let syms = {
        let mut s = a.alphabet();
        s.sort();
        s
    };

    let b_init: Vec<B::St> = dedup(b.initials());
    // visited: per left state, the antichain of minimal right subsets seen
    let mut visited: HashMap<A::St, Vec<Vec<B::St>>> = HashMap::new();
    let mut queue: VecDeque<(A::St, Vec<B::St>, Vec<A::Sym>)> = VecDeque::new();
    let mut explored = 0usize;

    let norm = |mut set: Vec<B::St>| -> Vec<B::St> {
        // canonical order for subset comparison via Debug-stable hashing is
        // not available generically; keep insertion-order dedup and compare
        // as sets
        let mut out: Vec<B::St> = Vec::new();
        for st in set.drain(..) {
            if !out.contains(&st) {
                out.push(st);
            }
        }
        out
    };
    let subset_of = |small: &[B::St], big: &[B::St]| small.iter().all(|s| big.contains(s));

    for qa in dedup(a.initials()) {
        let set = norm(b_init.clone());
        if a.is_accepting(&qa) && !set.iter().any(|q| b.is_accepting(q)) {
            return Ok((InclusionOutcome::Counterexample(Vec::new()), 0));
        }
        queue.push_back((qa, set, Vec::new()));
    }

    while let Some((qa, set, word)) = queue.pop_front() {
        explored += 1;
        if explored > budget.max_states {
            return Err(AutomatonError::BudgetExceeded { budget: budget.max_states, stage: "inclusion" });
        }
        // antichain check at expansion time
        let chains = visited.entry(qa.clone()).or_default();
        if chains.iter().any(|c| subset_of(c, &set)) {
            continue;
        }
        chains.retain(|c| !subset_of(&set, c));
        chains.push(set.clone());

        for sym in &syms {
            for qa2 in dedup(a.succ(&qa, sym)) {
                let mut set2 = Vec::new();
                for qb in &set {
                    set2.extend(b.succ(qb, sym));
                }
                let set2 = norm(set2);
                let mut w2 = word.clone();
                w2.push(sym.clone());
                if a.is_accepting(&qa2) && !set2.iter().any(|q| b.is_accepting(q)) {
                    return Ok((InclusionOutcome::Counterexample(w2), explored));
                }
                queue.push_back((qa2, set2, w2));
            }
        }
    }
    Ok((InclusionOutcome::Included, explored))
}

/// The naive oracle: full determinization of `b`, complement, intersection
/// with `a`, then a shortest-word search.  Kept as the reference for tests.
pub fn inclusion_naive<A, B>(
    a: &A,
    b: &B,
    budget: Budget,
) -> Result<InclusionOutcome<A::Sym>, AutomatonError>
where
    A: Automaton,
    B: Automaton<Sym = A::Sym>,
{
    let mut bd = determinize(b, budget)?;
    bd.negate();
    let prod = super::product(RefAutomaton(a), bd, super::ProductMode::Intersection)?;
    match super::emptiness_witness(&prod, budget)? {
        Some(w) => Ok(InclusionOutcome::Counterexample(w)),
        None => Ok(InclusionOutcome::Included),
    }
}

/// Borrowing adapter so compositions can take owned automata.
pub(crate) struct RefAutomaton<'a, A>(pub &'a A);

impl<'a, A: Automaton> Automaton for RefAutomaton<'a, A> {
    type Sym = A::Sym;
    type St = A::St;

    fn alphabet(&self) -> Vec<A::Sym> {
        self.0.alphabet()
    }

    fn initials(&self) -> Vec<A::St> {
        self.0.initials()
    }

    fn succ(&self, st: &A::St, sym: &A::Sym) -> Vec<A::St> {
        self.0.succ(st, sym)
    }

    fn is_accepting(&self, st: &A::St) -> bool {
        self.0.is_accepting(st)
    }
}
