//! Materialized automata with interned states.

use std::fmt::Debug;
use std::hash::Hash;

use super::Automaton;

/// A fully materialized NFA over interned states `0..n`.
#[derive(Clone, Debug)]
pub struct ExplicitNfa<S> {
    syms: Vec<S>,
    initials: Vec<u32>,
    accepting: Vec<bool>,
    /// `delta[state][sym_index]` = sorted successor states.
    delta: Vec<Vec<Vec<u32>>>,
}

impl<S: Clone + Eq + Hash + Ord + Debug> ExplicitNfa<S> {
    pub fn from_parts(syms: Vec<S>, initials: Vec<u32>, accepting: Vec<bool>, delta: Vec<Vec<Vec<u32>>>) -> Self {
        ExplicitNfa { syms, initials, accepting, delta }
    }

    /// Builder from edge lists.
    pub fn build(
        syms: Vec<S>,
        n_states: usize,
        initials: impl IntoIterator<Item = u32>,
        accepting: impl IntoIterator<Item = u32>,
        edges: impl IntoIterator<Item = (u32, S, u32)>,
    ) -> Self {
        let mut acc = vec![false; n_states];
        for q in accepting {
            acc[q as usize] = true;
        }
        let mut delta = vec![vec![Vec::new(); syms.len()]; n_states];
        for (q, s, q2) in edges {
            let si = syms.iter().position(|x| *x == s).expect("edge symbol in alphabet");
            delta[q as usize][si].push(q2);
        }
        for row in &mut delta {
            for cell in row {
                cell.sort_unstable();
                cell.dedup();
            }
        }
        ExplicitNfa { syms, initials: initials.into_iter().collect(), accepting: acc, delta }
    }

    pub fn n_states(&self) -> usize {
        self.delta.len()
    }

    pub fn n_transitions(&self) -> usize {
        self.delta.iter().flatten().map(|v| v.len()).sum()
    }

    pub fn syms(&self) -> &[S] {
        &self.syms
    }

    pub fn sym_index(&self, s: &S) -> Option<usize> {
        self.syms.iter().position(|x| x == s)
    }

    pub fn succ_ids(&self, q: u32, sym_index: usize) -> &[u32] {
        &self.delta[q as usize][sym_index]
    }

    pub fn accepting_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.accepting.iter().enumerate().filter(|(_, a)| **a).map(|(i, _)| i as u32)
    }

    pub fn initial_ids(&self) -> &[u32] {
        &self.initials
    }

    pub fn is_accepting_id(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    /// States that can reach an accepting state.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.n_states();
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (q, row) in self.delta.iter().enumerate() {
            for cell in row {
                for &q2 in cell {
                    rev[q2 as usize].push(q as u32);
                }
            }
        }
        let mut mark = self.accepting.clone();
        let mut queue: Vec<u32> = self.accepting_ids().collect();
        while let Some(q) = queue.pop() {
            for &p in &rev[q as usize] {
                if !mark[p as usize] {
                    mark[p as usize] = true;
                    queue.push(p);
                }
            }
        }
        mark
    }

    /// GraphViz rendering with `Debug` state labels.
    pub fn to_dot(&self, label: impl Fn(u32) -> String) -> String {
        let mut out = String::from("digraph nfa {\n  rankdir=LR;\n");
        for q in 0..self.n_states() as u32 {
            let shape = if self.is_accepting_id(q) { "doublecircle" } else { "circle" };
            out.push_str(&format!("  q{q} [shape={shape},label=\"{}\"];\n", label(q)));
        }
        for &q in &self.initials {
            out.push_str(&format!("  init{q} [shape=point]; init{q} -> q{q};\n"));
        }
        for (q, row) in self.delta.iter().enumerate() {
            for (si, cell) in row.iter().enumerate() {
                for &q2 in cell {
                    out.push_str(&format!("  q{q} -> q{q2} [label=\"{:?}\"];\n", self.syms[si]));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl<S: Clone + Eq + Hash + Ord + Debug> Automaton for ExplicitNfa<S> {
    type Sym = S;
    type St = u32;

    fn alphabet(&self) -> Vec<S> {
        self.syms.clone()
    }

    fn initials(&self) -> Vec<u32> {
        self.initials.clone()
    }

    fn succ(&self, st: &u32, sym: &S) -> Vec<u32> {
        match self.sym_index(sym) {
            Some(si) => self.delta[*st as usize][si].clone(),
            None => Vec::new(),
        }
    }

    fn is_accepting(&self, st: &u32) -> bool {
        self.accepting[*st as usize]
    }
}

/// A total DFA over interned states.
#[derive(Clone, Debug)]
pub struct ExplicitDfa<S> {
    syms: Vec<S>,
    init: u32,
    accepting: Vec<bool>,
    delta: Vec<Vec<u32>>,
}

impl<S: Clone + Eq + Hash + Ord + Debug> ExplicitDfa<S> {
    pub fn from_parts(syms: Vec<S>, init: u32, accepting: Vec<bool>, delta: Vec<Vec<u32>>) -> Self {
        ExplicitDfa { syms, init, accepting, delta }
    }

    pub fn n_states(&self) -> usize {
        self.delta.len()
    }

    pub fn syms(&self) -> &[S] {
        &self.syms
    }

    pub fn init(&self) -> u32 {
        self.init
    }

    pub fn negate(&mut self) {
        for a in &mut self.accepting {
            *a = !*a;
        }
    }

    pub fn step_id(&self, q: u32, sym_index: usize) -> u32 {
        self.delta[q as usize][sym_index]
    }

    pub fn is_accepting_id(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    pub fn sym_index(&self, s: &S) -> Option<usize> {
        self.syms.iter().position(|x| x == s)
    }

    /// Runs the DFA on a word of symbol indices.
    pub fn run_indices(&self, word: impl IntoIterator<Item = usize>) -> u32 {
        let mut q = self.init;
        for si in word {
            q = self.delta[q as usize][si];
        }
        q
    }

    pub fn to_nfa(&self) -> ExplicitNfa<S> {
        let delta = self
            .delta
            .iter()
            .map(|row| row.iter().map(|&q| vec![q]).collect())
            .collect();
        ExplicitNfa::from_parts(self.syms.clone(), vec![self.init], self.accepting.clone(), delta)
    }

    pub fn to_dot(&self, label: impl Fn(u32) -> String) -> String {
        self.to_nfa().to_dot(label)
    }
}

impl<S: Clone + Eq + Hash + Ord + Debug> Automaton for ExplicitDfa<S> {
    type Sym = S;
    type St = u32;

    fn alphabet(&self) -> Vec<S> {
        self.syms.clone()
    }

    fn initials(&self) -> Vec<u32> {
        vec![self.init]
    }

    fn succ(&self, st: &u32, sym: &S) -> Vec<u32> {
        match self.sym_index(sym) {
            Some(si) => vec![self.delta[*st as usize][si]],
            None => Vec::new(),
        }
    }

    fn is_accepting(&self, st: &u32) -> bool {
        self.accepting[*st as usize]
    }
}
