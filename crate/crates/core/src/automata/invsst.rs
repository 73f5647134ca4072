//! Inverse image of a regular word language under a substitution sequence.
//!
//! Given a word automaton `P` over marked letters, the lifted automaton
//! accepts exactly the marked substitution sequences ν with out⟦ν⟧ ∈ L(P).
//! It simulates the one-state transducer applying the substitution it reads
//! and guesses, per variable, a claim about the run of `P` over the current
//! register content:
//!
//! - `Unborn`: the content is still ε,
//! - `Doomed`: the content will be dropped before reaching the output,
//! - `Live(p, q)`: the content survives and `P` runs from `p` to `q` on it.
//!
//! Claims are stitched through images when variables flow, variables may only
//! vanish while `Unborn`/`Doomed`, and at the end every non-output variable
//! must be `Unborn`/`Doomed` while the output variable's claim must span an
//! initial/accepting pair.  Transitions additionally carry the number of
//! letters consumed on counted word transitions, which the weight-difference
//! automata feed into their counters.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::alphabet::VarId;
use crate::resync::marks::{MSym, MarkedAlphabet, MarkedLetter};
use crate::subst::Substitution;

use super::{Automaton, ExplicitNfa};

/// A word automaton over marked letters in tabular form, with a per-transition
/// count and per-state acceptance payloads.
#[derive(Debug)]
pub struct WordTable {
    letters: Vec<MarkedLetter>,
    letter_ids: HashMap<MarkedLetter, usize>,
    /// `delta[state][letter] -> (successor, count)` list.
    delta: Vec<Vec<Vec<(u32, u32)>>>,
    initials: Vec<u32>,
    /// Payload ids per state; nonempty = accepting.
    payloads: Vec<Vec<u32>>,
    reachable: Vec<bool>,
    coreachable: Vec<bool>,
}

impl WordTable {
    pub fn new(
        letters: Vec<MarkedLetter>,
        delta: Vec<Vec<Vec<(u32, u32)>>>,
        initials: Vec<u32>,
        payloads: Vec<Vec<u32>>,
    ) -> Self {
        let letter_ids = letters.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut t = WordTable {
            letters,
            letter_ids,
            delta,
            initials,
            payloads,
            reachable: Vec::new(),
            coreachable: Vec::new(),
        };
        t.analyze();
        t
    }

    /// Zero-count table from an explicit NFA (payload 0 on accepting states).
    pub fn from_nfa(nfa: &ExplicitNfa<MarkedLetter>) -> Self {
        let letters = nfa.syms().to_vec();
        let n = nfa.n_states();
        let mut delta = vec![vec![Vec::new(); letters.len()]; n];
        for q in 0..n as u32 {
            for (si, _) in letters.iter().enumerate() {
                for &q2 in nfa.succ_ids(q, si) {
                    delta[q as usize][si].push((q2, 0));
                }
            }
        }
        let payloads = (0..n as u32)
            .map(|q| if nfa.is_accepting_id(q) { vec![0] } else { Vec::new() })
            .collect();
        WordTable::new(letters, delta, nfa.initial_ids().to_vec(), payloads)
    }

    fn analyze(&mut self) {
        let n = self.delta.len();
        let mut reach = vec![false; n];
        let mut queue: Vec<u32> = Vec::new();
        for &q in &self.initials {
            if !reach[q as usize] {
                reach[q as usize] = true;
                queue.push(q);
            }
        }
        while let Some(q) = queue.pop() {
            for row in &self.delta[q as usize] {
                for &(q2, _) in row {
                    if !reach[q2 as usize] {
                        reach[q2 as usize] = true;
                        queue.push(q2);
                    }
                }
            }
        }
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (q, rows) in self.delta.iter().enumerate() {
            for row in rows {
                for &(q2, _) in row {
                    rev[q2 as usize].push(q as u32);
                }
            }
        }
        let mut co = vec![false; n];
        let mut queue: Vec<u32> = (0..n)
            .filter(|&q| !self.payloads[q].is_empty())
            .map(|q| {
                co[q] = true;
                q as u32
            })
            .collect();
        while let Some(q) = queue.pop() {
            for &p in &rev[q as usize] {
                if !co[p as usize] {
                    co[p as usize] = true;
                    queue.push(p);
                }
            }
        }
        self.reachable = reach;
        self.coreachable = co;
    }

    pub fn n_states(&self) -> usize {
        self.delta.len()
    }

    pub fn step(&self, q: u32, l: MarkedLetter) -> &[(u32, u32)] {
        match self.letter_ids.get(&l) {
            Some(&li) => &self.delta[q as usize][li],
            None => &[],
        }
    }

    pub fn initials(&self) -> &[u32] {
        &self.initials
    }

    pub fn payloads(&self, q: u32) -> &[u32] {
        &self.payloads[q as usize]
    }

    /// Payloads reachable on the empty word.
    pub fn empty_word_payloads(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.initials.iter().flat_map(|&q| self.payloads(q).to_vec()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn letters(&self) -> &[MarkedLetter] {
        &self.letters
    }

    /// View as an NFA (accepting = some payload); counts are dropped.
    pub fn to_nfa(&self) -> ExplicitNfa<MarkedLetter> {
        let delta = self
            .delta
            .iter()
            .map(|rows| rows.iter().map(|row| row.iter().map(|&(q, _)| q).collect()).collect())
            .collect();
        let accepting = self.payloads.iter().map(|p| !p.is_empty()).collect();
        ExplicitNfa::from_parts(self.letters.clone(), self.initials.clone(), accepting, delta)
    }

    /// Subset determinization of an uncounted table; payload sets are
    /// unioned per subset.
    pub fn determinize(&self) -> WordTable {
        assert!(
            self.delta.iter().flatten().flatten().all(|&(_, c)| c == 0),
            "cannot determinize a counted table"
        );
        let mut subsets: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut list: Vec<Vec<u32>> = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        // states that cannot reach acceptance never matter: dropping them
        // keeps the subsets from accumulating dead history
        let mut init: Vec<u32> = self
            .initials
            .iter()
            .copied()
            .filter(|&q| self.coreachable[q as usize])
            .collect();
        init.sort_unstable();
        init.dedup();
        subsets.insert(init.clone(), 0);
        list.push(init);
        queue.push_back(0u32);
        let mut delta: Vec<Vec<Vec<(u32, u32)>>> = Vec::new();
        let mut iters = 0u64;
        while let Some(id) = queue.pop_front() {
            iters += 1;
            if std::env::var("SSTDELAY_DEBUG_DET").is_ok() && iters % 5000 == 0 {
                eprintln!("det: iter {iters}, {} subsets, queue {}, cur size {}", list.len(), queue.len(), list[id as usize].len());
            }
            let subset = list[id as usize].clone();
            let mut row = Vec::with_capacity(self.letters.len());
            for li in 0..self.letters.len() {
                let mut next: Vec<u32> = Vec::new();
                for &q in &subset {
                    next.extend(
                        self.delta[q as usize][li]
                            .iter()
                            .map(|&(q2, _)| q2)
                            .filter(|&q2| self.coreachable[q2 as usize]),
                    );
                }
                next.sort_unstable();
                next.dedup();
                let nid = *subsets.entry(next.clone()).or_insert_with(|| {
                    list.push(next.clone());
                    queue.push_back(list.len() as u32 - 1);
                    list.len() as u32 - 1
                });
                row.push(vec![(nid, 0)]);
            }
            while delta.len() <= id as usize {
                delta.push(Vec::new());
            }
            delta[id as usize] = row;
        }
        while delta.len() < list.len() {
            let id = delta.len() as u32;
            delta.push(vec![vec![(id, 0)]; self.letters.len()]);
        }
        let payloads: Vec<Vec<u32>> = list
            .iter()
            .map(|subset| {
                let mut p: Vec<u32> =
                    subset.iter().flat_map(|&q| self.payloads[q as usize].clone()).collect();
                p.sort_unstable();
                p.dedup();
                p
            })
            .collect();
        WordTable::new(self.letters.clone(), delta, vec![0], payloads)
    }

    /// Moore minimization of a deterministic table on payload-set classes.
    pub fn minimize(&self) -> WordTable {
        let n = self.n_states();
        // initial partition by payload set
        let mut class_of: Vec<usize> = vec![0; n];
        {
            let mut classes: HashMap<Vec<u32>, usize> = HashMap::new();
            for q in 0..n {
                let next = classes.len();
                let c = *classes.entry(self.payloads[q].clone()).or_insert(next);
                class_of[q] = c;
            }
        }
        loop {
            let mut sig_to_class: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next_class: Vec<usize> = vec![0; n];
            for q in 0..n {
                let sig: Vec<usize> = (0..self.letters.len())
                    .map(|li| {
                        let row = &self.delta[q][li];
                        assert!(row.len() <= 1, "minimize requires a deterministic table");
                        row.first().map(|&(q2, _)| class_of[q2 as usize] + 1).unwrap_or(0)
                    })
                    .collect();
                let len = sig_to_class.len();
                let c = *sig_to_class.entry((class_of[q], sig)).or_insert(len);
                next_class[q] = c;
            }
            if next_class == class_of {
                break;
            }
            class_of = next_class;
        }
        let n_classes = class_of.iter().max().map(|&m| m + 1).unwrap_or(0);
        let mut delta = vec![vec![Vec::new(); self.letters.len()]; n_classes];
        let mut payloads = vec![Vec::new(); n_classes];
        for q in 0..n {
            let c = class_of[q];
            payloads[c] = self.payloads[q].clone();
            for li in 0..self.letters.len() {
                if let Some(&(q2, cnt)) = self.delta[q][li].first() {
                    delta[c][li] = vec![(class_of[q2 as usize] as u32, cnt)];
                }
            }
        }
        let initials: Vec<u32> = {
            let mut v: Vec<u32> = self.initials.iter().map(|&q| class_of[q as usize] as u32).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        WordTable::new(self.letters.clone(), delta, initials, payloads)
    }
}

/// A per-variable claim about the word-automaton run over register content.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LiftClaim {
    Unborn,
    Doomed,
    Live(u32, u32),
}

/// State of the lifted automaton: one claim per variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LiftState {
    pub claims: Arc<Vec<LiftClaim>>,
}

/// The lifted automaton over a marked substitution alphabet.
pub struct LiftNfa {
    pub table: Arc<WordTable>,
    pub alphabet: Arc<MarkedAlphabet>,
    nvars: usize,
    output: VarId,
    cache: Mutex<HashMap<(LiftState, u32), Arc<Vec<(LiftState, u32)>>>>,
}

/// Builds the lift over the marked closure of `subs` for the given arity.
pub fn inverse_sst(subs: &[Substitution], arity: u8, p: &ExplicitNfa<MarkedLetter>) -> LiftNfa {
    let alphabet = MarkedAlphabet::close(subs, arity);
    LiftNfa::new(Arc::new(WordTable::from_nfa(p)), alphabet, subs[0].ctx().vars.len(), subs[0].ctx().output())
}

impl LiftNfa {
    pub fn new(table: Arc<WordTable>, alphabet: Arc<MarkedAlphabet>, nvars: usize, output: VarId) -> Self {
        LiftNfa { table, alphabet, nvars, output, cache: Mutex::new(HashMap::new()) }
    }

    pub fn initial_state(&self) -> LiftState {
        LiftState { claims: Arc::new(vec![LiftClaim::Unborn; self.nvars]) }
    }

    /// Options for one target image: the possible (claim, count) results.
    fn image_options(&self, claims: &[LiftClaim], image: &[MSym]) -> Vec<(LiftClaim, u32)> {
        let mut has_letter = false;
        let mut has_live = false;
        let mut has_doomed = false;
        for sym in image {
            match sym {
                MSym::Let(_) => has_letter = true,
                MSym::Var(v) => match claims[v.0 as usize] {
                    LiftClaim::Live(..) => has_live = true,
                    LiftClaim::Doomed => has_doomed = true,
                    LiftClaim::Unborn => {}
                },
            }
        }
        let mut out: Vec<(LiftClaim, u32)> = Vec::new();
        if !has_letter && !has_live && !has_doomed {
            // content certainly still ε
            out.push((LiftClaim::Unborn, 0));
            return out;
        }
        if !has_live {
            // everything here may be dropped later
            out.push((LiftClaim::Doomed, 0));
        }
        if !has_doomed {
            // stitch a run for every start state
            for p in 0..self.table.n_states() as u32 {
                if !self.table.reachable[p as usize] {
                    continue;
                }
                let mut frontier: Vec<(u32, u32)> = vec![(p, 0)];
                for sym in image {
                    let mut next: Vec<(u32, u32)> = Vec::new();
                    match sym {
                        MSym::Let(l) => {
                            for &(cur, cnt) in &frontier {
                                for &(q2, c) in self.table.step(cur, *l) {
                                    next.push((q2, cnt + c));
                                }
                            }
                        }
                        MSym::Var(v) => match claims[v.0 as usize] {
                            LiftClaim::Unborn => next = frontier.clone(),
                            LiftClaim::Live(a, b) => {
                                for &(cur, cnt) in &frontier {
                                    if cur == a {
                                        next.push((b, cnt));
                                    }
                                }
                            }
                            LiftClaim::Doomed => unreachable!("filtered above"),
                        },
                    }
                    next.sort_unstable();
                    next.dedup();
                    frontier = next;
                    if frontier.is_empty() {
                        break;
                    }
                }
                for (q, cnt) in frontier {
                    if self.table.coreachable[q as usize] {
                        out.push((LiftClaim::Live(p, q), cnt));
                    }
                }
            }
        }
        out
    }

    /// Successors with per-transition counts.
    pub fn succ_counted(&self, st: &LiftState, sym: u32) -> Arc<Vec<(LiftState, u32)>> {
        let key = (st.clone(), sym);
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let msub = &self.alphabet.subs[sym as usize];
        let claims = &st.claims;
        let mut result: Vec<(LiftState, u32)> = Vec::new();
        // vanish rule: variables absent from every image must be Unborn/Doomed
        let occurring = msub.base.occurring_vars();
        let mut vanished_ok = true;
        for v in 0..self.nvars {
            let vid = VarId(v as u16);
            if !occurring.contains(&vid) {
                if let LiftClaim::Live(..) = claims[v] {
                    vanished_ok = false;
                    break;
                }
            }
        }
        if vanished_ok {
            let images = msub.images();
            let per_var: Vec<Vec<(LiftClaim, u32)>> =
                images.iter().map(|img| self.image_options(claims, img)).collect();
            if per_var.iter().all(|o| !o.is_empty()) {
                // cartesian product of per-variable options
                let mut acc: Vec<(Vec<LiftClaim>, u32)> = vec![(Vec::with_capacity(self.nvars), 0)];
                for options in &per_var {
                    let mut next = Vec::with_capacity(acc.len() * options.len());
                    for (claims, cnt) in &acc {
                        for (claim, c) in options {
                            let mut cl = claims.clone();
                            cl.push(*claim);
                            next.push((cl, cnt + c));
                        }
                    }
                    acc = next;
                }
                for (cl, cnt) in acc {
                    result.push((LiftState { claims: Arc::new(cl) }, cnt));
                }
                result.sort_unstable_by(|a, b| (&a.0.claims, a.1).cmp(&(&b.0.claims, b.1)));
                result.dedup();
            }
        }
        let result = Arc::new(result);
        self.cache.lock().unwrap().insert(key, result.clone());
        result
    }

    /// Acceptance payloads: empty = rejecting.  Requires every non-output
    /// claim to be `Unborn`/`Doomed` and reads the output claim's payloads.
    pub fn accept_payloads(&self, st: &LiftState) -> Vec<u32> {
        for (v, claim) in st.claims.iter().enumerate() {
            if v != self.output.0 as usize {
                if let LiftClaim::Live(..) = claim {
                    return Vec::new();
                }
            }
        }
        match st.claims[self.output.0 as usize] {
            LiftClaim::Unborn => self.table.empty_word_payloads(),
            LiftClaim::Doomed => Vec::new(),
            LiftClaim::Live(p, q) => {
                if self.table.initials().contains(&p) {
                    self.table.payloads(q).to_vec()
                } else {
                    Vec::new()
                }
            }
        }
    }
}

impl Automaton for LiftNfa {
    type Sym = u32;
    type St = LiftState;

    fn alphabet(&self) -> Vec<u32> {
        (0..self.alphabet.len() as u32).collect()
    }

    fn initials(&self) -> Vec<LiftState> {
        vec![self.initial_state()]
    }

    fn succ(&self, st: &LiftState, sym: &u32) -> Vec<LiftState> {
        let mut out: Vec<LiftState> =
            self.succ_counted(st, *sym).iter().map(|(s, _)| s.clone()).collect();
        out.dedup();
        out
    }

    fn is_accepting(&self, st: &LiftState) -> bool {
        !self.accept_payloads(st).is_empty()
    }
}
