//! Word-level predicate automata over marked letters.
//!
//! The factor checker validates a guessed greedy ℓ-factorization online: each
//! closed factor must be a power of a period ≤ ℓ, and maximality is enforced
//! by forbidden-continuation constraints that look at most ℓ letters past a
//! close (the window that would extend the factor to the next period
//! multiple).  The cut/next-cut/first-cut predicates run the checker up to
//! the factor carrying the last mark they care about and then go dormant.

use std::collections::HashMap;

use crate::alphabet::{Alphabet, Letter};
use crate::automata::{AutomatonError, ExplicitDfa, ExplicitNfa, WordTable};

use super::marks::{MarkedLetter, MARK1, MARK2};

/// Upper bound for the period parameters accepted by the constructions.
pub const MAX_PERIOD: usize = 4;

/// The factor-length modulus actually needed: lcm(1..=ℓ).
fn pmod(ell: usize) -> u16 {
    [1u16, 2, 6, 12][ell - 1]
}

/// All marked letters over the given base letters, arity 2.
pub fn marked_universe(letters: &[Letter]) -> Vec<MarkedLetter> {
    let mut out = Vec::new();
    for &l in letters {
        for marks in 0..4u8 {
            out.push(MarkedLetter { letter: l, marks });
        }
    }
    out
}

/// All marked letters with mark 2 unused (arity 1).
pub fn marked_universe1(letters: &[Letter]) -> Vec<MarkedLetter> {
    let mut out = Vec::new();
    for &l in letters {
        for marks in [0u8, MARK1] {
            out.push(MarkedLetter { letter: l, marks });
        }
    }
    out
}

/// A forbidden continuation: fires (rejects) when all slots match in order;
/// `None` matches any letter.
type Constraint = Vec<Option<Letter>>;

/// Online state of the greedy-factorization checker.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct FactorCore {
    /// min(p, ℓ) where p is the current factor length.
    p_cap: u8,
    /// p mod lcm(1..=MAX_PERIOD).
    p_mod: u16,
    /// First min(p, ℓ) letters of the current factor.
    prefix: Vec<Letter>,
    /// Bit i set = the factor read so far is consistent with period i+1.
    viable: u8,
    /// Outstanding maximality constraints (sorted for canonicity).
    pending: Vec<Constraint>,
}

impl FactorCore {
    pub fn new(ell: usize) -> Self {
        assert!((1..=MAX_PERIOD).contains(&ell), "period bound {ell} outside 1..={MAX_PERIOD}");
        FactorCore { p_cap: 0, p_mod: 0, prefix: Vec::new(), viable: (1u8 << ell) - 1, pending: Vec::new() }
    }

    /// Consumes one letter inside the current factor; `None` = a maximality
    /// constraint fired.
    pub fn advance(&self, ell: usize, x: Letter) -> Option<FactorCore> {
        let mut next = self.clone();
        // age pending constraints
        let mut pending = Vec::new();
        for c in &next.pending {
            let matches = match c[0] {
                None => true,
                Some(e) => e == x,
            };
            if matches {
                if c.len() == 1 {
                    return None; // window completed a small period: not maximal
                }
                pending.push(c[1..].to_vec());
            }
        }
        pending.sort();
        pending.dedup();
        next.pending = pending;
        // extend the factor
        for lp in 1..=ell {
            if next.viable & (1 << (lp - 1)) != 0 && (self.p_cap as usize) >= lp {
                let expected = next.prefix[(self.p_mod as usize) % lp];
                if expected != x {
                    next.viable &= !(1 << (lp - 1));
                }
            }
        }
        if (next.prefix.len()) < ell {
            next.prefix.push(x);
        }
        next.p_cap = next.p_cap.saturating_add(1).min(ell as u8);
        next.p_mod = (next.p_mod + 1) % pmod(ell);
        Some(next)
    }

    /// Closes the current factor; `None` when it is not a valid power of a
    /// period ≤ ℓ.  Spawns the maximality constraints for the next letters.
    pub fn close(&self, ell: usize) -> Option<FactorCore> {
        if self.p_cap == 0 {
            return None;
        }
        let divides = |lp: usize| (self.p_mod as usize) % lp == 0;
        let ok = (1..=ell).any(|lp| {
            (self.p_cap as usize) >= lp && divides(lp) && self.viable & (1 << (lp - 1)) != 0
        });
        if !ok {
            return None;
        }
        let mut pending = self.pending.clone();
        for lp in 1..=ell {
            if (self.p_cap as usize) >= lp {
                if self.viable & (1 << (lp - 1)) != 0 {
                    let rem = (self.p_mod as usize) % lp;
                    let r = if rem == 0 { lp } else { lp - rem };
                    let c: Constraint =
                        (0..r).map(|o| Some(self.prefix[(self.p_mod as usize + o) % lp])).collect();
                    pending.push(c);
                }
            } else {
                // any lp letters from the factor start form a word of P_lp,
                // so maximality requires the word to end within lp − p letters
                let r = lp - self.p_cap as usize;
                pending.push(vec![None; r]);
            }
        }
        pending.sort();
        pending.dedup();
        Some(FactorCore {
            p_cap: 0,
            p_mod: 0,
            prefix: Vec::new(),
            viable: (1u8 << ell) - 1,
            pending,
        })
    }

    pub fn factor_open(&self) -> bool {
        self.p_cap > 0
    }

    /// Ages only the pending constraints (dormant mode).
    pub fn age_only(&self, x: Letter) -> Option<Vec<Constraint>> {
        let mut pending = Vec::new();
        for c in &self.pending {
            let matches = match c[0] {
                None => true,
                Some(e) => e == x,
            };
            if matches {
                if c.len() == 1 {
                    return None;
                }
                pending.push(c[1..].to_vec());
            }
        }
        pending.sort();
        pending.dedup();
        Some(pending)
    }
}

fn age(pending: &[Constraint], x: Letter) -> Option<Vec<Constraint>> {
    let mut out = Vec::new();
    for c in pending {
        let matches = match c[0] {
            None => true,
            Some(e) => e == x,
        };
        if matches {
            if c.len() == 1 {
                return None;
            }
            out.push(c[1..].to_vec());
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// Generic exploration of a small nondeterministic machine into an NFA.
fn explore<St, F, G>(
    syms: Vec<MarkedLetter>,
    initials: Vec<St>,
    step: F,
    accept: G,
) -> ExplicitNfa<MarkedLetter>
where
    St: Clone + Eq + std::hash::Hash + std::fmt::Debug,
    F: Fn(&St, MarkedLetter) -> Vec<St>,
    G: Fn(&St) -> bool,
{
    let mut ids: HashMap<St, u32> = HashMap::new();
    let mut states: Vec<St> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let mut init_ids = Vec::new();
    for st in initials {
        let id = *ids.entry(st.clone()).or_insert_with(|| {
            states.push(st.clone());
            queue.push_back(st.clone());
            states.len() as u32 - 1
        });
        init_ids.push(id);
    }
    let mut edges: Vec<(u32, MarkedLetter, u32)> = Vec::new();
    while let Some(st) = queue.pop_front() {
        let id = ids[&st];
        for &sym in &syms {
            for succ in step(&st, sym) {
                let sid = *ids.entry(succ.clone()).or_insert_with(|| {
                    states.push(succ.clone());
                    queue.push_back(succ.clone());
                    states.len() as u32 - 1
                });
                edges.push((id, sym, sid));
            }
        }
    }
    let accepting: Vec<u32> =
        states.iter().enumerate().filter(|(_, s)| accept(s)).map(|(i, _)| i as u32).collect();
    ExplicitNfa::build(syms, states.len(), init_ids, accepting, edges)
}

/// P_h over the declared alphabet: all powers of length-`h` words.
pub fn period_dfa(alphabet: &Alphabet, h: usize) -> Result<ExplicitDfa<Letter>, AutomatonError> {
    if !(1..=MAX_PERIOD).contains(&h) {
        return Err(AutomatonError::Resource(format!("period {h} outside 1..={MAX_PERIOD}")));
    }
    #[derive(Clone, PartialEq, Eq, Hash, Debug)]
    struct St {
        prefix: Vec<Letter>,
        phase: usize,
        dead: bool,
    }
    let letters: Vec<Letter> = alphabet.letters().collect();
    let mut ids: HashMap<St, u32> = HashMap::new();
    let mut states: Vec<St> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let init = St { prefix: Vec::new(), phase: 0, dead: false };
    ids.insert(init.clone(), 0);
    states.push(init.clone());
    queue.push_back(init);
    let mut delta_rows: Vec<Vec<u32>> = Vec::new();
    while let Some(st) = queue.pop_front() {
        let id = ids[&st];
        let mut row = Vec::with_capacity(letters.len());
        for &x in &letters {
            let succ = if st.dead {
                St { prefix: Vec::new(), phase: 0, dead: true }
            } else if st.prefix.len() < h {
                let mut p = st.prefix.clone();
                p.push(x);
                let phase = if p.len() == h { 0 } else { 0 };
                St { prefix: p, phase, dead: false }
            } else if st.prefix[st.phase] == x {
                St { prefix: st.prefix.clone(), phase: (st.phase + 1) % h, dead: false }
            } else {
                St { prefix: Vec::new(), phase: 0, dead: true }
            };
            let sid = *ids.entry(succ.clone()).or_insert_with(|| {
                states.push(succ.clone());
                queue.push_back(succ.clone());
                states.len() as u32 - 1
            });
            row.push(sid);
        }
        while delta_rows.len() <= id as usize {
            delta_rows.push(Vec::new());
        }
        delta_rows[id as usize] = row;
    }
    while delta_rows.len() < states.len() {
        let i = delta_rows.len();
        delta_rows.push(vec![i as u32; letters.len()]);
    }
    let accepting: Vec<bool> = states
        .iter()
        .map(|st| !st.dead && (st.prefix.is_empty() || (st.prefix.len() == h && st.phase == 0)))
        .collect();
    Ok(ExplicitDfa::from_parts(letters, 0, accepting, delta_rows))
}

/// L_cut: words over Σ×2^{1} whose marked position set is exactly cut_ℓ(u).
pub fn cut_marking_nfa(alphabet: &Alphabet, ell: usize) -> ExplicitNfa<MarkedLetter> {
    let letters: Vec<Letter> = alphabet.letters().collect();
    cut_marking_over(&letters, ell)
}

/// As [`cut_marking_nfa`] over an explicit letter list.
pub fn cut_marking_over(letters: &[Letter], ell: usize) -> ExplicitNfa<MarkedLetter> {
    let syms = marked_universe1(letters);
    explore(
        syms,
        vec![Some(FactorCore::new(ell))],
        move |st: &Option<FactorCore>, sym: MarkedLetter| {
            let core = match st {
                Some(c) => c,
                None => return Vec::new(),
            };
            let advanced = match core.advance(ell, sym.letter) {
                Some(c) => c,
                None => return Vec::new(),
            };
            if sym.has(MARK1) {
                match advanced.close(ell) {
                    Some(c) => vec![Some(c)],
                    None => Vec::new(),
                }
            } else {
                vec![Some(advanced)]
            }
        },
        |st: &Option<FactorCore>| st.as_ref().map(|c| !c.factor_open()).unwrap_or(false),
    )
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum CutAtSt {
    Active(FactorCore),
    Dormant(Vec<Constraint>),
}

/// Mark 1 sits on an ℓ-cut (mark 2 ignored; exactly one mark-1 occurrence).
pub fn cut_at_mark1(alphabet: &Alphabet, ell: usize) -> ExplicitNfa<MarkedLetter> {
    let letters = alphabet.letters_with_end();
    let syms = marked_universe(&letters);
    explore(
        syms,
        vec![CutAtSt::Active(FactorCore::new(ell))],
        move |st: &CutAtSt, sym: MarkedLetter| {
            let mut out = Vec::new();
            match st {
                CutAtSt::Active(core) => {
                    if let Some(adv) = core.advance(ell, sym.letter) {
                        if !sym.has(MARK1) {
                            // continue the factor or close without the mark
                            out.push(CutAtSt::Active(adv.clone()));
                            if let Some(closed) = adv.close(ell) {
                                out.push(CutAtSt::Active(closed));
                            }
                        } else if let Some(closed) = adv.close(ell) {
                            // the marked position must close a factor
                            out.push(CutAtSt::Dormant(closed.pending));
                        }
                    }
                }
                CutAtSt::Dormant(pending) => {
                    if !sym.has(MARK1) {
                        if let Some(aged) = age(pending, sym.letter) {
                            out.push(CutAtSt::Dormant(aged));
                        }
                    }
                }
            }
            out
        },
        |st: &CutAtSt| matches!(st, CutAtSt::Dormant(_)),
    )
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum NextCutSt {
    Before(FactorCore),
    After(FactorCore),
    Done(Vec<Constraint>),
}

/// Mark 2 sits on the first ℓ-cut strictly after mark 1 (both marks exactly
/// once; the mark-1 position need not be a cut itself).
pub fn next_cut_marks(alphabet: &Alphabet, ell: usize) -> ExplicitNfa<MarkedLetter> {
    let letters = alphabet.letters_with_end();
    let syms = marked_universe(&letters);
    explore(
        syms,
        vec![NextCutSt::Before(FactorCore::new(ell))],
        move |st: &NextCutSt, sym: MarkedLetter| {
            let mut out = Vec::new();
            match st {
                NextCutSt::Before(core) => {
                    if sym.has(MARK2) {
                        return out; // mark 2 before (or at) mark 1
                    }
                    if let Some(adv) = core.advance(ell, sym.letter) {
                        let closes = adv.close(ell);
                        if sym.has(MARK1) {
                            out.push(NextCutSt::After(adv));
                            if let Some(closed) = closes {
                                out.push(NextCutSt::After(closed));
                            }
                        } else {
                            out.push(NextCutSt::Before(adv));
                            if let Some(closed) = closes {
                                out.push(NextCutSt::Before(closed));
                            }
                        }
                    }
                }
                NextCutSt::After(core) => {
                    if sym.has(MARK1) {
                        return out;
                    }
                    if let Some(adv) = core.advance(ell, sym.letter) {
                        if sym.has(MARK2) {
                            // the next close must happen exactly here
                            if let Some(closed) = adv.close(ell) {
                                out.push(NextCutSt::Done(closed.pending));
                            }
                        } else {
                            // no close allowed before mark 2
                            out.push(NextCutSt::After(adv));
                        }
                    }
                }
                NextCutSt::Done(pending) => {
                    if sym.marks == 0 {
                        if let Some(aged) = age(pending, sym.letter) {
                            out.push(NextCutSt::Done(aged));
                        }
                    }
                }
            }
            out
        },
        |st: &NextCutSt| matches!(st, NextCutSt::Done(_)),
    )
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum FirstCutSt {
    Start(FactorCore),
    Done(Vec<Constraint>),
}

/// Mark 2 sits on the first ℓ-cut of the word; mark 1 must not occur.
pub fn first_cut_mark2(alphabet: &Alphabet, ell: usize) -> ExplicitNfa<MarkedLetter> {
    let letters = alphabet.letters_with_end();
    let syms = marked_universe(&letters);
    explore(
        syms,
        vec![FirstCutSt::Start(FactorCore::new(ell))],
        move |st: &FirstCutSt, sym: MarkedLetter| {
            let mut out = Vec::new();
            if sym.has(MARK1) {
                return out;
            }
            match st {
                FirstCutSt::Start(core) => {
                    if let Some(adv) = core.advance(ell, sym.letter) {
                        if sym.has(MARK2) {
                            if let Some(closed) = adv.close(ell) {
                                out.push(FirstCutSt::Done(closed.pending));
                            }
                        } else {
                            out.push(FirstCutSt::Start(adv));
                        }
                    }
                }
                FirstCutSt::Done(pending) => {
                    if sym.marks == 0 {
                        if let Some(aged) = age(pending, sym.letter) {
                            out.push(FirstCutSt::Done(aged));
                        }
                    }
                }
            }
            out
        },
        |st: &FirstCutSt| matches!(st, FirstCutSt::Done(_)),
    )
}

/// Payload encoding for predicates that report a distance and a letter.
pub fn encode_payload(d: usize, letter: Letter) -> u32 {
    ((d as u32) << 16) | letter.0 as u32
}

pub fn decode_payload(p: u32) -> (usize, Letter) {
    ((p >> 16) as usize, Letter((p & 0xffff) as u16))
}

/// Generic exploration into a payload-carrying word table (all counts zero).
fn explore_table<St, F, G>(
    syms: Vec<MarkedLetter>,
    initials: Vec<St>,
    step: F,
    payloads: G,
) -> WordTable
where
    St: Clone + Eq + std::hash::Hash + std::fmt::Debug,
    F: Fn(&St, MarkedLetter) -> Vec<St>,
    G: Fn(&St) -> Vec<u32>,
{
    let mut ids: HashMap<St, u32> = HashMap::new();
    let mut states: Vec<St> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let mut init_ids = Vec::new();
    for st in initials {
        let id = *ids.entry(st.clone()).or_insert_with(|| {
            states.push(st.clone());
            queue.push_back(st.clone());
            states.len() as u32 - 1
        });
        init_ids.push(id);
    }
    let mut delta: Vec<Vec<Vec<(u32, u32)>>> = Vec::new();
    while let Some(st) = queue.pop_front() {
        let id = ids[&st] as usize;
        let mut row = vec![Vec::new(); syms.len()];
        for (si, &sym) in syms.iter().enumerate() {
            for succ in step(&st, sym) {
                let sid = *ids.entry(succ.clone()).or_insert_with(|| {
                    states.push(succ.clone());
                    queue.push_back(succ.clone());
                    states.len() as u32 - 1
                });
                row[si].push((sid, 0));
            }
            row[si].sort_unstable();
            row[si].dedup();
        }
        while delta.len() <= id {
            delta.push(Vec::new());
        }
        delta[id] = row;
    }
    while delta.len() < states.len() {
        delta.push(vec![Vec::new(); syms.len()]);
    }
    let pl: Vec<Vec<u32>> = states.iter().map(|s| payloads(s)).collect();
    WordTable::new(syms, delta, init_ids, pl)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum MismSt {
    Pre,
    Run(usize),
    Done(usize, Letter),
}

/// Per-side mismatch tracker: marks (i, j) with 0 ≤ j−i ≤ bound; the payload
/// reports (j−i, letter at j).
pub fn mism_side(alphabet: &Alphabet, bound: usize) -> WordTable {
    let letters = alphabet.letters_with_end();
    let syms = marked_universe(&letters);
    explore_table(
        syms,
        vec![MismSt::Pre],
        move |st: &MismSt, sym: MarkedLetter| {
            let mut out = Vec::new();
            match st {
                MismSt::Pre => match (sym.has(MARK1), sym.has(MARK2)) {
                    (false, false) => out.push(MismSt::Pre),
                    (true, false) => out.push(MismSt::Run(0)),
                    (true, true) => out.push(MismSt::Done(0, sym.letter)),
                    (false, true) => {}
                },
                MismSt::Run(d) => match (sym.has(MARK1), sym.has(MARK2)) {
                    (false, false) => {
                        if d + 1 <= bound {
                            out.push(MismSt::Run(d + 1));
                        }
                    }
                    (false, true) => {
                        if d + 1 <= bound {
                            out.push(MismSt::Done(d + 1, sym.letter));
                        }
                    }
                    _ => {}
                },
                MismSt::Done(d, l) => {
                    if sym.marks == 0 {
                        out.push(MismSt::Done(*d, *l));
                    }
                }
            }
            out
        },
        |st: &MismSt| match st {
            MismSt::Done(d, l) => vec![encode_payload(*d, *l)],
            _ => Vec::new(),
        },
    )
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum AbsSt {
    Pos(usize),
    Done(usize, Letter),
}

/// Mark 2 at an absolute position ≤ bound, payload (position, letter);
/// mark 1 must not occur.
pub fn abs_mark2(alphabet: &Alphabet, bound: usize) -> WordTable {
    let letters = alphabet.letters_with_end();
    let syms = marked_universe(&letters);
    explore_table(
        syms,
        vec![AbsSt::Pos(0)],
        move |st: &AbsSt, sym: MarkedLetter| {
            let mut out = Vec::new();
            if sym.has(MARK1) {
                return out;
            }
            match st {
                AbsSt::Pos(c) => {
                    if sym.has(MARK2) {
                        if c + 1 <= bound {
                            out.push(AbsSt::Done(c + 1, sym.letter));
                        }
                    } else if c + 1 < bound {
                        out.push(AbsSt::Pos(c + 1));
                    }
                }
                AbsSt::Done(j, l) => {
                    if sym.marks == 0 {
                        out.push(AbsSt::Done(*j, *l));
                    }
                }
            }
            out
        },
        |st: &AbsSt| match st {
            AbsSt::Done(j, l) => vec![encode_payload(*j, *l)],
            _ => Vec::new(),
        },
    )
}

/// The language (Σ∖⊣)*⊣ over marked letters (marks ignored).
pub fn t_end_word_dfa(alphabet: &Alphabet) -> ExplicitNfa<MarkedLetter> {
    let letters = alphabet.letters_with_end();
    let syms = marked_universe(&letters);
    #[derive(Clone, PartialEq, Eq, Hash, Debug)]
    enum St {
        Clean,
        JustEnd,
    }
    explore(
        syms,
        vec![St::Clean],
        |st: &St, sym: MarkedLetter| match st {
            St::Clean if sym.letter == Letter::END => vec![St::JustEnd],
            St::Clean => vec![St::Clean],
            St::JustEnd => Vec::new(),
        },
        |st: &St| matches!(st, St::JustEnd),
    )
}

/// Exact one-mark predicate: exactly one position carries the given mark.
pub fn one_mark(alphabet: &Alphabet, mark: u8) -> ExplicitNfa<MarkedLetter> {
    let letters = alphabet.letters_with_end();
    let syms = marked_universe(&letters);
    explore(
        syms,
        vec![0u8],
        move |st: &u8, sym: MarkedLetter| {
            let seen = *st + u8::from(sym.has(mark));
            if seen > 1 {
                Vec::new()
            } else {
                vec![seen]
            }
        },
        |st: &u8| *st == 1,
    )
}

/// A trait alias used by the characterization: word predicates are explicit
/// NFAs over marked letters.
pub type WordPredicate = ExplicitNfa<MarkedLetter>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{enumerate_language, Automaton};
    use crate::factor;

    fn all_words(letters: &[Letter], max_len: usize) -> Vec<Vec<Letter>> {
        let mut out: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &l in letters {
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

    #[test]
    fn period_dfa_matches_definition() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        for h in 1..=3 {
            let dfa = period_dfa(&ab, h).unwrap();
            for u in all_words(&ab.letters().collect::<Vec<_>>(), 6) {
                let expected = u.is_empty()
                    || (u.len() % h == 0 && u.chunks(h).all(|c| c == &u[..h]));
                assert_eq!(dfa.accepts(&u), expected, "h={h} u={}", ab.render(&u));
            }
        }
        assert!(period_dfa(&ab, 9).is_err());
        // pinned: h=1 accepts ε, a+, b+; rejects ab
        let d1 = period_dfa(&ab, 1).unwrap();
        let a = ab.lookup("a").unwrap();
        let b = ab.lookup("b").unwrap();
        assert!(d1.accepts(&[]) && d1.accepts(&[a, a]) && d1.accepts(&[b]));
        assert!(!d1.accepts(&[a, b]));
        // pinned: h=2 accepts abab, aaaa, ε; rejects aba
        let d2 = period_dfa(&ab, 2).unwrap();
        assert!(d2.accepts(&[a, b, a, b]) && d2.accepts(&[a, a, a, a]) && d2.accepts(&[]));
        assert!(!d2.accepts(&[a, b, a]));
    }

    fn marking_word(u: &[Letter], cuts: &[usize]) -> Vec<MarkedLetter> {
        u.iter()
            .enumerate()
            .map(|(i, &l)| MarkedLetter { letter: l, marks: u8::from(cuts.contains(&(i + 1))) })
            .collect()
    }

    #[test]
    fn cut_marking_agrees_with_factorize() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let letters: Vec<Letter> = ab.letters().collect();
        for ell in 1..=2 {
            let nfa = cut_marking_nfa(&ab, ell);
            for u in all_words(&letters, 7) {
                let true_cuts = factor::cuts(&u, ell);
                // the correct marking is accepted
                assert!(
                    nfa.accepts(&marking_word(&u, &true_cuts)),
                    "ℓ={ell} u={} cuts {true_cuts:?}",
                    ab.render(&u)
                );
                // every u has exactly one accepted marking: count via language
                // membership over all subsets for short words
                if u.len() <= 5 {
                    let mut accepted = 0;
                    for mask in 0..(1u32 << u.len()) {
                        let cuts: Vec<usize> =
                            (0..u.len()).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
                        if nfa.accepts(&marking_word(&u, &cuts)) {
                            accepted += 1;
                            assert_eq!(cuts, true_cuts, "u={}", ab.render(&u));
                        }
                    }
                    assert_eq!(accepted, 1, "u={}", ab.render(&u));
                }
            }
        }
    }

    #[test]
    fn cut_marking_pinned_example() {
        let abc = Alphabet::new(["a", "b", "c"]).unwrap();
        let u = abc.parse_compact("aaababcbabaaaaa").unwrap();
        let nfa = cut_marking_over(&abc.letters().collect::<Vec<_>>(), 2);
        let good = marking_word(&u, &[3, 5, 7, 11, 15]);
        assert!(nfa.accepts(&good));
        // perturbations are rejected
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let mut cuts: Vec<usize> = vec![3, 5, 7, 11, 15];
            let flip = rng.gen_range(1..=15);
            if let Some(pos) = cuts.iter().position(|&c| c == flip) {
                cuts.remove(pos);
            } else {
                cuts.push(flip);
                cuts.sort_unstable();
            }
            assert!(!nfa.accepts(&marking_word(&u, &cuts)), "cuts {cuts:?}");
        }
        // unary words: only the full-length mark is accepted
        let a = abc.lookup("a").unwrap();
        for n in 1..=6 {
            for ell in 1..=2 {
                let nfa = cut_marking_over(&abc.letters().collect::<Vec<_>>(), ell);
                assert!(nfa.accepts(&marking_word(&vec![a; n], &[n])));
            }
        }
    }

    #[test]
    fn marked_cut_predicates_agree_with_oracle() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let letters = ab.letters_with_end();
        for ell in 1..=2 {
            let cut1 = cut_at_mark1(&ab, ell);
            let next12 = next_cut_marks(&ab, ell);
            let first2 = first_cut_mark2(&ab, ell);
            for u in all_words(&letters, 5) {
                let cuts = factor::cuts(&u, ell);
                for i in 1..=u.len() {
                    // cut predicate: mark 1 at i
                    let mut w: Vec<MarkedLetter> =
                        u.iter().map(|&l| MarkedLetter::plain(l)).collect();
                    w[i - 1].marks = MARK1;
                    assert_eq!(
                        cut1.accepts(&w),
                        cuts.contains(&i),
                        "cut ℓ={ell} u={} i={i}",
                        ab.render(&u)
                    );
                    for j in 1..=u.len() {
                        if i == j {
                            continue;
                        }
                        let mut w2: Vec<MarkedLetter> =
                            u.iter().map(|&l| MarkedLetter::plain(l)).collect();
                        w2[i - 1].marks |= MARK1;
                        w2[j - 1].marks |= MARK2;
                        let expected = factor::next_cut(&u, ell, i) == Some(j);
                        assert_eq!(
                            next12.accepts(&w2),
                            expected,
                            "next-cut ℓ={ell} u={} i={i} j={j}",
                            ab.render(&u)
                        );
                    }
                }
                for j in 1..=u.len() {
                    let mut w: Vec<MarkedLetter> =
                        u.iter().map(|&l| MarkedLetter::plain(l)).collect();
                    w[j - 1].marks = MARK2;
                    assert_eq!(
                        first2.accepts(&w),
                        factor::next_cut(&u, ell, 0) == Some(j),
                        "first-cut ℓ={ell} u={} j={j}",
                        ab.render(&u)
                    );
                }
            }
        }
    }

    #[test]
    fn det_min_preserves_cut_language() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let nfa = cut_at_mark1(&ab, 2);
        let table = WordTable::from_nfa(&nfa).determinize().minimize();
        let det = table.to_nfa();
        let letters = ab.letters_with_end();
        let syms = marked_universe(&letters);
        // membership-compare over all marked words up to length 4
        let mut layer: Vec<Vec<MarkedLetter>> = vec![Vec::new()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &layer {
                for &s in &syms {
                    let mut w2 = w.clone();
                    w2.push(s);
                    next.push(w2);
                }
            }
            for w in &next {
                assert_eq!(nfa.accepts(w), det.accepts(w));
            }
            layer = next;
        }
        assert!(table.n_states() <= nfa.n_states() * 4, "det-min should stay small");
    }

    #[test]
    fn t_end_language() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let t = t_end_word_dfa(&ab);
        let a = MarkedLetter::plain(ab.lookup("a").unwrap());
        let end = MarkedLetter::plain(Letter::END);
        assert!(t.accepts(&[a, end]));
        assert!(t.accepts(&[end]));
        assert!(!t.accepts(&[a]));
        assert!(!t.accepts(&[end, a]));
        assert!(!t.accepts(&[a, end, end]));
        assert!(!t.accepts(&[]));
        let words = enumerate_language(&t, 3);
        assert!(words.iter().all(|w| w.last().map(|l| l.letter) == Some(Letter::END)
            && w[..w.len() - 1].iter().all(|l| l.letter != Letter::END)));
    }
}

#[cfg(test)]
mod probe {
    use super::*;

    #[test]
    fn sizes() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        for ell in 1..=2 {
            let t0 = std::time::Instant::now();
            let nfa = cut_at_mark1(&ab, ell);
            eprintln!("ell={ell} cut_at_mark1 nfa states {} ({:?})", nfa.n_states(), t0.elapsed());
            let t0 = std::time::Instant::now();
            let det = WordTable::from_nfa(&nfa).determinize();
            eprintln!("  det {} ({:?})", det.n_states(), t0.elapsed());
            let t0 = std::time::Instant::now();
            let min = det.minimize();
            eprintln!("  min {} ({:?})", min.n_states(), t0.elapsed());
            let t0 = std::time::Instant::now();
            let nfa = next_cut_marks(&ab, ell);
            eprintln!("ell={ell} next_cut nfa states {} ({:?})", nfa.n_states(), t0.elapsed());
            let t0 = std::time::Instant::now();
            let det = WordTable::from_nfa(&nfa).determinize();
            eprintln!("  det {} ({:?})", det.n_states(), t0.elapsed());
            let t0 = std::time::Instant::now();
            let min = det.minimize();
            eprintln!("  min {} ({:?})", min.n_states(), t0.elapsed());
        }
    }
}
