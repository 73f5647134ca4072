//! Marked words and marked substitution sequences.
//!
//! Words over Σ × 2^{1..n} carry mark sets per position.  A *marking* places
//! each mark at most once; a *labelling* is downward closed (every mark's
//! positions form a prefix).  The two views are in bijection: a labelling
//! maps to the marking keeping only the rightmost occurrence of each mark.
//! Both are lifted to substitution sequences by marking letter occurrences
//! inside the images.

use std::sync::Arc;

use crate::alphabet::Letter;
use crate::seq::SubstSeq;
use crate::subst::{Substitution, Sym};

pub const MARK1: u8 = 1;
pub const MARK2: u8 = 2;

/// A letter together with its mark set (bitmask over marks 1 and 2).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MarkedLetter {
    pub letter: Letter,
    pub marks: u8,
}

impl MarkedLetter {
    pub fn plain(letter: Letter) -> Self {
        MarkedLetter { letter, marks: 0 }
    }

    pub fn has(self, mark: u8) -> bool {
        self.marks & mark != 0
    }
}

/// One symbol of a marked substitution image.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum MSym {
    Var(crate::alphabet::VarId),
    Let(MarkedLetter),
}

/// A substitution whose letter occurrences carry mark sets.  `masks` holds
/// one bitmask per letter occurrence, in flattened image order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MarkedSubst {
    pub base: Substitution,
    pub masks: Arc<Vec<u8>>,
}

impl MarkedSubst {
    pub fn plain(base: Substitution) -> Self {
        let n = base.letter_count();
        MarkedSubst { base, masks: Arc::new(vec![0; n]) }
    }

    pub fn new(base: Substitution, masks: Vec<u8>) -> Self {
        assert_eq!(masks.len(), base.letter_count());
        MarkedSubst { base, masks: Arc::new(masks) }
    }

    /// Image of a variable with the marks resolved.
    pub fn image(&self, v: crate::alphabet::VarId) -> Vec<MSym> {
        let mut flat = 0usize;
        let mut out = Vec::new();
        for w in self.base.ctx().vars.vars() {
            for sym in self.base.image(w) {
                match sym {
                    Sym::Var(x) => {
                        if w == v {
                            out.push(MSym::Var(*x));
                        }
                    }
                    Sym::Let(l) => {
                        if w == v {
                            out.push(MSym::Let(MarkedLetter { letter: *l, marks: self.masks[flat] }));
                        }
                        flat += 1;
                    }
                }
            }
        }
        out
    }

    /// All images resolved, indexed by variable.
    pub fn images(&self) -> Vec<Vec<MSym>> {
        self.base.ctx().vars.vars().map(|v| self.image(v)).collect()
    }

    /// Number of occurrences of `mark` across all images.
    pub fn mark_count(&self, mark: u8) -> usize {
        self.masks.iter().filter(|&&m| m & mark != 0).count()
    }

    /// π_Σ: forgets the marks.
    pub fn strip(&self) -> Substitution {
        self.base.clone()
    }
}

/// All mark placements of a substitution consistent with the arity: each of
/// the first `arity` marks is absent or on one letter occurrence.
pub fn placements(base: &Substitution, arity: u8) -> Vec<MarkedSubst> {
    let n = base.letter_count();
    let spots = |_: ()| -> Vec<Option<usize>> {
        let mut v: Vec<Option<usize>> = vec![None];
        v.extend((0..n).map(Some));
        v
    };
    let mut out = Vec::new();
    let m1s = if arity >= 1 { spots(()) } else { vec![None] };
    let m2s = if arity >= 2 { spots(()) } else { vec![None] };
    for &m1 in &m1s {
        for &m2 in &m2s {
            let mut masks = vec![0u8; n];
            if let Some(p) = m1 {
                masks[p] |= MARK1;
            }
            if let Some(p) = m2 {
                masks[p] |= MARK2;
            }
            out.push(MarkedSubst::new(base.clone(), masks));
        }
    }
    out
}

/// The shared alphabet of marked substitutions for a substitution set.
#[derive(Debug)]
pub struct MarkedAlphabet {
    pub subs: Vec<MarkedSubst>,
    /// Per base substitution (by index into the generating set), the ids of
    /// its marked variants.
    pub variants: Vec<Vec<u32>>,
    pub base_of: Vec<u32>,
}

impl MarkedAlphabet {
    pub fn close(bases: &[Substitution], arity: u8) -> Arc<Self> {
        let mut subs = Vec::new();
        let mut variants = Vec::new();
        let mut base_of = Vec::new();
        for (bi, base) in bases.iter().enumerate() {
            let mut ids = Vec::new();
            for m in placements(base, arity) {
                ids.push(subs.len() as u32);
                base_of.push(bi as u32);
                subs.push(m);
            }
            variants.push(ids);
        }
        Arc::new(MarkedAlphabet { subs, variants, base_of })
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn id_of(&self, m: &MarkedSubst) -> Option<u32> {
        self.subs.iter().position(|x| x == m).map(|i| i as u32)
    }
}

/// The marking of a word: marks placed at the given positions (1-indexed).
pub fn mark_word(word: &[Letter], positions: &[(u8, usize)]) -> Vec<MarkedLetter> {
    let mut out: Vec<MarkedLetter> = word.iter().map(|&l| MarkedLetter::plain(l)).collect();
    for &(mark, pos) in positions {
        out[pos - 1].marks |= mark;
    }
    out
}

/// True when each mark occurs at most once.
pub fn is_marking(word: &[MarkedLetter], arity: u8) -> bool {
    for i in 0..arity {
        let mark = 1u8 << i;
        if word.iter().filter(|l| l.has(mark)).count() > 1 {
            return false;
        }
    }
    true
}

/// True when every mark's positions form a prefix of the word.
pub fn is_labelling(word: &[MarkedLetter], arity: u8) -> bool {
    for i in 0..arity {
        let mark = 1u8 << i;
        let mut seen_gap = false;
        for l in word {
            if l.has(mark) {
                if seen_gap {
                    return false;
                }
            } else {
                seen_gap = true;
            }
        }
    }
    true
}

/// mk: labelling → marking, keeping the rightmost occurrence of each mark.
pub fn mk_word(labelled: &[MarkedLetter]) -> Vec<MarkedLetter> {
    let mut out: Vec<MarkedLetter> =
        labelled.iter().map(|l| MarkedLetter::plain(l.letter)).collect();
    for mark in [MARK1, MARK2] {
        if let Some(pos) = labelled.iter().rposition(|l| l.has(mark)) {
            out[pos].marks |= mark;
        }
    }
    out
}

/// Inverse of [`mk_word`]: propagates each mark leftward to all positions.
pub fn labelling_of_marking(marked: &[MarkedLetter]) -> Vec<MarkedLetter> {
    let mut out: Vec<MarkedLetter> = marked.iter().map(|l| MarkedLetter::plain(l.letter)).collect();
    for mark in [MARK1, MARK2] {
        if let Some(pos) = marked.iter().position(|l| l.has(mark)) {
            for l in &mut out[..=pos] {
                l.marks |= mark;
            }
        }
    }
    out
}

/// The output of a marked substitution sequence, with marks.
pub fn marked_out(items: &[MarkedSubst]) -> Vec<MarkedLetter> {
    if items.is_empty() {
        return Vec::new();
    }
    let ctx = items[0].base.ctx().clone();
    let nvars = ctx.vars.len();
    let mut contents: Vec<Vec<MarkedLetter>> = vec![Vec::new(); nvars];
    for item in items {
        let images = item.images();
        let mut next: Vec<Vec<MarkedLetter>> = Vec::with_capacity(nvars);
        for v in ctx.vars.vars() {
            let mut w = Vec::new();
            for sym in &images[v.0 as usize] {
                match sym {
                    MSym::Let(l) => w.push(*l),
                    MSym::Var(x) => w.extend_from_slice(&contents[x.0 as usize]),
                }
            }
            next.push(w);
        }
        contents = next;
    }
    contents.swap_remove(ctx.output().0 as usize)
}

/// The unique marked sequence `λ ▷ positions`: marks the letter occurrences
/// that produce the requested output positions.  Panics if a position is out
/// of range.
pub fn mark_seq(seq: &SubstSeq, positions: &[(u8, usize)]) -> Vec<MarkedSubst> {
    // annotate every output position with (step, flat letter index)
    let ctx = seq.ctx().clone();
    let nvars = ctx.vars.len();
    let mut contents: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nvars];
    for (step, item) in seq.items().iter().enumerate() {
        let mut flat = 0usize;
        let mut next: Vec<Vec<(usize, usize)>> = Vec::with_capacity(nvars);
        for v in ctx.vars.vars() {
            let mut w = Vec::new();
            for sym in item.image(v) {
                match sym {
                    Sym::Let(_) => {
                        w.push((step, flat));
                        flat += 1;
                    }
                    Sym::Var(x) => w.extend_from_slice(&contents[x.0 as usize]),
                }
            }
            next.push(w);
        }
        contents = next;
    }
    let out = &contents[ctx.output().0 as usize];
    let mut masks: Vec<Vec<u8>> =
        seq.items().iter().map(|s| vec![0u8; s.letter_count()]).collect();
    for &(mark, pos) in positions {
        let (step, flat) = out[pos - 1];
        masks[step][flat] |= mark;
    }
    seq.items()
        .iter()
        .zip(masks)
        .map(|(s, m)| MarkedSubst::new(s.clone(), m))
        .collect()
}

/// mks: converts a labelled sequence into the corresponding marked sequence
/// (the marking of each mark's rightmost output occurrence).
pub fn mks(items: &[MarkedSubst]) -> Vec<MarkedSubst> {
    let out = marked_out(items);
    // rightmost output occurrence per mark, located as (step, flat index)
    let ctx = if items.is_empty() {
        return Vec::new();
    } else {
        items[0].base.ctx().clone()
    };
    let nvars = ctx.vars.len();
    let mut contents: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nvars];
    for (step, item) in items.iter().enumerate() {
        let mut flat = 0usize;
        let mut next: Vec<Vec<(usize, usize)>> = Vec::with_capacity(nvars);
        for v in ctx.vars.vars() {
            let mut w = Vec::new();
            for sym in item.base.image(v) {
                match sym {
                    Sym::Let(_) => {
                        w.push((step, flat));
                        flat += 1;
                    }
                    Sym::Var(x) => w.extend_from_slice(&contents[x.0 as usize]),
                }
            }
            next.push(w);
        }
        contents = next;
    }
    let positions = &contents[ctx.output().0 as usize];
    let mut masks: Vec<Vec<u8>> =
        items.iter().map(|s| vec![0u8; s.base.letter_count()]).collect();
    for mark in [MARK1, MARK2] {
        if let Some(pos) = out.iter().rposition(|l| l.has(mark)) {
            let (step, flat) = positions[pos];
            masks[step][flat] |= mark;
        }
    }
    items
        .iter()
        .zip(masks)
        .map(|(s, m)| MarkedSubst::new(s.base.clone(), m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn mk_keeps_rightmost() {
        let (ctx, _) = corpus::seq_from_images(&["Oab"], &["a", "b", "c", "d"], &["O"], "O");
        let a = ctx.alphabet.lookup("a").unwrap();
        let b = ctx.alphabet.lookup("b").unwrap();
        let c = ctx.alphabet.lookup("c").unwrap();
        let d = ctx.alphabet.lookup("d").unwrap();
        // labelling: marks {1,2} on a,b then {1} on c, nothing on d
        let lab = vec![
            MarkedLetter { letter: a, marks: MARK1 | MARK2 },
            MarkedLetter { letter: b, marks: MARK1 | MARK2 },
            MarkedLetter { letter: c, marks: MARK1 },
            MarkedLetter::plain(d),
        ];
        assert!(is_labelling(&lab, 2));
        let mk = mk_word(&lab);
        assert!(is_marking(&mk, 2));
        assert_eq!(mk[1].marks, MARK2);
        assert_eq!(mk[2].marks, MARK1);
        assert_eq!(labelling_of_marking(&mk), lab);
    }

    #[test]
    fn marking_a_sequence_marks_the_output() {
        let seq = corpus::lambda_t3();
        let marked = mark_seq(&seq, &[(MARK1, 4), (MARK2, 7)]);
        let out = marked_out(&marked);
        assert!(is_marking(&out, 2));
        assert!(out[3].has(MARK1));
        assert!(out[6].has(MARK2));
        assert_eq!(
            out.iter().map(|l| l.letter).collect::<Vec<_>>(),
            seq.out_word()
        );
        // each mark sits on exactly one occurrence across the items
        for mark in [MARK1, MARK2] {
            let total: usize = marked.iter().map(|m| m.mark_count(mark)).sum();
            assert_eq!(total, 1);
        }
    }

    #[test]
    fn mks_agrees_with_mk_on_outputs() {
        let seq = corpus::lambda_t4();
        // label the output positions 1..=5 with mark 1 (a labelling), 1..=2 with mark 2
        let marked = mark_seq(&seq, &[(MARK1, 5), (MARK2, 2)]);
        let labelled_out = labelling_of_marking(&marked_out(&marked));
        // build the labelled sequence directly by marking every position ≤ the mark
        let mut positions = Vec::new();
        for p in 1..=5 {
            positions.push((MARK1, p));
        }
        for p in 1..=2 {
            positions.push((MARK2, p));
        }
        let labelled_seq = mark_seq(&seq, &positions);
        assert_eq!(marked_out(&labelled_seq), labelled_out);
        let back = mks(&labelled_seq);
        assert_eq!(marked_out(&back), marked_out(&marked));
        assert_eq!(back, marked);
    }
}
