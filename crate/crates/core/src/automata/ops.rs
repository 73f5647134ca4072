//! Boolean products and letter-to-letter relabelings, all lazy.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use super::{Automaton, AutomatonError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProductMode {
    Intersection,
    Union,
}

/// Lazy synchronized product of two automata over the same symbol set.
/// Components are totalized with an implicit sink (`None`) so that union
/// acceptance works; a pair of sinks is pruned.
pub struct ProductNfa<A: Automaton, B: Automaton<Sym = A::Sym>> {
    a: A,
    b: B,
    mode: ProductMode,
    syms: Vec<A::Sym>,
}

/// Builds the product; errors unless both symbol sets are identical as sets.
pub fn product<A, B>(a: A, b: B, mode: ProductMode) -> Result<ProductNfa<A, B>, AutomatonError>
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
    let syms = a.alphabet();
    Ok(ProductNfa { a, b, mode, syms })
}

impl<A, B> Automaton for ProductNfa<A, B>
where
    A: Automaton,
    B: Automaton<Sym = A::Sym>,
{
    type Sym = A::Sym;
    type St = (Option<A::St>, Option<B::St>);

    fn alphabet(&self) -> Vec<A::Sym> {
        self.syms.clone()
    }

    fn initials(&self) -> Vec<Self::St> {
        let mut out = Vec::new();
        let ia = self.a.initials();
        let ib = self.b.initials();
        match self.mode {
            ProductMode::Intersection => {
                for qa in &ia {
                    for qb in &ib {
                        out.push((Some(qa.clone()), Some(qb.clone())));
                    }
                }
            }
            ProductMode::Union => {
                // keep sides independent but synchronized; empty initial sets
                // become immediate sinks
                if ia.is_empty() {
                    for qb in &ib {
                        out.push((None, Some(qb.clone())));
                    }
                } else if ib.is_empty() {
                    for qa in &ia {
                        out.push((Some(qa.clone()), None));
                    }
                } else {
                    for qa in &ia {
                        for qb in &ib {
                            out.push((Some(qa.clone()), Some(qb.clone())));
                        }
                    }
                }
            }
        }
        out
    }

    fn succ(&self, st: &Self::St, sym: &A::Sym) -> Vec<Self::St> {
        let lefts: Vec<Option<A::St>> = match &st.0 {
            Some(qa) => {
                let s = self.a.succ(qa, sym);
                if s.is_empty() {
                    vec![None]
                } else {
                    s.into_iter().map(Some).collect()
                }
            }
            None => vec![None],
        };
        let rights: Vec<Option<B::St>> = match &st.1 {
            Some(qb) => {
                let s = self.b.succ(qb, sym);
                if s.is_empty() {
                    vec![None]
                } else {
                    s.into_iter().map(Some).collect()
                }
            }
            None => vec![None],
        };
        let mut out = Vec::new();
        for l in &lefts {
            for r in &rights {
                match self.mode {
                    ProductMode::Intersection if l.is_none() || r.is_none() => continue,
                    _ if l.is_none() && r.is_none() => continue,
                    _ => out.push((l.clone(), r.clone())),
                }
            }
        }
        out
    }

    fn is_accepting(&self, st: &Self::St) -> bool {
        let a = st.0.as_ref().map(|q| self.a.is_accepting(q)).unwrap_or(false);
        let b = st.1.as_ref().map(|q| self.b.is_accepting(q)).unwrap_or(false);
        match self.mode {
            ProductMode::Intersection => a && b,
            ProductMode::Union => a || b,
        }
    }
}

/// Image under a letter-to-letter morphism: relabels every transition.
pub struct RelabelImage<A: Automaton, S2> {
    a: A,
    map: HashMap<A::Sym, S2>,
    target: Vec<S2>,
}

/// `h` must be total on the source symbols; the language becomes `h(L(a))`.
pub fn relabel_image<A, S2>(a: A, h: &HashMap<A::Sym, S2>) -> Result<RelabelImage<A, S2>, AutomatonError>
where
    A: Automaton,
    S2: Clone + Eq + Hash + Ord + Debug,
{
    let mut target = Vec::new();
    for sym in a.alphabet() {
        match h.get(&sym) {
            Some(t) => {
                if !target.contains(t) {
                    target.push(t.clone());
                }
            }
            None => return Err(AutomatonError::PartialMorphism),
        }
    }
    target.sort();
    Ok(RelabelImage { a, map: h.clone(), target })
}

impl<A, S2> Automaton for RelabelImage<A, S2>
where
    A: Automaton,
    S2: Clone + Eq + Hash + Ord + Debug,
{
    type Sym = S2;
    type St = A::St;

    fn alphabet(&self) -> Vec<S2> {
        self.target.clone()
    }

    fn initials(&self) -> Vec<A::St> {
        self.a.initials()
    }

    fn succ(&self, st: &A::St, sym: &S2) -> Vec<A::St> {
        let mut out = Vec::new();
        for (src, dst) in &self.map {
            if dst == sym {
                out.extend(self.a.succ(st, src));
            }
        }
        out
    }

    fn is_accepting(&self, st: &A::St) -> bool {
        self.a.is_accepting(st)
    }
}

/// Preimage under a letter-to-letter morphism: the automaton over the source
/// symbols that defers to `a` on the image letters; recognizes `h⁻¹(L(a))`.
pub struct RelabelPreimage<A: Automaton, S1> {
    a: A,
    map: HashMap<S1, A::Sym>,
    source: Vec<S1>,
}

pub fn relabel_preimage<A, S1>(
    a: A,
    source: Vec<S1>,
    h: &HashMap<S1, A::Sym>,
) -> Result<RelabelPreimage<A, S1>, AutomatonError>
where
    A: Automaton,
    S1: Clone + Eq + Hash + Ord + Debug,
{
    for s in &source {
        if !h.contains_key(s) {
            return Err(AutomatonError::PartialMorphism);
        }
    }
    Ok(RelabelPreimage { a, map: h.clone(), source })
}

impl<A, S1> Automaton for RelabelPreimage<A, S1>
where
    A: Automaton,
    S1: Clone + Eq + Hash + Ord + Debug,
{
    type Sym = S1;
    type St = A::St;

    fn alphabet(&self) -> Vec<S1> {
        self.source.clone()
    }

    fn initials(&self) -> Vec<A::St> {
        self.a.initials()
    }

    fn succ(&self, st: &A::St, sym: &S1) -> Vec<A::St> {
        self.a.succ(st, &self.map[sym])
    }

    fn is_accepting(&self, st: &A::St) -> bool {
        self.a.is_accepting(st)
    }
}
