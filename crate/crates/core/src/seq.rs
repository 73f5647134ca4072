//! Finite sequences of substitutions and their output word.
//!
//! The output of `σ₁σ₂⋯σ_m` is `(σ_ε ∘ σ₁ ∘ ⋯ ∘ σ_m)(O)`: the last
//! substitution is applied to the output variable first, earlier ones rewrite
//! through it, and σ_ε erases leftover variables.  Evaluation below runs the
//! equivalent forward register semantics, which also yields origins cheaply.

use std::sync::Arc;

use crate::alphabet::Letter;
use crate::subst::{SstCtx, SubstError, Substitution, Sym};

pub type Word = Vec<Letter>;

/// A sequence of substitutions over one shared context.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubstSeq {
    items: Vec<Substitution>,
    ctx: Arc<SstCtx>,
}

impl SubstSeq {
    pub fn new(ctx: Arc<SstCtx>, items: Vec<Substitution>) -> Result<Self, SubstError> {
        for item in &items {
            if !(Arc::ptr_eq(item.ctx(), &ctx) || **item.ctx() == *ctx) {
                return Err(SubstError::CtxMismatch);
            }
        }
        Ok(SubstSeq { items, ctx })
    }

    pub fn empty(ctx: Arc<SstCtx>) -> Self {
        SubstSeq { items: Vec::new(), ctx }
    }

    pub fn ctx(&self) -> &Arc<SstCtx> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Substitution] {
        &self.items
    }

    pub fn item(&self, t: usize) -> &Substitution {
        &self.items[t - 1]
    }

    pub fn push(&mut self, s: Substitution) {
        debug_assert!(Arc::ptr_eq(s.ctx(), &self.ctx) || **s.ctx() == *self.ctx);
        self.items.push(s);
    }

    /// Register contents after the first `t` substitutions (contents start
    /// empty, step `i` rewrites through substitution `i`).
    pub fn contents_at(&self, t: usize) -> Vec<Word> {
        let nvars = self.ctx.vars.len();
        let mut contents: Vec<Word> = vec![Vec::new(); nvars];
        for item in &self.items[..t] {
            let mut next: Vec<Word> = Vec::with_capacity(nvars);
            for v in self.ctx.vars.vars() {
                let mut w = Vec::new();
                for sym in item.image(v) {
                    match sym {
                        Sym::Let(l) => w.push(*l),
                        Sym::Var(x) => w.extend_from_slice(&contents[x.0 as usize]),
                    }
                }
                next.push(w);
            }
            contents = next;
        }
        contents
    }

    /// out⟦λ⟧: the content of the output variable after the whole sequence.
    pub fn out_word(&self) -> Word {
        let o = self.ctx.output();
        self.contents_at(self.len()).swap_remove(o.0 as usize)
    }

    /// Output letters annotated with the time producing them.
    pub fn out_annotated(&self) -> Vec<(Letter, usize)> {
        let nvars = self.ctx.vars.len();
        let mut contents: Vec<Vec<(Letter, usize)>> = vec![Vec::new(); nvars];
        for (i, item) in self.items.iter().enumerate() {
            let t = i + 1;
            let mut next: Vec<Vec<(Letter, usize)>> = Vec::with_capacity(nvars);
            for v in self.ctx.vars.vars() {
                let mut w = Vec::new();
                for sym in item.image(v) {
                    match sym {
                        Sym::Let(l) => w.push((*l, t)),
                        Sym::Var(x) => w.extend_from_slice(&contents[x.0 as usize]),
                    }
                }
                next.push(w);
            }
            contents = next;
        }
        let o = self.ctx.output();
        contents.swap_remove(o.0 as usize)
    }

    /// Right fold of the monoid composition: `σ₁ ∘ (σ₂ ∘ (… ∘ σ_m))`.
    pub fn compose_all(&self) -> Result<Substitution, SubstError> {
        let mut acc = Substitution::identity(&self.ctx);
        for item in self.items.iter().rev() {
            acc = item.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Left fold of the composition; agrees with [`Self::compose_all`].
    pub fn compose_all_left(&self) -> Result<Substitution, SubstError> {
        let mut acc = Substitution::identity(&self.ctx);
        for item in &self.items {
            acc = acc.compose(item)?;
        }
        Ok(acc)
    }

    /// Appends the endmarker to the last substitution's output image.
    /// Sequences get one exactly when nonempty.
    pub fn endmarked(&self) -> SubstSeq {
        let mut items = self.items.clone();
        if let Some(last) = items.last_mut() {
            *last = last.endmarked();
        }
        SubstSeq { items, ctx: self.ctx.clone() }
    }
}

/// out⟦λ⟧ as a free function.
pub fn out_word(l: &SubstSeq) -> Word {
    l.out_word()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{Alphabet, VarSet};

    fn ctx() -> Arc<SstCtx> {
        SstCtx::new(Alphabet::new(["a", "b"]).unwrap(), VarSet::new(["X"], "X").unwrap())
    }

    fn sub(c: &Arc<SstCtx>, img: &str) -> Substitution {
        let images = vec![img
            .chars()
            .map(|ch| {
                c.vars
                    .lookup(&ch.to_string())
                    .map(Sym::Var)
                    .unwrap_or_else(|| Sym::Let(c.alphabet.lookup(&ch.to_string()).unwrap()))
            })
            .collect()];
        Substitution::new(c.clone(), images).unwrap()
    }

    #[test]
    fn empty_sequence_outputs_epsilon() {
        let c = ctx();
        assert!(SubstSeq::empty(c).out_word().is_empty());
    }

    #[test]
    fn out_matches_composition() {
        let c = ctx();
        let seq = SubstSeq::new(c.clone(), vec![sub(&c, "aX"), sub(&c, "Xb"), sub(&c, "X")]).unwrap();
        // evaluation and both composition folds agree
        let direct = seq.out_word();
        let via_r = {
            let all = seq.compose_all().unwrap();
            let blank = Substitution::blank(&c);
            blank
                .apply_word(all.image(c.output()))
                .iter()
                .map(|s| match s {
                    Sym::Let(l) => *l,
                    Sym::Var(_) => unreachable!(),
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(direct, via_r);
        assert_eq!(seq.compose_all().unwrap(), seq.compose_all_left().unwrap());
        assert_eq!(c.alphabet.render(&direct), "ab");
    }
}
