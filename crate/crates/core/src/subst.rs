//! Copyless substitutions and their monoid.
//!
//! A substitution maps every variable to a word over variables and letters,
//! with the copyless restriction: the concatenation of all images contains
//! each variable at most once.  Composition `s1 ∘ s2` applies `s2` first and
//! then rewrites through `s1`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::alphabet::{Alphabet, Letter, VarId, VarSet};

/// One symbol of a substitution image: a variable or an output letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sym {
    Var(VarId),
    Let(Letter),
}

/// Shared alphabet + variable context for substitutions and SSTs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SstCtx {
    pub alphabet: Alphabet,
    pub vars: VarSet,
}

impl SstCtx {
    pub fn new(alphabet: Alphabet, vars: VarSet) -> Arc<Self> {
        Arc::new(SstCtx { alphabet, vars })
    }

    pub fn output(&self) -> VarId {
        self.vars.output()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("expected one image per variable ({expected}), got {got}")]
    Arity { expected: usize, got: usize },
    #[error("image refers to a symbol outside the context")]
    UnknownSymbol,
    #[error("variable {var:?} occurs twice (second occurrence in the image of {in_image_of:?} at offset {position})")]
    Copyless { var: String, in_image_of: String, position: usize },
    #[error("substitutions built over different contexts")]
    CtxMismatch,
}

/// Result of a copyless scan; `Violation` pinpoints the second occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CopylessCheck {
    Ok,
    Violation { var: VarId, in_image_of: VarId, position: usize },
}

/// Scans all images once and reports the first repeated variable.
pub fn validate_copyless(images: &[Vec<Sym>]) -> CopylessCheck {
    let mut seen = vec![false; images.len()];
    for (target, image) in images.iter().enumerate() {
        for (pos, sym) in image.iter().enumerate() {
            if let Sym::Var(v) = sym {
                let slot = &mut seen[v.0 as usize];
                if *slot {
                    return CopylessCheck::Violation {
                        var: *v,
                        in_image_of: VarId(target as u16),
                        position: pos,
                    };
                }
                *slot = true;
            }
        }
    }
    CopylessCheck::Ok
}

/// A copyless substitution over a shared context.
///
/// Equality and hashing are structural on the images; operations on two
/// substitutions require compatible contexts.
#[derive(Clone)]
pub struct Substitution {
    ctx: Arc<SstCtx>,
    images: Arc<Vec<Vec<Sym>>>,
}

impl PartialEq for Substitution {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images && self.ctx_compatible(other)
    }
}
impl Eq for Substitution {}

impl Hash for Substitution {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

impl PartialOrd for Substitution {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Substitution {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.images.cmp(&other.images)
    }
}

impl Substitution {
    pub fn new(ctx: Arc<SstCtx>, images: Vec<Vec<Sym>>) -> Result<Self, SubstError> {
        if images.len() != ctx.vars.len() {
            return Err(SubstError::Arity { expected: ctx.vars.len(), got: images.len() });
        }
        for image in &images {
            for sym in image {
                match sym {
                    Sym::Var(v) => {
                        if v.0 as usize >= ctx.vars.len() {
                            return Err(SubstError::UnknownSymbol);
                        }
                    }
                    Sym::Let(l) => {
                        if !l.is_reserved() && !ctx.alphabet.contains(*l) {
                            return Err(SubstError::UnknownSymbol);
                        }
                    }
                }
            }
        }
        if let CopylessCheck::Violation { var, in_image_of, position } = validate_copyless(&images) {
            return Err(SubstError::Copyless {
                var: ctx.vars.name(var).to_string(),
                in_image_of: ctx.vars.name(in_image_of).to_string(),
                position,
            });
        }
        Ok(Substitution { ctx, images: Arc::new(images) })
    }

    /// The identity substitution (neutral element of the monoid).
    pub fn identity(ctx: &Arc<SstCtx>) -> Self {
        let images = ctx.vars.vars().map(|v| vec![Sym::Var(v)]).collect();
        Substitution { ctx: ctx.clone(), images: Arc::new(images) }
    }

    /// σ_ε: every variable maps to the empty word.
    pub fn blank(ctx: &Arc<SstCtx>) -> Self {
        let images = ctx.vars.vars().map(|_| Vec::new()).collect();
        Substitution { ctx: ctx.clone(), images: Arc::new(images) }
    }

    pub fn ctx(&self) -> &Arc<SstCtx> {
        &self.ctx
    }

    fn ctx_compatible(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    pub fn image(&self, v: VarId) -> &[Sym] {
        &self.images[v.0 as usize]
    }

    pub fn images(&self) -> &[Vec<Sym>] {
        &self.images
    }

    /// Total number of letters across all images (the per-step output size).
    pub fn letter_count(&self) -> usize {
        self.images.iter().flatten().filter(|s| matches!(s, Sym::Let(_))).count()
    }

    /// Variables occurring in some image.
    pub fn occurring_vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        for image in self.images.iter() {
            for sym in image {
                if let Sym::Var(v) = sym {
                    out.push(*v);
                }
            }
        }
        out
    }

    /// `self ∘ inner`: applies `inner` first, then rewrites through `self`.
    pub fn compose(&self, inner: &Self) -> Result<Self, SubstError> {
        if !self.ctx_compatible(inner) {
            return Err(SubstError::CtxMismatch);
        }
        let images = inner
            .images
            .iter()
            .map(|image| self.apply_word(image))
            .collect::<Vec<_>>();
        debug_assert!(matches!(validate_copyless(&images), CopylessCheck::Ok));
        Ok(Substitution { ctx: self.ctx.clone(), images: Arc::new(images) })
    }

    /// The morphic extension: rewrites variables, keeps letters.
    pub fn apply_word(&self, word: &[Sym]) -> Vec<Sym> {
        let mut out = Vec::with_capacity(word.len());
        for sym in word {
            match sym {
                Sym::Var(v) => out.extend_from_slice(self.image(*v)),
                Sym::Let(_) => out.push(*sym),
            }
        }
        out
    }

    /// Appends the endmarker to the image of the output variable (Φ).
    pub fn endmarked(&self) -> Self {
        let mut images: Vec<Vec<Sym>> = self.images.as_ref().clone();
        images[self.ctx.output().0 as usize].push(Sym::Let(Letter::END));
        Substitution { ctx: self.ctx.clone(), images: Arc::new(images) }
    }

    /// Removes every endmarker occurrence from the images (Ψ).
    pub fn strip_endmark(&self) -> Self {
        let images = self
            .images
            .iter()
            .map(|image| image.iter().copied().filter(|s| *s != Sym::Let(Letter::END)).collect())
            .collect();
        Substitution { ctx: self.ctx.clone(), images: Arc::new(images) }
    }

    pub fn contains_endmark(&self) -> bool {
        self.images.iter().flatten().any(|s| *s == Sym::Let(Letter::END))
    }

    /// Re-embeds the substitution into a superset context; missing variables
    /// get identity images.  Panics if a referenced name is absent.
    pub fn embed(&self, ctx: &Arc<SstCtx>) -> Self {
        let var_map: Vec<VarId> = self
            .ctx
            .vars
            .vars()
            .map(|v| ctx.vars.lookup(self.ctx.vars.name(v)).expect("variable missing from target context"))
            .collect();
        let mut images: Vec<Vec<Sym>> = ctx.vars.vars().map(|v| vec![Sym::Var(v)]).collect();
        for v in self.ctx.vars.vars() {
            let image = self
                .image(v)
                .iter()
                .map(|sym| match sym {
                    Sym::Var(w) => Sym::Var(var_map[w.0 as usize]),
                    Sym::Let(l) if l.is_reserved() => Sym::Let(*l),
                    Sym::Let(l) => Sym::Let(
                        ctx.alphabet
                            .lookup(self.ctx.alphabet.name(*l))
                            .expect("letter missing from target context"),
                    ),
                })
                .collect();
            images[var_map[v.0 as usize].0 as usize] = image;
        }
        Substitution::new(ctx.clone(), images).expect("embedding preserves well-formedness")
    }

    pub fn render(&self) -> String {
        self.ctx
            .vars
            .vars()
            .map(|v| {
                let rhs = self
                    .image(v)
                    .iter()
                    .map(|sym| match sym {
                        Sym::Var(w) => self.ctx.vars.name(*w).to_string(),
                        Sym::Let(l) => self.ctx.alphabet.name(*l).to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                format!("{} = {}", self.ctx.vars.name(v), rhs)
            })
            .collect::<Vec<_>>()
            .join(" ; ")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.render())
    }
}

/// Free-standing composition, `s1 ∘ s2` (apply `s2` first).
pub fn compose(s1: &Substitution, s2: &Substitution) -> Result<Substitution, SubstError> {
    s1.compose(s2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx1() -> Arc<SstCtx> {
        SstCtx::new(
            Alphabet::new(["a", "b", "c"]).unwrap(),
            VarSet::new(["X"], "X").unwrap(),
        )
    }

    fn sub(ctx: &Arc<SstCtx>, spec: &[&str]) -> Substitution {
        // tiny helper: one token string per variable, chars are syms
        let images = spec
            .iter()
            .map(|s| {
                s.chars()
                    .map(|c| {
                        if let Some(v) = ctx.vars.lookup(&c.to_string()) {
                            Sym::Var(v)
                        } else {
                            Sym::Let(ctx.alphabet.lookup(&c.to_string()).unwrap())
                        }
                    })
                    .collect()
            })
            .collect();
        Substitution::new(ctx.clone(), images).unwrap()
    }

    #[test]
    fn composition_applies_inner_first() {
        let ctx = ctx1();
        let s1 = sub(&ctx, &[""]); // X -> ε
        let s2 = sub(&ctx, &["aX"]);
        let s3 = sub(&ctx, &["bXc"]);
        let inner = s2.compose(&s3).unwrap();
        assert_eq!(inner.image(VarId(0)), sub(&ctx, &["baXc"]).image(VarId(0)));
        let all = s1.compose(&inner).unwrap();
        // reading the image of X gives bac
        let expect = sub(&ctx, &["bac"]);
        assert_eq!(all.image(VarId(0)), expect.image(VarId(0)));
    }

    #[test]
    fn identity_is_neutral() {
        let ctx = ctx1();
        let id = Substitution::identity(&ctx);
        let s = sub(&ctx, &["aXb"]);
        assert_eq!(id.compose(&s).unwrap(), s);
        assert_eq!(s.compose(&id).unwrap(), s);
    }

    #[test]
    fn copyless_violations_are_pinpointed() {
        let ctx = SstCtx::new(
            Alphabet::new(["a", "b"]).unwrap(),
            VarSet::new(["X", "Y"], "X").unwrap(),
        );
        let x = VarId(0);
        let y = VarId(1);
        // X -> XY, Y -> ε is fine
        assert_eq!(
            validate_copyless(&[vec![Sym::Var(x), Sym::Var(y)], vec![]]),
            CopylessCheck::Ok
        );
        // X -> XX repeats X at offset 1
        assert_eq!(
            validate_copyless(&[vec![Sym::Var(x), Sym::Var(x)], vec![]]),
            CopylessCheck::Violation { var: x, in_image_of: x, position: 1 }
        );
        // X -> aY, Y -> Yb: the scan sees Y in X's image first, then again in Y's
        let a = Sym::Let(ctx.alphabet.lookup("a").unwrap());
        let b = Sym::Let(ctx.alphabet.lookup("b").unwrap());
        assert_eq!(
            validate_copyless(&[vec![a, Sym::Var(y)], vec![Sym::Var(y), b]]),
            CopylessCheck::Violation { var: y, in_image_of: y, position: 0 }
        );
        assert!(matches!(
            Substitution::new(ctx, vec![vec![Sym::Var(x), Sym::Var(x)], vec![]]),
            Err(SubstError::Copyless { .. })
        ));
    }

    #[test]
    fn endmark_roundtrip() {
        let ctx = ctx1();
        let s = sub(&ctx, &["Xa"]);
        let e = s.endmarked();
        assert!(e.contains_endmark());
        assert_eq!(e.strip_endmark(), s);
        assert_ne!(e, s);
    }
}
