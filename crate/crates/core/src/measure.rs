//! Weight differences, the ℓ-delay, the resynchronizer membership oracle and
//! the auxiliary whole-run comparison measures.

use thiserror::Error;

use crate::alphabet::Letter;
use crate::factor;
use crate::origin::{origin_map, weight_of, OriginMap};
use crate::seq::{SubstSeq, Word};
use crate::subst::Substitution;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DelayError {
    #[error("sequences have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("outputs have different lengths ({left} vs {right})")]
    OutputLengthMismatch { left: usize, right: usize },
    #[error("outputs differ at position {position}")]
    OutputMismatch { position: usize },
    #[error("substitution at step {step} is not in the resynchronizer set")]
    OutsideSet { step: usize },
}

fn check_same_length(l: &SubstSeq, m: &SubstSeq) -> Result<(), DelayError> {
    if l.len() != m.len() {
        return Err(DelayError::LengthMismatch { left: l.len(), right: m.len() });
    }
    Ok(())
}

fn check_same_output(lw: &Word, mw: &Word) -> Result<(), DelayError> {
    for (i, (a, b)) in lw.iter().zip(mw.iter()).enumerate() {
        if a != b {
            return Err(DelayError::OutputMismatch { position: i + 1 });
        }
    }
    if lw.len() != mw.len() {
        return Err(DelayError::OutputLengthMismatch { left: lw.len(), right: mw.len() });
    }
    Ok(())
}

/// Per-time weight profile at a fixed output position bound `j`:
/// `profile[t] = weight_{j,t}` for `t ∈ [0, n]`.
fn weight_profile(origins: &OriginMap, j: usize, n: usize) -> Vec<usize> {
    let cap = j.min(origins.len());
    let mut hist = vec![0usize; n + 1];
    for &o in &origins.as_slice()[..cap] {
        hist[o] += 1;
    }
    let mut acc = 0usize;
    for h in hist.iter_mut() {
        acc += *h;
        *h = acc;
    }
    hist
}

/// max-diff_{j1,j2}(λ,μ) = max over t ∈ [1,n] of |weight_{j1,t}(λ) − weight_{j2,t}(μ)|.
pub fn max_diff(l: &SubstSeq, m: &SubstSeq, j1: usize, j2: usize) -> Result<usize, DelayError> {
    check_same_length(l, m)?;
    Ok(max_diff_of(&origin_map(l), &origin_map(m), j1, j2, l.len()))
}

/// As [`max_diff`], over precomputed origin maps.
pub fn max_diff_of(lo: &OriginMap, mo: &OriginMap, j1: usize, j2: usize, n: usize) -> usize {
    let pl = weight_profile(lo, j1, n);
    let pm = weight_profile(mo, j2, n);
    (1..=n).map(|t| pl[t].abs_diff(pm[t])).max().unwrap_or(0)
}

/// delay_ℓ(λ,μ): the maximal weight difference at the cuts of the common
/// output.  Defined only for equal-length sequences with equal outputs.
pub fn delay_ell(l: &SubstSeq, m: &SubstSeq, ell: usize) -> Result<usize, DelayError> {
    assert!(ell >= 1, "period bound must be at least 1");
    check_same_length(l, m)?;
    let lw = l.out_word();
    check_same_output(&lw, &m.out_word())?;
    let lo = origin_map(l);
    let mo = origin_map(m);
    Ok(factor::cuts(&lw, ell)
        .into_iter()
        .map(|j| max_diff_of(&lo, &mo, j, j, l.len()))
        .max()
        .unwrap_or(0))
}

/// The whole-run comparison measures.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LegacyKind {
    /// Maximal per-position weight difference over all positions and times.
    Positional,
    /// Maximal size of the symmetric difference of the produced position sets.
    Symmetric,
    /// Maximal difference of the produced output sizes.
    Size,
}

/// The three whole-run measures, over equal-length, equal-output sequences.
/// Partial outputs at time `t` are the sets of final positions already
/// produced, read off the origin maps.
pub fn delay_legacy(l: &SubstSeq, m: &SubstSeq, kind: LegacyKind) -> Result<usize, DelayError> {
    check_same_length(l, m)?;
    let lw = l.out_word();
    check_same_output(&lw, &m.out_word())?;
    let lo = origin_map(l);
    let mo = origin_map(m);
    let n = l.len();
    let len = lw.len();
    let result = match kind {
        LegacyKind::Positional => (0..=len)
            .map(|j| max_diff_of(&lo, &mo, j, j, n))
            .max()
            .unwrap_or(0),
        LegacyKind::Symmetric => (1..=n)
            .map(|t| {
                (1..=len)
                    .filter(|&i| (lo.origin(i) <= t) != (mo.origin(i) <= t))
                    .count()
            })
            .max()
            .unwrap_or(0),
        LegacyKind::Size => (1..=n)
            .map(|t| weight_of(&lo, len, t).abs_diff(weight_of(&mo, len, t)))
            .max()
            .unwrap_or(0),
    };
    Ok(result)
}

/// The parameter triple (k, ℓ, S) of a delay resynchronizer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResyncParams {
    pub k: usize,
    pub ell: usize,
    subs: Vec<Substitution>,
}

impl ResyncParams {
    /// Deduplicates `subs` structurally; requires `ell ≥ 1` and a nonempty,
    /// context-consistent set.
    pub fn new(k: usize, ell: usize, subs: Vec<Substitution>) -> Self {
        assert!(ell >= 1, "period bound must be at least 1");
        assert!(!subs.is_empty(), "substitution set must be nonempty");
        let ctx = subs[0].ctx().clone();
        let mut dedup: Vec<Substitution> = Vec::new();
        for s in subs {
            assert_eq!(**s.ctx(), *ctx, "substitution set spans several contexts");
            assert!(!s.contains_endmark(), "substitution set must not contain the endmarker");
            if !dedup.contains(&s) {
                dedup.push(s);
            }
        }
        ResyncParams { k, ell, subs: dedup }
    }

    pub fn subs(&self) -> &[Substitution] {
        &self.subs
    }

    pub fn ctx(&self) -> &std::sync::Arc<crate::subst::SstCtx> {
        self.subs[0].ctx()
    }

    /// S′ = S ∪ Φ(S): the set extended with endmarked copies.
    pub fn endmarked_set(&self) -> Vec<Substitution> {
        let mut out = self.subs.clone();
        out.extend(self.subs.iter().map(Substitution::endmarked));
        out
    }

    pub fn index_of(&self, s: &Substitution) -> Option<usize> {
        self.subs.iter().position(|t| t == s)
    }
}

/// Ground truth for membership in D_{k,ℓ,S}: equal lengths, equal outputs and
/// delay_ℓ ≤ k.  Errors when a substitution lies outside S.
pub fn oracle_in_resync(l: &SubstSeq, m: &SubstSeq, p: &ResyncParams) -> Result<bool, DelayError> {
    for seq in [l, m] {
        for (i, s) in seq.items().iter().enumerate() {
            if p.index_of(s).is_none() {
                return Err(DelayError::OutsideSet { step: i + 1 });
            }
        }
    }
    if l.len() != m.len() {
        return Ok(false);
    }
    if l.out_word() != m.out_word() {
        return Ok(false);
    }
    Ok(delay_ell(l, m, p.ell).expect("preconditions checked") <= p.k)
}

/// Letters of the output produced up to time `t`, as (position, letter) pairs.
pub fn partial_output(l: &SubstSeq, t: usize) -> Vec<(usize, Letter)> {
    let w = l.out_word();
    let o = origin_map(l);
    (1..=w.len()).filter(|&i| o.origin(i) <= t).map(|i| (i, w[i - 1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::origin::weight;

    #[test]
    fn pinned_weights_and_diffs() {
        let l3 = corpus::lambda_t3();
        let l4 = corpus::lambda_t4();
        assert_eq!(weight(&l3, 2, 3), 0);
        assert_eq!(weight(&l4, 2, 3), 2);
        assert_eq!(max_diff(&l3, &l4, 4, 4).unwrap(), 3);
        assert_eq!(max_diff(&l3, &l4, 6, 6).unwrap(), 1);
        assert_eq!(max_diff(&l3, &l4, 8, 8).unwrap(), 0);
        assert_eq!(max_diff(&l3, &l4, 0, 0).unwrap(), 0);
        assert_eq!(max_diff(&l3, &l3, 5, 5).unwrap(), 0);
        assert_eq!(delay_ell(&l3, &l4, 1).unwrap(), 3);
        assert_eq!(delay_ell(&l3, &l3, 1).unwrap(), 0);
        // symmetry
        assert_eq!(delay_ell(&l4, &l3, 1).unwrap(), 3);
    }

    #[test]
    fn weight_totals() {
        let l3 = corpus::lambda_t3();
        let out_len = l3.out_word().len();
        for j in 0..=out_len + 2 {
            assert_eq!(weight(&l3, j, l3.len()), j.min(out_len));
            assert_eq!(weight(&l3, j, 0), 0);
        }
    }

    #[test]
    fn delay_rejects_incomparable_pairs() {
        let l3 = corpus::lambda_t3();
        let short = {
            let items = l3.items()[..4].to_vec();
            SubstSeq::new(l3.ctx().clone(), items).unwrap()
        };
        assert_eq!(
            delay_ell(&l3, &short, 1).unwrap_err(),
            DelayError::LengthMismatch { left: 8, right: 4 }
        );
        // same length, different outputs: a^2 b a^4 vs a^3 b a^3
        let other = corpus::t3_seq(4, 2);
        assert_eq!(
            delay_ell(&l3, &other, 1).unwrap_err(),
            DelayError::OutputMismatch { position: 3 }
        );
    }

    #[test]
    fn oracle_and_params() {
        let l3 = corpus::lambda_t3();
        let l4 = corpus::lambda_t4();
        let t3 = corpus::t3();
        let t4 = corpus::t4();
        let mut set = t3.substitution_set();
        for s in t4.substitution_set() {
            if !set.contains(&s) {
                set.push(s);
            }
        }
        // the two transducers share their substitution alphabet
        assert_eq!(set.len(), 4);
        let p3 = ResyncParams::new(3, 1, set.clone());
        let p2 = ResyncParams::new(2, 1, set.clone());
        assert!(oracle_in_resync(&l3, &l4, &p3).unwrap());
        assert!(!oracle_in_resync(&l3, &l4, &p2).unwrap());
        assert!(oracle_in_resync(&l3, &l3, &ResyncParams::new(0, 1, set.clone())).unwrap());
        // unequal outputs: false regardless of k
        let other = corpus::t3_seq(4, 2);
        assert!(!oracle_in_resync(&l3, &other, &ResyncParams::new(9, 1, set.clone())).unwrap());
        // items outside S: domain error
        let t1 = corpus::t1();
        let foreign = t1.substitution_set()[0].clone();
        let seq = SubstSeq::new(t1.ctx().clone(), vec![foreign]).unwrap();
        assert!(matches!(
            oracle_in_resync(&seq, &seq, &ResyncParams::new(0, 1, set)),
            Err(DelayError::OutsideSet { .. })
        ));
    }

    #[test]
    fn legacy_measures_on_reference_runs() {
        let r = corpus::fig_run;
        assert_eq!(delay_legacy(&r(1), &r(2), LegacyKind::Positional).unwrap(), 2);
        assert_eq!(delay_legacy(&r(2), &r(3), LegacyKind::Symmetric).unwrap(), 8);
        assert_eq!(delay_legacy(&r(4), &r(5), LegacyKind::Symmetric).unwrap(), 8);
        assert_eq!(delay_legacy(&r(2), &r(4), LegacyKind::Symmetric).unwrap(), 4);
        assert_eq!(delay_legacy(&r(3), &r(5), LegacyKind::Symmetric).unwrap(), 4);
        for i in 2..=5 {
            for j in 2..=5 {
                assert_eq!(delay_legacy(&r(i), &r(j), LegacyKind::Size).unwrap(), 0);
            }
        }
    }

    /// One-variable append vs prepend: the cut-based delay stays 0 although
    /// interior positional weights diverge linearly.
    #[test]
    fn append_vs_prepend_has_zero_cut_delay() {
        let (ctx, _) = corpus::seq_from_images(&["O"], &["a"], &["O"], "O");
        let append = corpus::subst_from_compact(&ctx, "Oa");
        let prepend = corpus::subst_from_compact(&ctx, "aO");
        let fin = Substitution::identity(&ctx);
        for n in 0..=10usize {
            let mut li = vec![append.clone(); n];
            li.push(fin.clone());
            let mut mi = vec![prepend.clone(); n];
            mi.push(fin.clone());
            let l = SubstSeq::new(ctx.clone(), li).unwrap();
            let m = SubstSeq::new(ctx.clone(), mi).unwrap();
            assert_eq!(delay_ell(&l, &m, 1).unwrap(), 0, "n = {n}");
            if n >= 2 {
                let mid = max_diff(&l, &m, n / 2, n / 2).unwrap();
                assert_eq!(mid, n / 2, "interior divergence at n = {n}");
            }
        }
    }
}
