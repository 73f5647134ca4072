//! Interval pumping and the completeness toolkit.
//!
//! Pumping the interval [s,t) of a sequence duplicates the substitutions
//! s..t−1.  When the delay between two equal-output sequences is large, some
//! intervals can be pumped so that the two outputs become distinct; the
//! machinery here finds such intervals and validates the sufficient
//! conditions leading to them.

use thiserror::Error;

use crate::alphabet::Letter;
use crate::factor;
use crate::measure::{self, DelayError};
use crate::origin::{origin_map, weight_of};
use crate::seq::{SubstSeq, Word};
use crate::subst::{Substitution, Sym};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PumpError {
    #[error("interval [{s},{t}) violates 1 ≤ s < t < length {len}")]
    BadInterval { s: usize, t: usize, len: usize },
    #[error("position arguments out of range")]
    Bounds,
    #[error("delay precondition not met: delay_{{Cℓ}} = {delay} ≤ C²k = {threshold}")]
    DelayTooSmall { delay: usize, threshold: usize },
    #[error(transparent)]
    Delay(#[from] DelayError),
}

/// A pump interval [s, t) with 1 ≤ s < t < |λ| (times are 1-indexed).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PumpInterval {
    pub s: usize,
    pub t: usize,
}

impl PumpInterval {
    pub fn new(s: usize, t: usize, len: usize) -> Result<Self, PumpError> {
        if 1 <= s && s < t && t < len {
            Ok(PumpInterval { s, t })
        } else {
            Err(PumpError::BadInterval { s, t, len })
        }
    }
}

/// λ↑[s,t) = λ[1,t) · λ[s,|λ|]: duplicates the substitutions s..t−1.
pub fn pump_interval(l: &SubstSeq, iv: PumpInterval) -> Result<SubstSeq, PumpError> {
    let n = l.len();
    if !(1 <= iv.s && iv.s < iv.t && iv.t < n) {
        return Err(PumpError::BadInterval { s: iv.s, t: iv.t, len: n });
    }
    let mut items: Vec<Substitution> = l.items()[..iv.t - 1].to_vec();
    items.extend_from_slice(&l.items()[iv.s - 1..]);
    Ok(SubstSeq::new(l.ctx().clone(), items).expect("same context"))
}

/// u is p-periodic when u[i] = u[i+p] for all valid i (vacuously for short
/// words).
pub fn is_p_periodic(u: &[Letter], p: usize) -> bool {
    assert!(p >= 1);
    (0..u.len().saturating_sub(p)).all(|i| u[i] == u[i + p])
}

/// Outcome of the periodicity-merging check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FineWilf {
    /// The overlap is long enough: uvw is gcd(p,q)-periodic.
    Merged { period: usize },
    NotApplicable,
}

/// If uv is p-periodic, vw is q-periodic and |v| ≥ p + q − gcd(p,q), the
/// periodicities merge.
pub fn fine_wilf(u: &[Letter], v: &[Letter], w: &[Letter], p: usize, q: usize) -> FineWilf {
    assert!(p >= 1 && q >= 1);
    let uv: Word = u.iter().chain(v.iter()).copied().collect();
    let vw: Word = v.iter().chain(w.iter()).copied().collect();
    let g = gcd(p, q);
    if is_p_periodic(&uv, p) && is_p_periodic(&vw, q) && v.len() >= p + q - g {
        FineWilf::Merged { period: g }
    } else {
        FineWilf::NotApplicable
    }
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The decomposition α·β·γ of the shape word σ_{(s,n]}(O), with β the
/// minimal infix whose expansion under σ_{[0,s]} covers the output window
/// [j1, j2].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbcDecomposition {
    pub alpha: Vec<Sym>,
    pub beta: Vec<Sym>,
    pub gamma: Vec<Sym>,
    /// Expansion bounds of β: σ_{[0,s]}(β) = out[j1', j2'].
    pub j1p: usize,
    pub j2p: usize,
}

/// The shape word σ_{(s,n]}(O): the composition of the substitutions after
/// time `s` applied to the output variable (the bare variable when s = n).
pub fn shape_word(l: &SubstSeq, s: usize) -> Vec<Sym> {
    let ctx = l.ctx();
    let mut word = vec![Sym::Var(ctx.output())];
    for item in l.items()[s..].iter().rev() {
        word = item.apply_word(&word);
    }
    word
}

/// Computes the decomposition for 0 ≤ s ≤ |λ| and 1 ≤ j1 ≤ j2 ≤ |out|.
pub fn decompose_abc(l: &SubstSeq, s: usize, j1: usize, j2: usize) -> Result<AbcDecomposition, PumpError> {
    let out_len = l.out_word().len();
    if s > l.len() || j1 == 0 || j1 > j2 || j2 > out_len {
        return Err(PumpError::Bounds);
    }
    let shape = shape_word(l, s);
    let contents = l.contents_at(s);
    // expansion length of each shape symbol
    let lens: Vec<usize> = shape
        .iter()
        .map(|sym| match sym {
            Sym::Let(_) => 1,
            Sym::Var(v) => contents[v.0 as usize].len(),
        })
        .collect();
    debug_assert_eq!(lens.iter().sum::<usize>(), out_len);
    let mut start = 0usize; // positions before the current symbol
    let mut imin = None;
    let mut imax = None;
    let mut j1p = 0usize;
    let mut j2p = 0usize;
    for (i, len) in lens.iter().enumerate() {
        let lo = start + 1;
        let hi = start + len;
        if *len > 0 {
            if imin.is_none() && hi >= j1 {
                imin = Some(i);
                j1p = lo;
            }
            if lo <= j2 {
                imax = Some(i);
                j2p = hi;
            }
        }
        start = hi;
    }
    let (imin, imax) = (imin.expect("j1 within the output"), imax.expect("j2 within the output"));
    Ok(AbcDecomposition {
        alpha: shape[..imin].to_vec(),
        beta: shape[imin..=imax].to_vec(),
        gamma: shape[imax + 1..].to_vec(),
        j1p,
        j2p,
    })
}

/// Erasing morphism keeping only variables.
pub fn eta_vars(word: &[Sym]) -> Vec<Sym> {
    word.iter().copied().filter(|s| matches!(s, Sym::Var(_))).collect()
}

/// Pads both sequences: the last substitution's output image is wrapped with
/// `pad` copies of the padding letter on each side, so the output becomes
/// #^pad · out · #^pad without changing any origin before the last step.
pub fn pad_seq(l: &SubstSeq, pad: usize) -> SubstSeq {
    let ctx = l.ctx().clone();
    let mut items = l.items().to_vec();
    if let Some(last) = items.last_mut() {
        let o = ctx.output();
        let mut images: Vec<Vec<Sym>> = last.images().to_vec();
        let mut wrapped = vec![Sym::Let(Letter::PAD); pad];
        wrapped.extend_from_slice(&images[o.0 as usize]);
        wrapped.extend(std::iter::repeat(Sym::Let(Letter::PAD)).take(pad));
        images[o.0 as usize] = wrapped;
        *last = Substitution::new(ctx.clone(), images).expect("padding preserves copylessness");
    }
    SubstSeq::new(ctx, items).expect("same context")
}

/// The three sufficient conditions on an interval (s, s'] for the pumped
/// outputs to retain shifted copies of the window around the cut `j` of the
/// padded output (j1 = j − 2Cℓ, j2 = j + Cℓ).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Conditions {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3
    }
}

/// Evaluates the conditions on the PADDED pair (padding 2Cℓ per side) for
/// the interval (s, s'] and a Cℓ-cut `j` of the padded output.
pub fn check_conditions(
    l: &SubstSeq,
    m: &SubstSeq,
    s: usize,
    s_prime: usize,
    j: usize,
    c: usize,
    ell: usize,
) -> Result<Conditions, PumpError> {
    if s >= s_prime || s_prime >= l.len() {
        return Err(PumpError::Bounds);
    }
    let cl = c * ell;
    let lp = pad_seq(l, 2 * cl);
    let mp = pad_seq(m, 2 * cl);
    let out = lp.out_word();
    if j < 2 * cl + 1 || j + cl > out.len() {
        return Err(PumpError::Bounds);
    }
    let j1 = j - 2 * cl;
    let j2 = j + cl;
    let lo = origin_map(&lp);
    let mo = origin_map(&mp);
    let diff = |t: usize| -> usize { weight_of(&lo, j1, t).abs_diff(weight_of(&mo, j1, t)) };
    let c1 = diff(s) < diff(s_prime) && diff(s_prime) < diff(s) + cl;
    let dl_s = decompose_abc(&lp, s, j1, j2)?;
    let dl_sp = decompose_abc(&lp, s_prime, j1, j2)?;
    let dm_s = decompose_abc(&mp, s, j1, j2)?;
    let dm_sp = decompose_abc(&mp, s_prime, j1, j2)?;
    let c2 = dl_s.beta == dl_sp.beta && dm_s.beta == dm_sp.beta;
    let c3 = eta_vars(&dl_s.alpha) == eta_vars(&dl_sp.alpha)
        && eta_vars(&dm_s.alpha) == eta_vars(&dm_sp.alpha);
    Ok(Conditions { c1, c2, c3 })
}

/// Result of the window-shift search.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PropertyP {
    /// Shifts (x, y) placing copies of the window in both pumped outputs,
    /// with 0 < |x−y| ≤ Cℓ; all matches are reported, the first is the
    /// canonical witness.
    Holds { x: usize, y: usize, matches: Vec<(usize, usize)> },
    Fails,
}

/// Searches for shifts witnessing the window property on the PADDED pair for
/// the pump interval `iv` (in padded-sequence times) and padded cut `j`.
pub fn check_property_p(
    l: &SubstSeq,
    m: &SubstSeq,
    iv: PumpInterval,
    j: usize,
    c: usize,
    ell: usize,
) -> Result<PropertyP, PumpError> {
    let cl = c * ell;
    let lp = pad_seq(l, 2 * cl);
    let mp = pad_seq(m, 2 * cl);
    let out_l = lp.out_word();
    let out_m = mp.out_word();
    if j < 2 * cl + 1 || j + cl > out_l.len() {
        return Err(PumpError::Bounds);
    }
    let j1 = j - 2 * cl;
    let j2 = j + cl;
    let window_l: Word = out_l[j1 - 1..j2].to_vec();
    let window_m: Word = out_m[j1 - 1..j2].to_vec();
    let pump_l = pump_interval(&lp, iv)?.out_word();
    let pump_m = pump_interval(&mp, iv)?.out_word();
    let shifts = |target: &Word, window: &Word| -> Vec<usize> {
        let mut out = Vec::new();
        let mut x = 0usize;
        while j1 + x + window.len() - 1 <= target.len() {
            if &target[j1 + x - 1..j1 + x - 1 + window.len()] == window.as_slice() {
                out.push(x);
            }
            x += 1;
        }
        out
    };
    let xs = shifts(&pump_l, &window_l);
    let ys = shifts(&pump_m, &window_m);
    let mut matches = Vec::new();
    for &x in &xs {
        for &y in &ys {
            let d = x.abs_diff(y);
            if d > 0 && d <= cl {
                matches.push((x, y));
            }
        }
    }
    Ok(match matches.first() {
        Some(&(x, y)) => PropertyP::Holds { x, y, matches },
        None => PropertyP::Fails,
    })
}

/// Search report for pump witnesses.
#[derive(Clone, Debug)]
pub struct WitnessSearch {
    /// Times 0 ≤ t₁ < … < t_C with all pairwise pumped outputs distinct.
    pub witnesses: Option<Vec<usize>>,
    pub tuples_examined: usize,
}

/// Directly searches for C times such that pumping any pair (tᵢ, tⱼ] yields
/// distinct outputs.  Requires delay_{Cℓ}(l, m) > C²·k.
pub fn find_pump_witnesses(
    l: &SubstSeq,
    m: &SubstSeq,
    c: usize,
    k: usize,
    ell: usize,
) -> Result<WitnessSearch, PumpError> {
    let cl = c * ell;
    let delay = measure::delay_ell(l, m, cl)?;
    if delay <= c * c * k {
        return Err(PumpError::DelayTooSmall { delay, threshold: c * c * k });
    }
    let n = l.len();
    // candidate times 0..=n−2 so that every pumped interval is valid
    let candidates: Vec<usize> = (0..n.saturating_sub(1)).collect();
    let mut tuple: Vec<usize> = Vec::new();
    let mut examined = 0usize;
    fn distinct_outputs(l: &SubstSeq, m: &SubstSeq, ti: usize, tj: usize) -> bool {
        let iv = PumpInterval { s: ti + 1, t: tj + 1 };
        match (pump_interval(l, iv), pump_interval(m, iv)) {
            (Ok(lp), Ok(mp)) => lp.out_word() != mp.out_word(),
            _ => false,
        }
    }
    fn search(
        l: &SubstSeq,
        m: &SubstSeq,
        candidates: &[usize],
        from: usize,
        c: usize,
        tuple: &mut Vec<usize>,
        examined: &mut usize,
    ) -> bool {
        if tuple.len() == c {
            return true;
        }
        for (i, &t) in candidates.iter().enumerate().skip(from) {
            *examined += 1;
            if tuple.iter().all(|&prev| distinct_outputs(l, m, prev, t)) {
                tuple.push(t);
                if search(l, m, candidates, i + 1, c, tuple, examined) {
                    return true;
                }
                tuple.pop();
            }
        }
        false
    }
    let found = search(l, m, &candidates, 0, c, &mut tuple, &mut examined);
    Ok(WitnessSearch { witnesses: found.then_some(tuple), tuples_examined: examined })
}

/// The completeness constants computed from a substitution set: M₁ the size
/// of the largest substitution (total letters across its images), M₂ the
/// variable-arrangement bound, and the derived ℓ and k.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CompletenessConstants {
    pub m1: usize,
    pub m2: u128,
    pub ell: u128,
    pub k: u128,
}

/// ℓ = M₁M₂² and k = (6ℓ + 3)·M₁M₂² with M₂ = (|𝒳|+1)^{|𝒳|+1}·|𝒳|!.
/// Reported only; never fed into the automata constructions.
pub fn completeness_constants(subs: &[Substitution]) -> CompletenessConstants {
    let m1 = subs.iter().map(|s| s.letter_count()).max().unwrap_or(0);
    let nvars = subs.first().map(|s| s.ctx().vars.len()).unwrap_or(0) as u128;
    let mut m2: u128 = 1;
    for _ in 0..nvars + 1 {
        m2 *= nvars + 1;
    }
    for i in 1..=nvars {
        m2 *= i;
    }
    let ell = m1 as u128 * m2 * m2;
    let k = (6 * ell + 3) * m1 as u128 * m2 * m2;
    CompletenessConstants { m1, m2, ell, k }
}

/// Enumerates candidate (s, s', j) triples satisfying all three conditions
/// for the padded pair; used by the validation sweeps.
pub fn condition_witnesses(
    l: &SubstSeq,
    m: &SubstSeq,
    c: usize,
    ell: usize,
) -> Vec<(usize, usize, usize)> {
    let cl = c * ell;
    let lp = pad_seq(l, 2 * cl);
    let out = lp.out_word();
    let cuts = factor::cuts(&out, cl);
    let mut found = Vec::new();
    for &j in &cuts {
        if j < 2 * cl + 1 || j + cl > out.len() {
            continue;
        }
        for s in 0..l.len() {
            for s_prime in s + 1..l.len() {
                if let Ok(c3) = check_conditions(l, m, s, s_prime, j, c, ell) {
                    if c3.all() {
                        found.push((s, s_prime, j));
                    }
                }
            }
        }
    }
    found
}
