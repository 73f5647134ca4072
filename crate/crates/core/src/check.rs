//! The aggregated self-check: every pinned fact and oracle sweep, exposed to
//! the command-line `corpus-check` and the acceptance suite.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alphabet::{Alphabet, VarSet};
use crate::automata::Budget;
use crate::corpus;
use crate::factor;
use crate::measure::{self, LegacyKind, ResyncParams};
use crate::origin::origin_map;
use crate::resync::build_resync;
use crate::seq::SubstSeq;
use crate::subst::{SstCtx, Substitution, Sym};

/// A deliberate fault injected by the mutation tests.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mutation {
    /// Corrupts t4's bridge transition (it appends an extra letter).
    CorruptT4Bridge,
    /// Skews the delay arithmetic by one.
    SkewDelay,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult { name: name.to_string(), pass, detail: detail.into() });
    }
}

pub struct CheckCfg {
    pub quick: bool,
    pub seed: u64,
    pub budget: Budget,
    pub mutation: Option<Mutation>,
}

impl Default for CheckCfg {
    fn default() -> Self {
        CheckCfg { quick: false, seed: 0x5eed, budget: Budget::default(), mutation: None }
    }
}

fn mutated_t4(cfg: &CheckCfg) -> crate::sst::Sst {
    let t4 = corpus::t4();
    if cfg.mutation != Some(Mutation::CorruptT4Bridge) {
        return t4;
    }
    // replace the bridge (identity) substitution with one appending a letter
    let ctx = t4.ctx().clone();
    let bridge = corpus::subst_from_tokens(&ctx, "X1;X2");
    let skewed = corpus::subst_from_tokens(&ctx, "X1;X2 a");
    let transitions = t4
        .transitions()
        .iter()
        .map(|(q, a, q2, s)| {
            let s2 = if *s == bridge && q != q2 { skewed.clone() } else { s.clone() };
            (*q, *a, *q2, s2)
        })
        .collect();
    let final_out = t4
        .final_states()
        .iter()
        .map(|&q| (q, t4.final_output(q).unwrap().clone()))
        .collect();
    crate::sst::Sst::new(
        t4.name.clone(),
        ctx,
        t4.states().to_vec(),
        t4.initial().iter().copied(),
        t4.final_states().iter().copied(),
        transitions,
        final_out,
    )
    .expect("mutated transducer is well-formed")
}

fn delay1(cfg: &CheckCfg, l: &SubstSeq, m: &SubstSeq) -> usize {
    let d = measure::delay_ell(l, m, 1).expect("comparable sequences");
    if cfg.mutation == Some(Mutation::SkewDelay) {
        d + 1
    } else {
        d
    }
}

/// Random copyless substitution sets for the sweeps.
pub fn random_substitution_sets(seed: u64) -> Vec<Vec<Substitution>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::new();
    // one single-variable set, two two-variable sets
    for (nvars, size) in [(1usize, 2usize), (2, 3), (2, 3)] {
        let vars: Vec<String> = (0..nvars).map(|i| if i == 0 { "O".into() } else { format!("X{i}") }).collect();
        let ctx = SstCtx::new(
            Alphabet::new(["a", "b"]).unwrap(),
            VarSet::new(vars, "O").unwrap(),
        );
        loop {
            let set: Vec<Substitution> =
                (0..size).map(|_| random_copyless(&mut rng, &ctx, 2)).collect();
            let mut dedup = Vec::new();
            for s in set {
                if !dedup.contains(&s) {
                    dedup.push(s);
                }
            }
            if dedup.len() < size {
                continue;
            }
            // keep sets that produce equal-output pairs at small lengths so
            // the sweeps exercise both answers
            let params = ResyncParams::new(0, 1, dedup.clone());
            let mut positives = 0usize;
            for (l, m) in all_pairs(&params, 3) {
                if measure::oracle_in_resync(&l, &m, &params).unwrap() && l != m {
                    positives += 1;
                }
            }
            if positives >= 2 {
                sets.push(dedup);
                break;
            }
        }
    }
    sets
}

/// A random copyless substitution with images of at most `max_letters`
/// letters between variables.
pub fn random_copyless(rng: &mut ChaCha8Rng, ctx: &Arc<SstCtx>, max_letters: usize) -> Substitution {
    let letters: Vec<_> = ctx.alphabet.letters().collect();
    let nvars = ctx.vars.len();
    // distribute each variable into a random image (or drop it), in a random slot
    loop {
        let mut images: Vec<Vec<Sym>> = vec![Vec::new(); nvars];
        for v in ctx.vars.vars() {
            if rng.gen_bool(0.85) {
                let target = rng.gen_range(0..nvars);
                images[target].push(Sym::Var(v));
            }
        }
        for img in images.iter_mut() {
            let extra = rng.gen_range(0..=max_letters);
            for _ in 0..extra {
                let pos = rng.gen_range(0..=img.len());
                img.insert(pos, Sym::Let(letters[rng.gen_range(0..letters.len())]));
            }
        }
        if let Ok(s) = Substitution::new(ctx.clone(), images) {
            return s;
        }
    }
}

/// All equal-length pairs of sequences over S up to the given length.
pub fn all_pairs(params: &ResyncParams, max_len: usize) -> Vec<(SubstSeq, SubstSeq)> {
    let ctx = params.ctx().clone();
    let subs = params.subs();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Substitution>> = vec![Vec::new()];
    for len in 0..=max_len {
        let seqs: Vec<SubstSeq> = layer
            .iter()
            .map(|items| SubstSeq::new(ctx.clone(), items.clone()).unwrap())
            .collect();
        for l in &seqs {
            for m in &seqs {
                out.push((l.clone(), m.clone()));
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for items in &layer {
            for s in subs {
                let mut it = items.clone();
                it.push(s.clone());
                next.push(it);
            }
        }
        layer = next;
    }
    out
}

/// Exhaustive automaton-vs-oracle agreement for one parameter set; returns
/// the number of disagreements.
pub fn resync_sweep(params: &ResyncParams, max_len: usize, budget: Budget) -> Result<usize, String> {
    let built = build_resync(params, budget).map_err(|e| e.to_string())?;
    let pairs = all_pairs(params, max_len);
    let bad = pairs
        .par_iter()
        .filter(|(l, m)| {
            let oracle = measure::oracle_in_resync(l, m, params).unwrap();
            built.contains(l, m) != oracle
        })
        .count();
    Ok(bad)
}

/// Runs the aggregated checks.
pub fn corpus_check(cfg: &CheckCfg) -> Report {
    let mut report = Report::default();
    let start = Instant::now();

    // pinned facts
    let ab = Alphabet::new(["a", "b", "c"]).unwrap();
    let u = ab.parse_compact("aaababcbabaaaaa").unwrap();
    report.push(
        "cut_2(aaababcbabaaaaa) = {3,5,7,11,15}",
        factor::cuts(&u, 2) == vec![3, 5, 7, 11, 15],
        format!("{:?}", factor::cuts(&u, 2)),
    );
    let v = ab.parse_compact("aaabaaa").unwrap();
    let f = factor::factorize(&v, 1);
    report.push(
        "1-factorization of aaabaaa = aaa|b|aaa",
        f.cuts == vec![3, 4, 7],
        format!("cuts {:?}", f.cuts),
    );

    let lt3 = corpus::lambda_t3();
    let lt4 = mutated_lambda_t4(cfg);
    report.push("origin_t3(1) = 5", origin_map(&lt3).origin(1) == 5, "");
    report.push("origin_t4(1) = 1", origin_map(&lt4).origin(1) == 1, "");
    report.push(
        "weight_{2,3}: 0 and 2",
        crate::origin::weight(&lt3, 2, 3) == 0 && crate::origin::weight(&lt4, 2, 3) == 2,
        "",
    );
    let md = |j| measure::max_diff(&lt3, &lt4, j, j).unwrap();
    report.push("max-diff 4/6/8 = 3/1/0", md(4) == 3 && md(6) == 1 && md(8) == 0, "");
    report.push("delay_1(t3, t4) = 3", delay1(cfg, &lt3, &lt4) == 3, "");

    // composition pinned example
    {
        let ctx = SstCtx::new(Alphabet::new(["a", "b", "c"]).unwrap(), VarSet::new(["X"], "X").unwrap());
        let s1 = corpus::subst_from_compact(&ctx, "");
        let s2 = corpus::subst_from_compact(&ctx, "aX");
        let s3 = corpus::subst_from_compact(&ctx, "bXc");
        let seq = SubstSeq::new(ctx.clone(), vec![s1, s2, s3]).unwrap();
        report.push(
            "composition example yields bac",
            ctx.alphabet.render(&seq.out_word()) == "bac",
            "",
        );
    }

    // whole-run measures on the reference runs
    {
        let r = corpus::fig_run;
        let leg = |a: usize, b: usize, kind| measure::delay_legacy(&r(a), &r(b), kind).unwrap();
        report.push("positional delay(ρ1,ρ2) = 2", leg(1, 2, LegacyKind::Positional) == 2, "");
        report.push(
            "delay_0 pairs 8/8/4/4",
            leg(2, 3, LegacyKind::Symmetric) == 8
                && leg(4, 5, LegacyKind::Symmetric) == 8
                && leg(2, 4, LegacyKind::Symmetric) == 4
                && leg(3, 5, LegacyKind::Symmetric) == 4,
            "",
        );
        let mut size_ok = true;
        for i in 2..=5 {
            for j in 2..=5 {
                size_ok &= leg(i, j, LegacyKind::Size) == 0;
            }
        }
        report.push("delay_∞ = 0 on ρ2..ρ5", size_ok, "");
    }

    // resynchronizer sweeps
    let sweep_len = if cfg.quick { 3 } else { 4 };
    let mut sweep_sets: Vec<(String, Vec<Substitution>)> = Vec::new();
    {
        let t1 = corpus::t1();
        let t2 = corpus::t2();
        let ctx = crate::decide::union_context(&t1, &t2).unwrap();
        let mut set: Vec<Substitution> = t1.substitution_set().iter().map(|s| s.embed(&ctx)).collect();
        for s in t2.substitution_set() {
            let e = s.embed(&ctx);
            if !set.contains(&e) {
                set.push(e);
            }
        }
        sweep_sets.push(("t1 ∪ t2".into(), set));
    }
    {
        let t3 = corpus::t3();
        let t4 = mutated_t4(cfg);
        let ctx = crate::decide::union_context(&t3, &t4).unwrap();
        let mut set: Vec<Substitution> = t3.substitution_set().iter().map(|s| s.embed(&ctx)).collect();
        for s in t4.substitution_set() {
            let e = s.embed(&ctx);
            if !set.contains(&e) {
                set.push(e);
            }
        }
        sweep_sets.push(("t3 ∪ t4".into(), set));
    }
    for (i, set) in random_substitution_sets(cfg.seed).into_iter().enumerate() {
        sweep_sets.push((format!("random set {i}"), set));
    }
    let ells: &[usize] = if cfg.quick { &[1] } else { &[1, 2] };
    let ks: &[usize] = if cfg.quick { &[0, 1] } else { &[0, 1, 2] };
    for (name, set) in &sweep_sets {
        for &ell in ells {
            for &k in ks {
                if cfg.quick && set.len() > 4 {
                    continue;
                }
                let params = ResyncParams::new(k, ell, set.clone());
                match resync_sweep(&params, sweep_len, cfg.budget) {
                    Ok(0) => report.push(
                        &format!("resynchronizer sweep {name} k={k} ℓ={ell}"),
                        true,
                        "",
                    ),
                    Ok(bad) => report.push(
                        &format!("resynchronizer sweep {name} k={k} ℓ={ell}"),
                        false,
                        format!("{bad} disagreements"),
                    ),
                    Err(e) => report.push(
                        &format!("resynchronizer sweep {name} k={k} ℓ={ell}"),
                        false,
                        e,
                    ),
                }
            }
        }
    }

    // decision procedures on the corpus
    {
        let t1 = corpus::t1();
        let t2 = corpus::t2();
        let v = crate::decide::check_equivalence(&t1, &t2, 0, 1, cfg.budget);
        report.push(
            "t1 ≡_{0,1} t2",
            v.map(|v| v.holds()).unwrap_or(false),
            "",
        );
        let t3 = corpus::t3();
        let t4 = mutated_t4(cfg);
        let ks_incl: &[usize] = if cfg.quick { &[0, 2] } else { &[0, 1, 2, 3] };
        for &k in ks_incl {
            let v = crate::decide::check_inclusion(&t3, &t4, k, 1, cfg.budget);
            let expected_fail = v.as_ref().map(|v| !v.holds()).unwrap_or(false);
            report.push(&format!("t3 ⊆_{{{k},1}} t4 fails"), expected_fail, "");
        }
    }

    // mutation sensitivity marker so the detail survives in reports
    if let Some(m) = cfg.mutation {
        report.push("mutation injected", true, format!("{m:?}"));
    }
    report.push("total time", true, format!("{:?}", start.elapsed()));
    report
}

fn mutated_lambda_t4(cfg: &CheckCfg) -> SubstSeq {
    let t4 = mutated_t4(cfg);
    let ctx = t4.ctx().clone();
    // the run on a^7 with both loops taken three times, from the transducer
    let a = ctx.alphabet.lookup("a").unwrap();
    let u = vec![a; 7];
    let runs = t4.enumerate_runs(&u);
    runs.into_iter()
        .find(|r| r.states.iter().filter(|&&q| q == 0).count() == 4)
        .map(|r| r.subs)
        .expect("t4 has the balanced run on a^7")
}
