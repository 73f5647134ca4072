//! The bundled example transducers, runs and helpers used across the tests
//! and the self-check.

use std::sync::Arc;

use crate::alphabet::{Alphabet, VarSet};
use crate::parse::{parse_seq, parse_sst};
use crate::seq::SubstSeq;
use crate::sst::Sst;
use crate::subst::{SstCtx, Substitution, Sym};

pub const T1_SST: &str = include_str!("../../../corpus/t1.sst");
pub const T2_SST: &str = include_str!("../../../corpus/t2.sst");
pub const T3_SST: &str = include_str!("../../../corpus/t3.sst");
pub const T4_SST: &str = include_str!("../../../corpus/t4.sst");
pub const REVERSE_SST: &str = include_str!("../../../corpus/reverse.sst");
pub const T3_RUN_SEQ: &str = include_str!("../../../corpus/t3_run.seq");
pub const T4_RUN_SEQ: &str = include_str!("../../../corpus/t4_run.seq");

pub const RATIONAL_PAIRS: [(&str, &str); 5] = [
    (
        include_str!("../../../corpus/rat1a.sst"),
        include_str!("../../../corpus/rat1b.sst"),
    ),
    (
        include_str!("../../../corpus/rat2a.sst"),
        include_str!("../../../corpus/rat2b.sst"),
    ),
    (
        include_str!("../../../corpus/rat3a.sst"),
        include_str!("../../../corpus/rat3b.sst"),
    ),
    (
        include_str!("../../../corpus/rat4a.sst"),
        include_str!("../../../corpus/rat4b.sst"),
    ),
    (
        include_str!("../../../corpus/rat5a.sst"),
        include_str!("../../../corpus/rat5b.sst"),
    ),
];

pub fn t1() -> Sst {
    parse_sst(T1_SST).expect("bundled t1 parses")
}

pub fn t2() -> Sst {
    parse_sst(T2_SST).expect("bundled t2 parses")
}

pub fn t3() -> Sst {
    parse_sst(T3_SST).expect("bundled t3 parses")
}

pub fn t4() -> Sst {
    parse_sst(T4_SST).expect("bundled t4 parses")
}

pub fn reverse_sst() -> Sst {
    parse_sst(REVERSE_SST).expect("bundled reverse parses")
}

pub fn rational_pair(i: usize) -> (Sst, Sst) {
    let (a, b) = RATIONAL_PAIRS[i];
    (parse_sst(a).expect("rational corpus parses"), parse_sst(b).expect("rational corpus parses"))
}

/// Resolves bundled transducer names for `seq over <name>` headers.
pub fn resolve_ctx(name: &str) -> Option<Arc<SstCtx>> {
    let sst = match name {
        "t1" => t1(),
        "t2" => t2(),
        "t3" => t3(),
        "t4" => t4(),
        "reverse" => reverse_sst(),
        _ => return None,
    };
    Some(sst.ctx().clone())
}

/// Builds a context plus substitution sequence from compact per-step image
/// strings: one `;`-separated group per variable, characters are symbols.
pub fn seq_from_images(
    steps: &[&str],
    letters: &[&str],
    vars: &[&str],
    output: &str,
) -> (Arc<SstCtx>, SubstSeq) {
    let ctx = SstCtx::new(
        Alphabet::new(letters.iter().copied()).unwrap(),
        VarSet::new(vars.iter().copied(), output).unwrap(),
    );
    let items = steps.iter().map(|step| subst_from_compact(&ctx, step)).collect();
    (ctx.clone(), SubstSeq::new(ctx, items).unwrap())
}

/// Parses `"X1;X2a"`-style compact images (groups in variable order).
pub fn subst_from_compact(ctx: &Arc<SstCtx>, step: &str) -> Substitution {
    let groups: Vec<&str> = step.split(';').collect();
    assert_eq!(groups.len(), ctx.vars.len(), "one image group per variable");
    let images = groups
        .iter()
        .map(|g| {
            g.chars()
                .map(|c| {
                    let tok = c.to_string();
                    ctx.vars
                        .lookup(&tok)
                        .map(Sym::Var)
                        .or_else(|| ctx.alphabet.lookup(&tok).map(Sym::Let))
                        .unwrap_or_else(|| panic!("unknown symbol {tok:?}"))
                })
                .collect()
        })
        .collect();
    Substitution::new(ctx.clone(), images).unwrap()
}

/// Compact images with multi-character variable names: groups are given in
/// variable order, tokens separated by spaces.
pub fn subst_from_tokens(ctx: &Arc<SstCtx>, step: &str) -> Substitution {
    let groups: Vec<&str> = step.split(';').collect();
    assert_eq!(groups.len(), ctx.vars.len());
    let images = groups
        .iter()
        .map(|g| {
            g.split_whitespace()
                .map(|tok| {
                    ctx.vars
                        .lookup(tok)
                        .map(Sym::Var)
                        .or_else(|| ctx.alphabet.lookup(tok).map(Sym::Let))
                        .unwrap_or_else(|| panic!("unknown symbol {tok:?}"))
                })
                .collect()
        })
        .collect();
    Substitution::new(ctx.clone(), images).unwrap()
}

/// The run of t3 on a^(m1+m2+1) taking the first loop `m1` times and the
/// second `m2` times (a sequence of length m1+m2+2 including the final
/// output substitution).
pub fn t3_seq(m1: usize, m2: usize) -> SubstSeq {
    let t = t3();
    let ctx = t.ctx().clone();
    let loop1 = subst_from_tokens(&ctx, "X1;X2 a");
    let bridge = subst_from_tokens(&ctx, "X1;X2");
    let loop2 = subst_from_tokens(&ctx, "X1 a;X2");
    let fin = subst_from_tokens(&ctx, "X1 b X2;");
    let mut items = vec![loop1; m1];
    items.push(bridge);
    items.extend(std::iter::repeat(loop2).take(m2));
    items.push(fin);
    SubstSeq::new(ctx, items).unwrap()
}

/// As [`t3_seq`] for t4 (left block first).
pub fn t4_seq(m1: usize, m2: usize) -> SubstSeq {
    let t = t4();
    let ctx = t.ctx().clone();
    let loop1 = subst_from_tokens(&ctx, "X1 a;X2");
    let bridge = subst_from_tokens(&ctx, "X1;X2");
    let loop2 = subst_from_tokens(&ctx, "X1;X2 a");
    let fin = subst_from_tokens(&ctx, "X1 b X2;");
    let mut items = vec![loop1; m1];
    items.push(bridge);
    items.extend(std::iter::repeat(loop2).take(m2));
    items.push(fin);
    SubstSeq::new(ctx, items).unwrap()
}

/// λ_{T3}: the run of t3 on a^7 with each loop taken three times.
pub fn lambda_t3() -> SubstSeq {
    parse_seq(T3_RUN_SEQ, resolve_ctx).expect("bundled run parses")
}

/// λ_{T4}: the run of t4 on a^7 with each loop taken three times.
pub fn lambda_t4() -> SubstSeq {
    parse_seq(T4_RUN_SEQ, resolve_ctx).expect("bundled run parses")
}

/// Context for the five fixed ways of producing a⁴b⁴ (variables O, A, B).
pub fn fig_ctx() -> Arc<SstCtx> {
    SstCtx::new(Alphabet::new(["a", "b"]).unwrap(), VarSet::new(["O", "A", "B"], "O").unwrap())
}

/// The five reference runs producing a⁴b⁴ in four steps, with origin rows
/// ρ1 = 22224444, ρ2 = 11223344, ρ3 = 44332211, ρ4 = 12344321, ρ5 = 43211234.
pub fn fig_run(i: usize) -> SubstSeq {
    let ctx = fig_ctx();
    let steps: Vec<&str> = match i {
        1 => vec!["O;A;B", "Oaaaa;A;B", "O;A;B", "Obbbb;A;B"],
        2 => vec!["Oaa;A;B", "Oaa;A;B", "Obb;A;B", "Obb;A;B"],
        3 => vec!["bbO;A;B", "bbO;A;B", "aaO;A;B", "aaO;A;B"],
        4 => vec!["O;Aa;bB", "O;Aa;bB", "O;Aa;bB", "AabB;;"],
        5 => vec!["O;aA;Bb", "O;aA;Bb", "O;aA;Bb", "aABb;;"],
        _ => panic!("runs are numbered 1..=5"),
    };
    let items = steps.iter().map(|s| subst_from_compact(&ctx, s)).collect();
    SubstSeq::new(ctx, items).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origin::origin_map;

    #[test]
    fn corpus_parses_and_roundtrips() {
        for text in [T1_SST, T2_SST, T3_SST, T4_SST, REVERSE_SST]
            .into_iter()
            .chain(RATIONAL_PAIRS.iter().flat_map(|(a, b)| [*a, *b]))
        {
            let t = parse_sst(text).unwrap();
            let re = parse_sst(&crate::parse::render_sst(&t)).unwrap();
            assert_eq!(t, re, "round-trip of {}", t.name);
        }
    }

    #[test]
    fn bundled_runs_match_generators() {
        assert_eq!(lambda_t3(), t3_seq(3, 3));
        assert_eq!(lambda_t4(), t4_seq(3, 3));
    }

    #[test]
    fn fig_runs_have_the_drawn_origin_rows() {
        let rows: [&[usize]; 5] = [
            &[2, 2, 2, 2, 4, 4, 4, 4],
            &[1, 1, 2, 2, 3, 3, 4, 4],
            &[4, 4, 3, 3, 2, 2, 1, 1],
            &[1, 2, 3, 4, 4, 3, 2, 1],
            &[4, 3, 2, 1, 1, 2, 3, 4],
        ];
        let ctx = fig_ctx();
        for (i, row) in rows.iter().enumerate() {
            let run = fig_run(i + 1);
            assert_eq!(ctx.alphabet.render(&run.out_word()), "aaaabbbb", "run {}", i + 1);
            assert_eq!(origin_map(&run).as_slice(), *row, "run {}", i + 1);
        }
    }

    #[test]
    fn rational_corpus_is_rational() {
        for i in 0..RATIONAL_PAIRS.len() {
            let (a, b) = rational_pair(i);
            assert!(a.is_rational(), "{}", a.name);
            assert!(b.is_rational(), "{}", b.name);
        }
    }
}
