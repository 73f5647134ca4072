//! The inverse image of regular word languages under substitution sequences,
//! checked exhaustively against direct output evaluation.

use sstdelay::alphabet::{Alphabet, Letter, VarSet};
use sstdelay::automata::{inverse_sst, Automaton, ExplicitNfa};
use sstdelay::corpus;
use sstdelay::resync::marks::{marked_out, MarkedLetter, MarkedSubst, MARK1};
use sstdelay::resync::t_end_word_dfa;
use sstdelay::subst::{SstCtx, Substitution};

fn marked_universe(letters: &[Letter]) -> Vec<MarkedLetter> {
    let mut out = Vec::new();
    for &l in letters {
        for marks in 0..4u8 {
            out.push(MarkedLetter { letter: l, marks });
        }
    }
    out
}

/// "exactly one position is marked with mark 1" over any letters.
fn one_mark1(letters: &[Letter]) -> ExplicitNfa<MarkedLetter> {
    let syms = marked_universe(letters);
    let mut edges = Vec::new();
    for &s in &syms {
        if s.has(MARK1) {
            edges.push((0u32, s, 1u32));
        } else {
            edges.push((0, s, 0));
            edges.push((1, s, 1));
        }
    }
    ExplicitNfa::build(syms, 2, [0], [1], edges)
}

fn universal(letters: &[Letter]) -> ExplicitNfa<MarkedLetter> {
    let syms = marked_universe(letters);
    let edges: Vec<(u32, MarkedLetter, u32)> = syms.iter().map(|&s| (0, s, 0)).collect();
    ExplicitNfa::build(syms, 1, [0], [0], edges)
}

/// All words over the lift's marked-substitution alphabet, as id sequences.
fn all_marked_words(n_syms: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for s in 0..n_syms {
                let mut w2 = w.clone();
                w2.push(s);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[test]
fn single_append_marked_once() {
    // S = {O -> Oa}: the accepted 1-marked sequences are exactly (O->Oa)^n
    // with one mark, anywhere
    let ctx = SstCtx::new(Alphabet::new(["a"]).unwrap(), VarSet::new(["O"], "O").unwrap());
    let append = corpus::subst_from_compact(&ctx, "Oa");
    let p = one_mark1(&ctx.alphabet.letters_with_end());
    let lift = inverse_sst(&[append.clone()], 1, &p);
    // alphabet: the unmarked variant and the marked one
    assert_eq!(lift.alphabet.len(), 2);
    for word in all_marked_words(2, 4) {
        let n_marks: usize =
            word.iter().map(|&i| lift.alphabet.subs[i as usize].mark_count(MARK1)).sum();
        assert_eq!(lift.accepts(&word), n_marks == 1, "word {word:?}");
    }
}

#[test]
fn universal_predicate_accepts_everything() {
    let ctx = SstCtx::new(Alphabet::new(["a", "b"]).unwrap(), VarSet::new(["O", "X"], "O").unwrap());
    let s1 = corpus::subst_from_compact(&ctx, "Oa;X");
    let s2 = corpus::subst_from_compact(&ctx, "Ob;X");
    let p = universal(&ctx.alphabet.letters_with_end());
    let lift = inverse_sst(&[s1, s2], 1, &p);
    for word in all_marked_words(lift.alphabet.len() as u32, 3) {
        assert!(lift.accepts(&word), "word {word:?}");
    }
}

/// Exhaustive: acceptance ⇔ out⟦ν⟧ ∈ L(p), over |S| ≤ 3, |𝒳| ≤ 2,
/// length ≤ 3, for the endmarked-output predicate and a mark predicate.
#[test]
fn lift_agrees_with_direct_evaluation() {
    let ctx = SstCtx::new(Alphabet::new(["a", "b"]).unwrap(), VarSet::new(["O", "X"], "O").unwrap());
    let subs: Vec<Substitution> = vec![
        corpus::subst_from_compact(&ctx, "OXa;"),
        corpus::subst_from_compact(&ctx, "O;Xb"),
        corpus::subst_from_compact(&ctx, "O;X"),
    ];
    let endmarked: Vec<Substitution> = {
        let mut v = subs.clone();
        v.push(subs[0].endmarked());
        v
    };
    let alphabet = &ctx.alphabet;
    for p in [t_end_word_dfa(alphabet), one_mark1(&alphabet.letters_with_end())] {
        let lift = inverse_sst(&endmarked, 2, &p);
        for word in all_marked_words(lift.alphabet.len() as u32, 3) {
            let items: Vec<MarkedSubst> =
                word.iter().map(|&i| lift.alphabet.subs[i as usize].clone()).collect();
            let out = marked_out(&items);
            assert_eq!(
                lift.accepts(&word),
                p.accepts(&out),
                "items {items:?} out {out:?}"
            );
        }
    }
}

/// The endmarked-output language through the lift matches hand evaluation on
/// a two-substitution set.
#[test]
fn t_end_membership() {
    let ctx = SstCtx::new(Alphabet::new(["a", "b"]).unwrap(), VarSet::new(["O"], "O").unwrap());
    let plain = corpus::subst_from_compact(&ctx, "Oa");
    let marked_end = plain.endmarked();
    let p = t_end_word_dfa(&ctx.alphabet);
    let lift = inverse_sst(&[plain.clone(), marked_end.clone()], 0, &p);
    let plain_id = lift.alphabet.id_of(&MarkedSubst::plain(plain)).unwrap();
    let end_id = lift.alphabet.id_of(&MarkedSubst::plain(marked_end)).unwrap();
    // out ends with exactly one endmark iff the end-variant occurs exactly
    // once, at the last step
    assert!(lift.accepts(&[end_id]));
    assert!(lift.accepts(&[plain_id, end_id]));
    assert!(!lift.accepts(&[plain_id]));
    assert!(!lift.accepts(&[end_id, plain_id]));
    assert!(!lift.accepts(&[end_id, end_id]));
    assert!(!lift.accepts(&[]));
}

/// Content that is dropped never reaches the output: marks inside dropped
/// registers must not count.
#[test]
fn dropped_content_is_invisible() {
    let ctx = SstCtx::new(Alphabet::new(["a"]).unwrap(), VarSet::new(["O", "X"], "O").unwrap());
    // step 1 writes into X, step 2 drops X (X not used anywhere)
    let fill = corpus::subst_from_compact(&ctx, "O;Xa");
    let drop = corpus::subst_from_compact(&ctx, "O;");
    let keep = corpus::subst_from_compact(&ctx, "OX;");
    let p = one_mark1(&ctx.alphabet.letters_with_end());
    let lift = inverse_sst(&[fill.clone(), drop.clone(), keep.clone()], 1, &p);
    // mark the letter inside the fill step
    let marked_fill = {
        let m = sstdelay::resync::marks::placements(&fill, 1)
            .into_iter()
            .find(|m| m.mark_count(MARK1) == 1)
            .unwrap();
        lift.alphabet.id_of(&m).unwrap()
    };
    let plain_drop = lift.alphabet.id_of(&MarkedSubst::plain(drop)).unwrap();
    let plain_keep = lift.alphabet.id_of(&MarkedSubst::plain(keep)).unwrap();
    // fill(marked) then keep: the mark survives into the output
    assert!(lift.accepts(&[marked_fill, plain_keep]));
    // fill(marked) then drop: the marked letter never reaches the output
    assert!(!lift.accepts(&[marked_fill, plain_drop]));
}
