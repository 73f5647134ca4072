//! Automata operations against brute-force language enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sstdelay::automata::*;

type Sym = char;

fn random_nfa(rng: &mut ChaCha8Rng, n_states: usize) -> ExplicitNfa<Sym> {
    let syms = vec!['a', 'b'];
    let mut edges = Vec::new();
    for q in 0..n_states as u32 {
        for &s in &syms {
            for q2 in 0..n_states as u32 {
                if rng.gen_bool(0.3) {
                    edges.push((q, s, q2));
                }
            }
        }
    }
    let accepting: Vec<u32> = (0..n_states as u32).filter(|_| rng.gen_bool(0.4)).collect();
    ExplicitNfa::build(syms, n_states, [0], accepting, edges)
}

fn lang(a: &impl Automaton<Sym = Sym>, n: usize) -> Vec<Vec<Sym>> {
    let mut l = enumerate_language(a, n);
    l.sort();
    l
}

#[test]
fn products_match_set_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let a = random_nfa(&mut rng, 4);
        let b = random_nfa(&mut rng, 4);
        let inter = product(a.clone(), b.clone(), ProductMode::Intersection).unwrap();
        let union = product(a.clone(), b.clone(), ProductMode::Union).unwrap();
        let la = lang(&a, 7);
        let lb = lang(&b, 7);
        let li = lang(&inter, 7);
        let lu = lang(&union, 7);
        let expect_i: Vec<Vec<Sym>> = la.iter().filter(|w| lb.contains(w)).cloned().collect();
        let mut expect_u: Vec<Vec<Sym>> = la.clone();
        for w in &lb {
            if !expect_u.contains(w) {
                expect_u.push(w.clone());
            }
        }
        expect_u.sort();
        assert_eq!(li, expect_i);
        assert_eq!(lu, expect_u);
    }
}

#[test]
fn star_intersection_example() {
    // L(a) = a*, L(b) = (aa)* -> intersection (aa)*
    let astar = ExplicitNfa::build(vec!['a', 'b'], 1, [0], [0], vec![(0, 'a', 0)]);
    let aastar = ExplicitNfa::build(vec!['a', 'b'], 2, [0], [0], vec![(0, 'a', 1), (1, 'a', 0)]);
    let inter = product(astar.clone(), aastar, ProductMode::Intersection).unwrap();
    for n in 0..=8 {
        let w = vec!['a'; n];
        assert_eq!(inter.accepts(&w), n % 2 == 0);
    }
    // product with the universal automaton leaves the language unchanged
    let universal = ExplicitNfa::build(vec!['a', 'b'], 1, [0], [0], vec![(0, 'a', 0), (0, 'b', 0)]);
    let same = product(astar.clone(), universal, ProductMode::Intersection).unwrap();
    assert_eq!(lang(&astar, 6), lang(&same, 6));
}

#[test]
fn complement_and_double_complement() {
    let budget = Budget::default();
    // complement of the empty language is universal
    let empty = ExplicitNfa::build(vec!['a', 'b'], 1, [0], Vec::<u32>::new(), vec![]);
    let comp = determinize_complement(&empty, budget).unwrap();
    assert_eq!(lang(&comp, 5).len(), 63);
    // complement of a* over {a,b} accepts exactly words containing b
    let astar = ExplicitNfa::build(vec!['a', 'b'], 1, [0], [0], vec![(0, 'a', 0)]);
    let comp = determinize_complement(&astar, budget).unwrap();
    let words = lang(&comp, 6);
    assert!(!words.is_empty());
    for w in words {
        assert!(w.contains(&'b'));
    }
    // double complement preserves membership
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let a = random_nfa(&mut rng, 4);
        let cc = {
            let c = determinize_complement(&a, budget).unwrap();
            determinize_complement(&c, budget).unwrap()
        };
        assert_eq!(lang(&a, 6), lang(&cc, 6));
    }
}

#[test]
fn determinize_is_idempotent_on_dfas() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let a = random_nfa(&mut rng, 4);
        let d1 = determinize(&a, Budget::default()).unwrap();
        let d2 = determinize(&d1, Budget::default()).unwrap();
        assert_eq!(lang(&d1, 6), lang(&d2, 6));
    }
}

#[test]
fn inclusion_agrees_with_enumeration() {
    let budget = Budget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let a = random_nfa(&mut rng, 4);
        let b = random_nfa(&mut rng, 4);
        let (fast, _) = inclusion(&a, &b, budget).unwrap();
        let slow = inclusion_naive(&a, &b, budget).unwrap();
        let la = lang(&a, 8);
        let lb = lang(&b, 8);
        let included_bounded = la.iter().all(|w| lb.contains(w));
        match (&fast, &slow) {
            (InclusionOutcome::Included, InclusionOutcome::Included) => {
                assert!(included_bounded);
            }
            (InclusionOutcome::Counterexample(w1), InclusionOutcome::Counterexample(w2)) => {
                assert_eq!(w1.len(), w2.len(), "both searches find shortest counterexamples");
                for w in [w1, w2] {
                    assert!(a.accepts(w));
                    assert!(!b.accepts(w));
                }
            }
            other => panic!("verdicts disagree: {other:?}"),
        }
    }
}

#[test]
fn inclusion_star_examples() {
    let budget = Budget::default();
    let astar = ExplicitNfa::build(vec!['a'], 1, [0], [0], vec![(0, 'a', 0)]);
    let aastar = ExplicitNfa::build(vec!['a'], 2, [0], [0], vec![(0, 'a', 1), (1, 'a', 0)]);
    assert!(matches!(inclusion(&astar, &astar, budget).unwrap().0, InclusionOutcome::Included));
    assert!(matches!(inclusion(&aastar, &astar, budget).unwrap().0, InclusionOutcome::Included));
    match inclusion(&astar, &aastar, budget).unwrap().0 {
        InclusionOutcome::Counterexample(w) => assert_eq!(w, vec!['a']),
        other => panic!("expected counterexample, got {other:?}"),
    }
}

#[test]
fn emptiness_witness_is_shortest() {
    let budget = Budget::default();
    let empty = ExplicitNfa::build(vec!['a'], 1, [0], Vec::<u32>::new(), vec![]);
    assert_eq!(emptiness_witness(&empty, budget).unwrap(), None);
    let ab = ExplicitNfa::build(vec!['a', 'b'], 3, [0], [2], vec![(0, 'a', 1), (1, 'b', 2)]);
    assert_eq!(emptiness_witness(&ab, budget).unwrap(), Some(vec!['a', 'b']));
}

#[test]
fn relabelings() {
    use std::collections::HashMap;
    // image: erase marks from pairs
    let marked = ExplicitNfa::build(
        vec![('a', true), ('a', false), ('b', false)],
        3,
        [0],
        [2],
        vec![(0, ('a', true), 1), (1, ('b', false), 2)],
    );
    let h: HashMap<(char, bool), char> =
        [(('a', true), 'a'), (('a', false), 'a'), (('b', false), 'b')].into_iter().collect();
    let image = relabel_image(marked.clone(), &h).unwrap();
    assert!(image.accepts(&['a', 'b']));
    assert!(!image.accepts(&['a', 'a']));
    // preimage then image contains the original language
    let pre = relabel_preimage(image, vec![('a', true), ('a', false), ('b', false)], &h).unwrap();
    for w in enumerate_language(&marked, 5) {
        assert!(pre.accepts(&w), "{w:?} lost");
    }
    // partial morphism is rejected
    let partial: HashMap<(char, bool), char> = [(('a', true), 'a')].into_iter().collect();
    assert!(relabel_image(marked, &partial).is_err());
}

#[test]
fn budget_errors_are_loud() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let a = random_nfa(&mut rng, 6);
    match determinize(&a, Budget::new(2)) {
        Err(AutomatonError::BudgetExceeded { budget: 2, .. }) => {}
        other => panic!("expected budget error, got {other:?}"),
    }
}

#[test]
fn lazy_and_materialized_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..10 {
        let a = random_nfa(&mut rng, 4);
        let b = random_nfa(&mut rng, 4);
        let lazy = product(a, b, ProductMode::Union).unwrap();
        let mat = materialize(&lazy, Budget::default()).unwrap();
        for w in lang(&lazy, 5) {
            assert!(mat.accepts(&w));
        }
        for w in lang(&mat, 5) {
            assert!(lazy.accepts(&w));
        }
    }
}
