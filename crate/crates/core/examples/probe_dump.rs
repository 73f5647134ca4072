use sstdelay::alphabet::Alphabet;
use sstdelay::automata::{materialize, Automaton, Budget};

fn main() {
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let nfa = sstdelay::resync::dbg_cut_at_mark1(&ab, 2);
    println!("nfa states {}", nfa.n_states());
    // simulate the subset construction manually on growing words and print
    // the subset fingerprints for a*b* style inputs
    let syms = nfa.alphabet();
    let a_plain = syms.iter().find(|s| format!("{s:?}").contains("l0") && s.marks == 0).copied().unwrap();
    let b_plain = syms.iter().find(|s| format!("{s:?}").contains("l1") && s.marks == 0).copied().unwrap();
    let mut subset: Vec<u32> = nfa.initials();
    let word = [a_plain, b_plain, a_plain, a_plain, b_plain, a_plain, b_plain, b_plain, a_plain, a_plain, b_plain, a_plain];
    for (i, sym) in word.iter().enumerate() {
        let mut next: Vec<u32> = Vec::new();
        for q in &subset {
            next.extend(nfa.succ(q, sym));
        }
        next.sort_unstable();
        next.dedup();
        subset = next;
        println!("step {i}: subset size {}", subset.len());
    }
    let _ = materialize(&nfa, Budget::default());
}
