use sstdelay::alphabet::Alphabet;
use sstdelay::automata::Automaton;
use std::collections::HashSet;

fn main() {
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let nfa = sstdelay::resync::dbg_cut_at_mark1(&ab, 2);
    let syms = nfa.alphabet();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut init: Vec<u32> = nfa.initials();
    init.sort_unstable();
    seen.insert(init.clone());
    let mut layer = vec![init];
    for depth in 1..=14 {
        let mut next_layer = Vec::new();
        for subset in &layer {
            for sym in &syms {
                let mut next: Vec<u32> = Vec::new();
                for q in subset {
                    next.extend(nfa.succ(q, sym));
                }
                next.sort_unstable();
                next.dedup();
                if seen.insert(next.clone()) {
                    next_layer.push(next);
                }
            }
        }
        println!("depth {depth}: +{} subsets (total {})", next_layer.len(), seen.len());
        layer = next_layer;
        if layer.is_empty() {
            println!("saturated");
            break;
        }
    }
}
