use sstdelay::alphabet::Alphabet;
use sstdelay::automata::WordTable;

fn main() {
    let ab = Alphabet::new(["a", "b"]).unwrap();
    for ell in 1..=2usize {
        for (name, nfa) in [
            ("cut_at_mark1", sstdelay::resync::dbg_cut_at_mark1(&ab, ell)),
            ("next_cut_marks", sstdelay::resync::dbg_next_cut_marks(&ab, ell)),
            ("first_cut_mark2", sstdelay::resync::dbg_first_cut_mark2(&ab, ell)),
        ] {
            let t0 = std::time::Instant::now();
            let det = WordTable::from_nfa(&nfa).determinize();
            let min = det.minimize();
            println!(
                "ell={ell} {name}: nfa {} det {} min {} ({:?})",
                nfa.n_states(),
                det.n_states(),
                min.n_states(),
                t0.elapsed()
            );
        }
    }
}
