//! Primitive roots, greedy ℓ-factorizations and cuts.

use thiserror::Error;

use crate::alphabet::Letter;
use crate::seq::Word;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FactorError {
    #[error("primitive root of the empty word is undefined")]
    EmptyWord,
    #[error("period bound must be at least 1")]
    ZeroPeriod,
}

/// Length of the primitive root of `u[0..len]` via the KMP failure function:
/// the smallest period `p = len − border(len)` is the root length iff it
/// divides `len`, otherwise the word is primitive.
fn root_lengths(u: &[Letter]) -> Vec<usize> {
    let n = u.len();
    let mut border = vec![0usize; n + 1];
    let mut roots = vec![0usize; n + 1];
    let mut k = 0usize;
    for i in 1..=n {
        if i > 1 {
            while k > 0 && u[i - 1] != u[k] {
                k = border[k];
            }
            if u[i - 1] == u[k] {
                k += 1;
            }
        }
        border[i] = if i == 1 { 0 } else { k };
        let p = i - border[i];
        roots[i] = if i % p == 0 { p } else { i };
    }
    roots
}

/// The shortest word `w` with `u = w^k`.
pub fn primitive_root(u: &[Letter]) -> Result<Word, FactorError> {
    if u.is_empty() {
        return Err(FactorError::EmptyWord);
    }
    let roots = root_lengths(u);
    Ok(u[..roots[u.len()]].to_vec())
}

/// A greedy ℓ-factorization: factors concatenate to the word, each factor's
/// primitive root has length ≤ ℓ, and no factor can absorb the next letter.
/// `cuts` are the running factor end positions (1-indexed, last = |u|).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    pub factors: Vec<Word>,
    pub cuts: Vec<usize>,
}

/// Factorizes greedily from the left: each factor is the longest prefix of
/// the rest whose primitive root has length ≤ ℓ.  The empty word yields the
/// empty factorization.
pub fn factorize(u: &[Letter], ell: usize) -> Factorization {
    assert!(ell >= 1, "period bound must be at least 1");
    let mut factors = Vec::new();
    let mut cuts = Vec::new();
    let mut start = 0usize;
    while start < u.len() {
        let rest = &u[start..];
        let roots = root_lengths(rest);
        let mut best = 1usize;
        for len in 1..=rest.len() {
            if roots[len] <= ell {
                best = len;
            }
        }
        factors.push(rest[..best].to_vec());
        start += best;
        cuts.push(start);
    }
    Factorization { factors, cuts }
}

/// The set cut_ℓ(u) as a vector of positions.
pub fn cuts(u: &[Letter], ell: usize) -> Vec<usize> {
    factorize(u, ell).cuts
}

/// The smallest cut strictly greater than `i`, if any.  `i = |u|` (and in
/// particular `i = 0` on the empty word) has no next cut.
pub fn next_cut(u: &[Letter], ell: usize, i: usize) -> Option<usize> {
    assert!(i <= u.len(), "position {i} beyond word length {}", u.len());
    cuts(u, ell).into_iter().find(|&c| c > i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn w(ab: &Alphabet, s: &str) -> Word {
        ab.parse_compact(s).unwrap()
    }

    /// Brute-force oracle: shortest divisor-length prefix that powers to u.
    fn root_oracle(u: &[Letter]) -> Word {
        for p in 1..=u.len() {
            if u.len() % p == 0 && u.chunks(p).all(|c| c == &u[..p]) {
                return u[..p].to_vec();
            }
        }
        unreachable!()
    }

    #[test]
    fn primitive_root_examples() {
        let ab = Alphabet::new(["a", "b", "c"]).unwrap();
        assert_eq!(primitive_root(&w(&ab, "abab")).unwrap(), w(&ab, "ab"));
        assert_eq!(primitive_root(&w(&ab, "abc")).unwrap(), w(&ab, "abc"));
        assert_eq!(primitive_root(&[]).unwrap_err(), FactorError::EmptyWord);
    }

    #[test]
    fn primitive_root_matches_divisor_oracle() {
        use rand::{Rng, SeedableRng};
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let letters: Vec<Letter> = ab.letters().collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5157);
        for _ in 0..1000 {
            let len = rng.gen_range(1..=12);
            let u: Word = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
            assert_eq!(primitive_root(&u).unwrap(), root_oracle(&u), "word {:?}", ab.render(&u));
        }
    }

    #[test]
    fn paper_pinned_factorizations() {
        let ab = Alphabet::new(["a", "b", "c"]).unwrap();
        let u = w(&ab, "aaababcbabaaaaa");
        let f = factorize(&u, 2);
        assert_eq!(f.cuts, vec![3, 5, 7, 11, 15]);
        let parts: Vec<String> = f.factors.iter().map(|x| ab.render(x)).collect();
        assert_eq!(parts, vec!["aaa", "ba", "bc", "baba", "aaaa"]);

        let v = w(&ab, "aaabaaa");
        let g = factorize(&v, 1);
        assert_eq!(g.cuts, vec![3, 4, 7]);
        let parts: Vec<String> = g.factors.iter().map(|x| ab.render(x)).collect();
        assert_eq!(parts, vec!["aaa", "b", "aaa"]);
    }

    #[test]
    fn unary_word_single_factor() {
        let ab = Alphabet::new(["a"]).unwrap();
        for n in 1..=6 {
            for ell in 1..=3 {
                let u = vec![ab.lookup("a").unwrap(); n];
                assert_eq!(factorize(&u, ell).cuts, vec![n]);
            }
        }
    }

    #[test]
    fn next_cut_examples() {
        let ab = Alphabet::new(["a", "b", "c"]).unwrap();
        let u = w(&ab, "aaababcbabaaaaa");
        assert_eq!(next_cut(&u, 2, 5), Some(7));
        assert_eq!(next_cut(&u, 2, u.len()), None);
        assert_eq!(next_cut(&u, 2, 0), Some(3));
        assert_eq!(next_cut(&[], 1, 0), None);
    }

    #[test]
    fn empty_word_has_empty_factorization() {
        let f = factorize(&[], 3);
        assert!(f.factors.is_empty());
        assert!(f.cuts.is_empty());
    }

    /// Cut soundness: every factor has root ≤ ℓ, and appending the next
    /// letter pushes the root beyond ℓ (or the word ends).
    #[test]
    fn factorization_greedy_maximality() {
        use rand::{Rng, SeedableRng};
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let letters: Vec<Letter> = ab.letters().collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xfac7);
        for _ in 0..400 {
            let len = rng.gen_range(0..=14);
            let u: Word = (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
            for ell in 1..=3 {
                let f = factorize(&u, ell);
                assert_eq!(f.factors.concat(), u);
                let mut pos = 0;
                for factor in &f.factors {
                    assert!(primitive_root(factor).unwrap().len() <= ell);
                    let end = pos + factor.len();
                    if end < u.len() {
                        let extended = &u[pos..end + 1];
                        assert!(
                            primitive_root(extended).unwrap().len() > ell,
                            "factor not maximal in {:?} at {pos}",
                            ab.render(&u)
                        );
                    }
                    pos = end;
                }
            }
        }
    }
}
