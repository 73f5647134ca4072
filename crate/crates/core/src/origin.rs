//! Origin maps and positional weights.

use crate::seq::SubstSeq;

/// Maps each output position (1-indexed) to the time that produced it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OriginMap {
    origins: Vec<usize>,
}

impl OriginMap {
    pub fn len(&self) -> usize {
        self.origins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origins.is_empty()
    }

    /// Origin of output position `j ∈ [1, |out|]`.
    pub fn origin(&self, j: usize) -> usize {
        self.origins[j - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.origins
    }
}

/// Computes the origin function by evaluating the sequence with every letter
/// annotated by the time of the substitution writing it.
pub fn origin_map(l: &SubstSeq) -> OriginMap {
    OriginMap { origins: l.out_annotated().into_iter().map(|(_, t)| t).collect() }
}

/// weight_{j,t}: output positions ≤ min(j, |out|) with origin ≤ t.
pub fn weight(l: &SubstSeq, j: usize, t: usize) -> usize {
    assert!(t <= l.len(), "time {t} beyond sequence length {}", l.len());
    weight_of(&origin_map(l), j, t)
}

/// As [`weight`], over a precomputed origin map.
pub fn weight_of(origins: &OriginMap, j: usize, t: usize) -> usize {
    let cap = j.min(origins.len());
    origins.as_slice()[..cap].iter().filter(|&&o| o <= t).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn single_substitution_origins() {
        // O -> ab: both positions originate at time 1
        let (ctx, seq) = corpus::seq_from_images(&["Oab"], &["a", "b"], &["O"], "O");
        let _ = ctx;
        let om = origin_map(&seq);
        assert_eq!(om.as_slice(), &[1, 1]);
        assert_eq!(weight(&seq, 2, 1), 2);
        assert_eq!(weight(&seq, 0, 1), 0);
    }
}
