//! Alphabets, letters and variable sets.
//!
//! Letters and variables are interned to small integers; external formats use
//! names.  Every alphabet implicitly reserves two letters that no input may
//! declare: an endmarker (printed `⊣`) used by the rationality construction
//! and a padding letter (printed `#`) used by the pumping analysis.

use std::fmt;
use thiserror::Error;

/// An interned letter.  Values below [`Letter::END`] index into the owning
/// [`Alphabet`]; the two top values are the reserved letters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u16);

impl Letter {
    /// The endmarker `⊣`, outside every declared alphabet.
    pub const END: Letter = Letter(u16::MAX - 1);
    /// The padding letter `#`, outside every declared alphabet.
    pub const PAD: Letter = Letter(u16::MAX);

    pub fn is_reserved(self) -> bool {
        self == Letter::END || self == Letter::PAD
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::END => write!(f, "⊣"),
            Letter::PAD => write!(f, "#"),
            Letter(i) => write!(f, "l{i}"),
        }
    }
}

/// An interned register variable, indexing into a [`VarSet`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u16);

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("alphabet must not be empty")]
    Empty,
    #[error("duplicate letter {0:?}")]
    DuplicateLetter(String),
    #[error("letter name {0:?} is reserved")]
    ReservedLetter(String),
    #[error("variable set must not be empty")]
    NoVars,
    #[error("duplicate variable {0:?}")]
    DuplicateVar(String),
    #[error("output variable {0:?} is not declared")]
    UnknownOutput(String),
    #[error("too many symbols")]
    TooLarge,
}

/// A finite, ordered input/output alphabet Σ.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self, AlphabetError> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(AlphabetError::Empty);
        }
        if letters.len() >= Letter::END.0 as usize {
            return Err(AlphabetError::TooLarge);
        }
        for (i, l) in letters.iter().enumerate() {
            if l == "⊣" || l == "#" {
                return Err(AlphabetError::ReservedLetter(l.clone()));
            }
            if letters[..i].contains(l) {
                return Err(AlphabetError::DuplicateLetter(l.clone()));
            }
        }
        Ok(Alphabet { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The declared letters, in order (reserved letters excluded).
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letters.len()).map(|i| Letter(i as u16))
    }

    /// Declared letters plus the endmarker.
    pub fn letters_with_end(&self) -> Vec<Letter> {
        let mut v: Vec<Letter> = self.letters().collect();
        v.push(Letter::END);
        v
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.letters.iter().position(|l| l == name).map(|i| Letter(i as u16))
    }

    pub fn name(&self, l: Letter) -> &str {
        match l {
            Letter::END => "⊣",
            Letter::PAD => "#",
            Letter(i) => &self.letters[i as usize],
        }
    }

    pub fn contains(&self, l: Letter) -> bool {
        (l.0 as usize) < self.letters.len()
    }

    /// Renders a word; single-character letter names are concatenated,
    /// anything longer is space-separated.
    pub fn render(&self, word: &[Letter]) -> String {
        let compact = word.iter().all(|&l| self.name(l).chars().count() == 1);
        let sep = if compact { "" } else { " " };
        word.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join(sep)
    }

    /// Parses a word whose letters are all single characters.
    pub fn parse_compact(&self, s: &str) -> Option<Vec<Letter>> {
        s.chars().map(|c| self.lookup(&c.to_string())).collect()
    }
}

/// A finite, ordered set of register variables with a distinguished output
/// variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VarSet {
    names: Vec<String>,
    output: VarId,
}

impl VarSet {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        output: &str,
    ) -> Result<Self, AlphabetError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(AlphabetError::NoVars);
        }
        if names.len() >= u16::MAX as usize {
            return Err(AlphabetError::TooLarge);
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(AlphabetError::DuplicateVar(n.clone()));
            }
        }
        let output = names
            .iter()
            .position(|n| n == output)
            .map(|i| VarId(i as u16))
            .ok_or_else(|| AlphabetError::UnknownOutput(output.to_string()))?;
        Ok(VarSet { names, output })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn output(&self) -> VarId {
        self.output
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.names.len()).map(|i| VarId(i as u16))
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.names.iter().position(|n| n == name).map(|i| VarId(i as u16))
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.names[v.0 as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reserved_letters_rejected() {
        assert_eq!(Alphabet::new(["a", "#"]).unwrap_err(), AlphabetError::ReservedLetter("#".into()));
        assert_eq!(Alphabet::new(["⊣"]).unwrap_err(), AlphabetError::ReservedLetter("⊣".into()));
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        assert!(Alphabet::new(["a", "a"]).is_err());
    }

    #[test]
    fn lookup_and_render() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let a = ab.lookup("a").unwrap();
        let b = ab.lookup("b").unwrap();
        assert!(!ab.contains(Letter::END));
        assert_eq!(ab.render(&[a, b, a]), "aba");
        assert_eq!(ab.render(&[a, Letter::END]), "a⊣");
        assert_eq!(ab.parse_compact("ab").unwrap(), vec![a, b]);
        assert!(ab.parse_compact("ax").is_none());
    }

    #[test]
    fn output_var_must_exist() {
        assert!(VarSet::new(["X", "Y"], "Z").is_err());
        let vs = VarSet::new(["X", "Y"], "X").unwrap();
        assert_eq!(vs.output(), VarId(0));
        assert_eq!(vs.name(VarId(1)), "Y");
    }
}
