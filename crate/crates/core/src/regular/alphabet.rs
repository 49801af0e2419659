use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{is_identifier, RegularError, EPSILON_TOKEN};

/// A letter, stored as its index in the declaring [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite sequence of symbols; the empty vector is ε.
pub type Word = Vec<Symbol>;

/// An ordered set of symbol names. Symbol ids follow declaration order, and
/// "lexicographic" everywhere in this crate means lexicographic in that order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, RegularError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for name in names {
            let name = name.into();
            if !is_identifier(&name) {
                return Err(RegularError::InvalidSymbolName(name));
            }
            if out.contains(&name) {
                return Err(RegularError::DuplicateSymbol(name));
            }
            out.push(name);
        }
        Ok(Alphabet { names: out })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Symbol(i as u32))
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        sym.index() < self.names.len()
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len() as u32).map(Symbol)
    }

    pub fn check_word(&self, word: &[Symbol]) -> Result<(), RegularError> {
        match word.iter().find(|s| !self.contains(**s)) {
            Some(s) => Err(RegularError::SymbolOutOfRange(s.0)),
            None => Ok(()),
        }
    }

    /// Parses whitespace-separated symbol names, or the single token `%e`.
    pub fn parse_word(&self, text: &str) -> Result<Word, RegularError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == [EPSILON_TOKEN] {
            return Ok(Word::new());
        }
        tokens
            .into_iter()
            .map(|t| {
                self.lookup(t)
                    .ok_or_else(|| RegularError::UnknownSymbol(t.to_string()))
            })
            .collect()
    }

    /// Renders a word as space-separated names, `%e` for ε.
    pub fn display_word<'a>(&'a self, word: &'a [Symbol]) -> DisplayWord<'a> {
        DisplayWord {
            alphabet: self,
            word,
        }
    }
}

pub struct DisplayWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a [Symbol],
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str(EPSILON_TOKEN);
        }
        for (i, s) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(self.alphabet.name(*s))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;

    #[test]
    fn rejects_bad_names() {
        assert_eq!(
            Alphabet::new(["a", "1x"]),
            Err(RegularError::InvalidSymbolName("1x".into()))
        );
        assert_eq!(
            Alphabet::new(["a", "a"]),
            Err(RegularError::DuplicateSymbol("a".into()))
        );
        assert!(Alphabet::new(["%e"]).is_err());
        assert!(Alphabet::new(["_x9", "B"]).is_ok());
    }

    #[test]
    fn words() {
        let sigma = Alphabet::new(["a", "b", "f"]).unwrap();
        let w = sigma.parse_word("f a").unwrap();
        assert_eq!(w, [Symbol(2), Symbol(0)]);
        assert_eq!(sigma.parse_word("%e").unwrap(), Word::new());
        assert_eq!(
            sigma.parse_word("a c"),
            Err(RegularError::UnknownSymbol("c".into()))
        );
        assert_eq!(format!("{}", sigma.display_word(&w)), "f a");
        assert_eq!(format!("{}", sigma.display_word(&[])), "%e");
    }
}
