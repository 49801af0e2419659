//! Regular-language toolkit: symbols and words, a small regex language,
//! ε-NFAs and complete DFAs.

mod alphabet;
mod dfa;
mod nfa;
mod regex;

pub use alphabet::{Alphabet, Symbol, Word};
pub use dfa::{determinize, Dfa};
pub use nfa::Nfa;
pub use regex::{parse_regex, Regex};

use alloc::string::String;
use thiserror::Error;

/// Errors raised while building or querying regular-language objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegularError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("invalid symbol name {0:?}")]
    InvalidSymbolName(String),
    #[error("duplicate symbol {0}")]
    DuplicateSymbol(String),
    #[error("symbol #{0} is not in the alphabet")]
    SymbolOutOfRange(u32),
    #[error("malformed automaton: {0}")]
    MalformedAutomaton(String),
}

/// `%e`, the token denoting the empty word.
pub const EPSILON_TOKEN: &str = "%e";

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}
