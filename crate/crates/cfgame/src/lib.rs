//! File format, command line and interactive play for context-free
//! rewriting games, on top of `cfgame-core`.

pub mod cli;
pub mod format;
pub mod repl;

pub use format::{parse_game, render_game, FormatError};
