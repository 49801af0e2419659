//! Ground-truth play semantics.
//!
//! The solvers here search the game tree directly (Juliet existential over
//! moves, Romeo universal over replacements) under a budget on the total
//! number of calls. They never look at effects and serve as the independent
//! oracle for the [`crate::effects`] and [`crate::automaton`] modules.
//!
//! Infinite plays are lost by Juliet, so running out of budget yields
//! [`Outcome::Unknown`], never a win.

mod cert;
mod play;
mod solver;

pub use cert::{CertNode, CertPlayer, StrategyCert};
pub use play::{
    apply_move, lr_successors, replay_all, simulate_play, Expansion, Juliet, LrConfig, Move, Play,
    ReplayReport, Romeo, Step,
};
pub use solver::{solve_any_order_bounded, solve_lr_bounded, solve_multipass_bounded};

use alloc::string::String;
use thiserror::Error;

use crate::regular::RegularError;

/// Three-valued result of a bounded search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Win,
    Lose,
    Unknown,
}

impl Outcome {
    /// Juliet's choice: the best of the two.
    pub fn or(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Outcome::Win, _) | (_, Outcome::Win) => Outcome::Win,
            (Outcome::Lose, Outcome::Lose) => Outcome::Lose,
            _ => Outcome::Unknown,
        }
    }

    /// Romeo's choice: the worst of the two.
    pub fn and(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Outcome::Lose, _) | (_, Outcome::Lose) => Outcome::Lose,
            (Outcome::Win, Outcome::Win) => Outcome::Win,
            _ => Outcome::Unknown,
        }
    }

    /// Win or Lose, i.e. the verdict is a proof and not a budget artefact.
    pub fn is_sound(self) -> bool {
        self != Outcome::Unknown
    }
}

/// Result of a bounded solver. A certificate is attached to wins of the
/// left-to-right solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub certificate: Option<StrategyCert>,
}

impl Verdict {
    pub fn is_win(&self) -> bool {
        self.outcome == Outcome::Win
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlayError {
    #[error(transparent)]
    Regular(#[from] RegularError),
    #[error("the cursor is at the end of the word")]
    CursorAtEnd,
    #[error("{0} is not a function symbol")]
    NotAFunction(String),
    #[error("{word} is not a replacement for {symbol}")]
    IllegalReplacement { symbol: String, word: String },
    #[error("Juliet's strategy has no move at cursor {cursor} of {word}")]
    StrategyUndefined { word: String, cursor: usize },
}
