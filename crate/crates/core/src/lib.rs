//! Context-free rewriting games played left to right.
//!
//! Juliet walks a word from left to right. At every symbol she either reads
//! it or, when it is a function symbol, calls it, after which Romeo replaces
//! it with a word of its replacement language and play continues at the
//! start of that replacement. Juliet wins when the finished word lies in the
//! target language.
//!
//! The crate is `no_std` (it needs `alloc`) and provides:
//!
//! * [`regular`]: regex parsing, NFAs, complete DFAs and word enumeration,
//! * [`game`]: the game object, validation and a seeded generator,
//! * [`semantics`]: bounded game-tree solvers and play simulation,
//! * [`effects`]: per-symbol effects, the left-to-right word problem and
//!   strategy extraction,
//! * [`automaton`]: the deterministic automaton of safely rewritable words.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod automaton;
pub mod effects;
pub mod game;
pub mod regular;
pub mod semantics;

pub use automaton::{build_safelr_automaton, AutomatonError, SafeLrAutomaton};
pub use effects::{
    compose_effects, compute_effect_table, decide_lr, extract_strategy, string_effect, Antichain,
    Effect, EffectError, EffectTable, StateSet,
};
pub use game::{random_game, validate_game, Game, GameDraft, GameError, GenParams};
pub use regular::{
    determinize, parse_regex, Alphabet, Dfa, Nfa, Regex, RegularError, Symbol, Word,
};
pub use semantics::{
    simulate_play, solve_any_order_bounded, solve_lr_bounded, solve_multipass_bounded, Move,
    Outcome, StrategyCert, Verdict,
};
