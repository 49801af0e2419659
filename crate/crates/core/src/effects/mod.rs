//! Effects: for every symbol and target-DFA state, the antichain of state
//! sets Juliet can force the prefix state into by playing that symbol left
//! to right. The table of symbol effects is a least fixpoint, built up from
//! Read-only effects, so a guarantee always comes with a finite strategy.

mod antichain;
mod strategy;

pub use antichain::{compose_effects, Antichain, Effect, Named, StateSet};
pub use strategy::{extract_strategy, worst_replies, EffectStrategy};

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::game::{Game, ReplacementLang};
use crate::regular::{RegularError, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EffectError {
    #[error("guarantee sets must be non-empty")]
    EmptyGuaranteeSet,
    #[error("effects over {left} and {right} states cannot be composed")]
    StateSpaceMismatch { left: usize, right: usize },
    #[error(transparent)]
    Regular(#[from] RegularError),
    #[error("{0} is not a function symbol")]
    NotAFunction(String),
    #[error("{0} is not safely rewritable left to right")]
    UnsafeWord(String),
}

/// Symbol effects for every fixpoint round.
#[derive(Clone, PartialEq, Eq)]
pub struct EffectTable {
    // levels[i][symbol]: effects after i rounds; the last level is the fixpoint
    levels: Vec<Vec<Effect>>,
    iteration_count: usize,
    initial: usize,
    finals: StateSet,
    num_states: usize,
    sink: Option<usize>,
}

impl EffectTable {
    /// The fixpoint effect of `sym`.
    pub fn effect(&self, sym: Symbol) -> &Effect {
        &self.levels[self.top()][sym.index()]
    }

    /// Effects after `level` rounds (level 0 is Read only).
    pub fn level(&self, level: usize) -> &[Effect] {
        &self.levels[level]
    }

    /// Index of the fixpoint level.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    /// Rounds computed, including the final one that changed nothing.
    pub fn iteration_count(&self) -> usize {
        self.iteration_count
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// Every round only adds guarantees: each set guaranteed at one level
    /// is still guaranteed (by some subset) at the next.
    pub fn levels_refine(&self) -> bool {
        self.levels.windows(2).all(|pair| {
            pair[0].iter().zip(&pair[1]).all(|(old, new)| {
                old.entries()
                    .iter()
                    .zip(new.entries())
                    .all(|(a, b)| a.is_refined_by(b))
            })
        })
    }

    pub fn initial_state(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &StateSet {
        &self.finals
    }

    /// The target DFA's sink state, if it has one.
    pub fn sink(&self) -> Option<usize> {
        self.sink
    }

    /// Effect of `word` at the fixpoint; ε gives the identity.
    pub fn string_effect(&self, word: &[Symbol]) -> Result<Effect, EffectError> {
        self.string_effect_at(self.top(), word)
    }

    pub fn string_effect_at(&self, level: usize, word: &[Symbol]) -> Result<Effect, EffectError> {
        let effects = &self.levels[level];
        let mut acc = Effect::identity(self.num_states);
        for sym in word {
            let e = effects
                .get(sym.index())
                .ok_or(RegularError::SymbolOutOfRange(sym.0))?;
            acc = compose_effects(&acc, e)?;
        }
        Ok(acc)
    }

    /// The guarantees from a single start state after `word`, computed by
    /// pushing `{{from}}` through the symbol effects.
    pub fn prefix_antichain(
        &self,
        level: usize,
        from: usize,
        word: &[Symbol],
    ) -> Result<Antichain, EffectError> {
        let effects = &self.levels[level];
        let mut acc = Antichain::singleton(from);
        for sym in word {
            let e = effects
                .get(sym.index())
                .ok_or(RegularError::SymbolOutOfRange(sym.0))?;
            acc = acc.then(e);
        }
        Ok(acc)
    }

    /// True iff Juliet can force the target from the initial state.
    pub fn is_safe(&self, word: &[Symbol]) -> Result<bool, EffectError> {
        Ok(self
            .string_effect(word)?
            .at(self.initial)
            .guarantees(&self.finals))
    }

    /// Renders the fixpoint table, one block per symbol.
    pub fn display<'a>(&'a self, game: &'a Game) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a EffectTable, &'a Game);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for sym in self.1.alphabet().symbols() {
                    writeln!(f, "{}:", self.1.alphabet().name(sym))?;
                    write!(f, "{}", self.0.effect(sym).named(self.0.sink))?;
                }
                Ok(())
            }
        }
        Show(self, game)
    }
}

impl fmt::Debug for EffectTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EffectTable")
            .field("iteration_count", &self.iteration_count)
            .field("fixpoint", &self.levels.last())
            .finish()
    }
}

/// Read-only effect of `sym` on `game`'s target DFA.
pub fn read_effect(game: &Game, sym: Symbol) -> Result<Effect, EffectError> {
    Effect::read(game.target_dfa(), sym)
}

/// The minimal sets `T` such that, whatever Romeo answers to a call of `sym`
/// from state `q`, Juliet can then play the reply with the fixpoint effects
/// and land inside `T`.
pub fn call_guarantees(
    game: &Game,
    table: &EffectTable,
    sym: Symbol,
    q: usize,
) -> Result<Antichain, EffectError> {
    if !game.is_function(sym) {
        return Err(EffectError::NotAFunction(
            game.alphabet()
                .names()
                .get(sym.index())
                .cloned()
                .unwrap_or_else(|| sym.0.to_string()),
        ));
    }
    Ok(call_guarantees_with(game, table.level(table.top()), sym, q))
}

fn call_guarantees_with(game: &Game, effects: &[Effect], sym: Symbol, q: usize) -> Antichain {
    let rule = game.rule(sym).expect("function symbol");
    let push = |word: &[Symbol]| {
        word.iter().fold(Antichain::singleton(q), |acc, s| {
            acc.then(&effects[s.index()])
        })
    };
    match rule.lang() {
        ReplacementLang::Finite(words) => {
            let per_reply: Vec<Antichain> = words.iter().map(|w| push(w)).collect();
            Antichain::choice_unions(&per_reply)
        }
        ReplacementLang::Regular(_) => {
            // product of the rule DFA with prefix antichains; every accepting
            // product state is a reply class Juliet must answer
            let dfa = rule.dfa();
            let live = live_states(dfa);
            let mut seen: BTreeSet<(usize, Antichain)> = BTreeSet::new();
            let start = (dfa.initial(), Antichain::singleton(q));
            let mut stack = alloc::vec![start.clone()];
            seen.insert(start);
            let mut accepting: Vec<Antichain> = Vec::new();
            while let Some((d, anti)) = stack.pop() {
                if dfa.is_final(d) && !accepting.contains(&anti) {
                    accepting.push(anti.clone());
                }
                for s in game.alphabet().symbols() {
                    let d2 = dfa.next(d, s);
                    if !live[d2] {
                        continue;
                    }
                    let next = (d2, anti.then(&effects[s.index()]));
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
            accepting.sort();
            Antichain::choice_unions(&accepting)
        }
    }
}

fn live_states(dfa: &crate::regular::Dfa) -> Vec<bool> {
    let n = dfa.num_states();
    let mut live: Vec<bool> = (0..n).map(|q| dfa.is_final(q)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for q in 0..n {
            if !live[q] && dfa.alphabet().symbols().any(|s| live[dfa.next(q, s)]) {
                live[q] = true;
                changed = true;
            }
        }
    }
    live
}

/// Least fixpoint of `eff(a)(q) = min({{δ(q,a)}} ∪ call_guarantees(a, q))`
/// for function symbols, starting from Read-only effects and recomputing
/// every entry from the previous round until nothing changes.
pub fn compute_effect_table(game: &Game) -> EffectTable {
    let dfa = game.target_dfa();
    let n = dfa.num_states();
    let read: Vec<Effect> = game
        .alphabet()
        .symbols()
        .map(|s| Effect::read(dfa, s).expect("symbol of the game"))
        .collect();
    let mut levels = alloc::vec![read.clone()];
    let mut iteration_count = 0;
    loop {
        iteration_count += 1;
        let prev = levels.last().expect("non-empty");
        let next: Vec<Effect> = game
            .alphabet()
            .symbols()
            .map(|s| {
                if !game.is_function(s) {
                    return read[s.index()].clone();
                }
                Effect::new(
                    (0..n)
                        .map(|q| {
                            let mut sets = call_guarantees_with(game, prev, s, q).sets().to_vec();
                            sets.push(StateSet::singleton(dfa.next(q, s)));
                            Antichain::minimize(sets)
                        })
                        .collect(),
                )
            })
            .collect();
        if &next == prev {
            break;
        }
        levels.push(next);
    }
    EffectTable {
        levels,
        iteration_count,
        initial: dfa.initial(),
        finals: dfa.finals().collect(),
        num_states: n,
        sink: dfa.sink(),
    }
}

/// Left fold of [`compose_effects`] over the symbol effects of `word`.
pub fn string_effect(table: &EffectTable, word: &[Symbol]) -> Result<Effect, EffectError> {
    table.string_effect(word)
}

/// Decides whether `word` is safely rewritable left to right.
pub fn decide_lr(game: &Game, word: &[Symbol]) -> Result<bool, EffectError> {
    game.alphabet().check_word(word)?;
    compute_effect_table(game).is_safe(word)
}
