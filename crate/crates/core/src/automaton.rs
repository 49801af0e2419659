//! The deterministic automaton of safely left-to-right rewritable words.
//!
//! States are prefix antichains: the guarantee sets Juliet can force from the
//! initial target state after the prefix read so far. Reading `a` pushes the
//! antichain through `eff(a)`. A state accepts iff one of its sets lies
//! inside the target's final states.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use thiserror::Error;

use crate::effects::{compute_effect_table, Antichain, EffectTable, StateSet};
use crate::game::Game;
use crate::regular::{Alphabet, RegularError, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("state limit exceeded: {reached} states discovered, limit {limit}")]
    StateLimit { reached: usize, limit: usize },
    #[error(transparent)]
    Regular(#[from] RegularError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafeLrAutomaton {
    alphabet: Alphabet,
    /// Prefix antichains in discovery order; index 0 is `{{q_init}}`.
    states: Vec<Antichain>,
    // transitions[state][symbol]
    transitions: Vec<Vec<usize>>,
    finals: StateSet,
    sink: Option<usize>,
}

impl SafeLrAutomaton {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Antichain] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn next(&self, state: usize, sym: Symbol) -> usize {
        self.transitions[state][sym.index()]
    }

    /// Target-DFA sink state, written `qs` in labels.
    pub fn sink(&self) -> Option<usize> {
        self.sink
    }

    /// Recomputed from the stored antichain on every call.
    pub fn is_accepting(&self, state: usize) -> bool {
        self.states[state].guarantees(&self.finals)
    }

    pub fn run(&self, word: &[Symbol]) -> Result<usize, RegularError> {
        self.alphabet.check_word(word)?;
        Ok(word.iter().fold(0, |q, s| self.next(q, *s)))
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, RegularError> {
        Ok(self.is_accepting(self.run(word)?))
    }

    /// Graphviz rendering; nodes in discovery order, edges in symbol order.
    pub fn export_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph safelr {\n  rankdir=LR;\n  start [shape=point];\n");
        for (i, anti) in self.states.iter().enumerate() {
            let shape = if self.is_accepting(i) {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(
                out,
                "  n{} [label=\"{}\", shape={}];",
                i,
                anti.named(self.sink),
                shape
            );
        }
        out.push_str("  start -> n0;\n");
        for (i, row) in self.transitions.iter().enumerate() {
            for sym in self.alphabet.symbols() {
                let _ = writeln!(
                    out,
                    "  n{} -> n{} [label=\"{}\"];",
                    i,
                    row[sym.index()],
                    self.alphabet.name(sym)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Explores the reachable prefix antichains breadth first, failing once more
/// than `state_limit` states have been discovered.
pub fn build_safelr_automaton(
    game: &Game,
    state_limit: usize,
) -> Result<SafeLrAutomaton, AutomatonError> {
    build_from_table(game, &compute_effect_table(game), state_limit)
}

pub fn build_from_table(
    game: &Game,
    table: &EffectTable,
    state_limit: usize,
) -> Result<SafeLrAutomaton, AutomatonError> {
    let alphabet = game.alphabet().clone();
    let start = Antichain::singleton(table.initial_state());
    let mut ids: BTreeMap<Antichain, usize> = BTreeMap::new();
    let mut states = alloc::vec![start.clone()];
    ids.insert(start, 0);
    if state_limit == 0 {
        return Err(AutomatonError::StateLimit {
            reached: 1,
            limit: 0,
        });
    }
    let mut transitions: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = alloc::vec![0; alphabet.len()];
        for sym in alphabet.symbols() {
            let next = states[i].then(table.effect(sym));
            row[sym.index()] = match ids.get(&next) {
                Some(j) => *j,
                None => {
                    let j = states.len();
                    if j + 1 > state_limit {
                        return Err(AutomatonError::StateLimit {
                            reached: j + 1,
                            limit: state_limit,
                        });
                    }
                    ids.insert(next.clone(), j);
                    states.push(next);
                    queue.push_back(j);
                    j
                }
            };
        }
        transitions.push(row);
    }
    Ok(SafeLrAutomaton {
        alphabet,
        states,
        transitions,
        finals: table.finals().clone(),
        sink: table.sink(),
    })
}

pub fn automaton_accepts(aut: &SafeLrAutomaton, word: &[Symbol]) -> Result<bool, RegularError> {
    aut.accepts(word)
}

pub fn export_dot(aut: &SafeLrAutomaton) -> String {
    aut.export_dot()
}
