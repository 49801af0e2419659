use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Alphabet, RegularError, Symbol, Word};

/// An NFA with ε-transitions. States are `0..num_states()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: usize,
    finals: Vec<bool>,
    // outgoing edges per state, `None` labels ε
    edges: Vec<Vec<(Option<Symbol>, usize)>>,
}

impl Nfa {
    pub fn new<F, T>(
        alphabet: Alphabet,
        num_states: usize,
        initial: usize,
        finals: F,
        transitions: T,
    ) -> Result<Nfa, RegularError>
    where
        F: IntoIterator<Item = usize>,
        T: IntoIterator<Item = (usize, Option<Symbol>, usize)>,
    {
        let bad = |msg| Err(RegularError::MalformedAutomaton(msg));
        if initial >= num_states {
            return bad(format!("initial state {} out of range", initial));
        }
        let mut is_final = vec![false; num_states];
        for f in finals {
            if f >= num_states {
                return bad(format!("final state {} out of range", f));
            }
            is_final[f] = true;
        }
        let mut edges = vec![Vec::new(); num_states];
        for (from, label, to) in transitions {
            if from >= num_states || to >= num_states {
                return bad(format!("transition {} -> {} out of range", from, to));
            }
            if let Some(sym) = label {
                if !alphabet.contains(sym) {
                    return Err(RegularError::SymbolOutOfRange(sym.0));
                }
            }
            edges[from].push((label, to));
        }
        Ok(Nfa {
            alphabet,
            initial,
            finals: is_final,
            edges,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals[state]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Option<Symbol>, usize)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(from, out)| out.iter().map(move |(l, to)| (from, *l, *to)))
    }

    pub(crate) fn out_edges(&self, state: usize) -> &[(Option<Symbol>, usize)] {
        &self.edges[state]
    }

    /// ε-closure of `states`, as a sorted set.
    pub fn closure<I: IntoIterator<Item = usize>>(&self, states: I) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = states.into_iter().collect();
        while let Some(s) = stack.pop() {
            if seen.insert(s) {
                stack.extend(
                    self.edges[s]
                        .iter()
                        .filter(|(l, _)| l.is_none())
                        .map(|(_, t)| *t),
                );
            }
        }
        seen
    }

    /// ε-closed successor set of `states` on `sym`.
    pub fn step(&self, states: &BTreeSet<usize>, sym: Symbol) -> BTreeSet<usize> {
        self.closure(states.iter().flat_map(|s| {
            self.edges[*s]
                .iter()
                .filter(move |(l, _)| *l == Some(sym))
                .map(|(_, t)| *t)
        }))
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, RegularError> {
        self.alphabet.check_word(word)?;
        let mut cur = self.closure([self.initial]);
        for sym in word {
            cur = self.step(&cur, *sym);
            if cur.is_empty() {
                return Ok(false);
            }
        }
        Ok(cur.iter().any(|s| self.finals[*s]))
    }

    fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![start];
        while let Some(s) = stack.pop() {
            if !core::mem::replace(&mut seen[s], true) {
                stack.extend(self.edges[s].iter().map(|(_, t)| *t));
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub(crate) fn coreachable(&self) -> Vec<bool> {
        let mut rev = vec![Vec::new(); self.num_states()];
        for (from, _, to) in self.transitions() {
            rev[to].push(from);
        }
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = (0..self.num_states()).filter(|s| self.finals[*s]).collect();
        while let Some(s) = stack.pop() {
            if !core::mem::replace(&mut seen[s], true) {
                stack.extend(rev[s].iter().copied());
            }
        }
        seen
    }

    /// True iff the language is empty.
    pub fn is_empty_language(&self) -> bool {
        let reach = self.reachable_from(self.initial);
        !(0..self.num_states()).any(|s| reach[s] && self.finals[s])
    }

    /// True iff the language is finite: no symbol-labelled edge lies on a
    /// cycle among useful (reachable and co-reachable) states.
    pub fn is_finite_language(&self) -> bool {
        let reach = self.reachable_from(self.initial);
        let co = self.coreachable();
        let useful: Vec<bool> = (0..self.num_states()).map(|s| reach[s] && co[s]).collect();
        for (from, label, to) in self.transitions() {
            if label.is_none() || !useful[from] || !useful[to] {
                continue;
            }
            // is `from` reachable from `to` through useful states?
            let mut seen = vec![false; self.num_states()];
            let mut stack = vec![to];
            while let Some(s) = stack.pop() {
                if s == from {
                    return false;
                }
                if !core::mem::replace(&mut seen[s], true) {
                    stack.extend(self.edges[s].iter().map(|(_, t)| *t).filter(|t| useful[*t]));
                }
            }
        }
        true
    }

    /// Members of the language of length at most `max_len`, ordered by
    /// length and then lexicographically.
    pub fn enumerate_words(&self, max_len: usize) -> Vec<Word> {
        let live = self.coreachable();
        let mut out = Vec::new();
        let start = self.closure([self.initial]);
        if !start.iter().any(|s| live[*s]) {
            return out;
        }
        let mut frontier = vec![(Word::new(), start)];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for (word, set) in frontier {
                if set.iter().any(|s| self.finals[*s]) {
                    out.push(word.clone());
                }
                if len == max_len {
                    continue;
                }
                for sym in self.alphabet.symbols() {
                    let succ = self.step(&set, sym);
                    if succ.iter().any(|s| live[*s]) {
                        let mut w = word.clone();
                        w.push(sym);
                        next.push((w, succ));
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Length of the longest useful simple path: an upper bound on word
    /// length for a finite language.
    pub(crate) fn finite_length_bound(&self) -> usize {
        self.num_states()
    }
}
