use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{Alphabet, Nfa, RegularError, Symbol};

/// A complete DFA: `next` is defined for every state and symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: usize,
    finals: Vec<bool>,
    // delta[state][symbol]
    delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        initial: usize,
        finals: Vec<bool>,
        delta: Vec<Vec<usize>>,
    ) -> Result<Dfa, RegularError> {
        let n = delta.len();
        if initial >= n || finals.len() != n {
            return Err(RegularError::MalformedAutomaton(format!(
                "{} states but initial {} and {} final flags",
                n,
                initial,
                finals.len()
            )));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() || row.iter().any(|t| *t >= n) {
                return Err(RegularError::MalformedAutomaton(format!(
                    "transition row of state {} is incomplete or out of range",
                    q
                )));
            }
        }
        Ok(Dfa {
            alphabet,
            initial,
            finals,
            delta,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// The last non-final state whose transitions all loop back to itself.
    pub fn sink(&self) -> Option<usize> {
        (0..self.num_states())
            .rev()
            .find(|q| !self.finals[*q] && self.delta[*q].iter().all(|t| t == q))
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals[state]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|q| self.finals[*q])
    }

    #[inline]
    pub fn next(&self, state: usize, sym: Symbol) -> usize {
        self.delta[state][sym.index()]
    }

    /// The state reached from `from` after `word`.
    pub fn run_from(&self, from: usize, word: &[Symbol]) -> Result<usize, RegularError> {
        self.alphabet.check_word(word)?;
        Ok(word.iter().fold(from, |q, s| self.next(q, *s)))
    }

    /// The state reached from the initial state after `word`.
    pub fn run(&self, word: &[Symbol]) -> Result<usize, RegularError> {
        self.run_from(self.initial, word)
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, RegularError> {
        Ok(self.finals[self.run(word)?])
    }
}

/// Subset construction.
///
/// Subsets keep only the "important" NFA states of an ε-closure (those with an
/// outgoing symbol edge, plus final states), so closures that differ only in
/// pass-through ε states collapse. States are numbered in breadth-first
/// discovery order with symbols tried in alphabet order, except that the
/// empty subset, if reachable, is the sink and is numbered last.
pub fn determinize(nfa: &Nfa) -> Dfa {
    let important = |set: BTreeSet<usize>| -> Vec<usize> {
        set.into_iter()
            .filter(|s| nfa.is_final(*s) || nfa.out_edges(*s).iter().any(|(l, _)| l.is_some()))
            .collect()
    };
    let start = important(nfa.closure([nfa.initial()]));
    let mut ids: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    ids.insert(start.clone(), 0);
    subsets.push(start);
    queue.push_back(0);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let set: BTreeSet<usize> = subsets[id].iter().copied().collect();
        let mut row = vec![0; nfa.alphabet().len()];
        for sym in nfa.alphabet().symbols() {
            let succ = important(nfa.step(&set, sym));
            let next = match ids.get(&succ) {
                Some(i) => *i,
                None => {
                    let i = subsets.len();
                    ids.insert(succ.clone(), i);
                    subsets.push(succ);
                    queue.push_back(i);
                    i
                }
            };
            row[sym.index()] = next;
        }
        if delta.len() <= id {
            delta.resize(id + 1, Vec::new());
        }
        delta[id] = row;
    }
    if let Some(&empty) = ids.get(&Vec::new()) {
        let last = subsets.len() - 1;
        let renumber = |q: usize| match q {
            q if q == empty => last,
            q if q > empty => q - 1,
            q => q,
        };
        let row = delta.remove(empty);
        delta.push(row);
        for row in &mut delta {
            for t in row.iter_mut() {
                *t = renumber(*t);
            }
        }
        let set = subsets.remove(empty);
        subsets.push(set);
    }
    let finals = subsets
        .iter()
        .map(|s| s.iter().any(|q| nfa.is_final(*q)))
        .collect();
    Dfa {
        alphabet: nfa.alphabet().clone(),
        initial: 0,
        finals,
        delta,
    }
}
