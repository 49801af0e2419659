use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::EffectError;
use crate::regular::{Dfa, Symbol};

/// A set of target-DFA states, stored as a bitset without trailing zero words.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct StateSet {
    bits: Vec<u64>,
}

impl StateSet {
    pub fn new() -> Self {
        StateSet::default()
    }

    pub fn singleton(q: usize) -> Self {
        let mut s = StateSet::new();
        s.insert(q);
        s
    }

    pub fn insert(&mut self, q: usize) {
        let (w, b) = (q / 64, q % 64);
        if self.bits.len() <= w {
            self.bits.resize(w + 1, 0);
        }
        self.bits[w] |= 1 << b;
    }

    pub fn contains(&self, q: usize) -> bool {
        self.bits
            .get(q / 64)
            .is_some_and(|w| w & (1 << (q % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits.len() <= other.bits.len()
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        if self.bits.len() < other.bits.len() {
            self.bits.resize(other.bits.len(), 0);
        }
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    /// Largest member plus one; 0 for the empty set.
    pub fn bound(&self) -> usize {
        match self.bits.last() {
            Some(w) => (self.bits.len() - 1) * 64 + (64 - w.leading_zeros() as usize),
            None => 0,
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, w)| {
            let mut w = *w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

impl FromIterator<usize> for StateSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = StateSet::new();
        for q in iter {
            s.insert(q);
        }
        s
    }
}

/// Canonical order: by size, then lexicographically on the sorted members.
impl Ord for StateSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for StateSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.named(None), f)
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A family of pairwise ⊆-incomparable non-empty state sets, in canonical
/// order. Read as the upward-closed family it generates: Juliet can force
/// play into any superset of a member.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Antichain {
    sets: Vec<StateSet>,
}

impl Antichain {
    /// The ⊆-minimal members of `sets`, deduplicated and canonically ordered.
    pub fn reduce<I: IntoIterator<Item = StateSet>>(sets: I) -> Result<Antichain, EffectError> {
        let sets: Vec<StateSet> = sets.into_iter().collect();
        if sets.iter().any(StateSet::is_empty) {
            return Err(EffectError::EmptyGuaranteeSet);
        }
        Ok(Antichain::minimize(sets))
    }

    pub(crate) fn minimize(mut sets: Vec<StateSet>) -> Antichain {
        sets.sort_unstable();
        let mut kept: Vec<StateSet> = Vec::with_capacity(sets.len());
        for s in sets {
            // kept members are no larger than s, so only they can be subsets of it
            if !kept.iter().any(|k| k.is_subset(&s)) {
                kept.push(s);
            }
        }
        Antichain { sets: kept }
    }

    pub fn singleton(q: usize) -> Antichain {
        Antichain {
            sets: vec![StateSet::singleton(q)],
        }
    }

    pub fn sets(&self) -> &[StateSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Some member is contained in `x`, i.e. Juliet can force play into `x`.
    pub fn guarantees(&self, x: &StateSet) -> bool {
        self.sets.iter().any(|s| s.is_subset(x))
    }

    /// Every member of `self` has a member of `other` below it: the family
    /// generated by `other` includes the one generated by `self`.
    pub fn is_refined_by(&self, other: &Antichain) -> bool {
        self.sets.iter().all(|s| other.guarantees(s))
    }

    /// Minimal unions `⋃ g(i)` over choice functions picking one member from
    /// each family. No families gives `{∅}`; an empty family gives `∅`.
    pub fn choice_unions<'a, I>(families: I) -> Antichain
    where
        I: IntoIterator<Item = &'a Antichain>,
    {
        let mut acc = vec![StateSet::new()];
        for fam in families {
            let mut next = Vec::with_capacity(acc.len() * fam.len());
            for u in &acc {
                for s in &fam.sets {
                    next.push(u.union(s));
                }
            }
            // minimizing partial unions is exact: a ⊆ b implies a∪s ⊆ b∪s
            acc = Antichain::minimize(next).sets;
            if acc.is_empty() {
                break;
            }
        }
        Antichain { sets: acc }
    }

    /// Continues every member with `effect`: the minimal sets
    /// `⋃_{p∈S} g(p)` with `S` a member and `g(p) ∈ effect(p)`.
    pub fn then(&self, effect: &Effect) -> Antichain {
        let mut all = Vec::new();
        for s in &self.sets {
            let fams: Vec<&Antichain> = s.iter().map(|p| &effect.entries[p]).collect();
            all.extend(Antichain::choice_unions(fams).sets);
        }
        Antichain::minimize(all)
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.named(None), f)
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Per target-DFA state, the antichain of guarantee sets Juliet can force
/// when a symbol or string is played left to right from that state.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Effect {
    pub(crate) entries: Vec<Antichain>,
}

impl Effect {
    pub fn new(entries: Vec<Antichain>) -> Effect {
        Effect { entries }
    }

    /// `q ↦ {{q}}`, the effect of ε.
    pub fn identity(num_states: usize) -> Effect {
        Effect {
            entries: (0..num_states).map(Antichain::singleton).collect(),
        }
    }

    /// Reading `sym`: `q ↦ {{δ(q, sym)}}`.
    pub fn read(dfa: &Dfa, sym: Symbol) -> Result<Effect, EffectError> {
        dfa.alphabet().check_word(&[sym])?;
        Ok(Effect {
            entries: (0..dfa.num_states())
                .map(|q| Antichain::singleton(dfa.next(q, sym)))
                .collect(),
        })
    }

    pub fn num_states(&self) -> usize {
        self.entries.len()
    }

    pub fn at(&self, q: usize) -> &Antichain {
        &self.entries[q]
    }

    pub fn entries(&self) -> &[Antichain] {
        &self.entries
    }
}

impl core::ops::Index<usize> for Effect {
    type Output = Antichain;

    fn index(&self, q: usize) -> &Antichain {
        &self.entries[q]
    }
}

/// One line per state, `q0: {q1},{q2}`.
impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.named(None), f)
    }
}

/// Display adapter writing state `q` as `q<q>`, except the sink as `qs`.
#[derive(Clone, Copy, Debug)]
pub struct Named<'a, T: ?Sized> {
    value: &'a T,
    sink: Option<usize>,
}

macro_rules! named {
    ($($t:ty),*) => {$(
        impl $t {
            /// Displays with the sink state, if any, written `qs`.
            pub fn named(&self, sink: Option<usize>) -> Named<'_, $t> {
                Named { value: self, sink }
            }
        }
    )*};
}

named!(StateSet, Antichain, Effect);

fn write_state(f: &mut fmt::Formatter<'_>, q: usize, sink: Option<usize>) -> fmt::Result {
    if Some(q) == sink {
        f.write_str("qs")
    } else {
        write!(f, "q{}", q)
    }
}

impl fmt::Display for Named<'_, StateSet> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, q) in self.value.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write_state(f, q, self.sink)?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for Named<'_, Antichain> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.sets.is_empty() {
            return f.write_str("none");
        }
        for (i, s) in self.value.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", s.named(self.sink))?;
        }
        Ok(())
    }
}

impl fmt::Display for Named<'_, Effect> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, a) in self.value.entries.iter().enumerate() {
            write_state(f, q, self.sink)?;
            writeln!(f, ": {}", a.named(self.sink))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sequential composition: play the first effect, then the second.
pub fn compose_effects(first: &Effect, second: &Effect) -> Result<Effect, EffectError> {
    if first.num_states() != second.num_states() {
        return Err(EffectError::StateSpaceMismatch {
            left: first.num_states(),
            right: second.num_states(),
        });
    }
    Ok(Effect {
        entries: first.entries.iter().map(|a| a.then(second)).collect(),
    })
}
