use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::cert::{CertNode, StrategyCert};
use super::{Outcome, PlayError, Verdict};
use crate::game::Game;
use crate::regular::{Symbol, Word};

/// Romeo's replies per function symbol, enumerated once per solver run.
fn romeo_table(game: &Game, romeo_len_bound: usize) -> Vec<Option<(Vec<Word>, bool)>> {
    game.alphabet()
        .symbols()
        .map(|s| game.rule(s).map(|r| r.choices(romeo_len_bound)))
        .collect()
}

fn splice(prefix: &[Symbol], replacement: &[Symbol], rest: &[Symbol]) -> Word {
    let mut w = Vec::with_capacity(prefix.len() + replacement.len() + rest.len());
    w.extend_from_slice(prefix);
    w.extend_from_slice(replacement);
    w.extend_from_slice(rest);
    w
}

/// Romeo's side of a call: every reply must win. Replies cut by the length
/// bound count as an unknown contribution, so a win is only ever reported
/// when Romeo's options were enumerated completely.
fn romeo_all<F: FnMut(&[Symbol]) -> Outcome>(replies: &(Vec<Word>, bool), mut eval: F) -> Outcome {
    let (words, complete) = replies;
    let mut res = if *complete {
        Outcome::Win
    } else {
        Outcome::Unknown
    };
    for r in words {
        res = res.and(eval(r));
        if res == Outcome::Lose {
            break;
        }
    }
    res
}

struct LrSearch<'g> {
    game: &'g Game,
    replies: Vec<Option<(Vec<Word>, bool)>>,
    // keyed by (prefix state, unprocessed suffix, calls left); the processed
    // prefix matters only through its target-DFA state
    memo: BTreeMap<(usize, Word, usize), Outcome>,
}

impl LrSearch<'_> {
    fn eval(&mut self, state: usize, suffix: &[Symbol], left: usize) -> Outcome {
        let dfa = self.game.target_dfa();
        let Some((&sym, rest)) = suffix.split_first() else {
            return if dfa.is_final(state) {
                Outcome::Win
            } else {
                Outcome::Lose
            };
        };
        let key = (state, suffix.to_vec(), left);
        if let Some(o) = self.memo.get(&key) {
            return *o;
        }
        let mut res = self.eval(dfa.next(state, sym), rest, left);
        if res != Outcome::Win {
            if let Some(replies) = self.replies[sym.index()].clone() {
                let call = if left == 0 {
                    Outcome::Unknown
                } else {
                    romeo_all(&replies, |r| {
                        self.eval(state, &splice(&[], r, rest), left - 1)
                    })
                };
                res = res.or(call);
            }
        }
        self.memo.insert(key, res);
        res
    }

    fn min_win_budget(&mut self, state: usize, suffix: &[Symbol], up_to: usize) -> Option<usize> {
        (0..=up_to).find(|b| self.eval(state, suffix, *b) == Outcome::Win)
    }

    /// Trace tree of the positional strategy that always plays a move
    /// winning within the least sufficient budget, preferring Read.
    fn certificate(&mut self, state: usize, suffix: &[Symbol], budget: usize) -> CertNode {
        let Some((&sym, rest)) = suffix.split_first() else {
            return CertNode::Done;
        };
        let dfa = self.game.target_dfa();
        let next = dfa.next(state, sym);
        if self.eval(next, rest, budget) == Outcome::Win {
            let b = self.min_win_budget(next, rest, budget).expect("read wins");
            return CertNode::Read(alloc::boxed::Box::new(self.certificate(next, rest, b)));
        }
        let (replies, _) = self.replies[sym.index()].clone().expect("call wins");
        let children = replies
            .into_iter()
            .map(|r| {
                let w = splice(&[], &r, rest);
                let b = self
                    .min_win_budget(state, &w, budget - 1)
                    .expect("every reply wins");
                let node = self.certificate(state, &w, b);
                (r, node)
            })
            .collect();
        CertNode::Call(children)
    }
}

/// Bounded search of the left-to-right game on `word`.
///
/// At most `budget` calls are made along any play; regular replacement
/// languages are enumerated up to `romeo_len_bound`. `Win` and `Lose` are
/// both sound; anything the budget or the length bound cuts off makes the
/// verdict `Unknown` unless the rest of the tree already decides it. Wins
/// carry a certificate.
pub fn solve_lr_bounded(
    game: &Game,
    word: &[Symbol],
    budget: usize,
    romeo_len_bound: usize,
) -> Result<Verdict, PlayError> {
    game.alphabet().check_word(word)?;
    let mut search = LrSearch {
        game,
        replies: romeo_table(game, romeo_len_bound),
        memo: BTreeMap::new(),
    };
    let q0 = game.target_dfa().initial();
    let outcome = search.eval(q0, word, budget);
    let certificate = (outcome == Outcome::Win).then(|| {
        let b = search.min_win_budget(q0, word, budget).expect("wins");
        StrategyCert::new(word.to_vec(), search.certificate(q0, word, b), true)
    });
    Ok(Verdict {
        outcome,
        certificate,
    })
}

struct AnyOrderSearch<'g> {
    game: &'g Game,
    replies: Vec<Option<(Vec<Word>, bool)>>,
    memo: BTreeMap<(Word, usize), Outcome>,
}

impl AnyOrderSearch<'_> {
    fn eval(&mut self, word: &Word, left: usize) -> Outcome {
        if self.game.target_dfa().accepts(word).unwrap_or(false) {
            return Outcome::Win;
        }
        let key = (word.clone(), left);
        if let Some(o) = self.memo.get(&key) {
            return *o;
        }
        let mut best = Outcome::Lose;
        for (i, sym) in word.iter().enumerate() {
            let Some(replies) = self.replies[sym.index()].clone() else {
                continue;
            };
            let call = if left == 0 {
                Outcome::Unknown
            } else {
                romeo_all(&replies, |r| {
                    self.eval(&splice(&word[..i], r, &word[i + 1..]), left - 1)
                })
            };
            best = best.or(call);
            if best == Outcome::Win {
                break;
            }
        }
        self.memo.insert(key, best);
        best
    }
}

/// Bounded search of the unrestricted game: Juliet may call any function
/// symbol anywhere in the word, and may stop at any time, winning iff the
/// current word is in the target.
pub fn solve_any_order_bounded(
    game: &Game,
    word: &[Symbol],
    budget: usize,
    romeo_len_bound: usize,
) -> Result<Verdict, PlayError> {
    game.alphabet().check_word(word)?;
    let mut search = AnyOrderSearch {
        game,
        replies: romeo_table(game, romeo_len_bound),
        memo: BTreeMap::new(),
    };
    let outcome = search.eval(&word.to_vec(), budget);
    Ok(Verdict {
        outcome,
        certificate: None,
    })
}

struct MultipassSearch<'g> {
    game: &'g Game,
    replies: Vec<Option<(Vec<Word>, bool)>>,
    memo: BTreeMap<(Word, usize, usize, usize), Outcome>,
}

impl MultipassSearch<'_> {
    fn eval(
        &mut self,
        word: &Word,
        cursor: usize,
        state: usize,
        passes: usize,
        left: usize,
    ) -> Outcome {
        let dfa = self.game.target_dfa();
        if cursor == word.len() {
            let stop = if dfa.is_final(state) {
                Outcome::Win
            } else {
                Outcome::Lose
            };
            if stop == Outcome::Win || passes == 0 {
                return stop;
            }
            return stop.or(self.eval(word, 0, dfa.initial(), passes - 1, left));
        }
        let key = (word.clone(), cursor, passes, left);
        if let Some(o) = self.memo.get(&key) {
            return *o;
        }
        let sym = word[cursor];
        let mut res = self.eval(word, cursor + 1, dfa.next(state, sym), passes, left);
        if res != Outcome::Win {
            if let Some(replies) = self.replies[sym.index()].clone() {
                let call = if left == 0 {
                    Outcome::Unknown
                } else {
                    romeo_all(&replies, |r| {
                        let w = splice(&word[..cursor], r, &word[cursor + 1..]);
                        self.eval(&w, cursor, state, passes, left - 1)
                    })
                };
                res = res.or(call);
            }
        }
        self.memo.insert(key, res);
        res
    }
}

/// Bounded search of the game with up to `k` left steps: after finishing a
/// pass Juliet either stops (winning iff the word is in the target) or, while
/// left steps remain, returns the cursor to the start for another pass.
/// With `k = 0` this is the left-to-right game.
pub fn solve_multipass_bounded(
    game: &Game,
    word: &[Symbol],
    k: usize,
    budget: usize,
    romeo_len_bound: usize,
) -> Result<Verdict, PlayError> {
    game.alphabet().check_word(word)?;
    let mut search = MultipassSearch {
        game,
        replies: romeo_table(game, romeo_len_bound),
        memo: BTreeMap::new(),
    };
    let q0 = game.target_dfa().initial();
    let outcome = search.eval(&word.to_vec(), 0, q0, k, budget);
    Ok(Verdict {
        outcome,
        certificate: None,
    })
}
