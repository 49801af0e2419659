use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Reverse;

use super::{EffectError, EffectTable, StateSet};
use crate::game::Game;
use crate::regular::{Symbol, Word};
use crate::semantics::{apply_move, CertNode, Juliet, LrConfig, Move, StrategyCert};

#[derive(Clone, Debug)]
struct Frame {
    symbols: Word,
    pos: usize,
    /// Where the prefix state must be once `symbols` are processed.
    target: StateSet,
    /// Fixpoint level whose effects justify the obligation.
    level: usize,
}

/// Juliet's strategy read off the effect table.
///
/// The strategy keeps a stack of obligations: "finish these symbols inside
/// this state set, using effects of this level". A call whose guarantee
/// first appears at level `j` pushes the reply as an obligation at level
/// `j - 1`, so levels strictly drop along nested calls and every play ends.
#[derive(Clone, Debug)]
pub struct EffectStrategy<'t> {
    game: &'t Game,
    table: &'t EffectTable,
    frames: Vec<Frame>,
    state: usize,
    pending: Option<(StateSet, usize)>,
}

impl<'t> EffectStrategy<'t> {
    pub fn new(
        game: &'t Game,
        table: &'t EffectTable,
        word: &[Symbol],
    ) -> Result<Self, EffectError> {
        if !table.is_safe(word)? {
            return Err(EffectError::UnsafeWord(game.display_word(word).to_string()));
        }
        Ok(EffectStrategy {
            game,
            table,
            frames: alloc::vec![Frame {
                symbols: word.to_vec(),
                pos: 0,
                target: table.finals().clone(),
                level: table.top(),
            }],
            state: table.initial_state(),
            pending: None,
        })
    }

    /// States from which `rest` can be played into `target` at `level`.
    fn win_set(&self, level: usize, rest: &[Symbol], target: &StateSet) -> StateSet {
        let effects = self.table.level(level);
        rest.iter().rev().fold(target.clone(), |w, sym| {
            (0..self.table.num_states())
                .filter(|p| effects[sym.index()].at(*p).guarantees(&w))
                .collect()
        })
    }
}

impl Juliet for EffectStrategy<'_> {
    fn choose(&mut self, cfg: &LrConfig) -> Option<Move> {
        while self.frames.last().is_some_and(|f| f.pos == f.symbols.len()) {
            self.frames.pop();
        }
        let frame = self.frames.last()?;
        let sym = frame.symbols[frame.pos];
        if cfg.current() != Some(sym) || cfg.state != self.state {
            return None;
        }
        let win = self.win_set(frame.level, &frame.symbols[frame.pos + 1..], &frame.target);
        let read_to = self.game.target_dfa().next(self.state, sym);
        if win.contains(read_to) {
            self.frames.last_mut()?.pos += 1;
            self.state = read_to;
            return Some(Move::Read);
        }
        let read_set = StateSet::singleton(read_to);
        let (level, witness) = (1..=frame.level).find_map(|j| {
            self.table.level(j)[sym.index()]
                .at(self.state)
                .sets()
                .iter()
                .find(|s| **s != read_set && s.is_subset(&win))
                .map(|s| (j, s.clone()))
        })?;
        self.frames.last_mut()?.pos += 1;
        self.pending = Some((witness, level - 1));
        Some(Move::Call)
    }

    fn observe(&mut self, replacement: &[Symbol]) {
        if let Some((target, level)) = self.pending.take() {
            self.frames.push(Frame {
                symbols: replacement.to_vec(),
                pos: 0,
                target,
                level,
            });
        }
    }
}

/// Materializes [`EffectStrategy`] for `word` as a trace tree over every
/// Romeo reply (replies of regular rules up to `romeo_len_bound`).
pub fn extract_strategy(
    game: &Game,
    table: &EffectTable,
    word: &[Symbol],
    romeo_len_bound: usize,
) -> Result<StrategyCert, EffectError> {
    game.alphabet().check_word(word)?;
    let strategy = EffectStrategy::new(game, table, word)?;
    let mut exhaustive = true;
    let root = expand(
        game,
        strategy,
        LrConfig::initial(game, word.to_vec()),
        romeo_len_bound,
        &mut exhaustive,
    );
    Ok(StrategyCert::new(word.to_vec(), root, exhaustive))
}

fn expand(
    game: &Game,
    mut strategy: EffectStrategy<'_>,
    cfg: LrConfig,
    bound: usize,
    exhaustive: &mut bool,
) -> CertNode {
    if cfg.is_finished() {
        return CertNode::Done;
    }
    let mv = strategy
        .choose(&cfg)
        .expect("the effect strategy has a move on every reachable position");
    let expansion = apply_move(game, &cfg, mv, bound).expect("strategy moves are legal");
    match mv {
        Move::Read => {
            let next = expansion
                .successors
                .into_iter()
                .next()
                .expect("one successor");
            CertNode::Read(Box::new(expand(game, strategy, next, bound, exhaustive)))
        }
        Move::Call => {
            *exhaustive &= expansion.exhaustive;
            let sym = cfg.current().expect("not finished");
            let (replies, _) = game.rule(sym).expect("function").choices(bound);
            let children = replies
                .into_iter()
                .zip(expansion.successors)
                .map(|(reply, next)| {
                    let mut s = strategy.clone();
                    s.observe(&reply);
                    let node = expand(game, s, next, bound, exhaustive);
                    (reply, node)
                })
                .collect();
            CertNode::Call(children)
        }
    }
}

/// Romeo's most damaging replies to the call at `cfg`, judged by the
/// fixpoint effects: replies after which Juliet can no longer win come
/// first, then those whose smallest guarantee set is largest. All replies
/// tied for worst are returned, in enumeration order.
pub fn worst_replies(
    game: &Game,
    table: &EffectTable,
    cfg: &LrConfig,
    romeo_len_bound: usize,
) -> Result<Vec<Word>, EffectError> {
    let sym = cfg
        .current()
        .ok_or_else(|| EffectError::NotAFunction("end of word".to_string()))?;
    let rule = game
        .rule(sym)
        .ok_or_else(|| EffectError::NotAFunction(game.alphabet().name(sym).to_string()))?;
    let (replies, _) = rule.choices(romeo_len_bound);
    let rest = &cfg.word[cfg.cursor + 1..];
    let mut scored = Vec::with_capacity(replies.len());
    for r in replies {
        let mut w = r.clone();
        w.extend_from_slice(rest);
        let anti = table.prefix_antichain(table.top(), cfg.state, &w)?;
        let safe = anti.guarantees(table.finals());
        let obligation = anti
            .sets()
            .iter()
            .map(StateSet::len)
            .min()
            .unwrap_or(usize::MAX);
        scored.push(((safe, Reverse(obligation)), r));
    }
    let best = scored.iter().map(|(k, _)| *k).min();
    Ok(scored
        .into_iter()
        .filter(|(k, _)| Some(*k) == best)
        .map(|(_, r)| r)
        .collect())
}
