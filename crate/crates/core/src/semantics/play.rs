use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::PlayError;
use crate::game::Game;
use crate::regular::{Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Read,
    Call,
}

/// A position of the left-to-right game.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LrConfig {
    pub word: Word,
    /// Index of the next unprocessed symbol.
    pub cursor: usize,
    /// Target-DFA state after `word[..cursor]`.
    pub state: usize,
    pub calls_used: usize,
}

impl LrConfig {
    pub fn initial(game: &Game, word: Word) -> LrConfig {
        LrConfig {
            word,
            cursor: 0,
            state: game.target_dfa().initial(),
            calls_used: 0,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.cursor >= self.word.len()
    }

    pub fn current(&self) -> Option<Symbol> {
        self.word.get(self.cursor).copied()
    }

    pub fn suffix(&self) -> &[Symbol] {
        &self.word[self.cursor..]
    }

    /// Checks `state == dfa_run(word[..cursor])`.
    pub fn is_coherent(&self, game: &Game) -> bool {
        game.target_dfa().run(&self.word[..self.cursor]).ok() == Some(self.state)
    }

    fn read(&self, game: &Game) -> LrConfig {
        let sym = self.word[self.cursor];
        LrConfig {
            word: self.word.clone(),
            cursor: self.cursor + 1,
            state: game.target_dfa().next(self.state, sym),
            calls_used: self.calls_used,
        }
    }

    fn replace(&self, replacement: &[Symbol]) -> LrConfig {
        let mut word = Vec::with_capacity(self.word.len() + replacement.len());
        word.extend_from_slice(&self.word[..self.cursor]);
        word.extend_from_slice(replacement);
        word.extend_from_slice(&self.word[self.cursor + 1..]);
        LrConfig {
            word,
            cursor: self.cursor,
            state: self.state,
            calls_used: self.calls_used + 1,
        }
    }
}

/// One legal move and the configurations it can lead to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub mv: Move,
    pub successors: Vec<LrConfig>,
    /// False when Romeo's replies were cut at the length bound.
    pub exhaustive: bool,
}

/// Applies `mv` at `cfg`. A call yields one successor per Romeo reply: all of
/// them for finite languages, those of length at most `romeo_len_bound`
/// otherwise.
pub fn apply_move(
    game: &Game,
    cfg: &LrConfig,
    mv: Move,
    romeo_len_bound: usize,
) -> Result<Expansion, PlayError> {
    let sym = cfg.current().ok_or(PlayError::CursorAtEnd)?;
    game.alphabet().check_word(&[sym])?;
    match mv {
        Move::Read => Ok(Expansion {
            mv,
            successors: vec![cfg.read(game)],
            exhaustive: true,
        }),
        Move::Call => {
            let rule = game
                .rule(sym)
                .ok_or_else(|| PlayError::NotAFunction(game.alphabet().name(sym).to_string()))?;
            let (replies, exhaustive) = rule.choices(romeo_len_bound);
            Ok(Expansion {
                mv,
                successors: replies.iter().map(|r| cfg.replace(r)).collect(),
                exhaustive,
            })
        }
    }
}

/// Every legal move at `cfg` (Read first, then Call when the cursor symbol
/// is a function symbol).
pub fn lr_successors(
    game: &Game,
    cfg: &LrConfig,
    romeo_len_bound: usize,
) -> Result<Vec<Expansion>, PlayError> {
    let sym = cfg.current().ok_or(PlayError::CursorAtEnd)?;
    let mut out = vec![apply_move(game, cfg, Move::Read, romeo_len_bound)?];
    if game.is_function(sym) {
        out.push(apply_move(game, cfg, Move::Call, romeo_len_bound)?);
    }
    Ok(out)
}

/// A Juliet strategy. `observe` is told Romeo's reply after each call.
pub trait Juliet {
    fn choose(&mut self, cfg: &LrConfig) -> Option<Move>;

    fn observe(&mut self, _replacement: &[Symbol]) {}
}

impl<F: FnMut(&LrConfig) -> Option<Move>> Juliet for F {
    fn choose(&mut self, cfg: &LrConfig) -> Option<Move> {
        self(cfg)
    }
}

/// A Romeo strategy: given the configuration at a call, the replacement.
pub trait Romeo {
    fn reply(&mut self, cfg: &LrConfig, called: Symbol) -> Word;
}

impl<F: FnMut(&LrConfig, Symbol) -> Word> Romeo for F {
    fn reply(&mut self, cfg: &LrConfig, called: Symbol) -> Word {
        self(cfg, called)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Move(Move),
    Replace(Word),
}

/// A finished play. `trace` pairs every step with the configuration it was
/// taken in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Play {
    pub juliet_wins: bool,
    /// The move cap stopped the play (counted as a loss for Juliet).
    pub capped: bool,
    pub final_word: Word,
    pub trace: Vec<(LrConfig, Step)>,
}

impl Play {
    pub fn moves(&self) -> usize {
        self.trace
            .iter()
            .filter(|(_, s)| matches!(s, Step::Move(_)))
            .count()
    }

    pub fn calls(&self) -> usize {
        self.trace
            .iter()
            .filter(|(_, s)| matches!(s, Step::Move(Move::Call)))
            .count()
    }

    pub fn replies(&self) -> Vec<Word> {
        self.trace
            .iter()
            .filter_map(|(_, s)| match s {
                Step::Replace(w) => Some(w.clone()),
                _ => None,
            })
            .collect()
    }
}

/// Plays one left-to-right pass of `word` between the two strategies.
pub fn simulate_play<J: Juliet + ?Sized, R: Romeo + ?Sized>(
    game: &Game,
    word: &[Symbol],
    juliet: &mut J,
    romeo: &mut R,
    move_cap: usize,
) -> Result<Play, PlayError> {
    game.alphabet().check_word(word)?;
    let mut cfg = LrConfig::initial(game, word.to_vec());
    let mut trace = Vec::new();
    let mut moves = 0;
    while !cfg.is_finished() {
        debug_assert!(cfg.is_coherent(game));
        if moves >= move_cap {
            return Ok(Play {
                juliet_wins: false,
                capped: true,
                final_word: cfg.word,
                trace,
            });
        }
        let mv = juliet
            .choose(&cfg)
            .ok_or_else(|| PlayError::StrategyUndefined {
                word: game.display_word(&cfg.word).to_string(),
                cursor: cfg.cursor,
            })?;
        moves += 1;
        trace.push((cfg.clone(), Step::Move(mv)));
        match mv {
            Move::Read => cfg = cfg.read(game),
            Move::Call => {
                let sym = cfg.current().expect("not finished");
                let rule = game.rule(sym).ok_or_else(|| {
                    PlayError::NotAFunction(game.alphabet().name(sym).to_string())
                })?;
                let reply = romeo.reply(&cfg, sym);
                if game.alphabet().check_word(&reply).is_err() || !rule.contains(&reply) {
                    return Err(PlayError::IllegalReplacement {
                        symbol: game.alphabet().name(sym).to_string(),
                        word: game.display_word(&reply).to_string(),
                    });
                }
                trace.push((cfg.clone(), Step::Replace(reply.clone())));
                juliet.observe(&reply);
                cfg = cfg.replace(&reply);
            }
        }
    }
    let juliet_wins = game.target().accepts(&cfg.word)?;
    Ok(Play {
        juliet_wins,
        capped: false,
        final_word: cfg.word,
        trace,
    })
}

/// Outcome of replaying a Juliet strategy against every Romeo behaviour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    /// Romeo's reply sequence and whether Juliet won, per play, in
    /// lexicographic order of reply indices.
    pub plays: Vec<(Vec<Word>, bool)>,
    pub wins: usize,
    /// False when some regular rule was enumerated only up to the bound.
    pub exhaustive: bool,
    pub max_moves: usize,
    pub max_calls: usize,
}

impl ReplayReport {
    pub fn all_won(&self) -> bool {
        self.wins == self.plays.len()
    }
}

/// Replays `simulate_play` once per sequence of Romeo choices, with a fresh
/// Juliet from `make_juliet` each time, until every sequence is covered.
pub fn replay_all<J, F>(
    game: &Game,
    word: &[Symbol],
    mut make_juliet: F,
    romeo_len_bound: usize,
    move_cap: usize,
) -> Result<ReplayReport, PlayError>
where
    J: Juliet,
    F: FnMut() -> J,
{
    struct Scripted<'g> {
        game: &'g Game,
        bound: usize,
        script: Vec<usize>,
        branching: Vec<usize>,
        exhaustive: bool,
    }
    impl Romeo for Scripted<'_> {
        fn reply(&mut self, _cfg: &LrConfig, called: Symbol) -> Word {
            let (choices, complete) = self
                .game
                .rule(called)
                .expect("called a function")
                .choices(self.bound);
            self.exhaustive &= complete;
            let at = self.branching.len();
            let pick = self.script.get(at).copied().unwrap_or(0);
            self.branching.push(choices.len());
            choices.into_iter().nth(pick).unwrap_or_default()
        }
    }

    let mut report = ReplayReport {
        plays: Vec::new(),
        wins: 0,
        exhaustive: true,
        max_moves: 0,
        max_calls: 0,
    };
    let mut script: Vec<usize> = Vec::new();
    loop {
        let mut romeo = Scripted {
            game,
            bound: romeo_len_bound,
            script: script.clone(),
            branching: Vec::new(),
            exhaustive: true,
        };
        let mut juliet = make_juliet();
        let play = simulate_play(game, word, &mut juliet, &mut romeo, move_cap)?;
        report.exhaustive &= romeo.exhaustive && !play.capped;
        report.max_moves = report.max_moves.max(play.moves());
        report.max_calls = report.max_calls.max(play.calls());
        if play.juliet_wins {
            report.wins += 1;
        }
        report.plays.push((play.replies(), play.juliet_wins));
        // next script: bump the deepest choice that still has a sibling
        let taken: Vec<usize> = (0..romeo.branching.len())
            .map(|i| script.get(i).copied().unwrap_or(0))
            .collect();
        match (0..taken.len())
            .rev()
            .find(|i| taken[*i] + 1 < romeo.branching[*i])
        {
            Some(i) => {
                script = taken[..i].to_vec();
                script.push(taken[i] + 1);
            }
            None => break,
        }
    }
    Ok(report)
}
