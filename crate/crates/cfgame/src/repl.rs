//! A line-based session where a human plays one side against the engine.
//!
//! Each turn prints the word with the cursor symbol in brackets (`a [f] b`,
//! or `a b []` once the pass is over) and the legal inputs:
//!
//! * Juliet: `read`, `call` (on function symbols), `stop` (read the rest of
//!   the word without calling), `quit`;
//! * Romeo: `pick WORD` with a word of the called symbol's replacement
//!   language (`%e` for the empty word), `quit`.
//!
//! The engine's Juliet follows the effect-table strategy. The engine's Romeo
//! answers every call with a worst reply for Juliet according to the effect
//! table; ties go to the first reply in enumeration order, or to a seeded
//! random one.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use cfgame_core::effects::{compute_effect_table, worst_replies, EffectStrategy, EffectTable};
use cfgame_core::game::ReplacementLang;
use cfgame_core::game::RuleDraft;
use cfgame_core::semantics::{apply_move, Juliet, LrConfig, Move};
use cfgame_core::{Game, Symbol, Word};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Replies of regular rules longer than this are not considered by the
/// engine's Romeo.
pub const ROMEO_LEN_BOUND: usize = 6;

/// Sessions end in a Romeo win after this many Juliet moves.
pub const MOVE_CAP: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Juliet,
    Romeo,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SessionEnd {
    JulietWins(Word),
    RomeoWins(Word),
    Quit,
}

/// `a [f] b`, or `a b []` at the end of the word.
pub fn show_config(game: &Game, cfg: &LrConfig) -> String {
    let mut parts: Vec<String> = cfg
        .word
        .iter()
        .map(|s| game.alphabet().name(*s).to_string())
        .collect();
    match parts.get_mut(cfg.cursor) {
        Some(p) => *p = format!("[{}]", p),
        None => parts.push("[]".to_string()),
    }
    parts.join(" ")
}

fn show_language(game: &Game, sym: Symbol) -> String {
    let rule = game.rule(sym).expect("called symbols have rules");
    match (rule.source(), rule.lang()) {
        (RuleDraft::Language(cfgame_core::game::LangSource::Regex(re)), _) => {
            format!("regex {}", re)
        }
        (_, ReplacementLang::Finite(words)) => {
            let words: Vec<String> = words
                .iter()
                .map(|w| game.display_word(w).to_string())
                .collect();
            words.join(" , ")
        }
        (_, ReplacementLang::Regular(_)) => {
            let (words, _) = rule.choices(ROMEO_LEN_BOUND);
            let mut words: Vec<String> = words
                .iter()
                .map(|w| game.display_word(w).to_string())
                .collect();
            words.push("...".to_string());
            words.join(" , ")
        }
    }
}

fn replace(cfg: &LrConfig, reply: &[Symbol]) -> LrConfig {
    let mut word = cfg.word[..cfg.cursor].to_vec();
    word.extend_from_slice(reply);
    word.extend_from_slice(&cfg.word[cfg.cursor + 1..]);
    LrConfig {
        word,
        cursor: cfg.cursor,
        state: cfg.state,
        calls_used: cfg.calls_used + 1,
    }
}

enum Engine<'t> {
    Strategy(EffectStrategy<'t>),
    ReadOnly,
}

struct Session<'a, R, W> {
    game: &'a Game,
    table: &'a EffectTable,
    input: R,
    output: W,
    rng: Option<ChaCha8Rng>,
}

impl<R: BufRead, W: Write> Session<'_, R, W> {
    /// Next non-blank input line, or `None` at end of input.
    fn line(&mut self) -> io::Result<Option<String>> {
        loop {
            write!(self.output, "> ")?;
            self.output.flush()?;
            let mut buf = String::new();
            if self.input.read_line(&mut buf)? == 0 {
                writeln!(self.output)?;
                return Ok(None);
            }
            let trimmed = buf.trim();
            if !trimmed.is_empty() {
                return Ok(Some(trimmed.to_string()));
            }
        }
    }

    fn human_juliet(&mut self, cfg: &LrConfig, can_call: bool) -> io::Result<Option<Input>> {
        loop {
            let Some(line) = self.line()? else {
                return Ok(None);
            };
            match line.as_str() {
                "read" => return Ok(Some(Input::Move(Move::Read))),
                "call" if can_call => return Ok(Some(Input::Move(Move::Call))),
                "stop" => return Ok(Some(Input::Stop)),
                "quit" => return Ok(None),
                "call" => {
                    let sym = cfg.current().expect("not finished");
                    writeln!(
                        self.output,
                        "illegal: {} is not a function symbol",
                        self.game.alphabet().name(sym)
                    )?;
                }
                other => writeln!(self.output, "illegal: {:?}", other)?,
            }
        }
    }

    fn human_romeo(&mut self, sym: Symbol) -> io::Result<Option<Word>> {
        let rule = self.game.rule(sym).expect("called symbols have rules");
        loop {
            let Some(line) = self.line()? else {
                return Ok(None);
            };
            if line == "quit" {
                return Ok(None);
            }
            let Some(text) = line
                .strip_prefix("pick")
                .filter(|t| t.is_empty() || t.starts_with(' '))
            else {
                writeln!(self.output, "illegal: {:?}", line)?;
                continue;
            };
            let text = if text.trim().is_empty() {
                "%e"
            } else {
                text.trim()
            };
            match self.game.parse_word(text) {
                Ok(w) if rule.contains(&w) => return Ok(Some(w)),
                Ok(_) => writeln!(
                    self.output,
                    "illegal: {} is not a replacement for {}",
                    text,
                    self.game.alphabet().name(sym)
                )?,
                Err(e) => writeln!(self.output, "illegal: {}", e)?,
            }
        }
    }

    fn engine_romeo(&mut self, cfg: &LrConfig) -> Word {
        let mut worst = worst_replies(self.game, self.table, cfg, ROMEO_LEN_BOUND)
            .expect("the cursor is on a function symbol");
        let pick = match &mut self.rng {
            Some(rng) => (rng.next_u64() % worst.len() as u64) as usize,
            None => 0,
        };
        worst.swap_remove(pick)
    }
}

enum Input {
    Move(Move),
    Stop,
}

/// Runs one session on `word`, the human playing `human`. Returns when the
/// pass ends, the move cap is hit, or the human quits (or input runs out).
pub fn play_session<R: BufRead, W: Write>(
    game: &Game,
    word: &[Symbol],
    human: Side,
    seed: Option<u64>,
    input: R,
    output: W,
) -> io::Result<SessionEnd> {
    let table = compute_effect_table(game);
    let mut s = Session {
        game,
        table: &table,
        input,
        output,
        rng: seed.map(ChaCha8Rng::seed_from_u64),
    };
    let mut engine = match EffectStrategy::new(game, &table, word) {
        Ok(strategy) => {
            if human == Side::Romeo {
                writeln!(s.output, "the word is safe: Juliet has a winning strategy")?;
            }
            Engine::Strategy(strategy)
        }
        Err(_) => {
            if human == Side::Romeo {
                writeln!(s.output, "the word is not safe: Juliet will only read")?;
            }
            Engine::ReadOnly
        }
    };
    let mut cfg = LrConfig::initial(game, word.to_vec());
    let mut moves = 0;
    let mut reading_out = false;
    loop {
        writeln!(s.output, "word: {}", show_config(game, &cfg))?;
        if cfg.is_finished() {
            let won = game.target_dfa().is_final(cfg.state);
            let final_word = game.display_word(&cfg.word).to_string();
            if won {
                writeln!(s.output, "result: Juliet wins with {}", final_word)?;
                return Ok(SessionEnd::JulietWins(cfg.word));
            }
            writeln!(
                s.output,
                "result: Romeo wins, {} is not in the target",
                final_word
            )?;
            return Ok(SessionEnd::RomeoWins(cfg.word));
        }
        if moves >= MOVE_CAP {
            writeln!(s.output, "result: Romeo wins, move limit reached")?;
            return Ok(SessionEnd::RomeoWins(cfg.word));
        }
        let sym = cfg.current().expect("not finished");
        let can_call = game.is_function(sym);
        let mv = if human == Side::Juliet && !reading_out {
            let mut legal = String::from("juliet: read");
            if can_call {
                legal.push_str(" | call");
            }
            let _ = write!(legal, " | stop | quit");
            writeln!(s.output, "{}", legal)?;
            match s.human_juliet(&cfg, can_call)? {
                None => {
                    writeln!(s.output, "quit")?;
                    return Ok(SessionEnd::Quit);
                }
                Some(Input::Stop) => {
                    reading_out = true;
                    Move::Read
                }
                Some(Input::Move(mv)) => mv,
            }
        } else if human == Side::Juliet {
            Move::Read
        } else {
            let mv = match &mut engine {
                Engine::Strategy(st) => st.choose(&cfg).unwrap_or(Move::Read),
                Engine::ReadOnly => Move::Read,
            };
            writeln!(
                s.output,
                "juliet plays {}",
                if mv == Move::Read { "read" } else { "call" }
            )?;
            mv
        };
        moves += 1;
        cfg = match mv {
            Move::Read => apply_move(game, &cfg, Move::Read, 0)
                .expect("reading is always legal before the end")
                .successors
                .remove(0),
            Move::Call => {
                let name = game.alphabet().name(sym).to_string();
                let reply = if human == Side::Romeo {
                    writeln!(
                        s.output,
                        "romeo: pick a replacement for {} from {}",
                        name,
                        show_language(game, sym)
                    )?;
                    match s.human_romeo(sym)? {
                        Some(w) => w,
                        None => {
                            writeln!(s.output, "quit")?;
                            return Ok(SessionEnd::Quit);
                        }
                    }
                } else {
                    let w = s.engine_romeo(&cfg);
                    writeln!(
                        s.output,
                        "romeo picks {} for {}",
                        game.display_word(&w),
                        name
                    )?;
                    w
                };
                if let Engine::Strategy(st) = &mut engine {
                    st.observe(&reply);
                }
                replace(&cfg, &reply)
            }
        };
    }
}
