//! Command-line front end.
//!
//! Exit codes: 0 success or SAFE, 1 UNSAFE, 2 usage, parse or validation
//! error, 3 UNKNOWN (an oracle ran out of budget), 4 state limit exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use cfgame_core::automaton::{build_from_table, AutomatonError};
use cfgame_core::effects::compute_effect_table;
use cfgame_core::semantics::Outcome;
use cfgame_core::{
    random_game, solve_any_order_bounded, solve_lr_bounded, solve_multipass_bounded, Game,
    GenParams, Symbol, Word,
};
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::format::{parse_game, render_game, FormatError};
use crate::repl::{play_session, Side};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSAFE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;
pub const EXIT_STATE_LIMIT: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "cfgame",
    version,
    about = "Context-free rewriting games played left to right"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a game file and report every problem found.
    Validate { file: PathBuf },
    /// Decide whether Juliet wins on a word.
    Decide {
        file: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = Mode::Effects)]
        mode: Mode,
        /// Left steps allowed (multipass mode only).
        #[arg(long)]
        k: Option<usize>,
        /// Most calls an oracle explores along a play.
        #[arg(long, default_value_t = 10)]
        budget: usize,
        /// Longest reply an oracle takes from a regular rule.
        #[arg(long, default_value_t = 6)]
        romeo_len: usize,
    },
    /// Build the automaton of safely rewritable words.
    Automaton {
        file: PathBuf,
        /// Write the automaton in Graphviz format to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// List short words Juliet wins in the unrestricted game but not left to right.
    Compare {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        budget: usize,
    },
    /// Print a random game.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        symbols: usize,
        #[arg(long, default_value_t = 1)]
        functions: usize,
        #[arg(long, default_value_t = 2)]
        rule_words: usize,
        #[arg(long, default_value_t = 2)]
        max_rule_len: usize,
        #[arg(long)]
        regular: bool,
        #[arg(long, default_value_t = 2)]
        target_depth: usize,
    },
    /// Play interactively against the engine.
    Play {
        file: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long = "as", value_enum)]
        side: PlaySide,
        /// Break ties between equally bad replies at random.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Effects,
    LrOracle,
    AnyOracle,
    Multipass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PlaySide {
    Juliet,
    Romeo,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:\n{source}")]
    Format { path: String, source: FormatError },
    #[error(transparent)]
    StateLimit(AutomatonError),
    #[error(transparent)]
    Output(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::StateLimit(_) => EXIT_STATE_LIMIT,
            _ => EXIT_USAGE,
        }
    }
}

fn load(path: &Path) -> Result<Game, CliError> {
    let shown = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    parse_game(&text).map_err(|source| CliError::Format {
        path: shown,
        source,
    })
}

fn word_arg(game: &Game, text: &str) -> Result<Word, CliError> {
    game.parse_word(text)
        .map_err(|e| CliError::Usage(format!("--word: {}", e)))
}

/// Every word over the alphabet of length at most `max_len`, shortest first
/// and in symbol order within a length.
pub fn words_up_to(game: &Game, max_len: usize) -> Vec<Word> {
    let syms: Vec<Symbol> = game.alphabet().symbols().collect();
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                syms.iter().map(move |s| {
                    let mut w = w.clone();
                    w.push(*s);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn verdict_line(out: &mut dyn Write, outcome: Outcome) -> Result<i32, CliError> {
    let (text, code) = match outcome {
        Outcome::Win => ("SAFE", EXIT_OK),
        Outcome::Lose => ("UNSAFE", EXIT_UNSAFE),
        Outcome::Unknown => ("UNKNOWN", EXIT_UNKNOWN),
    };
    writeln!(out, "{}", text)?;
    Ok(code)
}

fn dispatch(
    command: Command,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    match command {
        Command::Validate { file } => {
            let game = load(&file)?;
            writeln!(
                out,
                "OK: {} symbols, {} function symbols, target automaton with {} states",
                game.alphabet().len(),
                game.functions().len(),
                game.target_dfa().num_states()
            )?;
            Ok(EXIT_OK)
        }
        Command::Decide {
            file,
            word,
            mode,
            k,
            budget,
            romeo_len,
        } => {
            if k.is_some() && mode != Mode::Multipass {
                return Err(CliError::Usage(
                    "--k is only used with --mode multipass".to_string(),
                ));
            }
            if mode == Mode::Multipass && k.is_none() {
                return Err(CliError::Usage("--mode multipass needs --k".to_string()));
            }
            let game = load(&file)?;
            let word = word_arg(&game, &word)?;
            let outcome = match mode {
                Mode::Effects => {
                    if compute_effect_table(&game)
                        .is_safe(&word)
                        .expect("word checked")
                    {
                        Outcome::Win
                    } else {
                        Outcome::Lose
                    }
                }
                Mode::LrOracle => {
                    solve_lr_bounded(&game, &word, budget, romeo_len)
                        .expect("word checked")
                        .outcome
                }
                Mode::AnyOracle => {
                    solve_any_order_bounded(&game, &word, budget, romeo_len)
                        .expect("word checked")
                        .outcome
                }
                Mode::Multipass => {
                    solve_multipass_bounded(&game, &word, k.unwrap_or(0), budget, romeo_len)
                        .expect("word checked")
                        .outcome
                }
            };
            verdict_line(out, outcome)
        }
        Command::Automaton { file, dot, limit } => {
            let game = load(&file)?;
            let table = compute_effect_table(&game);
            let aut = build_from_table(&game, &table, limit).map_err(CliError::StateLimit)?;
            writeln!(out, "STATES {}", aut.num_states())?;
            if let Some(path) = dot {
                fs::write(&path, aut.export_dot()).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
            }
            Ok(EXIT_OK)
        }
        Command::Compare {
            file,
            max_len,
            budget,
        } => {
            let game = load(&file)?;
            let table = compute_effect_table(&game);
            let mut total = 0;
            for w in words_up_to(&game, max_len) {
                if table.is_safe(&w).expect("word over the alphabet") {
                    continue;
                }
                let any = solve_any_order_bounded(&game, &w, budget, crate::repl::ROMEO_LEN_BOUND)
                    .expect("word over the alphabet");
                if any.outcome == Outcome::Win {
                    writeln!(out, "WITNESS {}", game.display_word(&w))?;
                    total += 1;
                }
            }
            writeln!(out, "TOTAL {}", total)?;
            Ok(EXIT_OK)
        }
        Command::Gen {
            seed,
            symbols,
            functions,
            rule_words,
            max_rule_len,
            regular,
            target_depth,
        } => {
            let params = GenParams {
                n_symbols: symbols,
                n_functions: functions,
                rule_words,
                max_rule_len,
                regular,
                target_depth,
            };
            let game = random_game(seed, &params).map_err(|e| CliError::Usage(e.to_string()))?;
            let text =
                render_game(&game).expect("generated games are written as regexes and word lists");
            write!(out, "{}", text)?;
            Ok(EXIT_OK)
        }
        Command::Play {
            file,
            word,
            side,
            seed,
        } => {
            let game = load(&file)?;
            let word = word_arg(&game, &word)?;
            let side = match side {
                PlaySide::Juliet => Side::Juliet,
                PlaySide::Romeo => Side::Romeo,
            };
            play_session(&game, &word, side, seed, input, out)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Results go to `out`, diagnostics to `err`; `play` reads `input`.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{}", text);
                EXIT_USAGE
            } else {
                let _ = write!(out, "{}", text);
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, input, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.code()
        }
    }
}
