//! The line-oriented game file format.
//!
//! ```text
//! # comments run to the end of the line
//! alphabet: a b f
//! functions: f
//! target: regex a | b
//! rule f: finite a , b
//! ```
//!
//! Rules are `rule SYM: finite WORD , WORD ...` or `rule SYM: regex REGEX`;
//! a WORD is whitespace-separated symbols or `%e`.

use std::fmt::Write;

use cfgame_core::game::{LangSource, RuleDraft};
use cfgame_core::regular::EPSILON_TOKEN;
use cfgame_core::{Game, GameDraft, GameError, Regex};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}:` line")]
    Missing(&'static str),
    /// Every semantic violation found, in validation order.
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error("rule for {0} was not given as a regex or word list and cannot be written out")]
    Unrenderable(String),
}

impl From<GameError> for FormatError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::Invalid(v) => FormatError::Invalid(v),
            other => FormatError::Invalid(vec![other.to_string()]),
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_regex_field(line: usize, text: &str) -> Result<Regex, FormatError> {
    let body = text
        .strip_prefix("regex")
        .filter(|rest| rest.is_empty() || rest.starts_with(char::is_whitespace))
        .ok_or_else(|| syntax(line, "expected `regex REGEX`"))?;
    Regex::parse(body.trim()).map_err(|e| syntax(line, e.to_string()))
}

fn parse_rule(line: usize, text: &str) -> Result<RuleDraft, FormatError> {
    if let Some(body) = text.strip_prefix("finite") {
        if !body.is_empty() && !body.starts_with(char::is_whitespace) {
            return Err(syntax(
                line,
                "expected `finite` or `regex` after the rule name",
            ));
        }
        let mut words = Vec::new();
        for (i, item) in body.split(',').enumerate() {
            let tokens: Vec<&str> = item.split_whitespace().collect();
            match tokens.as_slice() {
                [] => {
                    return Err(syntax(
                        line,
                        format!(
                            "word {} is blank; write {} for the empty word",
                            i + 1,
                            EPSILON_TOKEN
                        ),
                    ))
                }
                [t] if *t == EPSILON_TOKEN => words.push(Vec::new()),
                ts if ts.contains(&EPSILON_TOKEN) => {
                    return Err(syntax(line, format!("{} must stand alone", EPSILON_TOKEN)))
                }
                ts => words.push(ts.iter().map(|t| t.to_string()).collect()),
            }
        }
        Ok(RuleDraft::Finite(words))
    } else if text.starts_with("regex") {
        Ok(RuleDraft::Language(LangSource::Regex(parse_regex_field(
            line, text,
        )?)))
    } else {
        Err(syntax(
            line,
            "expected `finite` or `regex` after the rule name",
        ))
    }
}

/// Parses and validates a game file.
pub fn parse_game(text: &str) -> Result<Game, FormatError> {
    let mut alphabet: Option<Vec<String>> = None;
    let mut functions: Option<Vec<String>> = None;
    let mut target: Option<Regex> = None;
    let mut rules = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `KEY: VALUE`"))?;
        let key = key.trim();
        let value = value.trim();
        let words = || {
            value
                .split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>()
        };
        match key {
            "alphabet" if alphabet.is_some() => {
                return Err(syntax(line, "second `alphabet:` line"))
            }
            "alphabet" => alphabet = Some(words()),
            "functions" if functions.is_some() => {
                return Err(syntax(line, "second `functions:` line"))
            }
            "functions" => functions = Some(words()),
            "target" if target.is_some() => return Err(syntax(line, "second `target:` line")),
            "target" => target = Some(parse_regex_field(line, value)?),
            _ => {
                let name = key
                    .strip_prefix("rule")
                    .filter(|n| n.starts_with(char::is_whitespace))
                    .map(str::trim)
                    .ok_or_else(|| syntax(line, format!("unknown key `{}`", key)))?;
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax(line, "expected `rule SYM:`"));
                }
                rules.push((name.to_string(), parse_rule(line, value)?));
            }
        }
    }
    let draft = GameDraft {
        alphabet: alphabet.ok_or(FormatError::Missing("alphabet"))?,
        functions: functions.unwrap_or_default(),
        rules,
        target: LangSource::Regex(target.ok_or(FormatError::Missing("target"))?),
    };
    Ok(draft.build()?)
}

fn render_word(word: &[String]) -> String {
    if word.is_empty() {
        EPSILON_TOKEN.to_string()
    } else {
        word.join(" ")
    }
}

/// Writes `game` in the file format; [`parse_game`] reads it back unchanged.
pub fn render_game(game: &Game) -> Result<String, FormatError> {
    let draft = game.to_draft();
    let mut out = String::new();
    let _ = writeln!(out, "alphabet: {}", draft.alphabet.join(" "));
    let _ = writeln!(out, "functions: {}", draft.functions.join(" "));
    match &draft.target {
        LangSource::Regex(re) => {
            let _ = writeln!(out, "target: regex {}", re);
        }
        LangSource::Nfa(_) => return Err(FormatError::Unrenderable("the target".to_string())),
    }
    for (name, rule) in &draft.rules {
        match rule {
            RuleDraft::Finite(words) => {
                let words: Vec<String> = words.iter().map(|w| render_word(w)).collect();
                let _ = writeln!(out, "rule {}: finite {}", name, words.join(" , "));
            }
            RuleDraft::Language(LangSource::Regex(re)) => {
                let _ = writeln!(out, "rule {}: regex {}", name, re);
            }
            RuleDraft::Language(LangSource::Nfa(_)) => {
                return Err(FormatError::Unrenderable(name.clone()))
            }
        }
    }
    Ok(out)
}
