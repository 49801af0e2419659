//! The game object: alphabet, function symbols, replacement languages and
//! target language, plus validation and a seeded generator.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::regular::{
    determinize, is_identifier, Alphabet, Dfa, Nfa, Regex, RegularError, Symbol, Word,
    EPSILON_TOKEN,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("{}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Regular(#[from] RegularError),
}

/// A language as written by the user, before symbols are resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LangSource {
    Regex(Regex),
    Nfa(Nfa),
}

/// A replacement rule as written: an explicit word list or a language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleDraft {
    /// Words as lists of symbol names; the empty list is ε.
    Finite(Vec<Vec<String>>),
    Language(LangSource),
}

/// An unvalidated game description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameDraft {
    pub alphabet: Vec<String>,
    pub functions: Vec<String>,
    pub rules: Vec<(String, RuleDraft)>,
    pub target: LangSource,
}

impl GameDraft {
    /// Starts a draft; regex text is parsed here, symbols are checked later.
    pub fn new(alphabet: &[&str], functions: &[&str], target: &str) -> Result<Self, GameError> {
        Ok(GameDraft {
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            functions: functions.iter().map(|s| s.to_string()).collect(),
            rules: Vec::new(),
            target: LangSource::Regex(Regex::parse(target)?),
        })
    }

    /// Adds a finite rule; each word is whitespace-separated names or `%e`.
    pub fn finite(mut self, function: &str, words: &[&str]) -> Self {
        let words = words
            .iter()
            .map(|w| {
                w.split_whitespace()
                    .filter(|t| *t != EPSILON_TOKEN)
                    .map(|t| t.to_string())
                    .collect()
            })
            .collect();
        self.rules
            .push((function.to_string(), RuleDraft::Finite(words)));
        self
    }

    pub fn regex(mut self, function: &str, regex: &str) -> Result<Self, GameError> {
        let re = Regex::parse(regex)?;
        self.rules.push((
            function.to_string(),
            RuleDraft::Language(LangSource::Regex(re)),
        ));
        Ok(self)
    }

    pub fn build(self) -> Result<Game, GameError> {
        Game::from_draft(self)
    }
}

/// The replacement language of one function symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplacementLang {
    Finite(Vec<Word>),
    Regular(Nfa),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    lang: ReplacementLang,
    source: RuleDraft,
    dfa: Dfa,
    // every word, when the language is finite (declared or detected)
    words: Option<Vec<Word>>,
}

impl Rule {
    pub fn lang(&self) -> &ReplacementLang {
        &self.lang
    }

    pub fn source(&self) -> &RuleDraft {
        &self.source
    }

    /// Complete DFA of the replacement language.
    pub fn dfa(&self) -> &Dfa {
        &self.dfa
    }

    /// True when the language is finite, whether declared so or detected.
    pub fn is_finite(&self) -> bool {
        self.words.is_some()
    }

    /// All words, for finite languages, in length-lexicographic order for
    /// detected ones and declaration order for declared ones.
    pub fn finite_words(&self) -> Option<&[Word]> {
        self.words.as_deref()
    }

    /// Romeo's candidate replies: every word if the language is finite,
    /// otherwise the words of length at most `len_bound` (or the shortest
    /// words, if none is that short). The flag tells whether the list is the
    /// whole language.
    pub fn choices(&self, len_bound: usize) -> (Vec<Word>, bool) {
        match (&self.words, &self.lang) {
            (Some(ws), _) => (ws.clone(), true),
            (None, ReplacementLang::Regular(nfa)) => {
                let mut words = nfa.enumerate_words(len_bound);
                if words.is_empty() {
                    // every word is longer than the bound: offer the shortest ones
                    let shortest = nfa.enumerate_words(nfa.finite_length_bound());
                    let min = shortest.first().map_or(0, Vec::len);
                    words = shortest
                        .into_iter()
                        .take_while(|w| w.len() == min)
                        .collect();
                }
                (words, false)
            }
            (None, ReplacementLang::Finite(_)) => unreachable!("finite rules always list words"),
        }
    }

    /// Membership of a concrete reply.
    pub fn contains(&self, word: &[Symbol]) -> bool {
        self.dfa.accepts(word).unwrap_or(false)
    }
}

/// A validated context-free game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    alphabet: Alphabet,
    functions: Vec<Symbol>,
    rules: Vec<Option<Rule>>,
    target_source: LangSource,
    target: Nfa,
    target_dfa: Dfa,
}

impl Game {
    pub fn from_draft(draft: GameDraft) -> Result<Game, GameError> {
        let violations = validate_game(&draft);
        if !violations.is_empty() {
            return Err(GameError::Invalid(violations));
        }
        let alphabet = Alphabet::new(draft.alphabet.iter().cloned())?;
        let functions: Vec<Symbol> = draft
            .functions
            .iter()
            .map(|f| alphabet.lookup(f).expect("validated"))
            .collect();
        let mut rules: Vec<Option<Rule>> = vec![None; alphabet.len()];
        for (name, rule) in draft.rules {
            let sym = alphabet.lookup(&name).expect("validated");
            rules[sym.index()] = Some(compile_rule(&alphabet, rule)?);
        }
        let target = compile_lang(&alphabet, &draft.target)?;
        let target_dfa = determinize(&target);
        Ok(Game {
            alphabet,
            functions,
            rules,
            target_source: draft.target,
            target,
            target_dfa,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Function symbols in declaration order.
    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn is_function(&self, sym: Symbol) -> bool {
        self.rules.get(sym.index()).is_some_and(|r| r.is_some())
    }

    pub fn rule(&self, sym: Symbol) -> Option<&Rule> {
        self.rules.get(sym.index()).and_then(|r| r.as_ref())
    }

    pub fn target(&self) -> &Nfa {
        &self.target
    }

    pub fn target_source(&self) -> &LangSource {
        &self.target_source
    }

    pub fn target_dfa(&self) -> &Dfa {
        &self.target_dfa
    }

    /// True when every replacement language is finite.
    pub fn is_finite(&self) -> bool {
        self.functions
            .iter()
            .all(|f| self.rule(*f).is_some_and(Rule::is_finite))
    }

    pub fn parse_word(&self, text: &str) -> Result<Word, RegularError> {
        parse_word(text, &self.alphabet)
    }

    pub fn display_word<'a>(&'a self, word: &'a [Symbol]) -> impl fmt::Display + 'a {
        self.alphabet.display_word(word)
    }

    /// A draft that rebuilds this game.
    pub fn to_draft(&self) -> GameDraft {
        GameDraft {
            alphabet: self.alphabet.names().to_vec(),
            functions: self
                .functions
                .iter()
                .map(|f| self.alphabet.name(*f).to_string())
                .collect(),
            rules: self
                .functions
                .iter()
                .map(|f| {
                    let rule = self.rule(*f).expect("function has a rule");
                    (self.alphabet.name(*f).to_string(), rule.source.clone())
                })
                .collect(),
            target: self.target_source.clone(),
        }
    }

    /// Same game with the finite rule of `function` replaced by `words`.
    pub fn with_finite_rule(&self, function: Symbol, words: Vec<Word>) -> Result<Game, GameError> {
        let mut draft = self.to_draft();
        let name = self.alphabet.name(function).to_string();
        let names = words
            .iter()
            .map(|w| {
                w.iter()
                    .map(|s| self.alphabet.name(*s).to_string())
                    .collect()
            })
            .collect();
        match draft.rules.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = RuleDraft::Finite(names),
            None => {
                return Err(GameError::Invalid(vec![format!(
                    "{} is not a function symbol",
                    name
                )]))
            }
        }
        Game::from_draft(draft)
    }
}

/// Parses whitespace-separated symbols, or `%e` for the empty word.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word, RegularError> {
    alphabet.parse_word(text)
}

fn compile_lang(alphabet: &Alphabet, lang: &LangSource) -> Result<Nfa, RegularError> {
    match lang {
        LangSource::Regex(re) => re.to_nfa(alphabet),
        LangSource::Nfa(nfa) => Ok(nfa.clone()),
    }
}

fn compile_rule(alphabet: &Alphabet, rule: RuleDraft) -> Result<Rule, RegularError> {
    match &rule {
        RuleDraft::Finite(words) => {
            let words: Vec<Word> = words
                .iter()
                .map(|w| {
                    w.iter()
                        .map(|n| {
                            alphabet
                                .lookup(n)
                                .ok_or_else(|| RegularError::UnknownSymbol(n.clone()))
                        })
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            let re = Regex::union(words.iter().map(|w| Regex::word(alphabet, w)).collect());
            let dfa = determinize(&re.to_nfa(alphabet)?);
            Ok(Rule {
                lang: ReplacementLang::Finite(words.clone()),
                source: rule,
                dfa,
                words: Some(words),
            })
        }
        RuleDraft::Language(lang) => {
            let nfa = compile_lang(alphabet, lang)?;
            let dfa = determinize(&nfa);
            let words = nfa
                .is_finite_language()
                .then(|| nfa.enumerate_words(nfa.finite_length_bound()));
            Ok(Rule {
                lang: ReplacementLang::Regular(nfa),
                source: rule,
                dfa,
                words,
            })
        }
    }
}

/// Lists every violated game invariant; empty iff the draft is a valid game.
pub fn validate_game(draft: &GameDraft) -> Vec<String> {
    let mut out = Vec::new();
    let mut declared: Vec<&str> = Vec::new();
    for name in &draft.alphabet {
        if name == EPSILON_TOKEN || !is_identifier(name) {
            out.push(format!("invalid symbol name {:?}", name));
        } else if declared.contains(&name.as_str()) {
            out.push(format!("symbol {} is declared twice", name));
        } else {
            declared.push(name);
        }
    }
    let mut functions: Vec<&str> = Vec::new();
    for f in &draft.functions {
        if !declared.contains(&f.as_str()) {
            out.push(format!("function {} is not in the alphabet", f));
        } else if functions.contains(&f.as_str()) {
            out.push(format!("function {} is declared twice", f));
        } else {
            functions.push(f);
        }
    }
    let mut ruled: Vec<&str> = Vec::new();
    for (name, rule) in &draft.rules {
        if !functions.contains(&name.as_str()) {
            out.push(format!(
                "rule for {} but {} is not a function symbol",
                name, name
            ));
            continue;
        }
        if ruled.contains(&name.as_str()) {
            out.push(format!("duplicate rule for {}", name));
            continue;
        }
        ruled.push(name);
        let undeclared = |sym: &str, out: &mut Vec<String>| {
            let msg = format!("rule {} uses undeclared symbol {}", name, sym);
            if !out.contains(&msg) {
                out.push(msg);
            }
        };
        match rule {
            RuleDraft::Finite(words) => {
                if words.is_empty() {
                    out.push(format!("replacement language of {} is empty", name));
                }
                for (i, w) in words.iter().enumerate() {
                    for sym in w {
                        if !declared.contains(&sym.as_str()) {
                            undeclared(sym, &mut out);
                        }
                    }
                    if words[..i].contains(w) {
                        let shown = if w.is_empty() {
                            EPSILON_TOKEN.to_string()
                        } else {
                            w.join(" ")
                        };
                        out.push(format!("rule {} lists word {} twice", name, shown));
                    }
                }
            }
            // the regex language has no empty-set operator, so it always has a word
            RuleDraft::Language(LangSource::Regex(re)) => {
                for sym in re.symbol_names() {
                    if !declared.contains(&sym) {
                        undeclared(sym, &mut out);
                    }
                }
            }
            RuleDraft::Language(LangSource::Nfa(nfa)) => {
                if nfa.alphabet().names() != draft.alphabet.as_slice() {
                    out.push(format!("rule {} is over a different alphabet", name));
                } else if nfa.is_empty_language() {
                    out.push(format!("replacement language of {} is empty", name));
                }
            }
        }
    }
    for f in &functions {
        if !ruled.contains(f) {
            out.push(format!("missing rule for {}", f));
        }
    }
    match &draft.target {
        LangSource::Regex(re) => {
            for sym in re.symbol_names() {
                if !declared.contains(&sym) {
                    out.push(format!("target uses undeclared symbol {}", sym));
                }
            }
        }
        LangSource::Nfa(nfa) => {
            if nfa.alphabet().names() != draft.alphabet.as_slice() {
                out.push("target is over a different alphabet".to_string());
            }
        }
    }
    out
}

/// Shape of randomly generated games.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub n_symbols: usize,
    pub n_functions: usize,
    /// Words drawn per rule (duplicates are merged, so rules may be shorter).
    pub rule_words: usize,
    pub max_rule_len: usize,
    /// Emit regex rules with a starred symbol instead of word lists.
    pub regular: bool,
    pub target_depth: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_symbols: 3,
            n_functions: 1,
            rule_words: 2,
            max_rule_len: 2,
            regular: false,
            target_depth: 2,
        }
    }
}

impl GenParams {
    pub fn check(&self) -> Result<(), GameError> {
        let bad = |m: &str| Err(GameError::InvalidParams(m.to_string()));
        if self.n_symbols == 0
            || self.n_functions == 0
            || self.rule_words == 0
            || self.max_rule_len == 0
        {
            return bad("symbol, function, rule-word and rule-length counts must be at least 1");
        }
        if self.n_functions > self.n_symbols {
            return bad("more functions than symbols");
        }
        Ok(())
    }
}

const TERMINAL_NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];
const FUNCTION_NAMES: [&str; 5] = ["f", "g", "h", "i", "j"];

fn nth_name(base: &[&str], prefix: &str, i: usize) -> String {
    match base.get(i) {
        Some(n) => n.to_string(),
        None => format!("{}{}", prefix, i),
    }
}

struct Gen(ChaCha8Rng);

impl Gen {
    fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    fn chance(&mut self, num: u64, den: u64) -> bool {
        self.0.next_u64() % den < num
    }

    fn word(&mut self, syms: &[String], max_len: usize) -> Vec<String> {
        let len = self.below(max_len + 1);
        (0..len)
            .map(|_| syms[self.below(syms.len())].clone())
            .collect()
    }

    fn target(&mut self, syms: &[String], depth: usize) -> Regex {
        if depth == 0 {
            return if self.chance(1, 8) {
                Regex::Epsilon
            } else {
                Regex::sym(syms[self.below(syms.len())].clone())
            };
        }
        match self.below(6) {
            0 => self.target(syms, 0),
            1 | 2 => {
                let l = self.target(syms, depth - 1);
                let r = self.target(syms, depth - 1);
                Regex::union(vec![l, r])
            }
            3 | 4 => {
                let l = self.target(syms, depth - 1);
                let r = self.target(syms, depth - 1);
                Regex::concat(vec![l, r])
            }
            _ => Regex::star(self.target(syms, depth - 1)),
        }
    }
}

/// A pseudo-random valid game, a pure function of `(seed, params)`.
///
/// Terminals are named `a`, `b`, ... and function symbols `f`, `g`, ...;
/// every rule offers at least one reply that does not mention the called
/// symbol.
pub fn random_game(seed: u64, params: &GenParams) -> Result<Game, GameError> {
    params.check()?;
    let mut rng = Gen(ChaCha8Rng::seed_from_u64(seed));
    let n_terminals = params.n_symbols - params.n_functions;
    let mut alphabet: Vec<String> = (0..n_terminals)
        .map(|i| nth_name(&TERMINAL_NAMES, "t", i))
        .collect();
    let functions: Vec<String> = (0..params.n_functions)
        .map(|i| nth_name(&FUNCTION_NAMES, "fn", i))
        .collect();
    alphabet.extend(functions.iter().cloned());

    let mut rules = Vec::new();
    for f in &functions {
        let others: Vec<String> = alphabet.iter().filter(|s| *s != f).cloned().collect();
        let mut words: Vec<Vec<String>> = Vec::new();
        for _ in 0..params.rule_words {
            let w = rng.word(&alphabet, params.max_rule_len);
            if !words.contains(&w) {
                words.push(w);
            }
        }
        if words.iter().all(|w| w.contains(f)) {
            let w = if others.is_empty() {
                Vec::new()
            } else {
                rng.word(&others, params.max_rule_len)
            };
            words[0] = w;
            let mut unique: Vec<Vec<String>> = Vec::new();
            for w in words {
                if !unique.contains(&w) {
                    unique.push(w);
                }
            }
            words = unique;
        }
        let rule = if params.regular {
            let mut alts: Vec<Regex> = Vec::new();
            for w in &words {
                let mut parts: Vec<Regex> = w.iter().map(|s| Regex::sym(s.clone())).collect();
                let pos = rng.below(parts.len() + 1);
                let pool = if w.contains(f) || others.is_empty() {
                    &alphabet
                } else {
                    &others
                };
                let starred = pool[rng.below(pool.len())].clone();
                if !w.contains(f) && starred == *f {
                    // keep the non-recursive alternative free of the called symbol
                    alts.push(Regex::concat(parts));
                    continue;
                }
                parts.insert(pos, Regex::star(Regex::sym(starred)));
                alts.push(Regex::concat(parts));
            }
            let mut unique: Vec<Regex> = Vec::new();
            for a in alts {
                if !unique.contains(&a) {
                    unique.push(a);
                }
            }
            RuleDraft::Language(LangSource::Regex(Regex::union(unique)))
        } else {
            RuleDraft::Finite(words)
        };
        rules.push((f.clone(), rule));
    }
    let target = rng.target(&alphabet, params.target_depth);
    Game::from_draft(GameDraft {
        alphabet,
        functions,
        rules,
        target: LangSource::Regex(target),
    })
}
