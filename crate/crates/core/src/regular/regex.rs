use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{is_identifier, Alphabet, Nfa, RegularError, Symbol, EPSILON_TOKEN};

/// Regex syntax tree over symbol names.
///
/// `Concat` and `Union` are n-ary and never nest directly inside a node of
/// the same kind when built through [`Regex::concat`] / [`Regex::union`] or
/// the parser, so printing and re-parsing gives back the same tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Regex {
    Epsilon,
    Sym(String),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
    Opt(Box<Regex>),
}

impl Regex {
    pub fn sym(name: impl Into<String>) -> Regex {
        Regex::Sym(name.into())
    }

    pub fn concat(parts: Vec<Regex>) -> Regex {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Regex::Concat(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Regex::Epsilon,
            1 => flat.pop().unwrap(),
            _ => Regex::Concat(flat),
        }
    }

    pub fn union(parts: Vec<Regex>) -> Regex {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Regex::Union(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => panic!("union of no alternatives"),
            1 => flat.pop().unwrap(),
            _ => Regex::Union(flat),
        }
    }

    pub fn star(inner: Regex) -> Regex {
        Regex::Star(Box::new(inner))
    }

    /// The regex denoting exactly `word`.
    pub fn word(alphabet: &Alphabet, word: &[Symbol]) -> Regex {
        Regex::concat(word.iter().map(|s| Regex::sym(alphabet.name(*s))).collect())
    }

    /// Parses regex text without resolving symbols.
    pub fn parse(text: &str) -> Result<Regex, RegularError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser {
            tokens,
            pos: 0,
            end: text.len(),
        };
        let re = parser.union()?;
        if let Some((tok, at)) = parser.tokens.get(parser.pos) {
            return Err(syntax(*at, alloc::format!("unexpected {}", tok)));
        }
        Ok(re)
    }

    /// Names referenced by this regex, in first-occurrence order.
    pub fn symbol_names(&self) -> Vec<&str> {
        fn walk<'a>(re: &'a Regex, out: &mut Vec<&'a str>) {
            match re {
                Regex::Epsilon => {}
                Regex::Sym(s) => {
                    if !out.contains(&s.as_str()) {
                        out.push(s);
                    }
                }
                Regex::Concat(ps) | Regex::Union(ps) => ps.iter().for_each(|p| walk(p, out)),
                Regex::Star(r) | Regex::Plus(r) | Regex::Opt(r) => walk(r, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Thompson construction over `alphabet`.
    pub fn to_nfa(&self, alphabet: &Alphabet) -> Result<Nfa, RegularError> {
        let mut b = Builder {
            edges: Vec::new(),
            n: 0,
        };
        let (start, end) = b.build(self, alphabet)?;
        Nfa::new(alphabet.clone(), b.n, start, [end], b.edges)
    }
}

/// Parses `text` and compiles it to an NFA over `alphabet`.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<Nfa, RegularError> {
    Regex::parse(text)?.to_nfa(alphabet)
}

struct Builder {
    edges: Vec<(usize, Option<Symbol>, usize)>,
    n: usize,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    fn eps(&mut self, from: usize, to: usize) {
        self.edges.push((from, None, to));
    }

    fn build(&mut self, re: &Regex, alphabet: &Alphabet) -> Result<(usize, usize), RegularError> {
        let s = self.fresh();
        let e = self.fresh();
        match re {
            Regex::Epsilon => self.eps(s, e),
            Regex::Sym(name) => {
                let sym = alphabet
                    .lookup(name)
                    .ok_or_else(|| RegularError::UnknownSymbol(name.clone()))?;
                self.edges.push((s, Some(sym), e));
            }
            Regex::Concat(parts) => {
                let mut cur = s;
                for p in parts {
                    let (ps, pe) = self.build(p, alphabet)?;
                    self.eps(cur, ps);
                    cur = pe;
                }
                self.eps(cur, e);
            }
            Regex::Union(parts) => {
                for p in parts {
                    let (ps, pe) = self.build(p, alphabet)?;
                    self.eps(s, ps);
                    self.eps(pe, e);
                }
            }
            Regex::Star(inner) | Regex::Plus(inner) | Regex::Opt(inner) => {
                let (is, ie) = self.build(inner, alphabet)?;
                self.eps(s, is);
                self.eps(ie, e);
                if !matches!(re, Regex::Plus(_)) {
                    self.eps(s, e);
                }
                if !matches!(re, Regex::Opt(_)) {
                    self.eps(ie, is);
                }
            }
        }
        Ok((s, e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Epsilon,
    Bar,
    Star,
    Plus,
    Question,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "symbol {}", s),
            Token::Epsilon => f.write_str("'%e'"),
            Token::Bar => f.write_str("'|'"),
            Token::Star => f.write_str("'*'"),
            Token::Plus => f.write_str("'+'"),
            Token::Question => f.write_str("'?'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
        }
    }
}

fn syntax(position: usize, message: impl Into<String>) -> RegularError {
    RegularError::Syntax {
        position,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, RegularError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'|' => Token::Bar,
            b'*' => Token::Star,
            b'+' => Token::Plus,
            b'?' => Token::Question,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'%' => {
                if text[i..].starts_with(EPSILON_TOKEN) {
                    let after = bytes.get(i + 2);
                    if after.is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') {
                        return Err(syntax(i, "'%e' must be followed by a separator"));
                    }
                    out.push((Token::Epsilon, i));
                    i += 2;
                    continue;
                }
                return Err(syntax(i, "expected '%e'"));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &text[start..i];
                debug_assert!(is_identifier(name));
                out.push((Token::Ident(name.to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(i, alloc::format!("unexpected character {:?}", ch)));
            }
        };
        out.push((tok, i));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, at)| *at)
    }

    fn union(&mut self) -> Result<Regex, RegularError> {
        let mut alts = vec![self.concat()?];
        while self.peek() == Some(&Token::Bar) {
            self.pos += 1;
            alts.push(self.concat()?);
        }
        Ok(Regex::union(alts))
    }

    fn concat(&mut self) -> Result<Regex, RegularError> {
        let mut parts = Vec::new();
        while matches!(
            self.peek(),
            Some(Token::Ident(_) | Token::Epsilon | Token::LParen)
        ) {
            parts.push(self.postfix()?);
        }
        if parts.is_empty() {
            return Err(match self.peek() {
                Some(t) => syntax(self.here(), alloc::format!("unexpected {}", t)),
                None => syntax(self.here(), "unexpected end of expression"),
            });
        }
        Ok(Regex::concat(parts))
    }

    fn postfix(&mut self) -> Result<Regex, RegularError> {
        let mut re = self.atom()?;
        loop {
            re = match self.peek() {
                Some(Token::Star) => Regex::Star(Box::new(re)),
                Some(Token::Plus) => Regex::Plus(Box::new(re)),
                Some(Token::Question) => Regex::Opt(Box::new(re)),
                _ => return Ok(re),
            };
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<Regex, RegularError> {
        let at = self.here();
        match self.tokens.get(self.pos).map(|(t, _)| t.clone()) {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Regex::Sym(name))
            }
            Some(Token::Epsilon) => {
                self.pos += 1;
                Ok(Regex::Epsilon)
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.union()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(syntax(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => Err(syntax(at, alloc::format!("unexpected {}", t))),
            None => Err(syntax(at, "unexpected end of expression")),
        }
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence: 0 union, 1 concat, 2 postfix operand
        fn go(re: &Regex, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let own = match re {
                Regex::Union(_) => 0,
                Regex::Concat(_) => 1,
                _ => 2,
            };
            let paren = own < prec;
            if paren {
                f.write_str("(")?;
            }
            match re {
                Regex::Epsilon => f.write_str(EPSILON_TOKEN)?,
                Regex::Sym(s) => f.write_str(s)?,
                Regex::Union(ps) => {
                    for (i, p) in ps.iter().enumerate() {
                        if i > 0 {
                            f.write_str(" | ")?;
                        }
                        go(p, 1, f)?;
                    }
                }
                Regex::Concat(ps) => {
                    for (i, p) in ps.iter().enumerate() {
                        if i > 0 {
                            f.write_str(" ")?;
                        }
                        // a nested concat only arises from explicit grouping
                        let inner = if matches!(p, Regex::Concat(_)) { 3 } else { 2 };
                        go(p, inner, f)?;
                    }
                }
                Regex::Star(r) | Regex::Plus(r) | Regex::Opt(r) => {
                    go(r, 3, f)?;
                    f.write_str(match re {
                        Regex::Star(_) => "*",
                        Regex::Plus(_) => "+",
                        _ => "?",
                    })?;
                }
            }
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        go(self, 0, f)
    }
}
