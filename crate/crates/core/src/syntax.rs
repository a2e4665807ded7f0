//! Tokenizer shared by the formula, hypersequent and rule-schema parsers.

use std::fmt;

use thiserror::Error;

/// A syntax error, carrying the character offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError {
            pos,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Top,
    Bot,
    One,
    Zero,
    LParen,
    RParen,
    Imp,
    Or,
    And,
    Fuse,
    Comma,
    Bar,
    Arrow,
    Semi,
    Colon,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Top => f.write_str("`top`"),
            Tok::Bot => f.write_str("`bot`"),
            Tok::One => f.write_str("`1`"),
            Tok::Zero => f.write_str("`0`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Imp => f.write_str("`->`"),
            Tok::Or => f.write_str("`\\/`"),
            Tok::And => f.write_str("`/\\`"),
            Tok::Fuse => f.write_str("`*`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`=>`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
        }
    }
}

/// Splits `text` into positioned tokens. Unicode connectives are accepted as
/// aliases of their ASCII spellings.
pub(crate) fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '|' => Tok::Bar,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '*' | '·' | '⋅' => Tok::Fuse,
            '∧' => Tok::And,
            '∨' => Tok::Or,
            '→' => Tok::Imp,
            '⇒' => Tok::Arrow,
            '⊤' => Tok::Top,
            '⊥' => Tok::Bot,
            '1' => Tok::One,
            '0' => Tok::Zero,
            '-' if next == Some('>') => {
                i += 1;
                Tok::Imp
            }
            '=' if next == Some('>') => {
                i += 1;
                Tok::Arrow
            }
            '\\' if next == Some('/') => {
                i += 1;
                Tok::Or
            }
            '/' if next == Some('\\') => {
                i += 1;
                Tok::And
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                i = j - 1;
                match word.as_str() {
                    "top" => Tok::Top,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(word),
                }
            }
            other => return Err(ParseError::new(start, format!("unknown token `{other}`"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
}

impl Cursor {
    pub(crate) fn new(text: &str) -> Result<Self, ParseError> {
        let toks = tokenize(text)?;
        Ok(Cursor {
            toks,
            idx: 0,
            end: text.chars().count(),
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    pub(crate) fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|(p, _)| *p).unwrap_or(self.end)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(_, t)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {tok}")))
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("expected end of input"))
        }
    }

    pub(crate) fn unexpected(&self, what: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(self.pos(), format!("{what}, found {t}")),
            None => ParseError::new(self.pos(), format!("{what}, found end of input")),
        }
    }
}
