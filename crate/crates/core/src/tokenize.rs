//! Offset-preserving rule-based tokenizer.
//!
//! Word tokens are maximal runs of alphanumeric characters and a small set of
//! intra-word characters (apostrophe and asterisk by default, so `You're` and
//! `f**k` stay whole). Every other non-whitespace character becomes its own
//! punctuation token. Whitespace is skipped. Offsets are character indices.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::error::{Error, Result};

pub const DEFAULT_INTRA_WORD: &[char] = &['\'', '*'];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Punct,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    pub text: String,
    /// Inclusive start, in characters.
    pub start: usize,
    /// Exclusive end, in characters.
    pub end: usize,
    pub kind: TokenKind,
}

impl Token {
    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tokenizer {
    intra_word: BTreeSet<char>,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self::with_intra_word(DEFAULT_INTRA_WORD.iter().copied())
    }
}

impl Tokenizer {
    pub fn with_intra_word<I: IntoIterator<Item = char>>(chars: I) -> Self {
        Self {
            intra_word: chars.into_iter().collect(),
        }
    }

    /// Parses an intra-word set given as a plain string of characters, e.g. `'*`.
    /// Whitespace and alphanumerics are rejected.
    pub fn from_spec(spec: &str) -> Result<Self> {
        if let Some(c) = spec
            .chars()
            .find(|c| c.is_whitespace() || c.is_alphanumeric())
        {
            return Err(Error::Config(format!(
                "intra-word character {c:?} must be punctuation"
            )));
        }
        Ok(Self::with_intra_word(spec.chars()))
    }

    pub fn intra_word(&self) -> impl Iterator<Item = char> + '_ {
        self.intra_word.iter().copied()
    }

    /// The intra-word set as a string, inverse of [`Tokenizer::from_spec`].
    pub fn spec(&self) -> String {
        self.intra_word.iter().collect()
    }

    fn is_word_char(&self, c: char) -> bool {
        c.is_alphanumeric() || self.intra_word.contains(&c)
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        let mut tokens = Vec::new();
        let mut word: Option<(usize, String)> = None;
        for (pos, c) in text.chars().enumerate() {
            if self.is_word_char(c) {
                word.get_or_insert_with(|| (pos, String::new())).1.push(c);
            } else {
                if let Some((start, w)) = word.take() {
                    tokens.push(Token {
                        end: start + w.chars().count(),
                        text: w,
                        start,
                        kind: TokenKind::Word,
                    });
                }
                if !c.is_whitespace() {
                    tokens.push(Token {
                        text: c.to_string(),
                        start: pos,
                        end: pos + 1,
                        kind: TokenKind::Punct,
                    });
                }
            }
        }
        if let Some((start, w)) = word {
            tokens.push(Token {
                end: start + w.chars().count(),
                text: w,
                start,
                kind: TokenKind::Word,
            });
        }
        tokens
    }
}

/// Tokenizes with the default intra-word set.
pub fn tokenize(text: &str) -> Vec<Token> {
    Tokenizer::default().tokenize(text)
}
