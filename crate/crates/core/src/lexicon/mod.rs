//! Profanity lexicon backed by a character trie, plus whole-token matching.
//!
//! Entries come from plain word lists (one word per line, `#` comments) and
//! from words mined out of gold-annotated training posts. Matching is done per
//! word token: a token matches when its lowercased form is an entry. Tokens
//! containing `*` can optionally be matched against same-length entries that
//! agree on every non-asterisk character.

mod trie;

pub use trie::Trie;

use std::io::{Read, Write};

use crate::corpus::{gold_token_labels, Post, SpanSet};
use crate::error::{Error, Result};
use crate::tokenize::Tokenizer;
use crate::SpanTagger;

const CENSOR_CHAR: char = '*';

/// Where lexicon entries came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceNote {
    pub name: String,
    /// Non-comment, non-blank lines read from the source.
    pub words_read: usize,
    /// Entries that were new when this source was added.
    pub words_added: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    trie: Trie,
    sources: Vec<SourceNote>,
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one entry, case-folded. Returns false for blanks and duplicates.
    pub fn insert(&mut self, word: &str) -> bool {
        let folded = fold(word.trim());
        !folded.is_empty() && self.trie.insert(&folded)
    }

    /// Adds a named batch of words (for instance, mined training words).
    pub fn extend<I, S>(&mut self, name: &str, words: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut note = SourceNote {
            name: name.to_string(),
            words_read: 0,
            words_added: 0,
        };
        for w in words {
            note.words_read += 1;
            note.words_added += self.insert(w.as_ref()) as usize;
        }
        self.sources.push(note);
    }

    /// Reads a one-word-per-line list. Blank lines and lines starting with
    /// `#` are skipped.
    pub fn add_source<R: Read>(&mut self, name: &str, mut source: R) -> Result<()> {
        let mut bytes = Vec::new();
        source.read_to_end(&mut bytes)?;
        let text = String::from_utf8(bytes).map_err(|e| {
            let upto = &e.as_bytes()[..e.utf8_error().valid_up_to()];
            Error::NonUtf8 {
                source_name: name.to_string(),
                line: upto.iter().filter(|&&b| b == b'\n').count() as u64 + 1,
            }
        })?;
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        self.extend(name, words);
        Ok(())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.trie.contains(&fold(word))
    }

    pub fn len(&self) -> usize {
        self.trie.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trie.is_empty()
    }

    pub fn sources(&self) -> &[SourceNote] {
        &self.sources
    }

    /// Entries in sorted order.
    pub fn words(&self) -> Vec<String> {
        self.trie.words()
    }

    /// Writes the sorted entries, one per line.
    pub fn write_to<W: Write>(&self, mut sink: W) -> Result<()> {
        for w in self.words() {
            writeln!(sink, "{w}")?;
        }
        sink.flush()?;
        Ok(())
    }

    /// Whole-token matching with the default tokenizer and no censoring
    /// mitigation.
    pub fn find_spans(&self, text: &str) -> SpanSet {
        LexiconTagger::new(self).tag(text)
    }
}

fn fold(word: &str) -> String {
    word.to_lowercase()
}

/// Builds a lexicon from named word streams.
pub fn build_lexicon<R: Read>(word_lists: Vec<(String, R)>) -> Result<Lexicon> {
    let mut lex = Lexicon::new();
    for (name, stream) in word_lists {
        lex.add_source(&name, stream)?;
    }
    Ok(lex)
}

/// Case-folded, sorted, deduplicated word tokens whose character range is
/// fully inside the post's gold offsets.
pub fn mine_training_lexicon(posts: &[Post], tokenizer: &Tokenizer) -> Vec<String> {
    let mut words: Vec<String> = posts
        .iter()
        .filter(|p| !p.gold.is_empty())
        .flat_map(|p| {
            let tokens = tokenizer.tokenize(&p.text);
            let labels = gold_token_labels(&tokens, &p.gold);
            tokens
                .into_iter()
                .zip(labels)
                .filter(|(t, l)| t.is_word() && l.is_toxic())
                .map(|(t, _)| fold(&t.text))
                .collect::<Vec<_>>()
        })
        .collect();
    words.sort();
    words.dedup();
    words
}

/// Lexicon entries a censored token could stand for.
///
/// Empty unless the token contains at least one `*` and at least one other
/// character; otherwise every entry of the same length that agrees on all
/// non-asterisk positions.
pub fn normalize_censored(lexicon: &Lexicon, token_text: &str) -> Vec<String> {
    let pattern: Vec<char> = fold(token_text).chars().collect();
    let has_star = pattern.contains(&CENSOR_CHAR);
    let has_anchor = pattern.iter().any(|&c| c != CENSOR_CHAR);
    if !has_star || !has_anchor {
        return Vec::new();
    }
    lexicon.trie.wildcard_matches(&pattern, CENSOR_CHAR)
}

/// Lexicon word matcher.
#[derive(Clone, Debug)]
pub struct LexiconTagger<'a> {
    lexicon: &'a Lexicon,
    tokenizer: Tokenizer,
    censored: bool,
}

impl<'a> LexiconTagger<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        Self {
            lexicon,
            tokenizer: Tokenizer::default(),
            censored: false,
        }
    }

    pub fn with_tokenizer(mut self, tokenizer: Tokenizer) -> Self {
        self.tokenizer = tokenizer;
        self
    }

    /// Enables matching of asterisk-censored tokens via [`normalize_censored`].
    pub fn with_censored_matching(mut self, enabled: bool) -> Self {
        self.censored = enabled;
        self
    }

    fn token_matches(&self, text: &str) -> bool {
        self.lexicon.contains(text)
            || (self.censored && !normalize_censored(self.lexicon, text).is_empty())
    }
}

impl SpanTagger for LexiconTagger<'_> {
    fn tag(&self, text: &str) -> SpanSet {
        let tokens = self.tokenizer.tokenize(text);
        SpanSet::from_offsets(
            tokens
                .iter()
                .filter(|t| t.is_word() && self.token_matches(&t.text))
                .flat_map(|t| t.range()),
        )
    }
}
