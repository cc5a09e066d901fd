//! Dataset records, character-offset span algebra and the CSV formats.

mod csv_io;
mod spans;

pub use csv_io::{parse_dataset, read_predictions, write_dataset, write_predictions};
pub use spans::{offsets_to_ranges, ranges_to_offsets, SpanSet};

use crate::error::{Error, Result};
use crate::tokenize::Token;

/// Binary token label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    #[default]
    NotToxic = 0,
    Toxic = 1,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::NotToxic, Label::Toxic];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Label> {
        match i {
            0 => Some(Label::NotToxic),
            1 => Some(Label::Toxic),
            _ => None,
        }
    }

    pub fn is_toxic(self) -> bool {
        self == Label::Toxic
    }
}

impl From<bool> for Label {
    fn from(toxic: bool) -> Self {
        if toxic {
            Label::Toxic
        } else {
            Label::NotToxic
        }
    }
}

/// One dataset instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Post {
    pub id: String,
    pub text: String,
    pub gold: SpanSet,
}

impl Post {
    /// Checks that every gold offset indexes a character of `text`.
    pub fn new(id: impl Into<String>, text: impl Into<String>, gold: SpanSet) -> Result<Self> {
        let text = text.into();
        let len = text.chars().count();
        if let Some(max) = gold.max().filter(|&m| m >= len) {
            return Err(Error::OffsetOutOfRange {
                row: 0,
                offset: max,
                len,
            });
        }
        Ok(Self {
            id: id.into(),
            text,
            gold,
        })
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictionRecord {
    pub post_id: String,
    pub predicted: SpanSet,
}

impl PredictionRecord {
    pub fn new(post_id: impl Into<String>, predicted: SpanSet) -> Self {
        Self {
            post_id: post_id.into(),
            predicted,
        }
    }
}

/// Character offsets covered by toxic-labeled tokens.
///
/// With `gap_fill`, the characters between two adjacent toxic tokens are
/// included as well, so `so fucking stupid` labeled `[0, 1, 1]` yields one
/// contiguous span `3..17`.
pub fn token_labels_to_offsets(
    tokens: &[Token],
    labels: &[Label],
    gap_fill: bool,
) -> Result<SpanSet> {
    if tokens.len() != labels.len() {
        return Err(Error::LengthMismatch {
            tokens: tokens.len(),
            labels: labels.len(),
        });
    }
    let mut ranges = Vec::new();
    let mut prev_toxic_end: Option<usize> = None;
    for (tok, label) in tokens.iter().zip(labels) {
        if label.is_toxic() {
            match prev_toxic_end {
                Some(end) if gap_fill && end < tok.start => ranges.push((end, tok.end)),
                _ => ranges.push((tok.start, tok.end)),
            }
            prev_toxic_end = Some(tok.end);
        } else {
            prev_toxic_end = None;
        }
    }
    SpanSet::from_ranges(&ranges)
}

/// Token labels derived from gold offsets: a token is toxic iff its whole
/// character range lies inside the gold set.
pub fn gold_token_labels(tokens: &[Token], gold: &SpanSet) -> Vec<Label> {
    tokens
        .iter()
        .map(|t| Label::from(gold.covers(t.range())))
        .collect()
}
