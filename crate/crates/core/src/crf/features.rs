//! Indicator feature templates for token emissions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::tokenize::{Token, TokenKind};

pub const BOS: &str = "<BOS>";
pub const EOS: &str = "<EOS>";

/// Sparse feature map. Zero-valued entries are never stored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeatureVector {
    entries: BTreeMap<String, f64>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, id: impl Into<String>, value: f64) {
        let id = id.into();
        if value == 0.0 {
            self.entries.remove(&id);
        } else {
            self.entries.insert(id, value);
        }
    }

    pub fn indicator(&mut self, id: impl Into<String>) {
        self.set(id, 1.0);
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.entries.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

/// Which templates fire. Persisted in the model header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FeatureTemplates {
    /// Longest prefix/suffix emitted (0 disables affixes).
    pub max_affix: usize,
    /// Previous/next token identity.
    pub context: bool,
    /// Lexicon membership flag, when a lexicon is supplied.
    pub lexicon: bool,
}

impl Default for FeatureTemplates {
    fn default() -> Self {
        Self {
            max_affix: 3,
            context: true,
            lexicon: true,
        }
    }
}

impl FeatureTemplates {
    pub fn extract(
        &self,
        tokens: &[Token],
        position: usize,
        lexicon: Option<&Lexicon>,
    ) -> Result<FeatureVector> {
        let tok = tokens.get(position).ok_or(Error::PositionOutOfRange {
            position,
            len: tokens.len(),
        })?;
        let mut fv = FeatureVector::new();
        let lower = tok.text.to_lowercase();
        fv.indicator("bias");
        fv.indicator(format!("w={lower}"));

        let chars: Vec<char> = lower.chars().collect();
        for k in 1..=self.max_affix.min(chars.len()) {
            fv.indicator(format!("pre{k}={}", chars[..k].iter().collect::<String>()));
            fv.indicator(format!(
                "suf{k}={}",
                chars[chars.len() - k..].iter().collect::<String>()
            ));
        }

        if tok.text.chars().any(char::is_numeric) {
            fv.indicator("digit");
        }
        if tok.text.contains('*') {
            fv.indicator("star");
        }
        let mut alpha = tok.text.chars().filter(|c| c.is_alphabetic()).peekable();
        if alpha.peek().is_some() && alpha.all(char::is_uppercase) {
            fv.indicator("caps");
        }
        if tok.kind == TokenKind::Punct {
            fv.indicator("punct");
        }
        if let Some(lex) = lexicon.filter(|_| self.lexicon) {
            if tok.is_word() && lex.contains(&tok.text) {
                fv.indicator("lex=1");
            }
        }
        if self.context {
            let prev = match position {
                0 => BOS.to_string(),
                p => tokens[p - 1].text.to_lowercase(),
            };
            let next = tokens
                .get(position + 1)
                .map_or_else(|| EOS.to_string(), |t| t.text.to_lowercase());
            fv.indicator(format!("prev={prev}"));
            fv.indicator(format!("next={next}"));
        }
        Ok(fv)
    }
}

/// Features for one position with the default templates.
pub fn extract_features(
    tokens: &[Token],
    position: usize,
    lexicon: Option<&Lexicon>,
) -> Result<FeatureVector> {
    FeatureTemplates::default().extract(tokens, position, lexicon)
}
