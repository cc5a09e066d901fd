use super::model::CrfModel;
use crate::corpus::SpanSet;
use crate::lexicon::Lexicon;
use crate::SpanTagger;

/// Tokenize, decode with Viterbi, and map toxic tokens back to offsets.
pub fn predict(model: &CrfModel, text: &str, lexicon: Option<&Lexicon>, gap_fill: bool) -> SpanSet {
    model.predict(text, lexicon, gap_fill)
}

/// [`SpanTagger`] adapter for a trained model.
#[derive(Clone, Debug)]
pub struct CrfTagger<'a> {
    model: &'a CrfModel,
    lexicon: Option<&'a Lexicon>,
    gap_fill: bool,
}

impl<'a> CrfTagger<'a> {
    /// Uses the model's stored gap-fill mode.
    pub fn new(model: &'a CrfModel, lexicon: Option<&'a Lexicon>) -> Self {
        Self {
            model,
            lexicon,
            gap_fill: model.gap_fill,
        }
    }

    pub fn with_gap_fill(mut self, gap_fill: bool) -> Self {
        self.gap_fill = gap_fill;
        self
    }
}

impl SpanTagger for CrfTagger<'_> {
    fn tag(&self, text: &str) -> SpanSet {
        self.model.predict(text, self.lexicon, self.gap_fill)
    }
}
