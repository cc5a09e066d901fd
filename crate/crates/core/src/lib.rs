//! Toxic span detection at the character-offset level.
//!
//! The crate provides:
//!
//! * [`corpus`]: the `spans,text` dataset format, prediction files and the
//!   [`SpanSet`] offset algebra,
//! * [`tokenize`]: an offset-preserving tokenizer,
//! * [`lexicon`]: a trie-backed profanity lexicon with whole-token matching,
//! * [`crf`]: a feature-based linear-chain CRF over binary token labels,
//! * [`eval`]: per-post span F1, corpus reports and majority-vote ensembling.
//!
//! Every tagger implements [`SpanTagger`], so lexicon and CRF predictions
//! (and prediction files from any external system) can be scored and
//! ensembled the same way.
//!
//! ```
//! use toxspan::{Lexicon, SpanTagger, LexiconTagger, SpanSet};
//!
//! let mut lexicon = Lexicon::new();
//! lexicon.insert("silly");
//! let spans = LexiconTagger::new(&lexicon).tag("You're just silly.");
//! assert_eq!(spans, SpanSet::from_offsets(12..17));
//! assert_eq!(spans.ranges(), vec![(12, 17)]);
//! ```

pub mod corpus;
pub mod crf;
pub mod error;
pub mod eval;
pub mod lexicon;
pub mod synthetic;
pub mod tokenize;

pub use corpus::{Label, Post, PredictionRecord, SpanSet};
pub use crf::{CrfModel, CrfTagger, TrainConfig};
pub use error::{Error, Result};
pub use eval::{evaluate_corpus, majority_vote, span_f1, EvalReport, EvalResult};
pub use lexicon::{Lexicon, LexiconTagger};
pub use tokenize::{Token, Tokenizer};

/// Anything that maps raw text to predicted toxic character offsets.
pub trait SpanTagger {
    fn tag(&self, text: &str) -> SpanSet;

    /// Tags every post, keeping input order.
    fn tag_posts(&self, posts: &[Post]) -> Vec<PredictionRecord> {
        posts
            .iter()
            .map(|p| PredictionRecord::new(p.id.clone(), self.tag(&p.text)))
            .collect()
    }
}
