//! Span-level F1 scoring and majority-vote ensembling.
//!
//! Per post, precision and recall compare predicted and gold offset sets:
//! `P = |pred ∩ gold| / |pred|`, `R = |pred ∩ gold| / |gold|`, and F1 is
//! their harmonic mean. The zero-denominator cases follow the shared-task
//! scorer: both sets empty scores 1, exactly one empty scores 0. A system's
//! score is the unweighted mean of per-post F1.

use std::collections::{HashMap, HashSet};
use std::io::Write;

use crate::corpus::{Post, PredictionRecord, SpanSet};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl EvalResult {
    /// Scores for when at least one of the sets is empty.
    fn degenerate(pred_empty: bool, gold_empty: bool) -> Self {
        let v = if pred_empty && gold_empty { 1.0 } else { 0.0 };
        Self {
            precision: v,
            recall: v,
            f1: v,
        }
    }
}

/// Offset-set precision, recall and F1 of one post.
pub fn span_f1(predicted: &SpanSet, gold: &SpanSet) -> EvalResult {
    if predicted.is_empty() || gold.is_empty() {
        return EvalResult::degenerate(predicted.is_empty(), gold.is_empty());
    }
    let hit = predicted.intersection_len(gold) as f64;
    let (np, ng) = (predicted.len() as f64, gold.len() as f64);
    EvalResult {
        precision: hit / np,
        recall: hit / ng,
        // 2PR / (P + R) simplifies to this, which is exact for small counts
        f1: 2.0 * hit / (np + ng),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    /// Per-post scores in gold order.
    pub per_post: Vec<(String, EvalResult)>,
    pub mean_f1: f64,
    pub posts_scored: usize,
    pub empty_gold_posts: usize,
}

impl EvalReport {
    pub fn get(&self, id: &str) -> Option<&EvalResult> {
        self.per_post.iter().find(|(p, _)| p == id).map(|(_, r)| r)
    }

    /// Tab-separated `id precision recall f1` rows followed by the summary
    /// line `mean_f1=<value>`; all numbers to 4 decimals.
    pub fn write_tsv<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "id\tprecision\trecall\tf1")?;
        for (id, r) in &self.per_post {
            writeln!(
                sink,
                "{id}\t{:.4}\t{:.4}\t{:.4}",
                r.precision, r.recall, r.f1
            )?;
        }
        writeln!(sink, "{}", self.summary_line())?;
        sink.flush()?;
        Ok(())
    }

    pub fn summary_line(&self) -> String {
        format!("mean_f1={:.4}", self.mean_f1)
    }
}

/// Scores predictions against gold posts.
///
/// Posts without a prediction record count as predicting nothing. Duplicate
/// prediction ids, ids absent from the gold set, and offsets past the end of
/// the post text are errors.
pub fn evaluate_corpus(
    predictions: &[PredictionRecord],
    gold_posts: &[Post],
) -> Result<EvalReport> {
    let mut gold_ids = HashSet::with_capacity(gold_posts.len());
    for p in gold_posts {
        if !gold_ids.insert(p.id.as_str()) {
            return Err(Error::DuplicateId(p.id.clone()));
        }
    }
    let mut by_id: HashMap<&str, &SpanSet> = HashMap::with_capacity(predictions.len());
    let mut unknown = Vec::new();
    for r in predictions {
        if by_id.insert(r.post_id.as_str(), &r.predicted).is_some() {
            return Err(Error::DuplicateId(r.post_id.clone()));
        }
        if !gold_ids.contains(r.post_id.as_str()) {
            unknown.push(r.post_id.clone());
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownIds(unknown));
    }

    let empty = SpanSet::new();
    let mut per_post = Vec::with_capacity(gold_posts.len());
    for post in gold_posts {
        let pred = by_id.get(post.id.as_str()).copied().unwrap_or(&empty);
        if let Some(max) = pred.max() {
            let len = post.char_len();
            if max >= len {
                return Err(Error::PredictionOutOfRange {
                    id: post.id.clone(),
                    offset: max,
                    len,
                });
            }
        }
        per_post.push((post.id.clone(), span_f1(pred, &post.gold)));
    }
    let mean_f1 = if per_post.is_empty() {
        0.0
    } else {
        per_post.iter().map(|(_, r)| r.f1).sum::<f64>() / per_post.len() as f64
    };
    Ok(EvalReport {
        mean_f1,
        posts_scored: per_post.len(),
        empty_gold_posts: gold_posts.iter().filter(|p| p.gold.is_empty()).count(),
        per_post,
    })
}

/// Offsets predicted by strictly more than half of the inputs.
pub fn majority_vote(prediction_sets: &[SpanSet]) -> Result<SpanSet> {
    if prediction_sets.is_empty() {
        return Err(Error::EmptyInput(
            "majority vote needs at least one prediction set",
        ));
    }
    let mut all: Vec<usize> = prediction_sets.iter().flat_map(|s| s.iter()).collect();
    all.sort_unstable();
    let n = prediction_sets.len();
    let voted = all
        .chunk_by(|a, b| a == b)
        .filter(|run| 2 * run.len() > n)
        .map(|run| run[0]);
    Ok(SpanSet::from_offsets(voted))
}

/// Majority vote per post across several prediction files.
///
/// Output order follows the first file, then ids first seen in later files.
/// A post missing from a file counts as an empty vote from that file.
pub fn ensemble_records(files: &[Vec<PredictionRecord>]) -> Result<Vec<PredictionRecord>> {
    if files.is_empty() {
        return Err(Error::EmptyInput(
            "ensemble needs at least one prediction file",
        ));
    }
    let mut order: Vec<&str> = Vec::new();
    let mut seen: HashSet<&str> = HashSet::new();
    let mut lookups: Vec<HashMap<&str, &SpanSet>> = Vec::with_capacity(files.len());
    for file in files {
        let mut map = HashMap::with_capacity(file.len());
        for r in file {
            if map.insert(r.post_id.as_str(), &r.predicted).is_some() {
                return Err(Error::DuplicateId(r.post_id.clone()));
            }
            if seen.insert(r.post_id.as_str()) {
                order.push(r.post_id.as_str());
            }
        }
        lookups.push(map);
    }
    let empty = SpanSet::new();
    order
        .into_iter()
        .map(|id| {
            let votes: Vec<SpanSet> = lookups
                .iter()
                .map(|m| m.get(id).map_or_else(|| empty.clone(), |s| (*s).clone()))
                .collect();
            Ok(PredictionRecord::new(id, majority_vote(&votes)?))
        })
        .collect()
}
