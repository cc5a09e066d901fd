//! Regularized negative log-likelihood and its gradient.

use super::lattice::{forward_backward, Lattice};
use super::model::{CrfModel, Sequence, TRANSITION_PARAMS};
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::tokenize::Token;

/// Adds `expected - empirical` feature counts of one sequence to `grad` and
/// returns its unregularized loss `log Z - score(gold)`.
pub(crate) fn accumulate(params: &[f64], seq: &Sequence, grad: &mut [f64]) -> Result<f64> {
    let emissions = CrfModel::emissions_for(params, &seq.features);
    let transitions = [[params[0], params[1]], [params[2], params[3]]];
    let lattice =
        Lattice::new(emissions, transitions).map_err(|e| Error::Numerical(e.to_string()))?;
    let marg = forward_backward(&lattice);
    let gold = lattice.path_score(&seq.labels);

    for (i, feats) in seq.features.iter().enumerate() {
        let y = seq.labels[i].index();
        for &(f, v) in feats {
            let base = TRANSITION_PARAMS + 2 * f;
            grad[base] += marg.unary[i][0] * v;
            grad[base + 1] += marg.unary[i][1] * v;
            grad[base + y] -= v;
        }
    }
    for (i, pair) in marg.pairwise.iter().enumerate() {
        for p in 0..2 {
            for q in 0..2 {
                grad[2 * p + q] += pair[p][q];
            }
        }
        let (p, q) = (seq.labels[i].index(), seq.labels[i + 1].index());
        grad[2 * p + q] -= 1.0;
    }
    Ok(marg.log_partition - gold)
}

/// Unregularized loss of one sequence, without the gradient.
pub(crate) fn sequence_loss(params: &[f64], seq: &Sequence) -> Result<f64> {
    let emissions = CrfModel::emissions_for(params, &seq.features);
    let transitions = [[params[0], params[1]], [params[2], params[3]]];
    let lattice =
        Lattice::new(emissions, transitions).map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(forward_backward(&lattice).log_partition - lattice.path_score(&seq.labels))
}

/// Batch objective over flat parameters: `sum(log Z - gold) + lambda/2 |w|^2`.
pub(crate) fn batch_objective(
    params: &[f64],
    lambda: f64,
    batch: &[&Sequence],
) -> Result<(f64, Vec<f64>)> {
    let mut grad = vec![0.0; params.len()];
    let mut loss = 0.0;
    for seq in batch {
        loss += accumulate(params, seq, &mut grad)?;
    }
    if lambda != 0.0 {
        let mut sq = 0.0;
        for (g, w) in grad.iter_mut().zip(params) {
            *g += lambda * w;
            sq += w * w;
        }
        loss += 0.5 * lambda * sq;
    }
    Ok((loss, grad))
}

/// Loss and gradient for a batch of gold-labeled token sequences.
///
/// Features unknown to `model` are ignored, so register them first (for
/// instance with [`CrfModel::compile_registering`]) when the gradient must
/// cover them. The gradient follows the model's flat parameter layout.
pub fn neg_log_likelihood_and_gradient(
    model: &CrfModel,
    batch: &[(Vec<Token>, Vec<Label>)],
    lexicon: Option<&Lexicon>,
) -> Result<(f64, Vec<f64>)> {
    let mut seqs = Vec::with_capacity(batch.len());
    for (tokens, labels) in batch {
        if tokens.len() != labels.len() {
            return Err(Error::LengthMismatch {
                tokens: tokens.len(),
                labels: labels.len(),
            });
        }
        if tokens.is_empty() {
            continue;
        }
        seqs.push(Sequence {
            features: model.compile(tokens, lexicon)?,
            labels: labels.clone(),
        });
    }
    let refs: Vec<&Sequence> = seqs.iter().collect();
    batch_objective(model.params(), model.l2_lambda, &refs)
}
