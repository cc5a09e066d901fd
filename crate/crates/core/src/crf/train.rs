//! Mini-batch Adam training with a held-out validation split and early
//! stopping on validation loss.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::features::FeatureTemplates;
use super::model::{CrfModel, Sequence, TrainingMeta};
use super::objective::{batch_objective, sequence_loss};
use crate::corpus::{gold_token_labels, Post};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::tokenize::Tokenizer;

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub l2_lambda: f64,
    /// Share of posts held out for early stopping.
    pub validation_fraction: f64,
    /// Epochs without validation improvement before stopping.
    pub early_stop_patience: usize,
    pub seed: u64,
    /// Span reconstruction mode stored in the model for prediction.
    pub gap_fill: bool,
    pub templates: FeatureTemplates,
    pub tokenizer: Tokenizer,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-2,
            batch_size: 16,
            max_epochs: 30,
            l2_lambda: 1e-4,
            validation_fraction: 0.2,
            early_stop_patience: 10,
            seed: 0,
            gap_fill: true,
            templates: FeatureTemplates::default(),
            tokenizer: Tokenizer::default(),
        }
    }
}

impl TrainConfig {
    /// Checks the user-facing bounds: learning rate > 0, batch size, epochs
    /// and patience positive, lambda >= 0, validation fraction in (0, 1).
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return fail("learning_rate must be a positive number");
        }
        if self.batch_size == 0 {
            return fail("batch_size must be positive");
        }
        if self.max_epochs == 0 {
            return fail("max_epochs must be positive");
        }
        if !(self.l2_lambda.is_finite() && self.l2_lambda >= 0.0) {
            return fail("l2_lambda must be non-negative");
        }
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return fail("validation_fraction must lie strictly between 0 and 1");
        }
        if self.early_stop_patience == 0 {
            return fail("early_stop_patience must be positive");
        }
        Ok(())
    }
}

struct Adam {
    lr: f64,
    beta1: f64,
    beta2: f64,
    eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    fn new(lr: f64, n: usize) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for i in 0..params.len() {
            let g = grad[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let mhat = self.m[i] / c1;
            let vhat = self.v[i] / c2;
            params[i] -= self.lr * mhat / (vhat.sqrt() + self.eps);
        }
    }
}

fn mean_loss(params: &[f64], seqs: &[Sequence]) -> Result<f64> {
    let mut total = 0.0;
    for s in seqs {
        total += sequence_loss(params, s)?;
    }
    Ok(total / seqs.len() as f64)
}

/// Number of posts held out: `floor(n * fraction)`, leaving at least one
/// post for training.
pub fn validation_size(n: usize, fraction: f64) -> usize {
    ((n as f64 * fraction).floor() as usize).min(n.saturating_sub(1))
}

/// Trains a CRF on gold-annotated posts.
///
/// Tokens are labeled toxic iff their whole range lies inside the gold
/// offsets. After a seeded shuffle the last `validation_fraction` of the
/// posts is held out; the weights with the lowest mean validation loss
/// (checked once per epoch, including before the first) are returned.
/// Results are bit-identical for a fixed seed.
pub fn train(posts: &[Post], config: &TrainConfig, lexicon: Option<&Lexicon>) -> Result<CrfModel> {
    if config.batch_size == 0 {
        return Err(Error::Config("batch_size must be positive".into()));
    }
    if !(config.learning_rate.is_finite() && config.learning_rate > 0.0) {
        return Err(Error::Config(
            "learning_rate must be a positive number".into(),
        ));
    }
    if !(0.0..1.0).contains(&config.validation_fraction) {
        return Err(Error::Config(
            "validation_fraction must lie in [0, 1)".into(),
        ));
    }
    if posts.is_empty() {
        return Err(Error::EmptyInput("training set is empty"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..posts.len()).collect();
    order.shuffle(&mut rng);
    let n_val = validation_size(posts.len(), config.validation_fraction);
    let (train_ids, val_ids) = order.split_at(posts.len() - n_val);

    let mut templates = config.templates;
    templates.lexicon &= lexicon.is_some();
    let mut model = CrfModel::new(templates, config.tokenizer.clone(), config.l2_lambda);
    model.gap_fill = config.gap_fill;

    let mut train_seqs = Vec::with_capacity(train_ids.len());
    for &i in train_ids {
        let tokens = model.tokenizer.tokenize(&posts[i].text);
        if tokens.is_empty() {
            continue;
        }
        let labels = gold_token_labels(&tokens, &posts[i].gold);
        let features = model.compile_registering(&tokens, lexicon)?;
        train_seqs.push(Sequence { features, labels });
    }
    if train_seqs.is_empty() {
        return Err(Error::EmptyInput("training split has no tokens"));
    }
    let mut val_seqs = Vec::with_capacity(val_ids.len());
    for &i in val_ids {
        let tokens = model.tokenizer.tokenize(&posts[i].text);
        if tokens.is_empty() {
            continue;
        }
        let labels = gold_token_labels(&tokens, &posts[i].gold);
        val_seqs.push(Sequence {
            features: model.compile(&tokens, lexicon)?,
            labels,
        });
    }
    log::info!(
        "training on {} sequences ({} validation), {} features",
        train_seqs.len(),
        val_seqs.len(),
        model.feature_count()
    );
    if config.max_epochs == 0 {
        return Ok(model);
    }

    let mut params = model.params().to_vec();
    let mut best_params = params.clone();
    let mut best_val = if val_seqs.is_empty() {
        None
    } else {
        Some(mean_loss(&params, &val_seqs)?)
    };
    let mut best_epoch = 0;
    let mut stale = 0;
    let mut epochs_run = 0;
    let mut adam = Adam::new(config.learning_rate, params.len());
    let mut batch_order: Vec<usize> = (0..train_seqs.len()).collect();

    for epoch in 1..=config.max_epochs {
        batch_order.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for (b, chunk) in batch_order.chunks(config.batch_size).enumerate() {
            let batch: Vec<&Sequence> = chunk.iter().map(|&i| &train_seqs[i]).collect();
            let (loss, grad) = batch_objective(&params, config.l2_lambda, &batch)?;
            if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::Numerical(format!(
                    "non-finite training loss {loss} at epoch {epoch}, batch {b}"
                )));
            }
            epoch_loss += loss;
            adam.step(&mut params, &grad);
        }
        epochs_run = epoch;

        match best_val {
            Some(best) => {
                let val = mean_loss(&params, &val_seqs)?;
                if !val.is_finite() {
                    return Err(Error::Numerical(format!(
                        "non-finite validation loss at epoch {epoch}"
                    )));
                }
                log::info!("epoch {epoch}: train loss {epoch_loss:.4}, validation loss {val:.6}");
                if val < best {
                    best_val = Some(val);
                    best_params.copy_from_slice(&params);
                    best_epoch = epoch;
                    stale = 0;
                } else {
                    stale += 1;
                    if stale >= config.early_stop_patience {
                        log::info!("early stop after {epoch} epochs (best epoch {best_epoch})");
                        break;
                    }
                }
            }
            None => {
                log::info!("epoch {epoch}: train loss {epoch_loss:.4}");
                best_params.copy_from_slice(&params);
                best_epoch = epoch;
            }
        }
    }

    model.set_params(best_params);
    model.meta = TrainingMeta {
        epochs_run,
        best_epoch,
        best_validation_loss: best_val,
    };
    Ok(model)
}
