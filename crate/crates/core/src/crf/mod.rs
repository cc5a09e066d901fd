//! Linear-chain conditional random field over binary token labels.
//!
//! Emission scores come from sparse indicator features of each token and its
//! neighbours; a 2x2 transition matrix couples adjacent labels. Inference is
//! exact (Viterbi and forward-backward in log space) and training maximizes
//! the L2-regularized conditional log-likelihood with Adam.

mod features;
mod lattice;
mod math;
mod model;
mod objective;
mod tagger;
mod train;

pub use features::{extract_features, FeatureTemplates, FeatureVector, BOS, EOS};
pub use lattice::{forward_backward, viterbi, Lattice, Marginals, Transitions};
pub use math::logsumexp2;
pub use model::{CompiledPosition, CrfModel, Sequence, TrainingMeta};
pub use objective::neg_log_likelihood_and_gradient;
pub use tagger::{predict, CrfTagger};
pub use train::{train, validation_size, TrainConfig};
