//! Input generators shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toxspan::crf::Lattice;
use toxspan::synthetic::{generate, SyntheticConfig};
use toxspan::Lexicon;

/// A lattice of `n` positions with scores drawn uniformly from [-5, 5].
pub fn random_lattice(n: usize, seed: u64) -> Lattice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let emissions = (0..n)
        .map(|_| [rng.random_range(-5.0..=5.0), rng.random_range(-5.0..=5.0)])
        .collect();
    let mut transitions = [[0.0; 2]; 2];
    for w in transitions.iter_mut().flatten() {
        *w = rng.random_range(-5.0..=5.0);
    }
    Lattice::new(emissions, transitions).expect("finite scores")
}

/// Synthetic post texts plus a lexicon holding the planted toxic words.
pub fn texts_and_lexicon(posts: usize, censor_rate: f64) -> (Vec<String>, Lexicon) {
    let corpus = generate(&SyntheticConfig {
        posts,
        censor_rate,
        ..Default::default()
    });
    let mut lexicon = Lexicon::new();
    lexicon.extend("planted", corpus.toxic_words.iter().map(String::as_str));
    (corpus.posts.into_iter().map(|p| p.text).collect(), lexicon)
}
