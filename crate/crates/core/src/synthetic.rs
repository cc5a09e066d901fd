//! Seeded generator of labeled toy corpora with a planted toxic vocabulary.
//!
//! Posts are sequences of neutral pseudo-words with punctuation; a share of
//! them carry one or two toxic words (never adjacent). Gold offsets are exactly
//! the character ranges of the toxic tokens. Optionally a share of toxic
//! occurrences is censored by replacing every interior letter with `*`.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Post, SpanSet};

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub posts: usize,
    pub toxic_vocab: usize,
    pub neutral_vocab: usize,
    /// Probability that a post contains toxic words.
    pub toxic_post_rate: f64,
    /// Probability that a toxic occurrence is asterisk-censored.
    pub censor_rate: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            posts: 5000,
            toxic_vocab: 50,
            neutral_vocab: 400,
            toxic_post_rate: 0.7,
            censor_rate: 0.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticCorpus {
    pub posts: Vec<Post>,
    /// The planted vocabulary, uncensored, sorted.
    pub toxic_words: Vec<String>,
}

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
const PUNCT: &[&str] = &[",", ".", "!", "?"];

fn pseudo_word(rng: &mut ChaCha8Rng, min: usize, max: usize) -> String {
    let len = rng.random_range(min..=max);
    (0..len)
        .map(|_| *LETTERS.choose(rng).unwrap() as char)
        .collect()
}

/// Keeps the first and last letter, stars the rest.
pub fn censor(word: &str) -> String {
    let chars: Vec<char> = word.chars().collect();
    if chars.len() < 3 {
        return word.to_string();
    }
    let mut out = String::with_capacity(word.len());
    out.push(chars[0]);
    out.extend(std::iter::repeat_n('*', chars.len() - 2));
    out.push(chars[chars.len() - 1]);
    out
}

pub fn generate(config: &SyntheticConfig) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seen = BTreeSet::new();
    let mut toxic = Vec::with_capacity(config.toxic_vocab);
    while toxic.len() < config.toxic_vocab {
        let w = pseudo_word(&mut rng, 4, 8);
        if seen.insert(w.clone()) {
            toxic.push(w);
        }
    }
    let mut neutral = Vec::with_capacity(config.neutral_vocab);
    while neutral.len() < config.neutral_vocab {
        let w = pseudo_word(&mut rng, 2, 9);
        if seen.insert(w.clone()) {
            neutral.push(w);
        }
    }

    let mut posts = Vec::with_capacity(config.posts);
    for id in 0..config.posts {
        let n_words = rng.random_range(4..=18);
        // slots: Some(true) = toxic word
        let mut slots = vec![false; n_words];
        if rng.random_bool(config.toxic_post_rate) {
            let k = if n_words >= 6 && rng.random_bool(0.3) {
                2
            } else {
                1
            };
            let mut placed = 0;
            while placed < k {
                let i = rng.random_range(0..n_words);
                let clash =
                    slots[i] || (i > 0 && slots[i - 1]) || (i + 1 < n_words && slots[i + 1]);
                if !clash {
                    slots[i] = true;
                    placed += 1;
                }
            }
        }

        let mut text = String::new();
        let mut pos = 0usize;
        let mut gold = Vec::new();
        for (i, &is_toxic) in slots.iter().enumerate() {
            if i > 0 {
                text.push(' ');
                pos += 1;
            }
            let mut word = if is_toxic {
                let w = toxic.choose(&mut rng).unwrap().clone();
                if rng.random_bool(config.censor_rate) {
                    censor(&w)
                } else {
                    w
                }
            } else {
                neutral.choose(&mut rng).unwrap().clone()
            };
            if i == 0 && rng.random_bool(0.5) {
                let mut cs = word.chars();
                let first = cs.next().unwrap().to_uppercase().collect::<String>();
                word = first + cs.as_str();
            }
            let len = word.chars().count();
            if is_toxic {
                gold.extend(pos..pos + len);
            }
            text.push_str(&word);
            pos += len;
            if i + 1 < n_words && rng.random_bool(0.1) {
                text.push(',');
                pos += 1;
            }
        }
        text.push_str(PUNCT[rng.random_range(1..PUNCT.len())]);
        posts.push(
            Post::new(id.to_string(), text, SpanSet::from_offsets(gold)).expect("offsets in range"),
        );
    }
    toxic.sort();
    SyntheticCorpus {
        posts,
        toxic_words: toxic,
    }
}
