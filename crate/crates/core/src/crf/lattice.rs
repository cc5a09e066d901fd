//! Exact inference on a two-label chain: Viterbi and forward-backward.
//!
//! A labeling `y` of an `n`-token sequence scores
//! `sum_i e[i][y_i] + sum_i T[y_i][y_{i+1}]`. All arithmetic is in log space.

use super::math::logsumexp2;
use crate::corpus::Label;
use crate::error::{Error, Result};

/// Transition scores indexed `[prev][next]`.
pub type Transitions = [[f64; 2]; 2];

#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    emissions: Vec<[f64; 2]>,
    transitions: Transitions,
}

/// Output of [`forward_backward`].
#[derive(Clone, Debug)]
pub struct Marginals {
    /// Log partition from the forward pass.
    pub log_partition: f64,
    /// Log partition recomputed from the backward pass.
    pub log_partition_backward: f64,
    /// `unary[i][y]`: probability that position `i` has label `y`.
    pub unary: Vec<[f64; 2]>,
    /// `pairwise[i][p][q]`: probability of labels `(p, q)` at `(i, i + 1)`.
    pub pairwise: Vec<[[f64; 2]; 2]>,
}

impl Lattice {
    pub fn new(emissions: Vec<[f64; 2]>, transitions: Transitions) -> Result<Self> {
        if emissions.is_empty() {
            return Err(Error::InvalidLattice("empty sequence".into()));
        }
        let finite = emissions
            .iter()
            .flatten()
            .chain(transitions.iter().flatten())
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidLattice("non-finite score".into()));
        }
        Ok(Self {
            emissions,
            transitions,
        })
    }

    pub fn len(&self) -> usize {
        self.emissions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.emissions.is_empty()
    }

    pub fn emissions(&self) -> &[[f64; 2]] {
        &self.emissions
    }

    pub fn transitions(&self) -> &Transitions {
        &self.transitions
    }

    /// Score of one labeling. Panics if `labels` has the wrong length.
    pub fn path_score(&self, labels: &[Label]) -> f64 {
        assert_eq!(labels.len(), self.len(), "labeling length");
        let mut score = 0.0;
        for (i, y) in labels.iter().enumerate() {
            score += self.emissions[i][y.index()];
            if i > 0 {
                score += self.transitions[labels[i - 1].index()][y.index()];
            }
        }
        score
    }
}

/// Highest-scoring labeling and its score. Ties go to `NotToxic`.
pub fn viterbi(lattice: &Lattice) -> (Vec<Label>, f64) {
    let n = lattice.len();
    let t = &lattice.transitions;
    let mut delta = lattice.emissions[0];
    let mut back: Vec<[usize; 2]> = Vec::with_capacity(n.saturating_sub(1));
    for e in &lattice.emissions[1..] {
        let mut next = [0.0; 2];
        let mut ptr = [0usize; 2];
        for y in 0..2 {
            let from0 = delta[0] + t[0][y];
            let from1 = delta[1] + t[1][y];
            let (best, p) = if from1 > from0 {
                (from1, 1)
            } else {
                (from0, 0)
            };
            next[y] = best + e[y];
            ptr[y] = p;
        }
        back.push(ptr);
        delta = next;
    }
    let mut y = if delta[1] > delta[0] { 1 } else { 0 };
    let score = delta[y];
    let mut labels = vec![Label::NotToxic; n];
    labels[n - 1] = Label::from_index(y).unwrap();
    for i in (1..n).rev() {
        y = back[i - 1][y];
        labels[i - 1] = Label::from_index(y).unwrap();
    }
    (labels, score)
}

/// Sum-product pass: log partition plus unary and pairwise marginals.
pub fn forward_backward(lattice: &Lattice) -> Marginals {
    let n = lattice.len();
    let e = &lattice.emissions;
    let t = &lattice.transitions;

    let mut alpha = vec![[0.0; 2]; n];
    alpha[0] = e[0];
    for i in 1..n {
        for y in 0..2 {
            alpha[i][y] =
                logsumexp2(alpha[i - 1][0] + t[0][y], alpha[i - 1][1] + t[1][y]) + e[i][y];
        }
    }
    let mut beta = vec![[0.0; 2]; n];
    for i in (0..n - 1).rev() {
        for y in 0..2 {
            beta[i][y] = logsumexp2(
                t[y][0] + e[i + 1][0] + beta[i + 1][0],
                t[y][1] + e[i + 1][1] + beta[i + 1][1],
            );
        }
    }
    let log_z = logsumexp2(alpha[n - 1][0], alpha[n - 1][1]);
    let log_z_back = logsumexp2(e[0][0] + beta[0][0], e[0][1] + beta[0][1]);

    let unary = (0..n)
        .map(|i| [0, 1].map(|y| (alpha[i][y] + beta[i][y] - log_z).exp()))
        .collect();
    let pairwise = (0..n - 1)
        .map(|i| {
            [0, 1].map(|p| {
                [0, 1].map(|q| (alpha[i][p] + t[p][q] + e[i + 1][q] + beta[i + 1][q] - log_z).exp())
            })
        })
        .collect();
    Marginals {
        log_partition: log_z,
        log_partition_backward: log_z_back,
        unary,
        pairwise,
    }
}
