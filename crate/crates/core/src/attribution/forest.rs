//! Random-forest classifier grown from scratch: bootstrap sampling per
//! tree, sqrt(d) feature candidates per split, Gini impurity, trees
//! grown to purity, hard votes at prediction time.

use alloc::boxed::Box;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::rng::{derive, Rng};

pub const N_TREES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf { class: usize },
    Split { dim: usize, threshold: f64, lo: Box<TreeNode>, hi: Box<TreeNode> },
}

impl TreeNode {
    pub fn predict(&self, x: &[f64]) -> usize {
        match self {
            TreeNode::Leaf { class } => *class,
            TreeNode::Split { dim, threshold, lo, hi } => {
                if x[*dim] <= *threshold {
                    lo.predict(x)
                } else {
                    hi.predict(x)
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { lo, hi, .. } => 1 + lo.depth().max(hi.depth()),
        }
    }
}

fn majority(classes: &[usize], n_classes: usize) -> usize {
    let mut counts = alloc::vec![0usize; n_classes];
    for c in classes {
        counts[*c] += 1;
    }
    let mut best = 0;
    for (c, n) in counts.iter().enumerate() {
        if *n > counts[best] {
            best = c;
        }
    }
    best
}

fn gini(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let mut sum_sq = 0.0;
    for &c in counts {
        let p = c as f64 / total as f64;
        sum_sq += p * p;
    }
    1.0 - sum_sq
}

/// Grow one tree on the given sample indices.
fn grow(
    xs: &[Vec<f64>],
    ys: &[usize],
    samples: &[usize],
    n_classes: usize,
    n_dims: usize,
    rng: &mut Rng,
) -> TreeNode {
    let first = ys[samples[0]];
    if samples.iter().all(|&i| ys[i] == first) {
        return TreeNode::Leaf { class: first };
    }
    // sqrt(d) candidate dimensions, sampled without replacement.
    let k = ((n_dims as f64).sqrt().floor() as usize).clamp(1, n_dims);
    let mut dims: Vec<usize> = Vec::with_capacity(k);
    let mut guard = 0;
    while dims.len() < k && guard < 20 * k {
        let d = rng.below(n_dims);
        if !dims.contains(&d) {
            dims.push(d);
        }
        guard += 1;
    }
    let mut parent_counts = alloc::vec![0usize; n_classes];
    for &i in samples {
        parent_counts[ys[i]] += 1;
    }
    let parent_gini = gini(&parent_counts, samples.len());

    let mut best: Option<(f64, usize, f64)> = None; // (gain, dim, threshold)
    for &d in &dims {
        let mut vals: Vec<(f64, usize)> = samples.iter().map(|&i| (xs[i][d], ys[i])).collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
        let total = vals.len();
        let mut left_counts = alloc::vec![0usize; n_classes];
        let mut right_counts = parent_counts.clone();
        for w in 0..total - 1 {
            left_counts[vals[w].1] += 1;
            right_counts[vals[w].1] -= 1;
            if vals[w].0 == vals[w + 1].0 {
                continue;
            }
            let nl = w + 1;
            let nr = total - nl;
            let g = (nl as f64 * gini(&left_counts, nl) + nr as f64 * gini(&right_counts, nr))
                / total as f64;
            let gain = parent_gini - g;
            let thr = 0.5 * (vals[w].0 + vals[w + 1].0);
            let better = match best {
                None => gain > 1e-12,
                Some((bg, _, _)) => gain > bg + 1e-12,
            };
            if better {
                best = Some((gain, d, thr));
            }
        }
    }
    let Some((_, dim, threshold)) = best else {
        let classes: Vec<usize> = samples.iter().map(|&i| ys[i]).collect();
        return TreeNode::Leaf { class: majority(&classes, n_classes) };
    };
    let (lo, hi): (Vec<usize>, Vec<usize>) =
        samples.iter().partition(|&&i| xs[i][dim] <= threshold);
    if lo.is_empty() || hi.is_empty() {
        let classes: Vec<usize> = samples.iter().map(|&i| ys[i]).collect();
        return TreeNode::Leaf { class: majority(&classes, n_classes) };
    }
    TreeNode::Split {
        dim,
        threshold,
        lo: Box::new(grow(xs, ys, &lo, n_classes, n_dims, rng)),
        hi: Box::new(grow(xs, ys, &hi, n_classes, n_dims, rng)),
    }
}

/// Train the forest. `xs` are feature vectors, `ys` dense class ids.
pub fn train_forest(xs: &[Vec<f64>], ys: &[usize], n_classes: usize, seed: u64) -> Vec<TreeNode> {
    let n = xs.len();
    let n_dims = xs.first().map(|x| x.len()).unwrap_or(0);
    let mut trees = Vec::with_capacity(N_TREES);
    for t in 0..N_TREES {
        let mut rng = Rng::new(derive(seed, &[0x7265_65, t as u64]));
        let samples: Vec<usize> = (0..n).map(|_| rng.below(n)).collect();
        // A bootstrap can be single-class; that tree is a stump.
        trees.push(grow(xs, ys, &samples, n_classes, n_dims.max(1), &mut rng));
    }
    trees
}

/// Hard-vote scores: fraction of trees voting for each class.
pub fn forest_scores(trees: &[TreeNode], x: &[f64], n_classes: usize) -> Vec<f64> {
    let mut votes = alloc::vec![0usize; n_classes];
    for t in trees {
        votes[t.predict(x)] += 1;
    }
    votes.into_iter().map(|v| v as f64 / trees.len() as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> (Vec<Vec<f64>>, Vec<usize>) {
        // Two clusters separable on dim 0.
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..10 {
            xs.push(alloc::vec![i as f64 * 0.01, 1.0]);
            ys.push(0);
            xs.push(alloc::vec![1.0 + i as f64 * 0.01, 0.5]);
            ys.push(1);
        }
        (xs, ys)
    }

    #[test]
    fn forest_separates_trivial_clusters() {
        let (xs, ys) = toy();
        let trees = train_forest(&xs, &ys, 2, 7);
        assert_eq!(trees.len(), N_TREES);
        for (x, y) in xs.iter().zip(&ys) {
            let scores = forest_scores(&trees, x, 2);
            let pred = if scores[0] >= scores[1] { 0 } else { 1 };
            assert_eq!(pred, *y);
        }
    }

    #[test]
    fn training_is_deterministic_in_the_seed() {
        let (xs, ys) = toy();
        let a = train_forest(&xs, &ys, 2, 42);
        let b = train_forest(&xs, &ys, 2, 42);
        assert_eq!(a, b);
        let c = train_forest(&xs, &ys, 2, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn unanimous_votes_give_score_one() {
        let (xs, ys) = toy();
        let trees = train_forest(&xs, &ys, 2, 1);
        let scores = forest_scores(&trees, &[0.0, 1.0], 2);
        assert_eq!(scores[0], 1.0);
        assert_eq!(scores[1], 0.0);
    }
}
