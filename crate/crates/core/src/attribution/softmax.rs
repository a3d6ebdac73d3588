//! L2-regularized multinomial logistic regression trained by full-batch
//! gradient descent until the gradient norm drops below 1e-6.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub const L2_LAMBDA: f64 = 0.01;
pub const LEARNING_RATE: f64 = 1.0;
pub const GRAD_TOL: f64 = 1e-6;
pub const MAX_ITERS: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxModel {
    /// Row-major class weights, one row per class.
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|l| libm::exp(l - m)).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

pub fn logits(model: &SoftmaxModel, x: &[f64]) -> Vec<f64> {
    model
        .weights
        .iter()
        .zip(&model.bias)
        .map(|(w, b)| w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>() + b)
        .collect()
}

pub fn train_softmax(xs: &[Vec<f64>], ys: &[usize], n_classes: usize) -> SoftmaxModel {
    let n = xs.len();
    let d = xs.first().map(|x| x.len()).unwrap_or(0);
    let mut model = SoftmaxModel {
        weights: alloc::vec![alloc::vec![0.0; d]; n_classes],
        bias: alloc::vec![0.0; n_classes],
    };
    if n == 0 {
        return model;
    }
    let inv_n = 1.0 / n as f64;
    for _ in 0..MAX_ITERS {
        let mut gw = alloc::vec![alloc::vec![0.0; d]; n_classes];
        let mut gb = alloc::vec![0.0; n_classes];
        for (x, &y) in xs.iter().zip(ys) {
            let p = softmax(&logits(&model, x));
            for c in 0..n_classes {
                let err = p[c] - if c == y { 1.0 } else { 0.0 };
                gb[c] += err * inv_n;
                let row = &mut gw[c];
                for (g, xi) in row.iter_mut().zip(x) {
                    *g += err * xi * inv_n;
                }
            }
        }
        let mut norm_sq = 0.0;
        for c in 0..n_classes {
            for (g, w) in gw[c].iter_mut().zip(&model.weights[c]) {
                *g += L2_LAMBDA * w;
                norm_sq += *g * *g;
            }
            norm_sq += gb[c] * gb[c];
        }
        if libm::sqrt(norm_sq) < GRAD_TOL {
            break;
        }
        for c in 0..n_classes {
            for (w, g) in model.weights[c].iter_mut().zip(&gw[c]) {
                *w -= LEARNING_RATE * g;
            }
            model.bias[c] -= LEARNING_RATE * gb[c];
        }
    }
    model
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_logits_give_uniform_scores() {
        let model =
            SoftmaxModel { weights: alloc::vec![alloc::vec![0.0; 3]; 4], bias: alloc::vec![0.0; 4] };
        let p = softmax(&logits(&model, &[1.0, 2.0, 3.0]));
        for v in p {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn learns_a_separable_problem() {
        let xs = alloc::vec![
            alloc::vec![1.0, 0.0],
            alloc::vec![0.9, 0.1],
            alloc::vec![0.0, 1.0],
            alloc::vec![0.1, 0.9],
        ];
        let ys = alloc::vec![0, 0, 1, 1];
        let model = train_softmax(&xs, &ys, 2);
        for (x, y) in xs.iter().zip(&ys) {
            let p = softmax(&logits(&model, x));
            let pred = if p[0] >= p[1] { 0 } else { 1 };
            assert_eq!(pred, *y);
        }
    }

    #[test]
    fn scores_sum_to_one() {
        let model = SoftmaxModel {
            weights: alloc::vec![alloc::vec![0.3, -0.2], alloc::vec![-0.1, 0.4]],
            bias: alloc::vec![0.05, -0.05],
        };
        let p = softmax(&logits(&model, &[0.7, 0.2]));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
    }
}
