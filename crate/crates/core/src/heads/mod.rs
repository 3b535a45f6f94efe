//! Task heads: softmax classification over encodings and the margin-based
//! question-answer matcher.

pub mod qa;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::params::{glorot_matrix, zero_vector, ParamSet};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Numerically stable softmax; probabilities sum to 1 within 1e-12 and the
/// result is invariant under adding a constant to all logits.
pub fn softmax_probs(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|x| (x - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / z).collect()
}

/// Index of the largest score; ties break toward the lowest class index.
pub fn argmax_class(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Linear-plus-softmax classifier head over a K-dimensional summary vector.
/// The weights live in a [`ParamSet`] under `<prefix>.u` (C x K) and
/// `<prefix>.b` (C).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SoftmaxHead {
    pub classes: usize,
    pub prefix: String,
}

impl SoftmaxHead {
    pub fn init_into(
        params: &mut ParamSet,
        prefix: &str,
        classes: usize,
        input_dim: usize,
        rng: &mut ChaCha8Rng,
    ) -> SoftmaxHead {
        assert!(classes >= 2, "softmax head needs at least 2 classes");
        params.insert(format!("{prefix}.u"), glorot_matrix(classes, input_dim, rng));
        params.insert(format!("{prefix}.b"), zero_vector(classes));
        SoftmaxHead {
            classes,
            prefix: prefix.to_string(),
        }
    }

    pub fn logits(&self, g: &mut Graph, params: &ParamSet, x: NodeId) -> Result<NodeId> {
        let u = g.param(&format!("{}.u", self.prefix), params)?;
        let b = g.param(&format!("{}.b", self.prefix), params)?;
        let ux = g.matvec(u, x)?;
        g.add(&[ux, b])
    }

    /// Cross-entropy `-log softmax(U·x + b)[gold]`.
    pub fn loss(&self, g: &mut Graph, params: &ParamSet, x: NodeId, gold: usize) -> Result<NodeId> {
        if gold >= self.classes {
            return Err(Error::InvalidInput(format!(
                "gold class {} out of range for {} classes",
                gold, self.classes
            )));
        }
        let logits = self.logits(g, params, x)?;
        g.cross_entropy(logits, gold)
    }

    /// Forward-only class probabilities for a summary vector.
    pub fn probs(&self, g: &mut Graph, params: &ParamSet, x: NodeId) -> Result<Vec<f64>> {
        let logits = self.logits(g, params, x)?;
        Ok(softmax_probs(g.value(logits).data()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Negative,
    Positive,
}

/// Collapse a normalized 5-class sentiment distribution to a binary decision:
/// mass(0)+mass(1) against mass(3)+mass(4), neutral mass ignored, ties toward
/// positive. Gold-neutral examples are excluded upstream, in the accuracy
/// filter.
pub fn decode_binary(probs: &[f64]) -> Result<Polarity> {
    if probs.len() != 5 {
        return Err(Error::InvalidInput(format!(
            "binary decode expects 5 classes, got {}",
            probs.len()
        )));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!(
            "binary decode expects normalized probabilities, sum = {total}"
        )));
    }
    let negative = probs[0] + probs[1];
    let positive = probs[3] + probs[4];
    if negative > positive {
        Ok(Polarity::Negative)
    } else {
        Ok(Polarity::Positive)
    }
}

/// Gold-label polarity for binary evaluation; `None` for the neutral class.
pub fn gold_polarity(label: usize) -> Option<Polarity> {
    match label {
        0 | 1 => Some(Polarity::Negative),
        3 | 4 => Some(Polarity::Positive),
        _ => None,
    }
}

/// Argmax over the head's classes; used for the 19-way relation task and any
/// other plain classification readout.
pub fn classify(head: &SoftmaxHead, g: &mut Graph, params: &ParamSet, x: NodeId) -> Result<usize> {
    let probs = head.probs(g, params, x)?;
    Ok(argmax_class(&probs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from;
    use crate::tensor::Tensor;
    use approx::assert_relative_eq;

    #[test]
    fn softmax_sums_to_one_and_shift_invariant() {
        let logits = vec![3.0, -1.0, 0.5, 7.2];
        let p = softmax_probs(&logits);
        assert_relative_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        let shifted: Vec<f64> = logits.iter().map(|x| x + 100.0).collect();
        let q = softmax_probs(&shifted);
        for (a, b) in p.iter().zip(&q) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_weight_head_gives_uniform_loss() {
        let mut ps = ParamSet::new();
        ps.insert("head.u", Tensor::matrix(5, 3, vec![0.0; 15]));
        ps.insert("head.b", Tensor::vector(vec![0.0; 5]));
        let head = SoftmaxHead {
            classes: 5,
            prefix: "head".to_string(),
        };
        let mut g = Graph::new();
        let x = g.input(Tensor::vector(vec![0.3, -0.2, 0.9]));
        let loss = head.loss(&mut g, &ps, x, 2).unwrap();
        assert_relative_eq!(g.value(loss).item(), 5.0_f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn head_gradient_matches_finite_differences() {
        let mut rng = rng_from(5);
        let mut ps = ParamSet::new();
        let head = SoftmaxHead::init_into(&mut ps, "head", 5, 4, &mut rng);
        let x = Tensor::vector(vec![0.1, -0.4, 0.9, 0.2]);
        let f = move |params: &ParamSet, g: &mut Graph| {
            let xn = g.input(x.clone());
            head.loss(g, params, xn, 3)
        };
        let report = crate::gradcheck::grad_check(&f, &ps, 1e-5).unwrap();
        assert!(report.max_rel_error < 1e-4, "{}", report.max_rel_error);
    }

    #[test]
    fn binary_decode_cases() {
        assert_eq!(
            decode_binary(&[0.4, 0.2, 0.1, 0.2, 0.1]).unwrap(),
            Polarity::Negative
        );
        assert_eq!(
            decode_binary(&[0.2, 0.2, 0.2, 0.2, 0.2]).unwrap(),
            Polarity::Positive
        );
        assert_eq!(
            decode_binary(&[0.0, 0.0, 0.0, 0.0, 1.0]).unwrap(),
            Polarity::Positive
        );
        assert!(decode_binary(&[0.5, 0.5, 0.5, 0.0, 0.0]).is_err());
        assert!(decode_binary(&[1.0]).is_err());
    }

    #[test]
    fn binary_decode_invariant_under_within_side_rescaling() {
        let a = decode_binary(&[0.4, 0.2, 0.1, 0.2, 0.1]).unwrap();
        let b = decode_binary(&[0.2, 0.4, 0.1, 0.1, 0.2]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn argmax_tie_breaks_low() {
        assert_eq!(argmax_class(&[0.2; 5]), 0);
        assert_eq!(argmax_class(&[0.1, 0.5, 0.5]), 1);
    }
}
