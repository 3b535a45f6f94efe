//! Named parameter collections and seeded initialization.

use crate::tensor::{Shape, Tensor};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A flat, name-addressed collection of learnable tensors. Iteration order is
/// deterministic (sorted by name), which the optimizer and the checkpoint
/// format rely on.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    tensors: BTreeMap<String, Tensor>,
}

impl ParamSet {
    pub fn new() -> Self {
        ParamSet::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, tensor: Tensor) {
        let name = name.into();
        debug_assert!(
            !self.tensors.contains_key(&name),
            "duplicate parameter `{name}`"
        );
        self.tensors.insert(name, tensor);
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.tensors.get(name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Tensor> {
        self.tensors.get_mut(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.tensors.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Tensor)> {
        self.tensors.iter()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = (&String, &mut Tensor)> {
        self.tensors.iter_mut()
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.tensors.keys()
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    /// Total number of scalar coordinates across all tensors.
    pub fn coordinate_count(&self) -> usize {
        self.tensors.values().map(|t| t.len()).sum()
    }

    /// Merge another set into this one; names must not collide.
    pub fn absorb(&mut self, other: ParamSet) {
        for (name, tensor) in other.tensors {
            self.insert(name, tensor);
        }
    }
}

/// Uniform(-r, r) with r = sqrt(6 / (fan_in + fan_out)).
pub fn glorot_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Tensor {
    let r = (6.0 / (rows + cols) as f64).sqrt();
    let data = (0..rows * cols).map(|_| rng.random_range(-r..r)).collect();
    Tensor::matrix(rows, cols, data)
}

/// Bias vectors start at zero.
pub fn zero_vector(k: usize) -> Tensor {
    Tensor::zeros(Shape::Vector(k))
}

/// Uniform(-scale, scale) matrix, used for embedding-style tables.
pub fn uniform_matrix(rows: usize, cols: usize, scale: f64, rng: &mut ChaCha8Rng) -> Tensor {
    let data = (0..rows * cols)
        .map(|_| rng.random_range(-scale..scale))
        .collect();
    Tensor::matrix(rows, cols, data)
}
