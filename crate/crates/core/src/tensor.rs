//! Dense double-precision tensors: the unit of all numeric computation.
//!
//! Only two ranks exist, vectors and matrices, stored row-major. There is no
//! broadcasting; every operation checks shapes and reports both sides on a
//! mismatch.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Shape of a [`Tensor`]: a vector of length `K` or an `R x C` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Vector(usize),
    Matrix(usize, usize),
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::Vector(k) => k,
            Shape::Matrix(r, c) => r * c,
        }
    }

    pub fn is_vector(&self) -> bool {
        matches!(self, Shape::Vector(_))
    }

    /// Scalars are represented as length-1 vectors.
    pub fn is_scalar(&self) -> bool {
        matches!(self, Shape::Vector(1))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Shape::Vector(k) => write!(f, "vec[{}]", k),
            Shape::Matrix(r, c) => write!(f, "mat[{}x{}]", r, c),
        }
    }
}

/// Dense tensor with row-major `f64` storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    shape: Shape,
    data: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: Shape, data: Vec<f64>) -> Self {
        assert_eq!(
            shape.len(),
            data.len(),
            "tensor data length {} does not match shape {}",
            data.len(),
            shape
        );
        Tensor { shape, data }
    }

    pub fn vector(data: Vec<f64>) -> Self {
        Tensor {
            shape: Shape::Vector(data.len()),
            data,
        }
    }

    pub fn scalar(x: f64) -> Self {
        Tensor {
            shape: Shape::Vector(1),
            data: vec![x],
        }
    }

    pub fn matrix(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        Tensor::new(Shape::Matrix(rows, cols), data)
    }

    pub fn zeros(shape: Shape) -> Self {
        Tensor {
            shape,
            data: vec![0.0; shape.len()],
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Value of a scalar tensor.
    pub fn item(&self) -> f64 {
        assert!(self.shape.is_scalar(), "item() on non-scalar {}", self.shape);
        self.data[0]
    }

    /// Row `r` of a matrix as a slice.
    pub fn row(&self, r: usize) -> &[f64] {
        match self.shape {
            Shape::Matrix(rows, cols) => {
                assert!(r < rows, "row {} out of range for {}", r, self.shape);
                &self.data[r * cols..(r + 1) * cols]
            }
            Shape::Vector(_) => panic!("row() on vector"),
        }
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        match self.shape {
            Shape::Matrix(rows, cols) => {
                assert!(r < rows, "row {} out of range", r);
                &mut self.data[r * cols..(r + 1) * cols]
            }
            Shape::Vector(_) => panic!("row_mut() on vector"),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// `m · v` for a matrix `R x C` and a vector of length `C`.
pub fn matvec_into(out: &mut [f64], m: &[f64], rows: usize, cols: usize, v: &[f64]) {
    debug_assert_eq!(m.len(), rows * cols);
    debug_assert_eq!(v.len(), cols);
    debug_assert_eq!(out.len(), rows);
    for (i, o) in out.iter_mut().enumerate() {
        let row = &m[i * cols..(i + 1) * cols];
        let mut acc = 0.0;
        for (a, b) in row.iter().zip(v) {
            acc += a * b;
        }
        *o = acc;
    }
}
