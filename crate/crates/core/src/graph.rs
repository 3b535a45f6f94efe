//! Define-by-run computation graph with reverse-mode differentiation.
//!
//! A [`Graph`] is rebuilt per example: tree shapes vary per input, so there is
//! no static compilation step. Nodes are appended in creation order, which is
//! therefore a topological order, and `backward` replays them in reverse,
//! accumulating vector-Jacobian products into per-node gradient buffers.
//!
//! The operation set is deliberately small: matrix-vector product, the
//! pointwise nonlinearities, hadamard/add/sub, concat/slice, dot, an embedding
//! row lookup, and a fused softmax cross-entropy. Everything the composition
//! models need is built from these.

use crate::error::{Error, Result};
use crate::params::ParamSet;
use crate::tensor::{matvec_into, Shape, Tensor};
use std::collections::BTreeMap;
use std::collections::HashMap;

/// Handle to a node in one [`Graph`]. Ids from different graphs must not mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
enum Op {
    /// Constant leaf; no gradient tracked beyond accumulation (never read back).
    Input,
    /// Leaf bound to a named [`ParamSet`] tensor.
    Param,
    /// Row `row` of a matrix leaf; backward scatters into that row.
    EmbedRow { row: usize },
    /// `m · v`.
    MatVec,
    Tanh,
    Sigmoid,
    Relu,
    /// Pointwise product of two equal-shape vectors.
    Hadamard,
    /// N-ary pointwise sum.
    Add,
    /// `a - b`.
    Sub,
    /// `x + c` pointwise.
    AddConst(f64),
    /// `[a; b]` for two vectors.
    Concat,
    /// Contiguous sub-vector.
    Slice { offset: usize, len: usize },
    /// Inner product of two equal-length vectors; scalar result.
    Dot,
    /// `-log softmax(logits)[gold]`, log-sum-exp stabilized.
    CrossEntropy { gold: usize },
}

struct Node {
    op: Op,
    parents: Vec<NodeId>,
    value: Tensor,
    grad: Option<Vec<f64>>,
}

pub struct Graph {
    nodes: Vec<Node>,
    param_order: Vec<(String, NodeId)>,
    param_lookup: HashMap<String, NodeId>,
    backward_done: bool,
}

impl Default for Graph {
    fn default() -> Self {
        Self::new()
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph {
            nodes: Vec::new(),
            param_order: Vec::new(),
            param_lookup: HashMap::new(),
            backward_done: false,
        }
    }

    fn push(&mut self, op: Op, parents: Vec<NodeId>, value: Tensor) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            op,
            parents,
            value,
            grad: None,
        });
        id
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn value(&self, id: NodeId) -> &Tensor {
        &self.nodes[id.0].value
    }

    pub fn shape(&self, id: NodeId) -> Shape {
        self.nodes[id.0].value.shape()
    }

    /// Accumulated gradient of a node, if any flowed to it.
    pub fn grad(&self, id: NodeId) -> Option<&[f64]> {
        self.nodes[id.0].grad.as_deref()
    }

    // ---- leaves ----

    pub fn input(&mut self, value: Tensor) -> NodeId {
        self.push(Op::Input, vec![], value)
    }

    pub fn zeros(&mut self, k: usize) -> NodeId {
        self.input(Tensor::zeros(Shape::Vector(k)))
    }

    /// Leaf bound to `params[name]`. Repeated calls with the same name return
    /// the same node, so a parameter participates in one graph exactly once
    /// and repeated use accumulates gradients by the sum rule.
    pub fn param(&mut self, name: &str, params: &ParamSet) -> Result<NodeId> {
        if let Some(&id) = self.param_lookup.get(name) {
            return Ok(id);
        }
        let tensor = params
            .get(name)
            .ok_or_else(|| Error::UnknownParam(name.to_string()))?
            .clone();
        let id = self.push(Op::Param, vec![], tensor);
        self.param_order.push((name.to_string(), id));
        self.param_lookup.insert(name.to_string(), id);
        Ok(id)
    }

    // ---- operations ----

    pub fn embed_row(&mut self, table: NodeId, row: usize) -> Result<NodeId> {
        let value = match self.shape(table) {
            Shape::Matrix(rows, _) if row < rows => {
                Tensor::vector(self.nodes[table.0].value.row(row).to_vec())
            }
            Shape::Matrix(rows, _) => {
                return Err(Error::InvalidInput(format!(
                    "embedding row {} out of range for {} rows",
                    row, rows
                )))
            }
            got => {
                return Err(Error::BadShape {
                    op: "embed_row",
                    expected: "matrix table",
                    got,
                })
            }
        };
        Ok(self.push(Op::EmbedRow { row }, vec![table], value))
    }

    pub fn matvec(&mut self, m: NodeId, v: NodeId) -> Result<NodeId> {
        let (rows, cols) = match self.shape(m) {
            Shape::Matrix(r, c) => (r, c),
            got => {
                return Err(Error::BadShape {
                    op: "matvec",
                    expected: "matrix",
                    got,
                })
            }
        };
        match self.shape(v) {
            Shape::Vector(k) if k == cols => {}
            got => {
                return Err(Error::ShapeMismatch {
                    op: "matvec",
                    lhs: Shape::Matrix(rows, cols),
                    rhs: got,
                })
            }
        }
        let mut out = vec![0.0; rows];
        matvec_into(
            &mut out,
            self.nodes[m.0].value.data(),
            rows,
            cols,
            self.nodes[v.0].value.data(),
        );
        Ok(self.push(Op::MatVec, vec![m, v], Tensor::vector(out)))
    }

    fn unary_pointwise(&mut self, op: Op, x: NodeId, f: impl Fn(f64) -> f64) -> NodeId {
        let data = self.nodes[x.0].value.data().iter().map(|&v| f(v)).collect();
        let shape = self.shape(x);
        self.push(op, vec![x], Tensor::new(shape, data))
    }

    pub fn tanh(&mut self, x: NodeId) -> NodeId {
        self.unary_pointwise(Op::Tanh, x, f64::tanh)
    }

    pub fn sigmoid(&mut self, x: NodeId) -> NodeId {
        self.unary_pointwise(Op::Sigmoid, x, |v| 1.0 / (1.0 + (-v).exp()))
    }

    pub fn relu(&mut self, x: NodeId) -> NodeId {
        self.unary_pointwise(Op::Relu, x, |v| v.max(0.0))
    }

    pub fn add_const(&mut self, x: NodeId, c: f64) -> NodeId {
        self.unary_pointwise(Op::AddConst(c), x, |v| v + c)
    }

    fn check_same_shape(&self, op: &'static str, a: NodeId, b: NodeId) -> Result<()> {
        let (sa, sb) = (self.shape(a), self.shape(b));
        if sa != sb {
            return Err(Error::ShapeMismatch { op, lhs: sa, rhs: sb });
        }
        Ok(())
    }

    pub fn hadamard(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        self.check_same_shape("hadamard", a, b)?;
        let data = self.nodes[a.0]
            .value
            .data()
            .iter()
            .zip(self.nodes[b.0].value.data())
            .map(|(x, y)| x * y)
            .collect();
        let shape = self.shape(a);
        Ok(self.push(Op::Hadamard, vec![a, b], Tensor::new(shape, data)))
    }

    /// Pointwise sum of one or more equal-shape nodes.
    pub fn add(&mut self, args: &[NodeId]) -> Result<NodeId> {
        let first = *args
            .first()
            .ok_or(Error::EmptyInput("add needs at least one argument"))?;
        for &a in &args[1..] {
            self.check_same_shape("add", first, a)?;
        }
        let shape = self.shape(first);
        let mut data = self.nodes[first.0].value.data().to_vec();
        for &a in &args[1..] {
            for (o, x) in data.iter_mut().zip(self.nodes[a.0].value.data()) {
                *o += x;
            }
        }
        Ok(self.push(Op::Add, args.to_vec(), Tensor::new(shape, data)))
    }

    pub fn add2(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        self.add(&[a, b])
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        self.check_same_shape("sub", a, b)?;
        let data = self.nodes[a.0]
            .value
            .data()
            .iter()
            .zip(self.nodes[b.0].value.data())
            .map(|(x, y)| x - y)
            .collect();
        let shape = self.shape(a);
        Ok(self.push(Op::Sub, vec![a, b], Tensor::new(shape, data)))
    }

    pub fn concat(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        for &(id, side) in &[(a, "left"), (b, "right")] {
            if !self.shape(id).is_vector() {
                let _ = side;
                return Err(Error::BadShape {
                    op: "concat",
                    expected: "vector",
                    got: self.shape(id),
                });
            }
        }
        let mut data = self.nodes[a.0].value.data().to_vec();
        data.extend_from_slice(self.nodes[b.0].value.data());
        Ok(self.push(Op::Concat, vec![a, b], Tensor::vector(data)))
    }

    pub fn slice(&mut self, x: NodeId, offset: usize, len: usize) -> Result<NodeId> {
        match self.shape(x) {
            Shape::Vector(k) if offset + len <= k => {}
            got => {
                return Err(Error::BadShape {
                    op: "slice",
                    expected: "vector covering the requested range",
                    got,
                })
            }
        }
        let data = self.nodes[x.0].value.data()[offset..offset + len].to_vec();
        Ok(self.push(Op::Slice { offset, len }, vec![x], Tensor::vector(data)))
    }

    pub fn dot(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        match (self.shape(a), self.shape(b)) {
            (Shape::Vector(p), Shape::Vector(q)) if p == q => {}
            (lhs, rhs) => return Err(Error::ShapeMismatch { op: "dot", lhs, rhs }),
        }
        let v: f64 = self.nodes[a.0]
            .value
            .data()
            .iter()
            .zip(self.nodes[b.0].value.data())
            .map(|(x, y)| x * y)
            .sum();
        Ok(self.push(Op::Dot, vec![a, b], Tensor::scalar(v)))
    }

    /// `-log softmax(logits)[gold]` as a scalar node.
    pub fn cross_entropy(&mut self, logits: NodeId, gold: usize) -> Result<NodeId> {
        let k = match self.shape(logits) {
            Shape::Vector(k) => k,
            got => {
                return Err(Error::BadShape {
                    op: "cross_entropy",
                    expected: "logit vector",
                    got,
                })
            }
        };
        if gold >= k {
            return Err(Error::InvalidInput(format!(
                "gold class {} out of range for {} classes",
                gold, k
            )));
        }
        let x = self.nodes[logits.0].value.data();
        let max = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + x.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        let loss = lse - x[gold];
        Ok(self.push(Op::CrossEntropy { gold }, vec![logits], Tensor::scalar(loss)))
    }

    // ---- backward ----

    /// Reverse sweep from a scalar loss. Errs if already run on this graph;
    /// use [`Graph::backward_accumulate`] when summing several losses on
    /// purpose.
    pub fn backward(&mut self, loss: NodeId) -> Result<()> {
        if self.backward_done {
            return Err(Error::DoubleBackward);
        }
        self.backward_accumulate(loss)
    }

    /// Reverse sweep that adds onto any gradients already present.
    pub fn backward_accumulate(&mut self, loss: NodeId) -> Result<()> {
        let shape = self.shape(loss);
        if !shape.is_scalar() {
            return Err(Error::NonScalarLoss(shape));
        }
        self.backward_done = true;
        self.accumulate(loss, &[1.0]);
        for i in (0..self.nodes.len()).rev() {
            let Some(g) = self.nodes[i].grad.clone() else {
                continue;
            };
            self.backprop_node(i, &g);
        }
        Ok(())
    }

    fn accumulate(&mut self, id: NodeId, g: &[f64]) {
        let node = &mut self.nodes[id.0];
        match &mut node.grad {
            Some(buf) => {
                for (b, x) in buf.iter_mut().zip(g) {
                    *b += x;
                }
            }
            None => node.grad = Some(g.to_vec()),
        }
    }

    fn backprop_node(&mut self, idx: usize, g: &[f64]) {
        let op = self.nodes[idx].op.clone();
        let parents = self.nodes[idx].parents.clone();
        match op {
            Op::Input | Op::Param => {}
            Op::EmbedRow { row } => {
                let table = parents[0];
                let cols = g.len();
                let node = &mut self.nodes[table.0];
                let total = node.value.len();
                let buf = node.grad.get_or_insert_with(|| vec![0.0; total]);
                for (j, x) in g.iter().enumerate() {
                    buf[row * cols + j] += x;
                }
            }
            Op::MatVec => {
                let (m, v) = (parents[0], parents[1]);
                let (rows, cols) = match self.shape(m) {
                    Shape::Matrix(r, c) => (r, c),
                    _ => unreachable!(),
                };
                // dL/dm = g ⊗ v; dL/dv = mᵀ g
                let vval = self.nodes[v.0].value.data().to_vec();
                let mval = self.nodes[m.0].value.data().to_vec();
                let mut gm = vec![0.0; rows * cols];
                let mut gv = vec![0.0; cols];
                for i in 0..rows {
                    let gi = g[i];
                    for j in 0..cols {
                        gm[i * cols + j] = gi * vval[j];
                        gv[j] += mval[i * cols + j] * gi;
                    }
                }
                self.accumulate(m, &gm);
                self.accumulate(v, &gv);
            }
            Op::Tanh => {
                let y = self.nodes[idx].value.data().to_vec();
                let gx: Vec<f64> = g.iter().zip(&y).map(|(gi, yi)| gi * (1.0 - yi * yi)).collect();
                self.accumulate(parents[0], &gx);
            }
            Op::Sigmoid => {
                let y = self.nodes[idx].value.data().to_vec();
                let gx: Vec<f64> = g.iter().zip(&y).map(|(gi, yi)| gi * yi * (1.0 - yi)).collect();
                self.accumulate(parents[0], &gx);
            }
            Op::Relu => {
                let x = self.nodes[parents[0].0].value.data().to_vec();
                let gx: Vec<f64> = g
                    .iter()
                    .zip(&x)
                    .map(|(gi, xi)| if *xi > 0.0 { *gi } else { 0.0 })
                    .collect();
                self.accumulate(parents[0], &gx);
            }
            Op::Hadamard => {
                let (a, b) = (parents[0], parents[1]);
                let av = self.nodes[a.0].value.data().to_vec();
                let bv = self.nodes[b.0].value.data().to_vec();
                let ga: Vec<f64> = g.iter().zip(&bv).map(|(gi, x)| gi * x).collect();
                let gb: Vec<f64> = g.iter().zip(&av).map(|(gi, x)| gi * x).collect();
                self.accumulate(a, &ga);
                self.accumulate(b, &gb);
            }
            Op::Add => {
                for p in parents {
                    self.accumulate(p, g);
                }
            }
            Op::Sub => {
                self.accumulate(parents[0], g);
                let neg: Vec<f64> = g.iter().map(|x| -x).collect();
                self.accumulate(parents[1], &neg);
            }
            Op::AddConst(_) => {
                self.accumulate(parents[0], g);
            }
            Op::Concat => {
                let p = self.nodes[parents[0].0].value.len();
                self.accumulate(parents[0], &g[..p]);
                self.accumulate(parents[1], &g[p..]);
            }
            Op::Slice { offset, len } => {
                let parent = parents[0];
                let total = self.nodes[parent.0].value.len();
                let mut gx = vec![0.0; total];
                gx[offset..offset + len].copy_from_slice(g);
                self.accumulate(parent, &gx);
            }
            Op::Dot => {
                let (a, b) = (parents[0], parents[1]);
                let g0 = g[0];
                let av = self.nodes[a.0].value.data().to_vec();
                let bv = self.nodes[b.0].value.data().to_vec();
                let ga: Vec<f64> = bv.iter().map(|x| g0 * x).collect();
                let gb: Vec<f64> = av.iter().map(|x| g0 * x).collect();
                self.accumulate(a, &ga);
                self.accumulate(b, &gb);
            }
            Op::CrossEntropy { gold } => {
                let logits = parents[0];
                let x = self.nodes[logits.0].value.data().to_vec();
                let probs = crate::heads::softmax_probs(&x);
                let g0 = g[0];
                let gx: Vec<f64> = probs
                    .iter()
                    .enumerate()
                    .map(|(j, p)| g0 * (p - if j == gold { 1.0 } else { 0.0 }))
                    .collect();
                self.accumulate(logits, &gx);
            }
        }
    }

    /// Gradients for every parameter bound into this graph, zero where no
    /// gradient flowed. Deterministic (name-sorted) order.
    pub fn param_grads(&self) -> BTreeMap<String, Tensor> {
        let mut out = BTreeMap::new();
        for (name, id) in &self.param_order {
            let node = &self.nodes[id.0];
            let tensor = match &node.grad {
                Some(g) => Tensor::new(node.value.shape(), g.clone()),
                None => Tensor::zeros(node.value.shape()),
            };
            out.insert(name.clone(), tensor);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params_wv() -> ParamSet {
        let mut ps = ParamSet::new();
        ps.insert("m", Tensor::matrix(2, 2, vec![1.0, 2.0, 0.0, 1.0]));
        ps.insert("v", Tensor::vector(vec![1.0, 1.0]));
        ps
    }

    #[test]
    fn matvec_identity() {
        let mut g = Graph::new();
        let m = g.input(Tensor::matrix(2, 2, vec![1.0, 0.0, 0.0, 1.0]));
        let v = g.input(Tensor::vector(vec![3.0, -1.0]));
        let y = g.matvec(m, v).unwrap();
        assert_eq!(g.value(y).data(), &[3.0, -1.0]);
    }

    #[test]
    fn matvec_hand_case() {
        let mut g = Graph::new();
        let ps = params_wv();
        let m = g.param("m", &ps).unwrap();
        let v = g.param("v", &ps).unwrap();
        let y = g.matvec(m, v).unwrap();
        assert_eq!(g.value(y).data(), &[3.0, 1.0]);
    }

    #[test]
    fn matvec_shape_error_names_both_shapes() {
        let mut g = Graph::new();
        let m = g.input(Tensor::matrix(2, 3, vec![0.0; 6]));
        let v = g.input(Tensor::vector(vec![0.0; 2]));
        let err = g.matvec(m, v).unwrap_err().to_string();
        assert!(err.contains("mat[2x3]") && err.contains("vec[2]"), "{err}");
    }

    #[test]
    fn matvec_backward_is_outer_product() {
        // d dot(matvec(m, v), u) / dm = u ⊗ v
        let mut g = Graph::new();
        let ps = params_wv();
        let m = g.param("m", &ps).unwrap();
        let v = g.param("v", &ps).unwrap();
        let u = g.input(Tensor::vector(vec![0.5, -2.0]));
        let y = g.matvec(m, v).unwrap();
        let loss = g.dot(y, u).unwrap();
        g.backward(loss).unwrap();
        let gm = g.param_grads().remove("m").unwrap();
        assert_eq!(gm.data(), &[0.5, 0.5, -2.0, -2.0]);
    }

    #[test]
    fn tanh_at_zero_and_sigmoid_at_zero() {
        let mut g = Graph::new();
        let x = g.zeros(2);
        let t = g.tanh(x);
        let s = g.sigmoid(x);
        assert_eq!(g.value(t).data(), &[0.0, 0.0]);
        assert_eq!(g.value(s).data(), &[0.5, 0.5]);
    }

    #[test]
    fn dot_examples() {
        let mut g = Graph::new();
        let a = g.input(Tensor::vector(vec![1.0, 0.0]));
        let b = g.input(Tensor::vector(vec![0.0, 1.0]));
        let orth = g.dot(a, b).unwrap();
        assert_eq!(g.value(orth).item(), 0.0);
        let c = g.input(Tensor::vector(vec![1.0, 2.0]));
        let d = g.input(Tensor::vector(vec![3.0, 4.0]));
        let prod = g.dot(c, d).unwrap();
        assert_eq!(g.value(prod).item(), 11.0);
    }

    #[test]
    fn dot_self_gradient_is_twice_input() {
        let mut g = Graph::new();
        let mut ps = ParamSet::new();
        ps.insert("x", Tensor::vector(vec![1.5, -0.5, 2.0]));
        let x = g.param("x", &ps).unwrap();
        let loss = g.dot(x, x).unwrap();
        g.backward(loss).unwrap();
        let gx = g.param_grads().remove("x").unwrap();
        assert_eq!(gx.data(), &[3.0, -1.0, 4.0]);
    }

    #[test]
    fn concat_then_slice_roundtrip() {
        let mut g = Graph::new();
        let a = g.input(Tensor::vector(vec![1.0, 2.0]));
        let b = g.input(Tensor::vector(vec![3.0]));
        let c = g.concat(a, b).unwrap();
        assert_eq!(g.value(c).data(), &[1.0, 2.0, 3.0]);
        let back_a = g.slice(c, 0, 2).unwrap();
        let back_b = g.slice(c, 2, 1).unwrap();
        assert_eq!(g.value(back_a).data(), g.value(a).data());
        assert_eq!(g.value(back_b).data(), g.value(b).data());
    }

    #[test]
    fn concat_gradient_splits_by_offset() {
        // d dot(concat(a, b), w) / da = first P entries of w
        let mut g = Graph::new();
        let mut ps = ParamSet::new();
        ps.insert("a", Tensor::vector(vec![0.3, -0.7]));
        let a = g.param("a", &ps).unwrap();
        let b = g.input(Tensor::vector(vec![2.0]));
        let c = g.concat(a, b).unwrap();
        let w = g.input(Tensor::vector(vec![10.0, 20.0, 30.0]));
        let loss = g.dot(c, w).unwrap();
        g.backward(loss).unwrap();
        let ga = g.param_grads().remove("a").unwrap();
        assert_eq!(ga.data(), &[10.0, 20.0]);
    }

    #[test]
    fn unused_parameter_gets_zero_gradient() {
        let mut g = Graph::new();
        let mut ps = ParamSet::new();
        ps.insert("used", Tensor::vector(vec![1.0]));
        ps.insert("unused", Tensor::vector(vec![5.0]));
        let x = g.param("used", &ps).unwrap();
        let _ = g.param("unused", &ps).unwrap();
        let loss = g.dot(x, x).unwrap();
        g.backward(loss).unwrap();
        let grads = g.param_grads();
        assert_eq!(grads["unused"].data(), &[0.0]);
        assert_eq!(grads["used"].data(), &[2.0]);
    }

    #[test]
    fn shared_parameter_accumulates_sum_of_uses() {
        // y = dot(x, c1) + dot(x, c2) against two independent graphs.
        let mut ps = ParamSet::new();
        ps.insert("x", Tensor::vector(vec![0.2, 0.4]));
        let c1 = Tensor::vector(vec![1.0, -1.0]);
        let c2 = Tensor::vector(vec![3.0, 5.0]);

        let mut g = Graph::new();
        let x = g.param("x", &ps).unwrap();
        let a = g.input(c1.clone());
        let b = g.input(c2.clone());
        let d1 = g.dot(x, a).unwrap();
        let d2 = g.dot(x, b).unwrap();
        let loss = g.add(&[d1, d2]).unwrap();
        g.backward(loss).unwrap();
        let shared = g.param_grads().remove("x").unwrap();

        let mut sum = vec![0.0; 2];
        for c in [c1, c2] {
            let mut g1 = Graph::new();
            let x1 = g1.param("x", &ps).unwrap();
            let cn = g1.input(c);
            let l = g1.dot(x1, cn).unwrap();
            g1.backward(l).unwrap();
            for (s, v) in sum.iter_mut().zip(g1.param_grads()["x"].data()) {
                *s += v;
            }
        }
        for (a, b) in shared.data().iter().zip(&sum) {
            assert_relative_eq!(a, b, max_relative = 1e-15);
        }
    }

    #[test]
    fn double_backward_is_an_error_unless_explicit() {
        let mut g = Graph::new();
        let mut ps = ParamSet::new();
        ps.insert("x", Tensor::vector(vec![1.0]));
        let x = g.param("x", &ps).unwrap();
        let loss = g.dot(x, x).unwrap();
        g.backward(loss).unwrap();
        assert!(matches!(g.backward(loss), Err(Error::DoubleBackward)));
        // Explicit accumulation doubles the gradient.
        g.backward_accumulate(loss).unwrap();
        assert_eq!(g.param_grads()["x"].data(), &[4.0]);
    }

    #[test]
    fn backward_requires_scalar_loss() {
        let mut g = Graph::new();
        let x = g.input(Tensor::vector(vec![1.0, 2.0]));
        let y = g.tanh(x);
        assert!(matches!(g.backward(y), Err(Error::NonScalarLoss(_))));
    }

    #[test]
    fn cross_entropy_uniform_and_peaked() {
        let mut g = Graph::new();
        let x = g.zeros(5);
        let l = g.cross_entropy(x, 2).unwrap();
        assert_relative_eq!(g.value(l).item(), 5.0_f64.ln(), max_relative = 1e-12);

        let y = g.input(Tensor::vector(vec![10.0, 0.0]));
        let l2 = g.cross_entropy(y, 0).unwrap();
        assert_relative_eq!(g.value(l2).item(), (1.0 + (-10.0_f64).exp()).ln(), max_relative = 1e-12);
        assert!((g.value(l2).item() - 4.54e-5).abs() < 1e-6);
    }

    #[test]
    fn evaluation_is_bit_deterministic() {
        let build = || {
            let mut g = Graph::new();
            let ps = params_wv();
            let m = g.param("m", &ps).unwrap();
            let v = g.param("v", &ps).unwrap();
            let h = g.matvec(m, v).unwrap();
            let t = g.tanh(h);
            let l = g.dot(t, t).unwrap();
            g.value(l).item()
        };
        assert_eq!(build().to_bits(), build().to_bits());
    }
}
