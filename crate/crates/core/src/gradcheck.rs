//! Finite-difference gradient verification.
//!
//! The checker is split into three stages so that callers (tests, the
//! `gradcheck` command) can inspect or perturb intermediate results: analytic
//! gradients from one backward pass, numeric gradients from central
//! differences, and the relative-error report comparing the two. The numeric
//! side never touches the backward pass, so it stays an independent oracle.

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::params::ParamSet;
use crate::tensor::Tensor;
use std::collections::BTreeMap;

/// A deterministic scalar objective built on a fresh graph from the given
/// parameters.
pub trait Objective {
    fn build(&self, params: &ParamSet, graph: &mut Graph) -> Result<NodeId>;
}

impl<F> Objective for F
where
    F: Fn(&ParamSet, &mut Graph) -> Result<NodeId>,
{
    fn build(&self, params: &ParamSet, graph: &mut Graph) -> Result<NodeId> {
        self(params, graph)
    }
}

#[derive(Debug, Clone)]
pub struct GradCheckReport {
    /// Max relative error per parameter tensor, name-sorted.
    pub per_tensor: BTreeMap<String, f64>,
    pub max_rel_error: f64,
}

impl GradCheckReport {
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_rel_error < tolerance
    }

    /// Tensors whose error meets or exceeds the tolerance.
    pub fn failing(&self, tolerance: f64) -> Vec<&str> {
        self.per_tensor
            .iter()
            .filter(|(_, &e)| e >= tolerance)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

fn eval_scalar(f: &dyn Objective, params: &ParamSet) -> Result<f64> {
    let mut graph = Graph::new();
    let loss = f.build(params, &mut graph)?;
    let v = graph.value(loss).item();
    if !v.is_finite() {
        return Err(Error::NonFinite {
            context: "objective value".to_string(),
            value: v,
        });
    }
    Ok(v)
}

/// One forward+backward pass; gradients for every parameter the objective
/// touched (zero tensors for parameters it bound but did not use).
pub fn analytic_grads(f: &dyn Objective, params: &ParamSet) -> Result<BTreeMap<String, Tensor>> {
    let mut graph = Graph::new();
    let loss = f.build(params, &mut graph)?;
    graph.backward(loss)?;
    Ok(graph.param_grads())
}

/// Central differences (f(θ+s) − f(θ−s)) / 2s, coordinate by coordinate,
/// for every tensor in `params`.
pub fn numeric_grads(
    f: &dyn Objective,
    params: &ParamSet,
    step: f64,
) -> Result<BTreeMap<String, Tensor>> {
    assert!(step > 0.0, "finite-difference step must be positive");
    let mut out = BTreeMap::new();
    let names: Vec<String> = params.names().cloned().collect();
    let mut work = params.clone();
    for name in names {
        let n = work.get(&name).unwrap().len();
        let shape = work.get(&name).unwrap().shape();
        let mut grad = vec![0.0; n];
        for i in 0..n {
            let original = work.get(&name).unwrap().data()[i];
            work.get_mut(&name).unwrap().data_mut()[i] = original + step;
            let plus = eval_scalar(f, &work)?;
            work.get_mut(&name).unwrap().data_mut()[i] = original - step;
            let minus = eval_scalar(f, &work)?;
            work.get_mut(&name).unwrap().data_mut()[i] = original;
            grad[i] = (plus - minus) / (2.0 * step);
        }
        out.insert(name, Tensor::new(shape, grad));
    }
    Ok(out)
}

/// Per-coordinate relative error |a − n| / max(1e-8, |a| + |n|), reduced to a
/// per-tensor max and a global max.
pub fn rel_error_report(
    analytic: &BTreeMap<String, Tensor>,
    numeric: &BTreeMap<String, Tensor>,
) -> GradCheckReport {
    let mut per_tensor = BTreeMap::new();
    let mut max_rel = 0.0_f64;
    for (name, a) in analytic {
        let n = &numeric[name];
        let mut worst = 0.0_f64;
        for (av, nv) in a.data().iter().zip(n.data()) {
            let denom = (av.abs() + nv.abs()).max(1e-8);
            let e = (av - nv).abs() / denom;
            worst = worst.max(e);
        }
        max_rel = max_rel.max(worst);
        per_tensor.insert(name.clone(), worst);
    }
    GradCheckReport {
        per_tensor,
        max_rel_error: max_rel,
    }
}

/// Full check: analytic vs central differences over every coordinate of
/// `params`, returning the max relative error.
pub fn grad_check(f: &dyn Objective, params: &ParamSet, step: f64) -> Result<GradCheckReport> {
    let analytic = analytic_grads(f, params)?;
    let numeric = numeric_grads(f, params, step)?;
    Ok(rel_error_report(&analytic, &numeric))
}
