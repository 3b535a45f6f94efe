//! LSTM composition. One 4K x 2K gate block maps `[h_{t-1}; e_t]` to the
//! (input, forget, output, candidate) pre-activations; the memory cell is
//! `c_t = f⊙c_{t-1} + i⊙l` and the state is `h_t = o⊙c_t`.

use super::{embed_token, CombineMode, Encoding};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::params::ParamSet;
use crate::tensor::Shape;

/// Gate activations for one step: split a 4K pre-activation into
/// (i, f, o, l) with sigmoid on the first three and tanh on the candidate.
pub(crate) fn split_gates(
    g: &mut Graph,
    pre: NodeId,
    k: usize,
) -> Result<(NodeId, NodeId, NodeId, NodeId)> {
    let i_raw = g.slice(pre, 0, k)?;
    let f_raw = g.slice(pre, k, k)?;
    let o_raw = g.slice(pre, 2 * k, k)?;
    let l_raw = g.slice(pre, 3 * k, k)?;
    Ok((
        g.sigmoid(i_raw),
        g.sigmoid(f_raw),
        g.sigmoid(o_raw),
        g.tanh(l_raw),
    ))
}

/// Run an LSTM over pre-embedded K-dimensional inputs; returns the (h, c)
/// pair at every step. `h_0 = c_0 = 0`.
pub(crate) fn lstm_chain(
    g: &mut Graph,
    gates: NodeId,
    k: usize,
    inputs: &[NodeId],
) -> Result<Vec<(NodeId, NodeId)>> {
    let mut h = g.zeros(k);
    let mut c = g.zeros(k);
    let mut states = Vec::with_capacity(inputs.len());
    for &e in inputs {
        let x = g.concat(h, e)?;
        let pre = g.matvec(gates, x)?;
        let (i, f, o, l) = split_gates(g, pre, k)?;
        let keep = g.hadamard(f, c)?;
        let write = g.hadamard(i, l)?;
        c = g.add2(keep, write)?;
        h = g.hadamard(o, c)?;
        states.push((h, c));
    }
    Ok(states)
}

fn gate_dim(g: &Graph, gates: NodeId) -> usize {
    match g.shape(gates) {
        Shape::Matrix(four_k, _) => four_k / 4,
        _ => unreachable!(),
    }
}

/// One-directional LSTM; summary is the last step's state.
pub fn encode_lstm(
    g: &mut Graph,
    params: &ParamSet,
    prefix: &str,
    table: NodeId,
    tokens: &[u32],
) -> Result<Encoding> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput("encode_lstm: empty token sequence"));
    }
    let gates = g.param(&format!("{prefix}.gates"), params)?;
    let k = gate_dim(g, gates);
    let inputs: Vec<NodeId> = tokens
        .iter()
        .map(|&t| embed_token(g, table, t))
        .collect::<Result<_>>()?;
    let states = lstm_chain(g, gates, k, &inputs)?;
    let units: Vec<NodeId> = states.iter().map(|&(h, _)| h).collect();
    let summary = *units.last().unwrap();
    Ok(Encoding { units, summary })
}

/// Two LSTM chains in opposite directions, combined like the bi-directional
/// tanh model.
pub fn encode_bilstm(
    g: &mut Graph,
    params: &ParamSet,
    prefix: &str,
    table: NodeId,
    tokens: &[u32],
    combine: CombineMode,
) -> Result<Encoding> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput("encode_bilstm: empty token sequence"));
    }
    let fwd_gates = g.param(&format!("{prefix}.fwd.gates"), params)?;
    let bwd_gates = g.param(&format!("{prefix}.bwd.gates"), params)?;
    let k = gate_dim(g, fwd_gates);
    let inputs: Vec<NodeId> = tokens
        .iter()
        .map(|&t| embed_token(g, table, t))
        .collect::<Result<_>>()?;
    let n = inputs.len();

    let fwd = lstm_chain(g, fwd_gates, k, &inputs)?;
    let rev_inputs: Vec<NodeId> = inputs.iter().rev().copied().collect();
    let bwd_rev = lstm_chain(g, bwd_gates, k, &rev_inputs)?;
    let bwd: Vec<(NodeId, NodeId)> = bwd_rev.into_iter().rev().collect();

    let mut units = Vec::with_capacity(n);
    for t in 0..n {
        let cat = g.concat(bwd[t].0, fwd[t].0)?;
        let unit = match combine {
            CombineMode::Concat => cat,
            CombineMode::Project => {
                let comb = g.param(&format!("{prefix}.comb"), params)?;
                let proj = g.matvec(comb, cat)?;
                g.tanh(proj)
            }
        };
        units.push(unit);
    }
    let summary = match combine {
        CombineMode::Project => *units.last().unwrap(),
        CombineMode::Concat => g.concat(bwd[0].0, fwd[n - 1].0)?,
    };
    Ok(Encoding { units, summary })
}
