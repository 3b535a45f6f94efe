//! Standard and bi-directional recurrent composition:
//! `h_t = tanh(W·h_{t-1} + V·e_t)`.

use super::{embed_token, CombineMode, Encoding};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::params::ParamSet;

/// Fold a tanh recurrence over pre-embedded inputs, returning every state.
pub(crate) fn tanh_chain(
    g: &mut Graph,
    w: NodeId,
    v: NodeId,
    h0: NodeId,
    inputs: &[NodeId],
) -> Result<Vec<NodeId>> {
    let mut states = Vec::with_capacity(inputs.len());
    let mut h = h0;
    for &e in inputs {
        let wh = g.matvec(w, h)?;
        let ve = g.matvec(v, e)?;
        let s = g.add2(wh, ve)?;
        h = g.tanh(s);
        states.push(h);
    }
    Ok(states)
}

/// Left-to-right chain with `h_0 = 0`; the summary is the final state.
pub fn encode_sequence(
    g: &mut Graph,
    params: &ParamSet,
    prefix: &str,
    table: NodeId,
    tokens: &[u32],
) -> Result<Encoding> {
    encode_sequence_with_init(g, params, prefix, table, tokens, None)
}

/// Same chain but seeded with an explicit initial hidden vector. Used by the
/// left-branching equivalence between tree and sequence composition.
pub fn encode_sequence_with_init(
    g: &mut Graph,
    params: &ParamSet,
    prefix: &str,
    table: NodeId,
    tokens: &[u32],
    h0: Option<NodeId>,
) -> Result<Encoding> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput("encode_sequence: empty token sequence"));
    }
    let w = g.param(&format!("{prefix}.w"), params)?;
    let v = g.param(&format!("{prefix}.v"), params)?;
    let k = match g.shape(w) {
        crate::tensor::Shape::Matrix(r, _) => r,
        _ => unreachable!(),
    };
    let h0 = match h0 {
        Some(h) => h,
        None => g.zeros(k),
    };
    let inputs: Vec<NodeId> = tokens
        .iter()
        .map(|&t| embed_token(g, table, t))
        .collect::<Result<_>>()?;
    let states = tanh_chain(g, w, v, h0, &inputs)?;
    let summary = *states.last().unwrap();
    Ok(Encoding {
        units: states,
        summary,
    })
}

/// Forward and backward chains; per-unit vectors combine `[h_bwd_t; h_fwd_t]`
/// by concatenation or by the K x 2K tanh projection. The projected summary
/// is the final-position unit; the concat summary pairs the two
/// all-of-the-sequence end states `[h_bwd_1; h_fwd_N]`.
pub fn encode_bisequence(
    g: &mut Graph,
    params: &ParamSet,
    prefix: &str,
    table: NodeId,
    tokens: &[u32],
    combine: CombineMode,
) -> Result<Encoding> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput("encode_bisequence: empty token sequence"));
    }
    let w_f = g.param(&format!("{prefix}.fwd.w"), params)?;
    let v_f = g.param(&format!("{prefix}.fwd.v"), params)?;
    let w_b = g.param(&format!("{prefix}.bwd.w"), params)?;
    let v_b = g.param(&format!("{prefix}.bwd.v"), params)?;
    let k = match g.shape(w_f) {
        crate::tensor::Shape::Matrix(r, _) => r,
        _ => unreachable!(),
    };
    let inputs: Vec<NodeId> = tokens
        .iter()
        .map(|&t| embed_token(g, table, t))
        .collect::<Result<_>>()?;
    let n = inputs.len();

    let zf = g.zeros(k);
    let fwd = tanh_chain(g, w_f, v_f, zf, &inputs)?;
    let zb = g.zeros(k);
    let rev_inputs: Vec<NodeId> = inputs.iter().rev().copied().collect();
    let bwd_rev = tanh_chain(g, w_b, v_b, zb, &rev_inputs)?;
    // bwd[t] is the backward state at original position t.
    let bwd: Vec<NodeId> = bwd_rev.into_iter().rev().collect();

    let mut units = Vec::with_capacity(n);
    for t in 0..n {
        let cat = g.concat(bwd[t], fwd[t])?;
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
        CombineMode::Concat => g.concat(bwd[0], fwd[n - 1])?,
    };
    Ok(Encoding { units, summary })
}
