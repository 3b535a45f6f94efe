//! The composition architectures: each maps a token sequence or a labeled
//! tree to per-unit vectors plus a summary vector, all as nodes of one graph
//! so that losses built on top backpropagate into the parameters.

pub mod checkpoint;
pub mod depth;
pub mod hierarchical;
pub mod lstm;
pub mod sequence;
pub mod tree;
pub mod treelstm;

use crate::corpus::tree::LabeledTree;
use crate::corpus::EmbeddingTable;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::params::{glorot_matrix, ParamSet};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

/// Name of the embedding table inside a [`ParamSet`] when embeddings train.
pub const EMB_PARAM: &str = "emb";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Sequence,
    Tree,
    BiSequence,
    Lstm,
    BiLstm,
    TreeLstm,
    Hierarchical,
}

pub const ALL_MODEL_KINDS: [ModelKind; 7] = [
    ModelKind::Sequence,
    ModelKind::Tree,
    ModelKind::BiSequence,
    ModelKind::Lstm,
    ModelKind::BiLstm,
    ModelKind::TreeLstm,
    ModelKind::Hierarchical,
];

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Sequence => "sequence",
            ModelKind::Tree => "tree",
            ModelKind::BiSequence => "bi-sequence",
            ModelKind::Lstm => "lstm",
            ModelKind::BiLstm => "bi-lstm",
            ModelKind::TreeLstm => "tree-lstm",
            ModelKind::Hierarchical => "hierarchical",
        }
    }

    /// Tree models compose by parse structure and need tree-bearing input.
    pub fn requires_trees(&self) -> bool {
        matches!(self, ModelKind::Tree | ModelKind::TreeLstm)
    }

    /// Whether the bi-directional combine mode applies to this kind.
    pub fn is_bidirectional(&self) -> bool {
        matches!(self, ModelKind::BiSequence | ModelKind::BiLstm)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sequence" => ModelKind::Sequence,
            "tree" => ModelKind::Tree,
            "bi-sequence" => ModelKind::BiSequence,
            "lstm" => ModelKind::Lstm,
            "bi-lstm" => ModelKind::BiLstm,
            "tree-lstm" => ModelKind::TreeLstm,
            "hierarchical" => ModelKind::Hierarchical,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown model kind `{other}` (expected one of: sequence, tree, bi-sequence, lstm, bi-lstm, tree-lstm, hierarchical)"
                )))
            }
        })
    }
}

/// How bi-directional states combine into per-unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CombineMode {
    /// `tanh(W_L · [h_bwd; h_fwd])`, keeps dimensionality K. The default.
    #[default]
    Project,
    /// Plain `[h_bwd; h_fwd]`, dimensionality 2K; kept for ablations.
    Concat,
}

impl FromStr for CombineMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "project" => CombineMode::Project,
            "concat" => CombineMode::Concat,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown combine mode `{other}` (expected project or concat)"
                )))
            }
        })
    }
}

/// Per-unit vectors (one per timestep or per tree node, in input order) plus
/// the designated summary vector.
#[derive(Debug, Clone)]
pub struct Encoding {
    pub units: Vec<NodeId>,
    pub summary: NodeId,
}

/// Input to an encoder: a token sequence or a parse tree.
#[derive(Debug, Clone, Copy)]
pub enum ModelInput<'a> {
    Tokens(&'a [u32]),
    Tree(&'a LabeledTree),
}

impl<'a> ModelInput<'a> {
    pub fn tokens(&self) -> Vec<u32> {
        match self {
            ModelInput::Tokens(t) => t.to_vec(),
            ModelInput::Tree(t) => t.tokens(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EncodeOptions {
    pub combine: CombineMode,
    /// Clause punctuation token ids, used by the hierarchical model.
    pub punct: HashSet<u32>,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        EncodeOptions {
            combine: CombineMode::Project,
            punct: HashSet::new(),
        }
    }
}

/// Bind the embedding table into the graph: as a parameter leaf when
/// trainable (the authoritative copy then lives in the [`ParamSet`] under
/// [`EMB_PARAM`]), as a constant input otherwise.
pub fn bind_embeddings(g: &mut Graph, params: &ParamSet, emb: &EmbeddingTable) -> Result<NodeId> {
    if emb.trainable {
        g.param(EMB_PARAM, params)
    } else {
        Ok(g.input(emb.data.clone()))
    }
}

/// Dimensionality of the summary vector produced by a model kind.
pub fn summary_dim(kind: ModelKind, k: usize, combine: CombineMode) -> usize {
    if kind.is_bidirectional() && combine == CombineMode::Concat {
        2 * k
    } else {
        k
    }
}

/// Fresh, seeded parameters for one architecture at dimension `k`, under the
/// `model.` name prefix. Embeddings, heads, and answer tables are separate.
pub fn init_params(kind: ModelKind, k: usize, rng: &mut ChaCha8Rng) -> ParamSet {
    let mut ps = ParamSet::new();
    match kind {
        ModelKind::Sequence => {
            ps.insert("model.w", glorot_matrix(k, k, rng));
            ps.insert("model.v", glorot_matrix(k, k, rng));
        }
        ModelKind::Tree => {
            ps.insert("model.w", glorot_matrix(k, k, rng));
            ps.insert("model.v", glorot_matrix(k, k, rng));
        }
        ModelKind::BiSequence => {
            ps.insert("model.fwd.w", glorot_matrix(k, k, rng));
            ps.insert("model.fwd.v", glorot_matrix(k, k, rng));
            ps.insert("model.bwd.w", glorot_matrix(k, k, rng));
            ps.insert("model.bwd.v", glorot_matrix(k, k, rng));
            ps.insert("model.comb", glorot_matrix(k, 2 * k, rng));
        }
        ModelKind::Lstm => {
            ps.insert("model.gates", glorot_matrix(4 * k, 2 * k, rng));
        }
        ModelKind::BiLstm => {
            ps.insert("model.fwd.gates", glorot_matrix(4 * k, 2 * k, rng));
            ps.insert("model.bwd.gates", glorot_matrix(4 * k, 2 * k, rng));
            ps.insert("model.comb", glorot_matrix(k, 2 * k, rng));
        }
        ModelKind::TreeLstm => {
            ps.insert("model.left", glorot_matrix(4 * k, 2 * k, rng));
            ps.insert("model.right", glorot_matrix(4 * k, 2 * k, rng));
        }
        ModelKind::Hierarchical => {
            ps.insert("model.clause.fwd.gates", glorot_matrix(4 * k, 2 * k, rng));
            ps.insert("model.clause.bwd.gates", glorot_matrix(4 * k, 2 * k, rng));
            ps.insert("model.clause.comb", glorot_matrix(k, 2 * k, rng));
            ps.insert("model.top.gates", glorot_matrix(4 * k, 2 * k, rng));
        }
    }
    ps
}

/// Encode an input with any architecture. Tree kinds require tree input;
/// sequential kinds accept either (trees contribute their leaf sequence).
pub fn encode(
    kind: ModelKind,
    g: &mut Graph,
    params: &ParamSet,
    emb: &EmbeddingTable,
    input: ModelInput<'_>,
    opts: &EncodeOptions,
) -> Result<Encoding> {
    let table = bind_embeddings(g, params, emb)?;
    match kind {
        ModelKind::Sequence => sequence::encode_sequence(g, params, "model", table, &input.tokens()),
        ModelKind::BiSequence => {
            sequence::encode_bisequence(g, params, "model", table, &input.tokens(), opts.combine)
        }
        ModelKind::Lstm => lstm::encode_lstm(g, params, "model", table, &input.tokens()),
        ModelKind::BiLstm => {
            lstm::encode_bilstm(g, params, "model", table, &input.tokens(), opts.combine)
        }
        ModelKind::Hierarchical => hierarchical::encode_hierarchical(
            g,
            params,
            "model",
            table,
            &input.tokens(),
            &opts.punct,
        ),
        ModelKind::Tree => match input {
            ModelInput::Tree(t) => tree::encode_tree(g, params, "model", table, t),
            ModelInput::Tokens(_) => Err(Error::InvalidInput(
                "tree model requires tree-bearing input".into(),
            )),
        },
        ModelKind::TreeLstm => match input {
            ModelInput::Tree(t) => treelstm::encode_treelstm(g, params, "model", table, t),
            ModelInput::Tokens(_) => Err(Error::InvalidInput(
                "tree-lstm model requires tree-bearing input".into(),
            )),
        },
    }
}

pub use depth::composition_depth;

/// Embedding-row lookup used by all encoders.
pub(crate) fn embed_token(g: &mut Graph, table: NodeId, token: u32) -> Result<NodeId> {
    g.embed_row(table, token as usize)
}
