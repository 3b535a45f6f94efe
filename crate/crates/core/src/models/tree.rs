//! Standard recursive composition over binary parse trees:
//! `e_parent = tanh(W·e_left + V·e_right)`, leaves are embedding rows.

use super::{embed_token, Encoding};
use crate::corpus::tree::{LabeledTree, TreeNodeKind};
use crate::error::Result;
use crate::graph::{Graph, NodeId};
use crate::params::ParamSet;

/// Bottom-up encoding; per-unit vectors are indexed by tree node id and the
/// summary is the root vector.
pub fn encode_tree(
    g: &mut Graph,
    params: &ParamSet,
    prefix: &str,
    table: NodeId,
    tree: &LabeledTree,
) -> Result<Encoding> {
    let w = g.param(&format!("{prefix}.w"), params)?;
    let v = g.param(&format!("{prefix}.v"), params)?;
    let mut units: Vec<NodeId> = Vec::with_capacity(tree.node_count());
    // Arena is post-ordered: children precede parents.
    for node in tree.nodes() {
        let id = match node.kind {
            TreeNodeKind::Leaf { token } => embed_token(g, table, token)?,
            TreeNodeKind::Internal { left, right } => {
                let wl = g.matvec(w, units[left])?;
                let vr = g.matvec(v, units[right])?;
                let s = g.add2(wl, vr)?;
                g.tanh(s)
            }
        };
        units.push(id);
    }
    let summary = units[tree.root()];
    Ok(Encoding { units, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tree::left_branching_tree;
    use crate::corpus::EmbeddingTable;
    use crate::models::bind_embeddings;
    use crate::models::sequence::encode_sequence_with_init;
    use crate::rng::rng_from;
    use crate::tensor::Tensor;
    use rand::Rng;

    fn random_emb(rows: usize, k: usize, seed: u64) -> EmbeddingTable {
        let mut rng = rng_from(seed);
        let data = (0..rows * k).map(|_| rng.random_range(-1.0..1.0)).collect();
        EmbeddingTable {
            data: Tensor::matrix(rows, k, data),
            trainable: false,
        }
    }

    #[test]
    fn single_leaf_summary_is_the_embedding() {
        let mut ps = ParamSet::new();
        ps.insert("model.w", Tensor::matrix(2, 2, vec![0.1; 4]));
        ps.insert("model.v", Tensor::matrix(2, 2, vec![0.2; 4]));
        let emb = random_emb(3, 2, 5);
        let tree = left_branching_tree(&[2], None).unwrap();
        let mut g = Graph::new();
        let table = bind_embeddings(&mut g, &ps, &emb).unwrap();
        let enc = encode_tree(&mut g, &ps, "model", table, &tree).unwrap();
        assert_eq!(g.value(enc.summary).data(), emb.data.row(2));
    }

    #[test]
    fn left_branching_tree_equals_seeded_sequence() {
        let k = 4;
        let mut rng = rng_from(11);
        let mut ps = ParamSet::new();
        ps.insert("model.w", crate::params::glorot_matrix(k, k, &mut rng));
        ps.insert("model.v", crate::params::glorot_matrix(k, k, &mut rng));
        let emb = random_emb(6, k, 17);
        let tokens = [1u32, 3, 5, 2, 4];
        let tree = left_branching_tree(&tokens, None).unwrap();

        let mut g1 = Graph::new();
        let t1 = bind_embeddings(&mut g1, &ps, &emb).unwrap();
        let tree_enc = encode_tree(&mut g1, &ps, "model", t1, &tree).unwrap();

        let mut g2 = Graph::new();
        let t2 = bind_embeddings(&mut g2, &ps, &emb).unwrap();
        let h1 = g2.embed_row(t2, tokens[0] as usize).unwrap();
        let seq_enc =
            encode_sequence_with_init(&mut g2, &ps, "model", t2, &tokens[1..], Some(h1)).unwrap();

        let a = g1.value(tree_enc.summary).data();
        let b = g2.value(seq_enc.summary).data();
        let max_diff = a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(max_diff < 1e-12, "max diff {max_diff}");
    }

    #[test]
    fn grouping_changes_the_summary() {
        // ((the food) (is delicious)) differs from (((the food) is) delicious)
        // for generic weights: tanh composition is not associative.
        let k = 3;
        let mut rng = rng_from(23);
        let mut ps = ParamSet::new();
        ps.insert("model.w", crate::params::glorot_matrix(k, k, &mut rng));
        ps.insert("model.v", crate::params::glorot_matrix(k, k, &mut rng));
        let emb = random_emb(4, k, 29);
        let tokens = [0u32, 1, 2, 3];

        // Balanced grouping.
        let mut b = crate::corpus::tree::TreeBuilder::new();
        let l0 = b.leaf(0, None, 0);
        let l1 = b.leaf(1, None, 1);
        let l2 = b.leaf(2, None, 2);
        let l3 = b.leaf(3, None, 3);
        let left = b.internal(l0, l1, None);
        let right = b.internal(l2, l3, None);
        let root = b.internal(left, right, None);
        let balanced = b.finish(root);

        let flat = left_branching_tree(&tokens, None).unwrap();

        let mut g1 = Graph::new();
        let t1 = bind_embeddings(&mut g1, &ps, &emb).unwrap();
        let e1 = encode_tree(&mut g1, &ps, "model", t1, &balanced).unwrap();
        let mut g2 = Graph::new();
        let t2 = bind_embeddings(&mut g2, &ps, &emb).unwrap();
        let e2 = encode_tree(&mut g2, &ps, "model", t2, &flat).unwrap();

        let diff: f64 = g1
            .value(e1.summary)
            .data()
            .iter()
            .zip(g2.value(e2.summary).data())
            .map(|(x, y)| (x - y).abs())
            .sum();
        assert!(diff > 1e-6, "summaries unexpectedly equal");
    }
}
