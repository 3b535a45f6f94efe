//! Labeled binary parse trees over interned tokens.
//!
//! Nodes live in an arena in post-order (children before parents), so a
//! single forward pass over the arena visits every child before its parent.
//! The root is always the last node.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub type TreeNodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeNodeKind {
    Leaf { token: u32 },
    Internal { left: TreeNodeId, right: TreeNodeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub kind: TreeNodeKind,
    /// Class label; optional because unevaluated structural trees (e.g.
    /// relation paths) carry none.
    pub label: Option<u8>,
    /// Half-open token index range covered by this node.
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledTree {
    nodes: Vec<TreeNode>,
}

pub struct TreeBuilder {
    nodes: Vec<TreeNode>,
}

impl Default for TreeBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl TreeBuilder {
    pub fn new() -> Self {
        TreeBuilder { nodes: Vec::new() }
    }

    pub fn leaf(&mut self, token: u32, label: Option<u8>, position: usize) -> TreeNodeId {
        self.nodes.push(TreeNode {
            kind: TreeNodeKind::Leaf { token },
            label,
            span: (position, position + 1),
        });
        self.nodes.len() - 1
    }

    pub fn internal(&mut self, left: TreeNodeId, right: TreeNodeId, label: Option<u8>) -> TreeNodeId {
        let span = (self.nodes[left].span.0, self.nodes[right].span.1);
        debug_assert_eq!(
            self.nodes[left].span.1, self.nodes[right].span.0,
            "child spans must be adjacent"
        );
        self.nodes.push(TreeNode {
            kind: TreeNodeKind::Internal { left, right },
            label,
            span,
        });
        self.nodes.len() - 1
    }

    /// Finish the tree; `root` must be the last node pushed.
    pub fn finish(self, root: TreeNodeId) -> LabeledTree {
        assert_eq!(root, self.nodes.len() - 1, "root must be the final node");
        LabeledTree { nodes: self.nodes }
    }
}

impl LabeledTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: TreeNodeId) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> TreeNodeId {
        self.nodes.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n.kind, TreeNodeKind::Leaf { .. }))
            .count()
    }

    /// Tokens at the leaves, left to right.
    pub fn tokens(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.node(self.root()).span.1 - self.node(self.root()).span.0];
        for n in &self.nodes {
            if let TreeNodeKind::Leaf { token } = n.kind {
                out[n.span.0] = token;
            }
        }
        out
    }

    /// Tokens covered by one node, in surface order.
    pub fn span_tokens(&self, id: TreeNodeId) -> Vec<u32> {
        let (lo, hi) = self.nodes[id].span;
        let all = self.tokens();
        all[lo..hi].to_vec()
    }

    /// Arena index of the leaf at surface position `pos`.
    pub fn leaf_at(&self, pos: usize) -> Option<TreeNodeId> {
        self.nodes
            .iter()
            .position(|n| matches!(n.kind, TreeNodeKind::Leaf { .. }) && n.span.0 == pos)
    }

    /// Number of internal nodes on the path from the root down to a leaf
    /// (0 when the tree is a single leaf).
    pub fn depth_to_leaf(&self, leaf: TreeNodeId) -> usize {
        let mut depth = 0;
        let mut current = self.root();
        while current != leaf {
            match self.nodes[current].kind {
                TreeNodeKind::Internal { left, right } => {
                    depth += 1;
                    let (lo, hi) = self.nodes[leaf].span;
                    let (llo, lhi) = self.nodes[left].span;
                    current = if lo >= llo && hi <= lhi { left } else { right };
                }
                TreeNodeKind::Leaf { .. } => panic!("leaf {leaf} not under root"),
            }
        }
        depth
    }
}

/// Fully left-branching binary tree over a token sequence: ((..((t1 t2) t3)..) tn).
/// All labels set to `label` (leaves included).
pub fn left_branching_tree(tokens: &[u32], label: Option<u8>) -> Result<LabeledTree> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput("left_branching_tree"));
    }
    let mut b = TreeBuilder::new();
    let mut acc = b.leaf(tokens[0], label, 0);
    for (i, &t) in tokens.iter().enumerate().skip(1) {
        let leaf = b.leaf(t, label, i);
        acc = b.internal(acc, leaf, label);
    }
    Ok(b.finish(acc))
}

/// One classification instance reconstructed from a tree node: the node's
/// token span plus its label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhraseExample {
    pub tokens: Vec<u32>,
    pub label: u8,
    pub is_root: bool,
}

/// One example per tree node, leaves included: 2·leaves − 1 examples for a
/// binary tree. Every node must carry a label.
pub fn explode_phrases(tree: &LabeledTree) -> Result<Vec<PhraseExample>> {
    let all_tokens = tree.tokens();
    let root = tree.root();
    let mut out = Vec::with_capacity(tree.node_count());
    for (id, node) in tree.nodes().iter().enumerate() {
        let label = node.label.ok_or_else(|| {
            Error::InvalidInput(format!("tree node {id} has no label; tree rejected"))
        })?;
        let (lo, hi) = node.span;
        out.push(PhraseExample {
            tokens: all_tokens[lo..hi].to_vec(),
            label,
            is_root: id == root,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_leaf_tree() -> LabeledTree {
        // (3 (2 a) (3 (2 b) (2 c)))
        let mut b = TreeBuilder::new();
        let a = b.leaf(1, Some(2), 0);
        let bb = b.leaf(2, Some(2), 1);
        let c = b.leaf(3, Some(2), 2);
        let bc = b.internal(bb, c, Some(3));
        let root = b.internal(a, bc, Some(3));
        b.finish(root)
    }

    #[test]
    fn node_count_law() {
        let t = three_leaf_tree();
        assert_eq!(t.node_count(), 5);
        assert_eq!(t.node_count(), 2 * t.leaf_count() - 1);
    }

    #[test]
    fn explode_counts_and_root_span() {
        let t = three_leaf_tree();
        let phrases = explode_phrases(&t).unwrap();
        assert_eq!(phrases.len(), 5);
        let roots: Vec<_> = phrases.iter().filter(|p| p.is_root).collect();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].tokens, t.tokens());
    }

    #[test]
    fn explode_rejects_unlabeled_node() {
        let mut b = TreeBuilder::new();
        let a = b.leaf(1, Some(1), 0);
        let c = b.leaf(2, None, 1);
        let root = b.internal(a, c, Some(1));
        let t = b.finish(root);
        assert!(explode_phrases(&t).is_err());
    }

    #[test]
    fn left_branching_shape() {
        let t = left_branching_tree(&[5, 6, 7, 8], None).unwrap();
        assert_eq!(t.leaf_count(), 4);
        assert_eq!(t.tokens(), vec![5, 6, 7, 8]);
        // Deepest leaf is the first token: depth = leaves - 1.
        let first = t.leaf_at(0).unwrap();
        assert_eq!(t.depth_to_leaf(first), 3);
        let last = t.leaf_at(3).unwrap();
        assert_eq!(t.depth_to_leaf(last), 1);
    }

    #[test]
    fn single_leaf_depth_zero() {
        let t = left_branching_tree(&[9], None).unwrap();
        assert_eq!(t.depth_to_leaf(t.leaf_at(0).unwrap()), 0);
    }
}
