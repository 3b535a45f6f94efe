//! Corpus parsing, validation, and transformation: labeled constituency
//! trees, plain labeled sentences, QA instances, dependency parses, and
//! pretrained embeddings.

pub mod clauses;
pub mod deps;
pub mod embed;
pub mod qa;
pub mod sentences;
pub mod sexpr;
pub mod split;
pub mod tree;
pub mod vocab;

pub use clauses::{punctuation_ids, segment_clauses, CLAUSE_PUNCTUATION};
pub use deps::{dependency_path, parse_dependency_file, DependencyGraph, RelationInstance};
pub use embed::{load_embeddings, EmbeddingLoadReport, EmbeddingTable};
pub use qa::{answer_inventory_size, parse_qa_file, QaRecord};
pub use sentences::{parse_sentence_file, render_sentence_file, LabeledSentence};
pub use sexpr::{parse_sexpr_treebank, parse_tree_line, to_sexpr};
pub use split::{split_dataset, SplitIndices, SplitSpec};
pub use tree::{
    explode_phrases, left_branching_tree, LabeledTree, PhraseExample, TreeBuilder, TreeNode,
    TreeNodeId, TreeNodeKind,
};
pub use vocab::{Vocab, UNK_ID, UNK_TOKEN};
