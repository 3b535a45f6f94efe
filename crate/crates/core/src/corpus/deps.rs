//! Dependency parses for the nominal-relation task: per-token head links,
//! two marked entity positions, and the undirected path between them.

use crate::corpus::vocab::Vocab;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyGraph {
    /// Token ids, one per position.
    pub tokens: Vec<u32>,
    /// Head position per token, 1-based; 0 is the artificial root.
    pub heads: Vec<usize>,
    /// 0-based position of the first marked nominal.
    pub e1: usize,
    /// 0-based position of the second marked nominal.
    pub e2: usize,
}

impl DependencyGraph {
    /// Validate the tree invariants: head indices in range, exactly one root,
    /// no cycles.
    pub fn validate(&self) -> Result<()> {
        let n = self.tokens.len();
        if self.heads.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} heads for {} tokens",
                self.heads.len(),
                n
            )));
        }
        if self.e1 >= n || self.e2 >= n {
            return Err(Error::InvalidInput("entity position out of range".into()));
        }
        if self.e1 == self.e2 {
            return Err(Error::InvalidInput(
                "entity positions must be distinct".into(),
            ));
        }
        let roots = self.heads.iter().filter(|&&h| h == 0).count();
        if roots != 1 {
            return Err(Error::InvalidInput(format!(
                "dependency graph must have exactly one root, found {roots}"
            )));
        }
        for (i, &h) in self.heads.iter().enumerate() {
            if h > n {
                return Err(Error::InvalidInput(format!(
                    "head index {h} out of range at position {i}"
                )));
            }
        }
        // Walking up from any node must reach the root without revisiting.
        for start in 0..n {
            let mut seen = vec![false; n + 1];
            let mut cur = start + 1;
            while cur != 0 {
                if seen[cur] {
                    return Err(Error::InvalidInput(format!(
                        "cycle through position {}",
                        cur - 1
                    )));
                }
                seen[cur] = true;
                cur = self.heads[cur - 1];
            }
        }
        Ok(())
    }

    /// 1-based chain from a 0-based position up to the root, inclusive of the
    /// starting position.
    fn ancestors(&self, pos: usize) -> Vec<usize> {
        let mut chain = vec![pos + 1];
        let mut cur = self.heads[pos];
        while cur != 0 {
            chain.push(cur);
            cur = self.heads[cur - 1];
        }
        chain
    }
}

/// Token ids along the unique undirected path from `e1` to `e2` through head
/// links, inclusive of both endpoints, ordered from `e1` to `e2`.
pub fn dependency_path(graph: &DependencyGraph) -> Result<Vec<u32>> {
    graph.validate()?;
    let up1 = graph.ancestors(graph.e1);
    let up2 = graph.ancestors(graph.e2);
    // Lowest common ancestor: first node of up1 that also appears in up2.
    let lca = up1
        .iter()
        .find(|x| up2.contains(x))
        .copied()
        .ok_or_else(|| Error::InvalidInput("disconnected dependency graph".into()))?;
    let mut path: Vec<usize> = up1.iter().take_while(|&&x| x != lca).copied().collect();
    path.push(lca);
    let tail: Vec<usize> = up2.iter().take_while(|&&x| x != lca).copied().collect();
    path.extend(tail.into_iter().rev());
    Ok(path.into_iter().map(|p| graph.tokens[p - 1]).collect())
}

/// One labeled relation instance: the dependency structure plus its relation
/// string (e.g. `Component-Whole(e1,e2)`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInstance {
    pub graph: DependencyGraph,
    pub relation: String,
}

/// Parse blank-line-separated dependency blocks. Each line is
/// `index<TAB>token<TAB>head<TAB>marker` with the relation label appended as
/// a fifth field on the first line of the block; markers are `e1`, `e2`, or
/// `O`.
pub fn parse_dependency_file(
    text: &str,
    path: &str,
    vocab: &mut Vocab,
) -> Result<Vec<RelationInstance>> {
    let mut out = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    let mut lines: Vec<(usize, &str)> = text.lines().enumerate().collect();
    lines.push((usize::MAX, "")); // sentinel flush
    for (i, line) in lines {
        if line.trim().is_empty() {
            if !block.is_empty() {
                out.push(parse_block(&block, path, vocab)?);
                block.clear();
            }
            continue;
        }
        block.push((i, line));
    }
    Ok(out)
}

fn parse_block(
    block: &[(usize, &str)],
    path: &str,
    vocab: &mut Vocab,
) -> Result<RelationInstance> {
    let mut tokens = Vec::new();
    let mut heads = Vec::new();
    let mut e1 = None;
    let mut e2 = None;
    let mut relation = None;
    for (pos, (lineno, line)) in block.iter().enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 4 {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("expected at least 4 tab-separated fields, found {}", fields.len()),
            ));
        }
        let index: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(path, lineno + 1, "malformed token index"))?;
        if index != pos + 1 {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("token index {index} out of order, expected {}", pos + 1),
            ));
        }
        tokens.push(vocab.intern(fields[1]));
        let head: usize = fields[2]
            .parse()
            .map_err(|_| Error::parse(path, lineno + 1, "malformed head index"))?;
        heads.push(head);
        match fields[3] {
            "e1" => e1 = Some(pos),
            "e2" => e2 = Some(pos),
            "O" => {}
            m => {
                return Err(Error::parse(
                    path,
                    lineno + 1,
                    format!("unknown entity marker `{m}`"),
                ))
            }
        }
        if pos == 0 {
            relation = fields.get(4).map(|s| s.to_string());
        }
    }
    let first_line = block[0].0 + 1;
    let relation = relation
        .ok_or_else(|| Error::parse(path, first_line, "missing relation label on first line"))?;
    let graph = DependencyGraph {
        tokens,
        heads,
        e1: e1.ok_or_else(|| Error::parse(path, first_line, "missing e1 marker"))?,
        e2: e2.ok_or_else(|| Error::parse(path, first_line, "missing e2 marker"))?,
    };
    graph.validate().map_err(|e| {
        Error::parse(path, first_line, format!("invalid dependency block: {e}"))
    })?;
    Ok(RelationInstance { graph, relation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(tokens: usize, heads: Vec<usize>, e1: usize, e2: usize) -> DependencyGraph {
        DependencyGraph {
            tokens: (10..10 + tokens as u32).collect(),
            heads,
            e1,
            e2,
        }
    }

    #[test]
    fn adjacent_head_path() {
        // e2 is the head of e1: path = [e1, e2]
        let g = graph(2, vec![2, 0], 0, 1);
        assert_eq!(dependency_path(&g).unwrap(), vec![10, 11]);
    }

    #[test]
    fn sibling_path_through_common_head() {
        // positions 0 and 2 both attach to position 1
        let g = graph(3, vec![2, 0, 2], 0, 2);
        assert_eq!(dependency_path(&g).unwrap(), vec![10, 11, 12]);
    }

    #[test]
    fn cycle_is_rejected() {
        let g = graph(3, vec![2, 3, 2], 0, 1);
        assert!(dependency_path(&g).is_err());
    }

    #[test]
    fn two_roots_rejected() {
        let g = graph(2, vec![0, 0], 0, 1);
        assert!(dependency_path(&g).is_err());
    }

    #[test]
    fn parse_block_roundtrip() {
        let text = "1\tmy\t2\tO\tComponent-Whole(e1,e2)\n2\tapartment\t3\te1\n3\thas\t0\tO\n4\tkitchen\t3\te2\n\n";
        let mut vocab = Vocab::new();
        let instances = parse_dependency_file(text, "deps.txt", &mut vocab).unwrap();
        assert_eq!(instances.len(), 1);
        let inst = &instances[0];
        assert_eq!(inst.relation, "Component-Whole(e1,e2)");
        assert_eq!(inst.graph.e1, 1);
        assert_eq!(inst.graph.e2, 3);
        let path = dependency_path(&inst.graph).unwrap();
        let words: Vec<&str> = path.iter().map(|&t| vocab.token(t)).collect();
        assert_eq!(words, vec!["apartment", "has", "kitchen"]);
    }

    #[test]
    fn missing_relation_is_an_error() {
        let text = "1\ta\t2\te1\n2\tb\t0\te2\n";
        let mut vocab = Vocab::new();
        let err = parse_dependency_file(text, "deps.txt", &mut vocab).unwrap_err();
        assert!(err.to_string().contains("relation"), "{err}");
    }
}
