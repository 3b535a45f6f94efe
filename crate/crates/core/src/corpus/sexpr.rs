//! S-expression treebank reader: one `(label ...)` tree per line, integer
//! labels 0-4 on every constituent, tokens at the leaves.

use crate::corpus::tree::{LabeledTree, TreeBuilder, TreeNodeId};
use crate::corpus::vocab::Vocab;
use crate::error::{Error, Result};

enum RawNode {
    Leaf { label: u8, token: String },
    Internal { label: u8, children: Vec<RawNode> },
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            chars: s.chars().peekable(),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn atom(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            s.push(c);
            self.chars.next();
        }
        s
    }

    fn label(&mut self) -> std::result::Result<u8, String> {
        let raw = self.atom();
        let value: i64 = raw
            .parse()
            .map_err(|_| format!("expected integer label, found `{raw}`"))?;
        if !(0..=4).contains(&value) {
            return Err(format!("label {value} out of range 0-4"));
        }
        Ok(value as u8)
    }

    fn node(&mut self) -> std::result::Result<RawNode, String> {
        self.skip_ws();
        match self.chars.next() {
            Some('(') => {}
            Some(c) => return Err(format!("expected `(`, found `{c}`")),
            None => return Err("unbalanced parentheses: unexpected end of line".to_string()),
        }
        self.skip_ws();
        let label = self.label()?;
        let mut children = Vec::new();
        let mut token: Option<String> = None;
        loop {
            self.skip_ws();
            match self.chars.peek() {
                Some(')') => {
                    self.chars.next();
                    break;
                }
                Some('(') => {
                    if token.is_some() {
                        return Err("constituent mixes a token with children".to_string());
                    }
                    children.push(self.node()?);
                }
                Some(_) => {
                    if !children.is_empty() || token.is_some() {
                        return Err("constituent mixes a token with children".to_string());
                    }
                    token = Some(self.atom());
                }
                None => return Err("unbalanced parentheses: unexpected end of line".to_string()),
            }
        }
        match (token, children.len()) {
            (Some(t), 0) => Ok(RawNode::Leaf { label, token: t }),
            (None, 0) => Err("empty constituent".to_string()),
            (None, 1) => Err("constituent with a single child".to_string()),
            (None, _) => Ok(RawNode::Internal {
                label,
                children: children.drain(..).collect(),
            }),
            (Some(_), _) => unreachable!(),
        }
    }

    fn finish(&mut self) -> std::result::Result<(), String> {
        self.skip_ws();
        match self.chars.next() {
            None => Ok(()),
            Some(')') => Err("unbalanced parentheses: extra `)`".to_string()),
            Some(c) => Err(format!("trailing content starting at `{c}`")),
        }
    }
}

/// Lower a raw node into the arena, left-binarizing n-ary constituents.
/// Intermediate nodes introduced by binarization inherit the parent label.
fn lower(raw: &RawNode, b: &mut TreeBuilder, vocab: &mut Vocab, pos: &mut usize) -> TreeNodeId {
    match raw {
        RawNode::Leaf { label, token } => {
            let id = vocab.intern(token);
            let p = *pos;
            *pos += 1;
            b.leaf(id, Some(*label), p)
        }
        RawNode::Internal { label, children } => {
            let mut acc = lower(&children[0], b, vocab, pos);
            for child in children.iter().skip(1) {
                let c = lower(child, b, vocab, pos);
                // Binarization artifacts inherit the constituent's label.
                acc = b.internal(acc, c, Some(*label));
            }
            acc
        }
    }
}

/// Parse one tree from one line.
pub fn parse_tree_line(line: &str, vocab: &mut Vocab) -> std::result::Result<LabeledTree, String> {
    let mut p = Parser::new(line);
    let raw = p.node()?;
    p.finish()?;
    let mut b = TreeBuilder::new();
    let mut pos = 0;
    let root = lower(&raw, &mut b, vocab, &mut pos);
    Ok(b.finish(root))
}

/// Parse a whole treebank: one s-expression per line, blank lines skipped.
/// Tokens are interned into `vocab`; errors carry the 1-based line number.
pub fn parse_sexpr_treebank(
    text: &str,
    path: &str,
    vocab: &mut Vocab,
) -> Result<Vec<LabeledTree>> {
    let mut trees = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let tree = parse_tree_line(line, vocab).map_err(|msg| Error::parse(path, i + 1, msg))?;
        trees.push(tree);
    }
    Ok(trees)
}

/// Render a tree back to its s-expression form.
pub fn to_sexpr(tree: &LabeledTree, vocab: &Vocab) -> String {
    fn render(tree: &LabeledTree, id: usize, vocab: &Vocab, out: &mut String) {
        let node = tree.node(id);
        let label = node.label.map(|l| l.to_string()).unwrap_or_default();
        match node.kind {
            crate::corpus::tree::TreeNodeKind::Leaf { token } => {
                out.push('(');
                out.push_str(&label);
                out.push(' ');
                out.push_str(vocab.token(token));
                out.push(')');
            }
            crate::corpus::tree::TreeNodeKind::Internal { left, right } => {
                out.push('(');
                out.push_str(&label);
                out.push(' ');
                render(tree, left, vocab, out);
                out.push(' ');
                render(tree, right, vocab, out);
                out.push(')');
            }
        }
    }
    let mut s = String::new();
    render(tree, tree.root(), vocab, &mut s);
    s
}
