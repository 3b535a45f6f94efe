//! Sentence-level classification files: `label<TAB>token token ...`, one
//! sentence per line.

use crate::corpus::vocab::Vocab;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSentence {
    pub tokens: Vec<u32>,
    pub label: u8,
}

pub fn parse_sentence_file(
    text: &str,
    path: &str,
    classes: usize,
    vocab: &mut Vocab,
) -> Result<Vec<LabeledSentence>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (label_str, rest) = line.split_once('\t').ok_or_else(|| {
            Error::parse(path, i + 1, "expected `label<TAB>tokens`")
        })?;
        let label: usize = label_str
            .parse()
            .map_err(|_| Error::parse(path, i + 1, format!("malformed label `{label_str}`")))?;
        if label >= classes {
            return Err(Error::parse(
                path,
                i + 1,
                format!("label {label} out of range for {classes} classes"),
            ));
        }
        let tokens: Vec<u32> = rest.split_whitespace().map(|t| vocab.intern(t)).collect();
        if tokens.is_empty() {
            return Err(Error::parse(path, i + 1, "empty sentence"));
        }
        out.push(LabeledSentence {
            tokens,
            label: label as u8,
        });
    }
    Ok(out)
}

pub fn render_sentence_file(sentences: &[LabeledSentence], vocab: &Vocab) -> String {
    let mut s = String::new();
    for sent in sentences {
        s.push_str(&sent.label.to_string());
        s.push('\t');
        let words: Vec<&str> = sent.tokens.iter().map(|&t| vocab.token(t)).collect();
        s.push_str(&words.join(" "));
        s.push('\n');
    }
    s
}
