//! Question-answer matching records: a question token sequence, a gold
//! answer id, and a candidate pool drawn from a global answer inventory.

use crate::corpus::vocab::Vocab;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaRecord {
    pub question: Vec<u32>,
    pub gold: u32,
    pub pool: Vec<u32>,
}

/// Parse `question tokens<TAB>answer id<TAB>comma-separated candidate ids`,
/// one record per line. The gold answer must appear in its pool and pools
/// must offer at least two candidates.
pub fn parse_qa_file(text: &str, path: &str, vocab: &mut Vocab) -> Result<Vec<QaRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::parse(
                path,
                i + 1,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        }
        let question: Vec<u32> = fields[0]
            .split_whitespace()
            .map(|t| vocab.intern(t))
            .collect();
        if question.is_empty() {
            return Err(Error::parse(path, i + 1, "empty question"));
        }
        let gold: u32 = fields[1]
            .parse()
            .map_err(|_| Error::parse(path, i + 1, "malformed answer id"))?;
        let mut pool = Vec::new();
        for c in fields[2].split(',') {
            let id: u32 = c
                .trim()
                .parse()
                .map_err(|_| Error::parse(path, i + 1, format!("malformed candidate id `{c}`")))?;
            pool.push(id);
        }
        if pool.len() < 2 {
            return Err(Error::parse(path, i + 1, "candidate pool needs at least 2 entries"));
        }
        if !pool.contains(&gold) {
            return Err(Error::parse(path, i + 1, "gold answer missing from candidate pool"));
        }
        out.push(QaRecord { question, gold, pool });
    }
    Ok(out)
}

/// Size of the answer inventory implied by a record set (max id + 1).
pub fn answer_inventory_size(records: &[QaRecord]) -> usize {
    records
        .iter()
        .flat_map(|r| r.pool.iter())
        .max()
        .map(|&m| m as usize + 1)
        .unwrap_or(0)
}
