//! Pretrained word-embedding tables.

use crate::corpus::vocab::Vocab;
use crate::error::{Error, Result};
use crate::rng::rng_from;
use crate::tensor::Tensor;
use rand::Rng;

/// Scale of the uniform distribution used for rows not found in the file.
pub const OOV_SCALE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    /// `|V| x K`, row id = token id.
    pub data: Tensor,
    pub trainable: bool,
}

impl EmbeddingTable {
    pub fn rows(&self) -> usize {
        match self.data.shape() {
            crate::tensor::Shape::Matrix(r, _) => r,
            _ => unreachable!(),
        }
    }

    pub fn dim(&self) -> usize {
        match self.data.shape() {
            crate::tensor::Shape::Matrix(_, c) => c,
            _ => unreachable!(),
        }
    }

    /// All rows uniform(-OOV_SCALE, OOV_SCALE); used when no pretrained file
    /// is configured.
    pub fn random(vocab_size: usize, dim: usize, seed: u64, trainable: bool) -> EmbeddingTable {
        let mut rng = rng_from(seed);
        let data = (0..vocab_size * dim)
            .map(|_| rng.random_range(-OOV_SCALE..OOV_SCALE))
            .collect();
        EmbeddingTable {
            data: Tensor::matrix(vocab_size, dim, data),
            trainable,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingLoadReport {
    /// Fraction of vocabulary rows found in the file.
    pub coverage: f64,
    pub found: usize,
    pub vocab_size: usize,
    /// Tokens that appeared more than once; the last occurrence won.
    pub duplicates: Vec<String>,
}

/// Load whitespace-delimited embeddings (`token v1 .. vK` per line, optional
/// `count dim` header). Rows for vocabulary tokens present in the file are
/// copied; the rest are sampled uniform(-0.05, 0.05) from `seed`. A token
/// listed twice keeps its last occurrence and is reported as a duplicate.
pub fn load_embeddings(
    text: &str,
    path: &str,
    vocab: &Vocab,
    dim: usize,
    seed: u64,
) -> Result<(EmbeddingTable, EmbeddingLoadReport)> {
    let vocab_size = vocab.len();
    let mut rng = rng_from(seed);
    let mut data: Vec<f64> = (0..vocab_size * dim)
        .map(|_| rng.random_range(-OOV_SCALE..OOV_SCALE))
        .collect();
    let mut filled = vec![false; vocab_size];
    let mut duplicates = Vec::new();

    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if i == 0 && fields.len() == 2 {
            // "count dim" header
            if let (Ok(_), Ok(file_dim)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>())
            {
                if file_dim != dim {
                    return Err(Error::parse(
                        path,
                        1,
                        format!("embedding dimension {file_dim} does not match requested {dim}"),
                    ));
                }
                continue;
            }
        }
        if fields.len() != dim + 1 {
            return Err(Error::parse(
                path,
                i + 1,
                format!(
                    "expected token + {} values, found {} fields",
                    dim,
                    fields.len()
                ),
            ));
        }
        let token = fields[0];
        let mut row = Vec::with_capacity(dim);
        for f in &fields[1..] {
            let v: f64 = f
                .parse()
                .map_err(|_| Error::parse(path, i + 1, format!("malformed value `{f}`")))?;
            row.push(v);
        }
        if !vocab.contains(token) {
            continue;
        }
        let id = vocab.lookup(token) as usize;
        if filled[id] {
            duplicates.push(token.to_string());
        }
        data[id * dim..(id + 1) * dim].copy_from_slice(&row);
        filled[id] = true;
    }

    let found = filled.iter().filter(|&&f| f).count();
    let report = EmbeddingLoadReport {
        coverage: if vocab_size == 0 {
            0.0
        } else {
            found as f64 / vocab_size as f64
        },
        found,
        vocab_size,
        duplicates,
    };
    Ok((
        EmbeddingTable {
            data: Tensor::matrix(vocab_size, dim, data),
            trainable: false,
        },
        report,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab_abc() -> Vocab {
        let mut v = Vocab::new();
        v.intern("a");
        v.intern("b");
        v
    }

    #[test]
    fn full_coverage_copies_file_rows() {
        let vocab = vocab_abc();
        let text = "<unk> 0.0 0.0\na 1.0 2.0\nb 3.0 4.0\n";
        let (table, report) = load_embeddings(text, "emb.txt", &vocab, 2, 7).unwrap();
        assert_eq!(report.coverage, 1.0);
        assert_eq!(table.data.row(1), &[1.0, 2.0]);
        assert_eq!(table.data.row(2), &[3.0, 4.0]);
    }

    #[test]
    fn empty_file_gives_zero_coverage_random_rows() {
        let vocab = vocab_abc();
        let (table, report) = load_embeddings("", "emb.txt", &vocab, 3, 42).unwrap();
        assert_eq!(report.coverage, 0.0);
        assert!(table.data.data().iter().all(|x| x.abs() < OOV_SCALE));
        // Deterministic in the seed.
        let (again, _) = load_embeddings("", "emb.txt", &vocab, 3, 42).unwrap();
        assert_eq!(table.data, again.data);
    }

    #[test]
    fn duplicate_token_last_occurrence_wins() {
        let vocab = vocab_abc();
        let text = "a 1.0 1.0\na 9.0 9.0\n";
        let (table, report) = load_embeddings(text, "emb.txt", &vocab, 2, 7).unwrap();
        assert_eq!(table.data.row(1), &[9.0, 9.0]);
        assert_eq!(report.duplicates, vec!["a"]);
    }

    #[test]
    fn header_line_is_accepted_and_checked() {
        let vocab = vocab_abc();
        let ok = "2 2\na 1.0 2.0\n";
        assert!(load_embeddings(ok, "emb.txt", &vocab, 2, 7).is_ok());
        let bad = "2 300\na 1.0 2.0\n";
        let err = load_embeddings(bad, "emb.txt", &vocab, 2, 7).unwrap_err();
        assert!(err.to_string().contains("dimension"), "{err}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let vocab = vocab_abc();
        let text = "a 1.0 2.0\nb 3.0\n";
        let err = load_embeddings(text, "emb.txt", &vocab, 2, 7).unwrap_err();
        assert!(err.to_string().contains("emb.txt:2"), "{err}");
    }
}
