//! Punctuation-based clause segmentation for the hierarchical model.

use crate::corpus::vocab::Vocab;
use std::collections::HashSet;

/// The punctuation lookup table: comma, period, question mark, exclamation
/// mark.
pub const CLAUSE_PUNCTUATION: [&str; 4] = [",", ".", "?", "!"];

/// Token ids of the clause punctuation present in a vocabulary.
pub fn punctuation_ids(vocab: &Vocab) -> HashSet<u32> {
    CLAUSE_PUNCTUATION
        .iter()
        .filter(|p| vocab.contains(p))
        .map(|p| vocab.lookup(p))
        .collect()
}

/// Split a token sequence into clauses at punctuation. Each punctuation token
/// ends its clause and stays attached to it; empty clauses are dropped, and
/// concatenating the clauses in order reproduces the input.
pub fn segment_clauses(tokens: &[u32], punct: &HashSet<u32>) -> Vec<Vec<u32>> {
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for &t in tokens {
        current.push(t);
        if punct.contains(&t) {
            clauses.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    clauses
}

#[cfg(test)]
mod tests {
    use super::*;

    fn punct_of(ids: &[u32]) -> HashSet<u32> {
        ids.iter().copied().collect()
    }

    #[test]
    fn worked_example_splits_after_comma() {
        // "simple as the plot was , i still like it a lot"
        let mut vocab = Vocab::new();
        let tokens: Vec<u32> = "simple as the plot was , i still like it a lot"
            .split(' ')
            .map(|t| vocab.intern(t))
            .collect();
        let punct = punctuation_ids(&vocab);
        let clauses = segment_clauses(&tokens, &punct);
        assert_eq!(clauses.len(), 2);
        let words = |c: &[u32]| {
            c.iter()
                .map(|&t| vocab.token(t).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        assert_eq!(words(&clauses[0]), "simple as the plot was ,");
        assert_eq!(words(&clauses[1]), "i still like it a lot");
    }

    #[test]
    fn no_punctuation_is_one_clause() {
        let tokens = vec![4, 5, 6];
        let clauses = segment_clauses(&tokens, &punct_of(&[1]));
        assert_eq!(clauses, vec![vec![4, 5, 6]]);
    }

    #[test]
    fn consecutive_punctuation_yields_singleton_clauses() {
        let comma = 1;
        let clauses = segment_clauses(&[comma, comma], &punct_of(&[comma]));
        assert_eq!(clauses, vec![vec![comma], vec![comma]]);
    }

    #[test]
    fn empty_input_gives_empty_list() {
        assert!(segment_clauses(&[], &punct_of(&[1])).is_empty());
    }

    #[test]
    fn concatenation_reproduces_input() {
        let tokens = vec![3, 1, 1, 4, 5, 1, 6];
        let clauses = segment_clauses(&tokens, &punct_of(&[1]));
        let flat: Vec<u32> = clauses.into_iter().flatten().collect();
        assert_eq!(flat, tokens);
    }
}
