//! Deterministic dataset partitioning.

use crate::error::{Error, Result};
use crate::rng::rng_from;
use rand::seq::SliceRandom;

#[derive(Debug, Clone, Copy)]
pub enum SplitSpec {
    /// Exact sizes; must sum to the dataset size.
    Counts(usize, usize, usize),
    /// Fractions; must sum to 1 within 1e-9. Sizes round, remainder to test.
    Ratios(f64, f64, f64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub dev: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffle `0..n` with the seed, then cut into train/dev/test. The same
/// `(n, spec, seed)` always yields the same partition, and the union of the
/// three parts is exactly `0..n`.
pub fn split_dataset(n: usize, spec: SplitSpec, seed: u64) -> Result<SplitIndices> {
    let (a, b, c) = match spec {
        SplitSpec::Counts(a, b, c) => {
            let total = a + b + c;
            if total != n {
                return Err(Error::InvalidInput(format!(
                    "split counts {a}+{b}+{c}={total} do not match dataset size {n}"
                )));
            }
            (a, b, c)
        }
        SplitSpec::Ratios(ra, rb, rc) => {
            if (ra + rb + rc - 1.0).abs() > 1e-9 || ra < 0.0 || rb < 0.0 || rc < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "split ratios {ra}+{rb}+{rc} must be nonnegative and sum to 1"
                )));
            }
            let a = (ra * n as f64).round() as usize;
            let b = (rb * n as f64).round() as usize;
            if a + b > n {
                return Err(Error::InvalidInput(
                    "rounded split ratios exceed dataset size".into(),
                ));
            }
            (a, b, n - a - b)
        }
    };
    let mut idx: Vec<usize> = (0..n).collect();
    let mut rng = rng_from(seed);
    idx.shuffle(&mut rng);
    let dev_end = a + b;
    Ok(SplitIndices {
        train: idx[..a].to_vec(),
        dev: idx[a..dev_end].to_vec(),
        test: idx[dev_end..a + b + c].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn exact_counts() {
        let s = split_dataset(10_601, SplitSpec::Counts(8101, 500, 2000), 1).unwrap();
        assert_eq!(s.train.len(), 8101);
        assert_eq!(s.dev.len(), 500);
        assert_eq!(s.test.len(), 2000);
    }

    #[test]
    fn counts_must_sum() {
        assert!(split_dataset(10, SplitSpec::Counts(8, 1, 2), 1).is_err());
    }

    #[test]
    fn deterministic_and_partitioning() {
        let s1 = split_dataset(100, SplitSpec::Counts(70, 10, 20), 9).unwrap();
        let s2 = split_dataset(100, SplitSpec::Counts(70, 10, 20), 9).unwrap();
        assert_eq!(s1, s2);
        let mut union = BTreeSet::new();
        for part in [&s1.train, &s1.dev, &s1.test] {
            for &i in part {
                assert!(union.insert(i), "index {i} appears twice");
            }
        }
        assert_eq!(union.len(), 100);
    }

    #[test]
    fn ratios() {
        let s = split_dataset(100, SplitSpec::Ratios(0.8, 0.1, 0.1), 3).unwrap();
        assert_eq!(s.train.len(), 80);
        assert_eq!(s.dev.len(), 10);
        assert_eq!(s.test.len(), 10);
    }
}
