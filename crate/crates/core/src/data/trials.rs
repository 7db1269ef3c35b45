use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::seed;

/// Row indices for one trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialSplit {
    /// One training set per requested size; smaller sets are prefixes of
    /// larger ones.
    pub train: Vec<Vec<usize>>,
    pub valid: Vec<usize>,
    pub test: Vec<usize>,
}

/// Random train/valid/test splits over rows `0..n`.
pub fn split_trials(
    n: usize,
    sizes: &[usize],
    n_valid: usize,
    n_test: usize,
    n_trials: usize,
    seed: u64,
) -> Result<Vec<TrialSplit>> {
    let pool: Vec<usize> = (0..n).collect();
    split_trials_from(&pool, None, sizes, n_valid, n_test, n_trials, seed)
}

/// Random splits drawn from `pool`. When `test_pool` is given, test rows
/// come only from it and train/valid rows only from `pool`.
pub fn split_trials_from(
    pool: &[usize],
    test_pool: Option<&[usize]>,
    sizes: &[usize],
    n_valid: usize,
    n_test: usize,
    n_trials: usize,
    seed: u64,
) -> Result<Vec<TrialSplit>> {
    let max_train = sizes.iter().copied().max().unwrap_or(0);
    let needed = max_train + n_valid + if test_pool.is_some() { 0 } else { n_test };
    if needed > pool.len() {
        return Err(Error::InsufficientData(format!(
            "need {needed} rows, pool has {}",
            pool.len()
        )));
    }
    if let Some(tp) = test_pool {
        if n_test > tp.len() {
            return Err(Error::InsufficientData(format!(
                "need {n_test} test rows, test pool has {}",
                tp.len()
            )));
        }
    }
    (0..n_trials)
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, trial as u64));
            let mut perm = pool.to_vec();
            perm.shuffle(&mut rng);
            let valid = perm[..n_valid].to_vec();
            let (test, rest) = match test_pool {
                Some(tp) => {
                    let mut t = tp.to_vec();
                    t.shuffle(&mut rng);
                    t.truncate(n_test);
                    (t, &perm[n_valid..])
                }
                None => (
                    perm[n_valid..n_valid + n_test].to_vec(),
                    &perm[n_valid + n_test..],
                ),
            };
            let train = sizes.iter().map(|&s| rest[..s].to_vec()).collect();
            Ok(TrialSplit { train, valid, test })
        })
        .collect()
}
