use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PqkError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Random train/test partitions drawn from one seeded generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub splits: Vec<Split>,
}

/// `floor(train_frac · n)`, guarded against representation error in `train_frac`.
pub fn train_size(n: usize, train_frac: f64) -> usize {
    (train_frac * n as f64 + 1e-9).floor() as usize
}

pub fn make_splits(n: usize, n_splits: usize, train_frac: f64, seed: u64) -> Result<SplitPlan> {
    if !(train_frac > 0.0 && train_frac < 1.0) {
        return Err(PqkError::Config(format!("train fraction {train_frac} outside (0, 1)")));
    }
    if n_splits == 0 {
        return Err(PqkError::Config("need at least one split".into()));
    }
    if n < 10 {
        return Err(PqkError::Data(format!("{n} samples are too few to split (need >= 10)")));
    }
    let k = train_size(n, train_frac);
    if k == 0 || k == n {
        return Err(PqkError::Data(format!("train fraction {train_frac} of {n} leaves an empty side")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    let splits = (0..n_splits)
        .map(|_| {
            perm.shuffle(&mut rng);
            let mut train = perm[..k].to_vec();
            let mut test = perm[k..].to_vec();
            train.sort_unstable();
            test.sort_unstable();
            Split { train, test }
        })
        .collect();
    Ok(SplitPlan { seed, splits })
}
