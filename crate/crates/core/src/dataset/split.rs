use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DataSet;
use crate::error::{Result, XrmError};

const MAX_SHUFFLES: usize = 1000;

/// Random train/test protocol: `trials` independent draws of `train_size` instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_size: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_size: 150,
            seed: 0,
            trials: 10,
        }
    }
}

/// Deterministic split for one trial. The generator is ChaCha keyed by `seed`
/// with `trial_index` selecting the stream, so trials are independent of
/// each other and of evaluation order.
///
/// The permutation is redrawn until the training part holds both classes.
pub fn split(data: &DataSet, spec: &SplitSpec, trial_index: usize) -> Result<(DataSet, DataSet)> {
    let n = data.instance_count();
    if trial_index >= spec.trials {
        return Err(XrmError::Split(format!(
            "trial index {trial_index} out of range for {} trials",
            spec.trials
        )));
    }
    if spec.train_size == 0 || spec.train_size >= n {
        return Err(XrmError::Split(format!(
            "train size {} must be in 1..{n}",
            spec.train_size
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(trial_index as u64);
    let y = data.y();
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..MAX_SHUFFLES {
        order.shuffle(&mut rng);
        let head = &order[..spec.train_size];
        let has_pos = head.iter().any(|&i| y[i] > 0.0);
        let has_neg = head.iter().any(|&i| y[i] < 0.0);
        if has_pos && has_neg {
            let mut train = head.to_vec();
            let mut test = order[spec.train_size..].to_vec();
            train.sort_unstable();
            test.sort_unstable();
            return Ok((data.select(&train)?, data.select(&test)?));
        }
    }
    Err(XrmError::Split(format!(
        "no permutation with both classes in the training part after {MAX_SHUFFLES} draws"
    )))
}
