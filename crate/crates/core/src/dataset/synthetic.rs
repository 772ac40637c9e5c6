//! Seeded synthetic data for tests, benchmarks and examples.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::DataSet;

/// Two Gaussian classes with unit-variance noise whose means sit at
/// `±separation/2` along a fixed random direction. Labels are drawn
/// with equal probability.
pub fn gaussian_classes(instances: usize, features: usize, separation: f64, seed: u64) -> DataSet {
    assert!(instances >= 2 && features >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut direction: Vec<f64> = (0..features)
        .map(|_| rng.sample::<f64, _>(StandardNormal))
        .collect();
    let norm = direction
        .iter()
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    direction.iter_mut().for_each(|v| *v /= norm);

    let mut y = Array1::zeros(instances);
    let mut x = Array2::zeros((features, instances));
    for i in 0..instances {
        // First two instances fix one of each class.
        let label = match i {
            0 => 1.0,
            1 => -1.0,
            _ if rng.gen_bool(0.5) => 1.0,
            _ => -1.0,
        };
        y[i] = label;
        for j in 0..features {
            x[[j, i]] =
                label * 0.5 * separation * direction[j] + rng.sample::<f64, _>(StandardNormal);
        }
    }
    DataSet::new(x, y).expect("generated data is valid")
}
