//! Seeded Gaussian-mixture data with uniform background outliers.
//!
//! Inliers come from an equal-weight mixture of isotropic Gaussians whose
//! means are uniform in `[0, 10]^m` and whose standard deviations are uniform
//! in `[0.5, 1.5]`. `floor(outlier_ratio * n)` outliers are drawn uniformly
//! from the inliers' bounding box widened by 3 on every side. Rows are
//! shuffled so labels are interleaved.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label, LabelVector};
use crate::error::{Error, Result};

const MEAN_RANGE: (f64, f64) = (0.0, 10.0);
const STD_RANGE: (f64, f64) = (0.5, 1.5);
const OUTLIER_MARGIN: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureConfig {
    pub n: usize,
    pub m: usize,
    pub components: usize,
    pub outlier_ratio: f64,
    pub seed: u64,
}

impl MixtureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::param("m", "must be at least 1"));
        }
        if self.components == 0 || self.components > self.n {
            return Err(Error::param(
                "components",
                format!(
                    "need 1 <= components <= n, got {} with n = {}",
                    self.components, self.n
                ),
            ));
        }
        if !(0.0..1.0).contains(&self.outlier_ratio) {
            return Err(Error::param(
                "outlier_ratio",
                format!("must lie in [0, 1), got {}", self.outlier_ratio),
            ));
        }
        Ok(())
    }

    pub fn outlier_count(&self) -> usize {
        (self.outlier_ratio * self.n as f64).floor() as usize
    }
}

pub fn generate_mixture(config: &MixtureConfig) -> Result<(Dataset, LabelVector)> {
    config.validate()?;
    let MixtureConfig {
        n, m, components, ..
    } = *config;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let means: Vec<Vec<f64>> = (0..components)
        .map(|_| {
            (0..m)
                .map(|_| rng.random_range(MEAN_RANGE.0..=MEAN_RANGE.1))
                .collect()
        })
        .collect();
    let stds: Vec<f64> = (0..components)
        .map(|_| rng.random_range(STD_RANGE.0..=STD_RANGE.1))
        .collect();

    let n_out = config.outlier_count();
    let n_in = n - n_out;
    let mut rows: Vec<(Vec<f64>, Label)> = Vec::with_capacity(n);
    for _ in 0..n_in {
        let c = rng.random_range(0..components);
        let x = means[c]
            .iter()
            .map(|mu| {
                let z: f64 = StandardNormal.sample(&mut rng);
                mu + stds[c] * z
            })
            .collect();
        rows.push((x, Label::In));
    }

    if n_out > 0 {
        let mut lo = vec![f64::INFINITY; m];
        let mut hi = vec![f64::NEG_INFINITY; m];
        // n_out < n, so at least one inlier exists.
        for (x, _) in &rows {
            for k in 0..m {
                lo[k] = lo[k].min(x[k]);
                hi[k] = hi[k].max(x[k]);
            }
        }
        for _ in 0..n_out {
            let x = (0..m)
                .map(|k| rng.random_range(lo[k] - OUTLIER_MARGIN..=hi[k] + OUTLIER_MARGIN))
                .collect();
            rows.push((x, Label::Out));
        }
    }

    rows.shuffle(&mut rng);
    let labels: LabelVector = rows.iter().map(|r| r.1).collect();
    let values: Vec<f64> = rows.into_iter().flat_map(|r| r.0).collect();
    Ok((Dataset::new(values, n, m)?, labels))
}
