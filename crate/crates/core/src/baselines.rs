//! Uniform random sampling from the pre-filtered inliers.
//!
//! Draws come from `ChaCha8Rng::seed_from_u64(seed)`, so a seed selects the
//! same sample on every platform.

use std::time::Instant;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::IndexSet;
use crate::error::{Error, Result};
use crate::kernel::GramMatrix;
use crate::prefilter::{prefilter, PrefilterResult};
use crate::rapid::{SampleSelection, SamplingMethod};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSampleConfig {
    pub ratio: f64,
    pub seed: u64,
}

impl RandomSampleConfig {
    pub fn new(ratio: f64, seed: u64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(Error::param(
                "ratio",
                format!("must lie in (0, 1], got {ratio}"),
            ));
        }
        Ok(RandomSampleConfig { ratio, seed })
    }

    /// `max(1, round_half_up(ratio * n))`.
    pub fn sample_size(&self, n: usize) -> usize {
        ((self.ratio * n as f64 + 0.5).floor() as usize).clamp(1, n)
    }
}

/// Draws `sample_size(|inliers|)` distinct inliers uniformly.
pub fn random_subset(inliers: &IndexSet, config: &RandomSampleConfig) -> Result<IndexSet> {
    if inliers.is_empty() {
        return Err(Error::Empty("inlier set"));
    }
    let size = config.sample_size(inliers.len());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let ids = inliers.as_slice();
    Ok(index::sample(&mut rng, ids.len(), size)
        .into_iter()
        .map(|p| ids[p])
        .collect())
}

/// Random sample over an existing pre-filter split.
pub fn random_sample(pre: PrefilterResult, config: &RandomSampleConfig) -> Result<SampleSelection> {
    let start = Instant::now();
    let sample = random_subset(&pre.inliers, config)?;
    Ok(SampleSelection {
        sample,
        prefilter: pre,
        method: SamplingMethod::Random {
            ratio: config.ratio,
        },
        seed: Some(config.seed),
        t_samp: start.elapsed().as_secs_f64(),
    })
}

/// Pre-filters at `p_out` and draws a random sample from the inliers.
pub fn random_sample_from_gram(
    gram: &GramMatrix,
    p_out: f64,
    config: &RandomSampleConfig,
) -> Result<SampleSelection> {
    let start = Instant::now();
    let pre = prefilter(gram, p_out)?;
    let mut selection = random_sample(pre, config)?;
    selection.t_samp = start.elapsed().as_secs_f64();
    Ok(selection)
}
