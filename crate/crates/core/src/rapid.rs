//! Greedy density-flattening sample selection.
//!
//! Starting from the pre-filtered inliers, the sampler repeatedly proposes
//! to drop the observation with the highest density under the current
//! sample and keeps the removal only while every inlier still has at least
//! the minimum density of the sample (the density rule). One pass over the
//! data per iteration keeps the whole procedure in `O(N^2)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::IndexSet;
use crate::error::Result;
use crate::kernel::GramMatrix;
use crate::prefilter::{prefilter, PrefilterResult};

/// Which sampler produced a [`SampleSelection`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SamplingMethod {
    Rapid,
    Random {
        ratio: f64,
    },
    /// No sampling: the sample is the whole inlier set.
    Full,
}

impl SamplingMethod {
    pub fn is_deterministic(&self) -> bool {
        !matches!(self, SamplingMethod::Random { ratio } if *ratio < 1.0)
    }

    /// Short identifier used in reports, e.g. `rapid` or `rand_0.1`.
    pub fn id(&self) -> String {
        match self {
            SamplingMethod::Rapid => "rapid".into(),
            SamplingMethod::Random { ratio } => format!("rand_{ratio}"),
            SamplingMethod::Full => "full".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleSelection {
    pub sample: IndexSet,
    pub prefilter: PrefilterResult,
    pub method: SamplingMethod,
    pub seed: Option<u64>,
    /// Wall-clock seconds spent selecting, excluding the Gram matrix.
    pub t_samp: f64,
}

impl SampleSelection {
    /// `|S| / N`.
    pub fn ratio(&self) -> f64 {
        self.sample.len() as f64 / self.prefilter.original_density.len() as f64
    }
}

/// Set over which the minimum sample density is taken when testing a removal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaMinScope {
    /// `S \ {r}`: the removal is kept iff the reduced sample is feasible.
    #[default]
    RemainingSample,
    /// `S` including the candidate `r`, whose density already excludes its
    /// own column. This is a verbatim reading of the pseudocode and can
    /// accept removals that leave the sample infeasible.
    IncludingCandidate,
}

const MIN_RECOMPUTE_INTERVAL: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RapidOptions {
    pub theta_min_scope: ThetaMinScope,
    /// Recompute densities from scratch every this many iterations.
    /// `None` uses `max(256, |I|)`, which keeps the total cost quadratic.
    pub recompute_every: Option<usize>,
}

impl Default for RapidOptions {
    fn default() -> Self {
        RapidOptions {
            theta_min_scope: ThetaMinScope::RemainingSample,
            recompute_every: None,
        }
    }
}

/// One iteration of the sampler. Indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RapidStep {
    /// Highest-density member proposed for removal.
    pub candidate: usize,
    pub theta_min: f64,
    /// First inlier whose density fell below `theta_min`; when present the
    /// candidate was kept and the sampler stopped.
    pub violator: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RapidTrace {
    pub steps: Vec<RapidStep>,
}

impl RapidTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn stopped_on_violation(&self) -> bool {
        self.steps.last().is_some_and(|s| s.violator.is_some())
    }

    pub fn removals(&self) -> usize {
        self.steps.len() - usize::from(self.stopped_on_violation())
    }
}

pub fn rapid_sample(gram: &GramMatrix, p_out: f64) -> Result<SampleSelection> {
    rapid_sample_with(gram, p_out, &RapidOptions::default()).map(|(s, _)| s)
}

pub fn rapid_sample_traced(gram: &GramMatrix, p_out: f64) -> Result<(SampleSelection, RapidTrace)> {
    rapid_sample_with(gram, p_out, &RapidOptions::default())
}

pub fn rapid_sample_with(
    gram: &GramMatrix,
    p_out: f64,
    options: &RapidOptions,
) -> Result<(SampleSelection, RapidTrace)> {
    let start = Instant::now();
    let pre = prefilter(gram, p_out)?;
    let mut state = RapidState::new(gram, &pre, *options);
    let mut trace = RapidTrace::default();
    for _ in 1..pre.inliers.len() {
        let step = state.step();
        trace.steps.push(step);
        if step.violator.is_some() {
            break;
        }
    }
    let sample = state.sample();
    let selection = SampleSelection {
        sample,
        prefilter: pre,
        method: SamplingMethod::Rapid,
        seed: None,
        t_samp: start.elapsed().as_secs_f64(),
    };
    Ok((selection, trace))
}

struct RapidState<'a> {
    gram: &'a GramMatrix,
    inliers: &'a [usize],
    /// Current sample, ascending.
    members: Vec<usize>,
    density: Vec<f64>,
    options: RapidOptions,
    recompute_every: usize,
    iterations: usize,
}

impl<'a> RapidState<'a> {
    fn new(gram: &'a GramMatrix, pre: &'a PrefilterResult, options: RapidOptions) -> Self {
        RapidState {
            gram,
            inliers: pre.inliers.as_slice(),
            members: pre.inliers.as_slice().to_vec(),
            density: pre.adjusted_density.values().to_vec(),
            options,
            recompute_every: options
                .recompute_every
                .unwrap_or(pre.inliers.len().max(MIN_RECOMPUTE_INTERVAL))
                .max(1),
            iterations: 0,
        }
    }

    fn sample(&self) -> IndexSet {
        IndexSet::from_sorted(self.members.clone())
    }

    fn recompute_density(&mut self) {
        let gram = self.gram;
        let members = &self.members;
        self.density.par_iter_mut().enumerate().for_each(|(i, d)| {
            let row = gram.row(i);
            *d = members.iter().map(|&j| row[j]).sum();
        });
    }

    /// Proposes one removal; keeps it unless the density rule breaks.
    /// Requires at least two members.
    fn step(&mut self) -> RapidStep {
        debug_assert!(self.members.len() >= 2);
        if self.iterations > 0 && self.iterations.is_multiple_of(self.recompute_every) {
            self.recompute_density();
        }
        self.iterations += 1;

        // Strict comparisons keep the lowest index on ties.
        let mut pos = 0;
        for (p, &i) in self.members.iter().enumerate() {
            if self.density[i] > self.density[self.members[pos]] {
                pos = p;
            }
        }
        let candidate = self.members[pos];

        for (d, k) in self.density.iter_mut().zip(self.gram.row(candidate)) {
            *d -= k;
        }

        let theta_min = self
            .members
            .iter()
            .filter(|&&i| {
                i != candidate || self.options.theta_min_scope == ThetaMinScope::IncludingCandidate
            })
            .map(|&i| self.density[i])
            .fold(f64::INFINITY, f64::min);

        let violator = self
            .inliers
            .iter()
            .copied()
            .find(|&i| self.density[i] < theta_min);
        if violator.is_none() {
            self.members.remove(pos);
        }
        RapidStep {
            candidate,
            theta_min,
            violator,
        }
    }
}
