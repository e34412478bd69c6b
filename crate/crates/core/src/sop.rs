//! The sample optimization problem: among samples that keep every inlier at
//! or above the sample's minimum density, find one whose density is as flat
//! as possible (smallest `theta_max - theta_min`).
//!
//! The exact solver enumerates all subsets and is only meant for tiny
//! inputs, where it serves as the reference for the greedy sampler.

use std::fmt;

use crate::dataset::IndexSet;
use crate::error::{Error, Result};
use crate::kernel::GramMatrix;

/// Largest inlier set [`solve_sop_exact`] accepts.
pub const MAX_EXACT_INLIERS: usize = 15;

/// Tolerance used when checking the output of floating-point pipelines.
pub const PIPELINE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// Minimum of `d_S` over the sample.
    pub theta_min: f64,
    /// Maximum of `d_S` over the sample.
    pub theta_max: f64,
    /// First inlier (ascending) with `d_S < theta_min - tolerance`.
    pub violation: Option<Violation>,
}

impl Feasibility {
    /// `theta_max - theta_min`.
    pub fn fit_gap(&self) -> f64 {
        self.theta_max - self.theta_min
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Violation {
    pub index: usize,
    pub density: f64,
    pub theta_min: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "observation {} has sample density {} below the sample minimum {}",
            self.index + 1,
            self.density,
            self.theta_min
        )
    }
}

fn sample_density(gram: &GramMatrix, sample: &[usize], i: usize) -> f64 {
    let row = gram.row(i);
    sample.iter().map(|&j| row[j]).sum()
}

/// Checks that every inlier has sample density at least the sample minimum.
pub fn check_feasible(
    gram: &GramMatrix,
    inliers: &IndexSet,
    sample: &IndexSet,
    tolerance: f64,
) -> Result<Feasibility> {
    if sample.is_empty() {
        return Err(Error::Empty("sample"));
    }
    inliers.check_bounds(gram.n())?;
    if !sample.is_subset(inliers) {
        return Err(Error::param("sample", "must be a subset of the inliers"));
    }
    let s = sample.as_slice();
    let (theta_min, theta_max) = s
        .iter()
        .map(|&i| sample_density(gram, s, i))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    let violation = inliers.iter().find_map(|i| {
        let density = sample_density(gram, s, i);
        (density < theta_min - tolerance).then_some(Violation {
            index: i,
            density,
            theta_min,
        })
    });
    Ok(Feasibility {
        feasible: violation.is_none(),
        theta_min,
        theta_max,
        violation,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SopSolution {
    pub sample: IndexSet,
    pub theta_min: f64,
    pub theta_max: f64,
    /// `theta_max - theta_min`.
    pub objective: f64,
    /// Lowest-index sample member attaining `theta_min`.
    pub argmin_witness: usize,
}

/// Exhaustive solve over all non-empty subsets of `inliers`.
///
/// Subsets are visited by increasing size, then lexicographically, and only
/// a strictly better objective replaces the incumbent, so ties resolve to
/// the smallest and then lexicographically first sample.
pub fn solve_sop_exact(gram: &GramMatrix, inliers: &IndexSet) -> Result<SopSolution> {
    let k = inliers.len();
    if k == 0 {
        return Err(Error::Empty("inlier set"));
    }
    if k > MAX_EXACT_INLIERS {
        return Err(Error::param(
            "inliers",
            format!("exact solve enumerates 2^|I| subsets and is capped at {MAX_EXACT_INLIERS}, got {k}"),
        ));
    }
    inliers.check_bounds(gram.n())?;
    let ids = inliers.as_slice();
    let local: Vec<f64> = ids
        .iter()
        .flat_map(|&a| ids.iter().map(move |&b| gram.get(a, b)))
        .collect();

    let mut best: Option<(f64, Vec<usize>, f64, f64, usize)> = None;
    let mut density = vec![0.0; k];
    for size in 1..=k {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            for (i, d) in density.iter_mut().enumerate() {
                let row = &local[i * k..(i + 1) * k];
                *d = combo.iter().map(|&j| row[j]).sum();
            }
            let mut theta_min = f64::INFINITY;
            let mut theta_max = f64::NEG_INFINITY;
            let mut witness = combo[0];
            for &j in &combo {
                if density[j] < theta_min {
                    theta_min = density[j];
                    witness = j;
                }
                theta_max = theta_max.max(density[j]);
            }
            let feasible = density.iter().all(|&d| d >= theta_min);
            let objective = theta_max - theta_min;
            if feasible && best.as_ref().is_none_or(|b| objective < b.0) {
                best = Some((objective, combo.clone(), theta_min, theta_max, witness));
            }
            if !next_combination(&mut combo, k) {
                break;
            }
        }
    }
    // The full set is always feasible, so an incumbent exists.
    let (objective, combo, theta_min, theta_max, witness) = best.expect("S = I is feasible");
    Ok(SopSolution {
        sample: IndexSet::from_sorted(combo.iter().map(|&j| ids[j]).collect()),
        theta_min,
        theta_max,
        objective,
        argmin_witness: ids[witness],
    })
}

/// Advances `combo` to the next lexicographic `combo.len()`-subset of `0..k`.
fn next_combination(combo: &mut [usize], k: usize) -> bool {
    let size = combo.len();
    let Some(pos) = (0..size).rev().find(|&p| combo[p] < k - size + p) else {
        return false;
    };
    combo[pos] += 1;
    for p in pos + 1..size {
        combo[p] = combo[p - 1] + 1;
    }
    true
}
