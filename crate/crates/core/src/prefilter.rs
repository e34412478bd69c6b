//! Density-based split into inliers and outliers.
//!
//! Fixing the outlier share `p_out` up front is what lets SVDD run with
//! `C = 1` (hard margin) on the inliers afterwards.

use crate::dataset::IndexSet;
use crate::density::{density_quantile_threshold, empirical_density, DensityVector};
use crate::error::{Error, Result};
use crate::kernel::GramMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct PrefilterResult {
    pub inliers: IndexSet,
    pub outliers: IndexSet,
    pub theta_pre: f64,
    /// Density over the full data set, evaluated at all observations.
    pub original_density: DensityVector,
    /// Density over the inliers, evaluated at all observations.
    pub adjusted_density: DensityVector,
}

impl PrefilterResult {
    /// `|O| / N` as realized; below `p_out` when densities tie at the threshold.
    pub fn realized_outlier_ratio(&self) -> f64 {
        self.outliers.len() as f64 / self.original_density.len() as f64
    }
}

pub(crate) fn check_p_out(p_out: f64) -> Result<()> {
    if (0.0..1.0).contains(&p_out) {
        Ok(())
    } else {
        Err(Error::param(
            "p_out",
            format!("must lie in [0, 1), got {p_out}"),
        ))
    }
}

/// Splits the observations at the `p_out` density quantile.
///
/// Ties at the threshold stay inliers. The adjusted density is summed over
/// the inliers directly rather than by subtracting outlier columns, which
/// is the same quantity but matches [`empirical_density`] bit for bit.
pub fn prefilter(gram: &GramMatrix, p_out: f64) -> Result<PrefilterResult> {
    check_p_out(p_out)?;
    let n = gram.n();
    let original_density = empirical_density(gram, &IndexSet::all(n))?;
    let theta_pre = density_quantile_threshold(original_density.values(), p_out)?;
    let (inliers, outliers): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| original_density.get(i) >= theta_pre);
    if inliers.is_empty() {
        return Err(Error::Empty("inlier set after pre-filtering"));
    }
    let inliers = IndexSet::from_sorted(inliers);
    let outliers = IndexSet::from_sorted(outliers);
    let adjusted_density = if outliers.is_empty() {
        original_density.clone()
    } else {
        empirical_density(gram, &inliers)?
    };
    Ok(PrefilterResult {
        inliers,
        outliers,
        theta_pre,
        original_density,
        adjusted_density,
    })
}
