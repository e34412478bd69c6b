//! Unnormalized kernel density, level-set classification and boundary points.

use crate::dataset::{IndexSet, Label, LabelVector};
use crate::error::{Error, Result};
use crate::kernel::GramMatrix;

/// Density of every observation with respect to a source set.
///
/// `values[i] = sum_{j in source} K[i][j]` for all `i` in `0..N`, so the
/// vector is defined at every observation even when `i` is not a source
/// member.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityVector {
    values: Vec<f64>,
    source: IndexSet,
}

impl DensityVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn source(&self) -> &IndexSet {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// `(min, max)` over the observations in `among`.
    pub fn range_over(&self, among: &IndexSet) -> Option<(f64, f64)> {
        among
            .iter()
            .map(|i| self.values[i])
            .fold(None, |acc, v| match acc {
                None => Some((v, v)),
                Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
            })
    }
}

/// Sums kernel rows over `over`, accumulating in ascending index order.
pub fn empirical_density(gram: &GramMatrix, over: &IndexSet) -> Result<DensityVector> {
    if over.is_empty() {
        return Err(Error::Empty("density source set"));
    }
    over.check_bounds(gram.n())?;
    let values = (0..gram.n())
        .map(|i| {
            let row = gram.row(i);
            over.iter().map(|j| row[j]).sum()
        })
        .collect();
    Ok(DensityVector {
        values,
        source: over.clone(),
    })
}

/// Labels `i` as in iff `d[i] >= theta`.
pub fn level_set_classify(d: &[f64], theta: f64) -> LabelVector {
    d.iter()
        .map(|&v| if v >= theta { Label::In } else { Label::Out })
        .collect()
}

/// Density at the one-based position `max(1, floor(p_out * N))` of the
/// ascending sort of `d`.
pub fn density_quantile_threshold(d: &[f64], p_out: f64) -> Result<f64> {
    if d.is_empty() {
        return Err(Error::Empty("density vector"));
    }
    if !(0.0..=1.0).contains(&p_out) {
        return Err(Error::param(
            "p_out",
            format!("must lie in [0, 1], got {p_out}"),
        ));
    }
    let mut sorted = d.to_vec();
    sorted.sort_by(f64::total_cmp);
    let position = ((p_out * d.len() as f64).floor() as usize).max(1);
    Ok(sorted[position - 1])
}

/// Observations whose density lies in `[d_min, d_min + delta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySet {
    pub indices: IndexSet,
    pub delta: f64,
    pub d_min: f64,
}

/// Boundary points over every entry of `d`.
pub fn boundary_points(d: &[f64], delta: f64) -> Result<BoundarySet> {
    boundary_points_among(d, &IndexSet::all(d.len()), delta)
}

/// Boundary points of the subset `among`, with `d_min` taken over `among`.
pub fn boundary_points_among(d: &[f64], among: &IndexSet, delta: f64) -> Result<BoundarySet> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::param(
            "delta",
            format!("must be positive, got {delta}"),
        ));
    }
    if among.is_empty() {
        return Err(Error::Empty("boundary candidate set"));
    }
    among.check_bounds(d.len())?;
    let d_min = among.iter().map(|i| d[i]).fold(f64::INFINITY, f64::min);
    let indices = IndexSet::from_sorted(among.iter().filter(|&i| d[i] < d_min + delta).collect());
    Ok(BoundarySet {
        indices,
        delta,
        d_min,
    })
}

/// `fraction` of the density range over `among`; a tiny positive value when
/// the range is zero so that the band still contains the minimum.
pub fn relative_delta(d: &[f64], among: &IndexSet, fraction: f64) -> f64 {
    let (lo, hi) = among
        .iter()
        .map(|i| d[i])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    let delta = fraction * (hi - lo);
    if delta > 0.0 {
        delta
    } else {
        f64::MIN_POSITIVE
    }
}
