//! Hard-margin SVDD: the minimum enclosing ball of the training data in the
//! Gaussian feature space.
//!
//! The dual is `min_a a^T K a` subject to `sum a = 1`, `0 <= a_i <= C`. With
//! a unit-diagonal kernel the usual linear term `sum a_i K_ii` equals 1 on
//! the simplex and drops out. It is solved by SMO-style pairwise updates.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::dataset::{Dataset, IndexSet, Label, LabelVector};
use crate::error::{Error, Result};
use crate::format;
use crate::kernel::{gram_matrix, GramMatrix, KernelSpec};

/// Dual weights at or below this are treated as zero.
pub const ALPHA_EPS: f64 = 1e-8;

/// Slack on `R^2` when labeling a query.
pub const PREDICT_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Upper bound on each dual weight. The pipeline always uses 1.
    pub c: f64,
    /// Stop once the maximal violating pair differs by less than this in
    /// gradient, measured on a freshly summed gradient.
    pub tolerance: f64,
    pub max_updates: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            c: 1.0,
            tolerance: 1e-10,
            max_updates: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    /// `a^T K a`.
    pub objective: f64,
    pub updates: usize,
    /// Maximal KKT violation at exit.
    pub violation: f64,
}

/// Solves the SVDD dual on a precomputed Gram matrix.
pub fn solve_dual(gram: &GramMatrix, options: &SolverOptions) -> Result<DualSolution> {
    let n = gram.n();
    if n == 0 {
        return Err(Error::Empty("training set"));
    }
    let c = options.c;
    if !(c > 0.0 && c * n as f64 >= 1.0 - 1e-12) {
        return Err(Error::param(
            "C",
            format!("need C * n >= 1 for a feasible dual, got C = {c}, n = {n}"),
        ));
    }

    let mut alpha = vec![1.0 / n as f64; n];
    let mut grad = gradient(gram, &alpha);
    let mut updates = 0;
    let mut fresh = true;
    let violation = loop {
        // First index: steepest descent direction among those that can grow.
        let mut up = None;
        for i in 0..n {
            if alpha[i] < c && up.is_none_or(|u: usize| grad[i] < grad[u]) {
                up = Some(i);
            }
        }
        // Second index: largest guaranteed decrease among those that can shrink.
        let mut down = None;
        let mut gap = 0.0;
        if let Some(i) = up {
            let row = gram.row(i);
            let mut best = 0.0;
            for j in 0..n {
                let diff = grad[j] - grad[i];
                if alpha[j] > 0.0 && j != i && diff > 0.0 {
                    gap = f64::max(gap, diff);
                    let eta = (row[i] + gram.get(j, j) - 2.0 * row[j]).max(1e-12);
                    let gain = diff * diff / eta;
                    if gain > best {
                        best = gain;
                        down = Some(j);
                    }
                }
            }
        }
        let (Some(i), Some(j)) = (up, down) else {
            if fresh {
                break 0.0;
            }
            grad = gradient(gram, &alpha);
            fresh = true;
            continue;
        };
        if gap < options.tolerance {
            if fresh {
                break gap;
            }
            grad = gradient(gram, &alpha);
            fresh = true;
            continue;
        }
        if updates >= options.max_updates {
            return Err(Error::NotConverged {
                iterations: updates,
                violation: gap,
            });
        }

        // Move t of mass from j to i.
        let diff = grad[j] - grad[i];
        let eta = gram.get(i, i) + gram.get(j, j) - 2.0 * gram.get(i, j);
        let room_i = c - alpha[i];
        let room_j = alpha[j];
        let bound = room_i.min(room_j);
        let t = if eta > 1e-15 {
            (diff / (2.0 * eta)).min(bound)
        } else {
            bound
        };
        if t == room_j {
            alpha[j] = 0.0;
            alpha[i] += t;
        } else if t == room_i {
            alpha[i] = c;
            alpha[j] -= t;
        } else {
            alpha[i] += t;
            alpha[j] -= t;
        }
        updates += 1;
        if updates % n == 0 {
            grad = gradient(gram, &alpha);
            fresh = true;
        } else {
            let (ri, rj) = (gram.row(i), gram.row(j));
            for (g, (ki, kj)) in grad.iter_mut().zip(ri.iter().zip(rj)) {
                *g += 2.0 * t * (ki - kj);
            }
            fresh = false;
        }
    };

    let objective = quadratic_form(gram, &alpha);
    Ok(DualSolution {
        alpha,
        objective,
        updates,
        violation,
    })
}

/// Gradient of `a^T K a`, summed from scratch.
fn gradient(gram: &GramMatrix, alpha: &[f64]) -> Vec<f64> {
    (0..gram.n())
        .map(|i| {
            2.0 * gram
                .row(i)
                .iter()
                .zip(alpha)
                .map(|(k, a)| k * a)
                .sum::<f64>()
        })
        .collect()
}

fn quadratic_form(gram: &GramMatrix, alpha: &[f64]) -> f64 {
    (0..gram.n())
        .map(|i| {
            alpha[i]
                * gram
                    .row(i)
                    .iter()
                    .zip(alpha)
                    .map(|(k, a)| k * a)
                    .sum::<f64>()
        })
        .sum()
}

/// Result of classifying one query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub label: Label,
    /// `||phi(x) - a||^2`.
    pub squared_distance: f64,
    /// `R^2 - squared_distance`.
    pub margin: f64,
}

/// A trained ball. Only support vectors are retained.
#[derive(Clone, Debug, PartialEq)]
pub struct SvddModel {
    kernel: KernelSpec,
    alpha: Vec<f64>,
    support_indices: IndexSet,
    support_vectors: Dataset,
    radius_sq: f64,
    center_norm_sq: f64,
}

pub fn train_svdd(data: &Dataset, kernel: KernelSpec) -> Result<SvddModel> {
    train_svdd_with(data, kernel, &SolverOptions::default())
}

/// Trains on the rows of `data` at `sample`; support indices refer to `data`.
pub fn train_svdd_on(data: &Dataset, sample: &IndexSet, kernel: KernelSpec) -> Result<SvddModel> {
    if sample.is_empty() {
        return Err(Error::Empty("training sample"));
    }
    let mut model = train_svdd(&data.select(sample)?, kernel)?;
    let ids = sample.as_slice();
    model.support_indices =
        IndexSet::from_sorted(model.support_indices.iter().map(|i| ids[i]).collect());
    Ok(model)
}

pub fn train_svdd_with(
    data: &Dataset,
    kernel: KernelSpec,
    options: &SolverOptions,
) -> Result<SvddModel> {
    let gram = gram_matrix(data, kernel)?;
    let solution = solve_dual(&gram, options)?;
    let c = options.c;

    let support: Vec<usize> = (0..data.n())
        .filter(|&i| solution.alpha[i] > ALPHA_EPS)
        .collect();
    let alpha: Vec<f64> = support.iter().map(|&i| solution.alpha[i]).collect();
    let center_norm_sq: f64 = support
        .iter()
        .zip(&alpha)
        .map(|(&i, ai)| {
            ai * support
                .iter()
                .zip(&alpha)
                .map(|(&j, aj)| aj * gram.get(i, j))
                .sum::<f64>()
        })
        .sum();
    let distance = |k: usize| -> f64 {
        let cross: f64 = support
            .iter()
            .zip(&alpha)
            .map(|(&j, a)| a * gram.get(k, j))
            .sum();
        gram.get(k, k) - 2.0 * cross + center_norm_sq
    };

    let free: Vec<f64> = support
        .iter()
        .zip(&alpha)
        .filter(|(_, &a)| a < c - ALPHA_EPS)
        .map(|(&i, _)| distance(i))
        .collect();
    let radius_sq = if free.is_empty() {
        (0..data.n()).map(distance).fold(0.0, f64::max)
    } else {
        free.iter().sum::<f64>() / free.len() as f64
    }
    .max(0.0);

    let support_indices = IndexSet::from_sorted(support);
    let support_vectors = data.select(&support_indices)?;
    Ok(SvddModel {
        kernel,
        alpha,
        support_indices,
        support_vectors,
        radius_sq,
        center_norm_sq,
    })
}

impl SvddModel {
    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    /// Dual weights of the support vectors, aligned with [`Self::support_indices`].
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn support_indices(&self) -> &IndexSet {
        &self.support_indices
    }

    pub fn support_vectors(&self) -> &Dataset {
        &self.support_vectors
    }

    pub fn radius_sq(&self) -> f64 {
        self.radius_sq
    }

    pub fn center_norm_sq(&self) -> f64 {
        self.center_norm_sq
    }

    pub fn dim(&self) -> usize {
        self.support_vectors.m()
    }

    fn squared_distance(&self, x: &[f64]) -> f64 {
        let cross: f64 = self
            .support_vectors
            .rows()
            .zip(&self.alpha)
            .map(|(sv, a)| a * self.kernel.eval_unchecked(x, sv))
            .sum();
        1.0 - 2.0 * cross + self.center_norm_sq
    }

    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        let squared_distance = self.squared_distance(x);
        let margin = self.radius_sq - squared_distance;
        let label = if margin >= -PREDICT_EPS {
            Label::In
        } else {
            Label::Out
        };
        Ok(Prediction {
            label,
            squared_distance,
            margin,
        })
    }

    /// Labels every row and returns the inference time in seconds per 1000
    /// observations.
    pub fn predict_batch(&self, data: &Dataset) -> Result<(LabelVector, f64)> {
        if data.m() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: data.m(),
            });
        }
        let start = Instant::now();
        let labels: Vec<Label> = (0..data.n())
            .into_par_iter()
            .map(|i| {
                let margin = self.radius_sq - self.squared_distance(data.row(i));
                if margin >= -PREDICT_EPS {
                    Label::In
                } else {
                    Label::Out
                }
            })
            .collect();
        let elapsed = start.elapsed().as_secs_f64();
        Ok((labels.into(), elapsed * 1000.0 / data.n() as f64))
    }

    /// JSON with a fixed key order and 17 significant digits per real.
    pub fn to_json(&self) -> String {
        let list = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(", ");
        let vectors = self
            .support_vectors
            .rows()
            .map(|r| format!("[{}]", list(&mut r.iter().map(|&v| format::exact(v)))))
            .collect::<Vec<_>>()
            .join(", ");
        format!(
            "{{\n  \"gamma\": {},\n  \"radius_sq\": {},\n  \"center_norm_sq\": {},\n  \"alpha\": [{}],\n  \"support_indices\": [{}],\n  \"support_vectors\": [{}]\n}}\n",
            format::exact(self.kernel.gamma()),
            format::exact(self.radius_sq),
            format::exact(self.center_norm_sq),
            list(&mut self.alpha.iter().map(|&a| format::exact(a))),
            list(&mut self.support_indices.iter().map(|i| (i + 1).to_string())),
            vectors,
        )
    }

    pub fn from_json(text: &str) -> Result<SvddModel> {
        #[derive(Deserialize)]
        struct Raw {
            gamma: f64,
            radius_sq: f64,
            center_norm_sq: f64,
            alpha: Vec<f64>,
            support_indices: Vec<usize>,
            support_vectors: Vec<Vec<f64>>,
        }
        let raw: Raw =
            serde_json::from_str(text).map_err(|e| Error::param("model", e.to_string()))?;
        let count = raw.alpha.len();
        if count == 0 || raw.support_indices.len() != count || raw.support_vectors.len() != count {
            return Err(Error::param(
                "model",
                "alpha, support_indices and support_vectors must be non-empty and equally long",
            ));
        }
        let max_index = raw.support_indices.iter().copied().max().unwrap_or(0);
        Ok(SvddModel {
            kernel: KernelSpec::new(raw.gamma)?,
            alpha: raw.alpha,
            support_indices: IndexSet::from_one_based(&raw.support_indices, max_index)?,
            support_vectors: Dataset::from_rows(&raw.support_vectors)?,
            radius_sq: raw.radius_sq,
            center_norm_sq: raw.center_norm_sq,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<SvddModel> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SvddModel::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(gamma: f64) -> KernelSpec {
        KernelSpec::new(gamma).unwrap()
    }

    #[test]
    fn single_point_is_a_degenerate_ball() {
        let data = Dataset::from_rows(&[[1.0, -2.0]]).unwrap();
        let model = train_svdd(&data, kernel(0.5)).unwrap();
        assert_eq!(model.alpha(), &[1.0]);
        assert_eq!(model.radius_sq(), 0.0);
        let p = model.predict(&[1.0, -2.0]).unwrap();
        assert_eq!(p.label, Label::In);
        assert_eq!(p.squared_distance, 0.0);
    }

    #[test]
    fn two_points_split_the_weight() {
        let data = Dataset::from_rows(&[[0.0, 0.0], [1.0, 2.0]]).unwrap();
        let kappa = (-0.3f64 * 5.0).exp();
        let model = train_svdd(&data, kernel(0.3)).unwrap();
        for a in model.alpha() {
            assert!((a - 0.5).abs() < 1e-9);
        }
        assert!((model.radius_sq() - (1.0 - kappa) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn unconstrained_support_vectors_lie_on_the_sphere() {
        let rows: Vec<[f64; 2]> = (0..12)
            .map(|i| [(i as f64).cos() * 1.5, (i as f64 * 1.7).sin()])
            .collect();
        let data = Dataset::from_rows(&rows).unwrap();
        let model = train_svdd(&data, kernel(1.0)).unwrap();
        for (i, a) in model.support_indices().iter().zip(model.alpha()) {
            if *a < 1.0 - ALPHA_EPS {
                let p = model.predict(data.row(i)).unwrap();
                assert!((p.squared_distance - model.radius_sq()).abs() < 1e-6);
            }
        }
        let (labels, _) = model.predict_batch(&data).unwrap();
        assert_eq!(labels.count(Label::In), 12);
    }

    #[test]
    fn far_queries_fall_outside() {
        let data = Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let gamma = 2.0;
        let model = train_svdd(&data, kernel(gamma)).unwrap();
        let far = 100.0 / f64::sqrt(gamma);
        let p = model.predict(&[far, far]).unwrap();
        assert_eq!(p.label, Label::Out);
        assert!((p.squared_distance - (1.0 + model.center_norm_sq())).abs() < 1e-12);
        assert!(p.squared_distance > model.radius_sq());
    }

    #[test]
    fn dimension_checks() {
        let data = Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let model = train_svdd(&data, kernel(1.0)).unwrap();
        assert!(model.predict(&[0.0]).is_err());
        let wrong = Dataset::from_rows(&[[0.0]]).unwrap();
        assert!(model.predict_batch(&wrong).is_err());
    }

    #[test]
    fn repeated_query_batch() {
        let data = Dataset::from_rows(&[[0.0, 0.0], [1.0, 0.3], [0.2, 1.0]]).unwrap();
        let model = train_svdd(&data, kernel(1.0)).unwrap();
        for q in [[0.3, 0.3], [5.0, 5.0]] {
            let single = model.predict(&q).unwrap().label;
            let batch = Dataset::from_rows(&[q; 4]).unwrap();
            let (labels, _) = model.predict_batch(&batch).unwrap();
            assert!(labels.as_slice().iter().all(|&l| l == single));
        }
    }

    #[test]
    fn soft_margin_weights_are_capped() {
        let rows: Vec<[f64; 1]> = (0..10).map(|i| [i as f64 * 0.4]).collect();
        let gram = gram_matrix(&Dataset::from_rows(&rows).unwrap(), kernel(1.0)).unwrap();
        let options = SolverOptions {
            c: 0.2,
            ..SolverOptions::default()
        };
        let sol = solve_dual(&gram, &options).unwrap();
        assert!((sol.alpha.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!(sol
            .alpha
            .iter()
            .all(|&a| (-1e-12..=0.2 + 1e-12).contains(&a)));
        assert!(solve_dual(&gram, &SolverOptions { c: 0.05, ..options }).is_err());
    }

    #[test]
    fn iteration_cap_is_reported() {
        let rows: Vec<[f64; 1]> = (0..10).map(|i| [i as f64 * 0.4]).collect();
        let gram = gram_matrix(&Dataset::from_rows(&rows).unwrap(), kernel(1.0)).unwrap();
        let options = SolverOptions {
            max_updates: 1,
            ..SolverOptions::default()
        };
        assert!(matches!(
            solve_dual(&gram, &options),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let rows: Vec<[f64; 2]> = (0..9)
            .map(|i| [(i as f64 * 0.9).sin(), (i as f64 * 0.4).cos() / 3.0])
            .collect();
        let data = Dataset::from_rows(&rows).unwrap();
        let model = train_svdd(&data, kernel(1.3)).unwrap();
        let back = SvddModel::from_json(&model.to_json()).unwrap();
        assert_eq!(back, model);
        assert_eq!(back.to_json(), model.to_json());
    }
}
