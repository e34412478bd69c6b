//! Gaussian kernel, dense Gram matrices and bandwidth heuristics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Largest `N` for which [`gram_matrix`] materializes an `N x N` matrix.
pub const DEFAULT_MAX_GRAM_N: usize = 30_000;

/// Gaussian kernel `k(x, y) = exp(-gamma * ||x - y||^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    gamma: f64,
}

impl KernelSpec {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::param(
                "gamma",
                format!("must be finite and >= 0, got {gamma}"),
            ));
        }
        Ok(KernelSpec { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        gaussian_kernel(x, y, self.gamma)
    }

    /// Kernel value without the dimension check.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        (-self.gamma * squared_euclidean(x, y)).exp()
    }
}

#[inline]
pub(crate) fn squared_euclidean(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

/// `exp(-gamma * ||x - y||^2)`.
pub fn gaussian_kernel(x: &[f64], y: &[f64], gamma: f64) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    Ok(KernelSpec::new(gamma)?.eval_unchecked(x, y))
}

/// Dense symmetric matrix of pairwise kernel values.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    values: Vec<f64>,
    n: usize,
    kernel: KernelSpec,
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Row `i`, which by symmetry is also column `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Gram matrix under the default size cap.
pub fn gram_matrix(data: &Dataset, kernel: KernelSpec) -> Result<GramMatrix> {
    gram_matrix_capped(data, kernel, DEFAULT_MAX_GRAM_N)
}

/// Gram matrix, refusing datasets with more than `max_n` observations.
///
/// Rows are filled in parallel. Each entry is a pure function of its two
/// rows and `(x - y)^2 == (y - x)^2` holds exactly in IEEE arithmetic, so
/// the result is bit-symmetric and independent of scheduling.
pub fn gram_matrix_capped(data: &Dataset, kernel: KernelSpec, max_n: usize) -> Result<GramMatrix> {
    let n = data.n();
    if n > max_n {
        return Err(Error::TooLarge { n, cap: max_n });
    }
    let mut values = vec![0.0; n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
        let xi = data.row(i);
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = if i == j {
                1.0
            } else {
                kernel.eval_unchecked(xi, data.row(j))
            };
        }
    });
    Ok(GramMatrix { values, n, kernel })
}

fn per_dimension_variance(data: &Dataset) -> Vec<f64> {
    let n = data.n() as f64;
    (0..data.m())
        .map(|k| {
            let mean = data.rows().map(|r| r[k]).sum::<f64>() / n;
            data.rows().map(|r| (r[k] - mean).powi(2)).sum::<f64>() / (n - 1.0)
        })
        .collect()
}

/// Scott's rule with a single isotropic bandwidth.
///
/// `h = mean_k(std_k) * N^(-1 / (M + 4))` where `std_k` is the unbiased
/// standard deviation of feature `k`, and `gamma = 1 / (2 h^2)`.
pub fn bandwidth_scott(data: &Dataset) -> Result<f64> {
    if data.n() < 2 {
        return Err(Error::DegenerateData(
            "Scott's rule needs at least two observations".into(),
        ));
    }
    let variances = per_dimension_variance(data);
    let mean_std = variances.iter().map(|v| v.sqrt()).sum::<f64>() / data.m() as f64;
    if mean_std <= 0.0 {
        return Err(Error::DegenerateData("every feature is constant".into()));
    }
    let h = mean_std * (data.n() as f64).powf(-1.0 / (data.m() as f64 + 4.0));
    Ok(1.0 / (2.0 * h * h))
}

/// Modified mean criterion.
///
/// With `S = sum_k var_k` (unbiased), `phi = 1 / ln(N - 1)` and the fitted
/// correction `delta(phi) = -0.14818008 phi^4 + 0.284623624 phi^3
/// - 0.252853808 phi^2 + 0.159059498 phi - 0.001381145`, the bandwidth is
/// `s^2 = 2 N S / ((N - 1) ln((N - 1) / delta^2))` and `gamma = 1 / (2 s^2)`.
pub fn bandwidth_modified_mean(data: &Dataset) -> Result<f64> {
    let n = data.n();
    if n < 2 {
        return Err(Error::DegenerateData(
            "the modified mean criterion needs at least two observations".into(),
        ));
    }
    let nf = n as f64;
    let log_n1 = (nf - 1.0).ln();
    if log_n1 <= 0.0 {
        return Err(Error::DegenerateData(
            "the modified mean criterion is undefined for N = 2".into(),
        ));
    }
    let phi = 1.0 / log_n1;
    let delta = -0.14818008 * phi.powi(4) + 0.284623624 * phi.powi(3) - 0.252853808 * phi.powi(2)
        + 0.159059498 * phi
        - 0.001381145;
    let total_variance: f64 = per_dimension_variance(data).iter().sum();
    if total_variance <= 0.0 {
        return Err(Error::DegenerateData("every feature is constant".into()));
    }
    let log_term = ((nf - 1.0) / (delta * delta)).ln();
    if !(log_term.is_finite() && log_term > 0.0) {
        return Err(Error::DegenerateData(format!(
            "modified mean criterion log term is {log_term} for N = {n}"
        )));
    }
    let s2 = 2.0 * nf * total_variance / ((nf - 1.0) * log_term);
    Ok(1.0 / (2.0 * s2))
}

/// How the kernel bandwidth is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaRule {
    Scott,
    ModifiedMean,
    Fixed(f64),
}

impl GammaRule {
    pub fn resolve(&self, data: &Dataset) -> Result<KernelSpec> {
        let gamma = match *self {
            GammaRule::Scott => bandwidth_scott(data)?,
            GammaRule::ModifiedMean => bandwidth_modified_mean(data)?,
            GammaRule::Fixed(g) => g,
        };
        KernelSpec::new(gamma)
    }

    pub fn name(&self) -> &'static str {
        match self {
            GammaRule::Scott => "scott",
            GammaRule::ModifiedMean => "modified_mean",
            GammaRule::Fixed(_) => "fixed",
        }
    }
}
