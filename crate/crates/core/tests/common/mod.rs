//! Test-only oracles, independent of the library's solver paths.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rapid_svdd::{Dataset, GramMatrix};

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &x) in u.iter().enumerate() {
        cumulative += x;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if x - candidate > 0.0 {
            shift = candidate;
        }
    }
    v.iter().map(|x| (x - shift).max(0.0)).collect()
}

/// Minimizes `a^T K a` over the simplex by projected gradient descent with
/// step `1 / L`, `L = 2 * max row sum` (an upper bound on the Lipschitz
/// constant of the gradient). Returns `(alpha, objective)`.
pub fn projected_gradient_meb(gram: &GramMatrix, iterations: usize) -> (Vec<f64>, f64) {
    let n = gram.n();
    let lipschitz = 2.0
        * (0..n)
            .map(|i| gram.row(i).iter().sum::<f64>())
            .fold(0.0, f64::max);
    let step = 1.0 / lipschitz;
    let mut alpha = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        let grad: Vec<f64> = (0..n)
            .map(|i| 2.0 * (0..n).map(|j| gram.get(i, j) * alpha[j]).sum::<f64>())
            .collect();
        let moved: Vec<f64> = alpha.iter().zip(&grad).map(|(a, g)| a - step * g).collect();
        alpha = project_to_simplex(&moved);
    }
    let objective = (0..n)
        .map(|i| alpha[i] * (0..n).map(|j| gram.get(i, j) * alpha[j]).sum::<f64>())
        .sum();
    (alpha, objective)
}

/// `n` points uniform in `[0, scale]^m`.
pub fn uniform_points(n: usize, m: usize, scale: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n * m).map(|_| rng.random_range(0.0..scale)).collect();
    Dataset::new(values, n, m).unwrap()
}

/// Vertices of the regular simplex: the standard basis of `R^k`.
pub fn simplex_vertices(k: usize) -> Dataset {
    let rows: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    Dataset::from_rows(&rows).unwrap()
}
