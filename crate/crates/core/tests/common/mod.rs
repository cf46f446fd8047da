//! Oracles shared by the integration tests, written independently of the
//! library code they check.
#![allow(dead_code)]

use pivotboot::bounds::BoundParams;

/// Right-hand side of the Berry–Esseen type bound, rewritten over a common
/// denominator with `q = (n - 1)/n` expanded. Returns `(first, second)`.
pub fn bound_oracle(n: f64, m: f64, delta_n: f64, eps: f64) -> (f64, f64) {
    let first = n * (1.0 + n) * (15.0 * m * m + 25.0 * m * n + n * n)
        / ((n - 1.0).powi(3) * m * m)
        / (delta_n * delta_n * (1.0 - eps).powi(3));
    let k = n - 1.0;
    let second = (1.0 / (n.powi(3) * m)
        + k.powi(3) / (n.powi(3) * m)
        + (m - 1.0) * k / (n * n * m)
        + 4.0 * m / (n * n)
        + 1.0 / n
        + 1.0 / (n * n * m)
        + 4.0 / (n * m))
        / (eps * eps);
    (first, second)
}

/// All `n^m` equally likely index sequences, reduced to count vectors.
pub fn enumerate_counts(n: usize, m: usize) -> Vec<Vec<u64>> {
    let total = n.pow(m as u32);
    (0..total)
        .map(|mut code| {
            let mut counts = vec![0u64; n];
            for _ in 0..m {
                counts[code % n] += 1;
                code /= n;
            }
            counts
        })
        .collect()
}

/// `sum (w_i/m - 1/n)^2` straight from the counts.
pub fn v_squared(counts: &[u64]) -> f64 {
    let n = counts.len() as f64;
    let m: u64 = counts.iter().sum();
    counts.iter().map(|&w| (w as f64 / m as f64 - 1.0 / n).powi(2)).sum()
}

/// Binomial standard error of a frequency.
pub fn binomial_se(p: f64, trials: usize) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// A 100-point grid spanning small and large `n`, `m` with varied
/// admissible parameters.
pub fn bound_grid() -> Vec<BoundParams> {
    let ns = [2u64, 3, 5, 10, 30, 100, 250, 600, 1000, 2000];
    let ms = [1u64, 2, 7, 20, 50, 100, 300, 1000, 2500, 4000];
    let mut out = Vec::new();
    for (i, &n) in ns.iter().enumerate() {
        for (j, &m) in ms.iter().enumerate() {
            let k = (i * ms.len() + j) as f64;
            out.push(BoundParams {
                n,
                m,
                delta: 0.4 + 0.005 * k,
                eps: 0.2 + 0.006 * k,
                eps1: 0.01 * (1.0 + (k % 5.0)),
                eps2: 0.002 * (k % 7.0),
                third_abs_moment_ratio: 0.5 + 0.03 * k,
                p_var_dev: 0.001 * (k % 3.0),
                c: 0.4 + 0.002 * k,
            });
        }
    }
    out
}
