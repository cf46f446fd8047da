//! Resampling weights and their centered functionals.
//!
//! A weight vector records how often each of the `n` sample indices is picked
//! when resampling `m` times with replacement (the multinomial scheme), or a
//! vector of i.i.d. positive draws (the generalized scheme, e.g. the Bayesian
//! bootstrap with unit-exponential weights).

use rand::Rng;
use rand_distr::{Binomial, Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Below this value of `sum (w_i/m - 1/n)^2` the weights are treated as equal.
///
/// Multinomial weights with all counts equal to `m/n` give exactly zero; the
/// threshold only matters for real-valued weights whose equality is lost to
/// rounding.
pub const DEGENERATE_SUM_SQUARES: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightScheme {
    Multinomial,
    IidPositive,
}

/// Resampling counts `w_1..w_n` together with their total `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    counts: Vec<f64>,
    total: f64,
    scheme: WeightScheme,
}

impl WeightVector {
    /// Multinomial counts. The total is summed in integer arithmetic.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::Domain("weight vector must have at least one entry".into()));
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Domain("resample size m must be positive".into()));
        }
        Ok(Self {
            counts: counts.iter().map(|&c| c as f64).collect(),
            total: total as f64,
            scheme: WeightScheme::Multinomial,
        })
    }

    /// Strictly positive real weights; `m` is their sum.
    pub fn from_positive(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("weight vector must have at least one entry".into()));
        }
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Domain(format!("generalized weight {bad} is not positive and finite")));
        }
        let total = values.iter().sum();
        Ok(Self {
            counts: values,
            total,
            scheme: WeightScheme::IidPositive,
        })
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &[f64] {
        &self.counts
    }

    /// Integer counts, for the multinomial scheme only.
    pub fn integer_counts(&self) -> Option<Vec<u64>> {
        match self.scheme {
            WeightScheme::Multinomial => Some(self.counts.iter().map(|&c| c as u64).collect()),
            WeightScheme::IidPositive => None,
        }
    }

    /// The resample size `m = sum w_i`.
    pub fn resample_size(&self) -> f64 {
        self.total
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    /// Coordinate-wise sum of several multinomial draws over the same indices.
    ///
    /// `B` resamples of size `m` pooled this way are one resample of size `Bm`.
    pub fn pooled(parts: &[WeightVector]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Domain("nothing to pool".into()))?;
        let mut counts = vec![0u64; first.len()];
        for part in parts {
            let ints = part
                .integer_counts()
                .ok_or_else(|| Error::Domain("only multinomial weights can be pooled".into()))?;
            if ints.len() != counts.len() {
                return Err(Error::DimensionMismatch {
                    expected: counts.len(),
                    found: ints.len(),
                });
            }
            for (acc, c) in counts.iter_mut().zip(ints) {
                *acc += c;
            }
        }
        Self::from_counts(&counts)
    }
}

/// The centered proportions `w_i/m - 1/n` with their squared and absolute sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenteredWeights {
    values: Vec<f64>,
    sum_squares: f64,
    sum_abs: f64,
}

impl CenteredWeights {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `V^2 = sum (w_i/m - 1/n)^2`.
    pub fn sum_squares(&self) -> f64 {
        self.sum_squares
    }

    /// `sqrt(V^2)`.
    pub fn norm(&self) -> f64 {
        self.sum_squares.sqrt()
    }

    /// `sum |w_i/m - 1/n|`.
    pub fn sum_abs(&self) -> f64 {
        self.sum_abs
    }

    pub fn is_degenerate(&self) -> bool {
        self.sum_squares <= DEGENERATE_SUM_SQUARES
    }

    /// `Ok(sqrt(V^2))`, or `DegenerateWeights` when all weights are equal.
    pub fn checked_norm(&self) -> Result<f64> {
        if self.is_degenerate() {
            Err(Error::DegenerateWeights)
        } else {
            Ok(self.norm())
        }
    }
}

/// Draw `multinomial(m; 1/n, ..., 1/n)` counts by sequential conditional binomials.
pub fn draw_multinomial_weights(n: usize, m: u64, rng: &mut Stream) -> Result<WeightVector> {
    if n == 0 || m == 0 {
        return Err(Error::Domain(format!("multinomial weights need n >= 1 and m >= 1 (got n={n}, m={m})")));
    }
    let mut counts = vec![0u64; n];
    let mut remaining = m;
    for (i, slot) in counts.iter_mut().enumerate() {
        if remaining == 0 {
            break;
        }
        let left = (n - i) as u64;
        if left == 1 {
            *slot = remaining;
            break;
        }
        let p = 1.0 / left as f64;
        let draw = Binomial::new(remaining, p)
            .expect("binomial parameters are in range")
            .sample(rng);
        *slot = draw;
        remaining -= draw;
    }
    WeightVector::from_counts(&counts)
}

/// A law for generalized i.i.d. positive weights.
pub trait PositiveLaw {
    fn sample(&self, rng: &mut Stream) -> f64;
}

/// Unit-exponential weights (the Bayesian bootstrap).
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitExponential;

impl PositiveLaw for UnitExponential {
    fn sample(&self, rng: &mut Stream) -> f64 {
        Exp1.sample(rng)
    }
}

/// A point mass; mostly useful for tests.
#[derive(Debug, Clone, Copy)]
pub struct Constant(f64);

impl Constant {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Self(value))
        } else {
            Err(Error::Domain(format!("constant weight law needs a positive value, got {value}")))
        }
    }
}

impl PositiveLaw for Constant {
    fn sample(&self, _rng: &mut Stream) -> f64 {
        self.0
    }
}

impl<F: Fn(&mut Stream) -> f64> PositiveLaw for F {
    fn sample(&self, rng: &mut Stream) -> f64 {
        self(rng)
    }
}

const MAX_REDRAWS: usize = 1_000;

/// Draw `n` i.i.d. weights from `law`. Nonpositive draws are rejected and redrawn.
pub fn draw_generalized_weights<L: PositiveLaw + ?Sized>(
    n: usize,
    law: &L,
    rng: &mut Stream,
) -> Result<WeightVector> {
    if n == 0 {
        return Err(Error::Domain("generalized weights need n >= 1".into()));
    }
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let mut attempts = 0;
        let v = loop {
            let v = law.sample(rng);
            if v.is_finite() && v > 0.0 {
                break v;
            }
            attempts += 1;
            if attempts >= MAX_REDRAWS {
                return Err(Error::Domain(format!(
                    "weight law produced {MAX_REDRAWS} nonpositive values in a row"
                )));
            }
        };
        values.push(v);
    }
    WeightVector::from_positive(values)
}

pub fn center(w: &WeightVector) -> CenteredWeights {
    let n = w.len() as f64;
    let m = w.resample_size();
    let inv_n = 1.0 / n;
    let values: Vec<f64> = w.counts().iter().map(|&c| c / m - inv_n).collect();
    let sum_squares = values.iter().map(|v| v * v).sum();
    let sum_abs = values.iter().map(|v| v.abs()).sum();
    CenteredWeights {
        values,
        sum_squares,
        sum_abs,
    }
}

/// `M_n = max_i (w_i/m - 1/n)^2 / V^2`, the negligibility diagnostic.
pub fn max_ratio(cw: &CenteredWeights) -> Result<f64> {
    if cw.is_degenerate() {
        return Err(Error::DegenerateWeights);
    }
    let max_sq = cw.values().iter().map(|v| v * v).fold(0.0, f64::max);
    Ok(max_sq / cw.sum_squares())
}

/// `E_w sum (w_i/m - 1/n)^2 = (1 - 1/n)/m` for multinomial weights.
pub fn expected_sum_squares(n: usize, m: u64) -> f64 {
    (1.0 - 1.0 / n as f64) / m as f64
}

/// `15 m^3/n^3 + 25 m^2/n^2 + m/n`, the sixth-moment bracket of the
/// Berry-Esseen bound.
pub fn sixth_moment_expression(n: usize, m: u64) -> f64 {
    let r = m as f64 / n as f64;
    15.0 * r.powi(3) + 25.0 * r.powi(2) + r
}

/// Draw a fresh multinomial weight vector until it is not degenerate.
///
/// Returns the weights and the number of degenerate draws that were discarded.
pub fn draw_nondegenerate(
    n: usize,
    m: u64,
    rng: &mut Stream,
    max_redraws: usize,
) -> Result<(WeightVector, CenteredWeights, usize)> {
    let mut redraws = 0;
    loop {
        let w = draw_multinomial_weights(n, m, rng)?;
        let cw = center(&w);
        if !cw.is_degenerate() {
            return Ok((w, cw, redraws));
        }
        redraws += 1;
        if redraws > max_redraws {
            return Err(Error::DegenerateWeights);
        }
    }
}

/// Uniform draw in (0, 1), excluding 0.
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}
