//! Sample moments, bootstrapped moments and the weighted estimator of the mean.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::{CenteredWeights, WeightVector};

/// Observations with their mean and (divisor-n) variance cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    mean: f64,
    variance: f64,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("a sample needs at least one observation".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite observation {bad}")));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Ok(Self {
            values,
            mean,
            variance,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `X̄_n`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `S_n^2 = sum (x_i - X̄_n)^2 / n`.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    /// `S_n`, or `ZeroVariance` when the observations are (numerically) constant.
    pub fn checked_std_dev(&self) -> Result<f64> {
        let scale = self.values.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let floor = 8.0 * f64::EPSILON * scale;
        if self.variance <= floor * floor {
            Err(Error::ZeroVariance)
        } else {
            Ok(self.std_dev())
        }
    }

    /// The sample of indicators `1(x_i <= x)`.
    pub fn indicators(&self, x: f64) -> Sample {
        let values = self
            .values
            .iter()
            .map(|&v| if v <= x { 1.0 } else { 0.0 })
            .collect();
        Sample::new(values).expect("indicators are finite and nonempty")
    }

    /// A copy with every observation mapped through `f`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Sample> {
        Sample::new(self.values.iter().map(|&v| f(v)).collect())
    }
}

fn check_len(s: &Sample, len: usize) -> Result<()> {
    if s.len() == len {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: s.len(),
            found: len,
        })
    }
}

/// `X̄*_m = sum w_i x_i / m`.
pub fn bootstrap_mean(s: &Sample, w: &WeightVector) -> Result<f64> {
    check_len(s, w.len())?;
    let weighted: f64 = s.values().iter().zip(w.counts()).map(|(x, c)| c * x).sum();
    Ok(weighted / w.resample_size())
}

/// `S*^2_m = sum w_i (x_i - X̄*_m)^2 / m`.
pub fn bootstrap_variance(s: &Sample, w: &WeightVector) -> Result<f64> {
    let mean = bootstrap_mean(s, w)?;
    let ss: f64 = s
        .values()
        .iter()
        .zip(w.counts())
        .map(|(x, c)| c * (x - mean).powi(2))
        .sum();
    Ok(ss / w.resample_size())
}

/// `S*_m`, or `ZeroBootstrapVariance` when the resample is constant.
pub(crate) fn checked_bootstrap_std_dev(s: &Sample, w: &WeightVector) -> Result<f64> {
    let var = bootstrap_variance(s, w)?;
    let scale = s.values().iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let floor = 8.0 * f64::EPSILON * scale;
    if var <= floor * floor {
        Err(Error::ZeroBootstrapVariance)
    } else {
        Ok(var.sqrt())
    }
}

/// `X̄*_{n,m} = sum |c_i| x_i / sum |c_i|`, unbiased for the population mean
/// given the weights.
pub fn weighted_mean_estimator(s: &Sample, cw: &CenteredWeights) -> Result<f64> {
    check_len(s, cw.len())?;
    if cw.sum_abs() <= 0.0 || cw.is_degenerate() {
        return Err(Error::DegenerateWeights);
    }
    let num: f64 = s
        .values()
        .iter()
        .zip(cw.values())
        .map(|(x, c)| c.abs() * x)
        .sum();
    Ok(num / cw.sum_abs())
}

/// `F_n(x) = #{x_i <= x} / n`.
pub fn ecdf(s: &Sample, x: f64) -> f64 {
    let hits = s.values().iter().filter(|&&v| v <= x).count();
    hits as f64 / s.len() as f64
}

/// `F*(x) = sum (w_i/m) 1(x_i <= x)`.
pub fn bootstrap_ecdf(s: &Sample, w: &WeightVector, x: f64) -> Result<f64> {
    check_len(s, w.len())?;
    let mass: f64 = s
        .values()
        .iter()
        .zip(w.counts())
        .filter(|(v, _)| **v <= x)
        .map(|(_, c)| c)
        .sum();
    // Integer counts make this exact at the ends: all mass gives exactly 1.
    Ok((mass / w.resample_size()).clamp(0.0, 1.0))
}
