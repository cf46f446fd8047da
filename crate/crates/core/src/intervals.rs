//! Confidence intervals obtained by inverting the bootstrapped pivots.
//!
//! Every two-sided interval has the form `center ± z_{α/2} · scale`, where
//! `z_{α/2}` is the upper `α/2` standard normal quantile. Membership of the
//! target is therefore equivalent to `|pivot| <= z_{α/2}` for the matching
//! pivot.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{
    bootstrap_ecdf, bootstrap_mean, checked_bootstrap_std_dev, weighted_mean_estimator, Sample,
};
use crate::normal;
use crate::weights::{CenteredWeights, WeightVector};

/// The quantity an interval is meant to cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Target {
    PopulationMean,
    SampleMean,
    FinitePopMean,
    SuperPopMean,
    EcdfValue,
    CdfValue,
}

/// Which construction produced an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Recipe {
    /// Weighted estimator ± z S_n V / sum|c| (inverts G*).
    GStarPopulationMean,
    /// Bootstrap mean ± z S_n V (inverts T*).
    TStarSampleMean,
    /// Bootstrap mean ± z S* V (inverts T**).
    TDoubleStarFinitePopMean,
    /// Weighted estimator ± z S* V / sum|c| (inverts G**).
    GDoubleStarSuperPopMean,
    /// F* ± z sqrt(F*(1-F*)) V.
    EcdfBand,
    /// F* ± z sqrt(F*(1-F*)) V / sum|c|.
    CdfBand,
}

impl Recipe {
    pub fn id(self) -> &'static str {
        match self {
            Recipe::GStarPopulationMean => "g_star_population_mean",
            Recipe::TStarSampleMean => "t_star_sample_mean",
            Recipe::TDoubleStarFinitePopMean => "t_double_star_finite_pop_mean",
            Recipe::GDoubleStarSuperPopMean => "g_double_star_super_pop_mean",
            Recipe::EcdfBand => "ecdf_band",
            Recipe::CdfBand => "cdf_band",
        }
    }

    pub fn target(self) -> Target {
        match self {
            Recipe::GStarPopulationMean => Target::PopulationMean,
            Recipe::TStarSampleMean => Target::SampleMean,
            Recipe::TDoubleStarFinitePopMean => Target::FinitePopMean,
            Recipe::GDoubleStarSuperPopMean => Target::SuperPopMean,
            Recipe::EcdfBand => Target::EcdfValue,
            Recipe::CdfBand => Target::CdfValue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Nominal coverage `1 - α`.
    pub level: f64,
    pub target: Target,
    pub recipe: Recipe,
    /// Set when a bound was clamped into `[0, 1]`.
    pub clamped: bool,
}

impl Interval {
    fn symmetric(center: f64, half_width: f64, alpha: f64, recipe: Recipe) -> Self {
        Self {
            lo: center - half_width,
            hi: center + half_width,
            level: 1.0 - alpha,
            target: recipe.target(),
            recipe,
            clamped: false,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lo <= value && value <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// `z` with `Phi(z) = p`.
pub fn normal_quantile(p: f64) -> Result<f64> {
    normal::quantile(p)
}

/// `z_{α/2}`, the upper `α/2` point of the standard normal.
pub fn two_sided_z(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    normal_quantile(1.0 - alpha / 2.0)
}

/// Interval for the population mean `μ` built from `G*`.
pub fn ci_population_mean(s: &Sample, cw: &CenteredWeights, alpha: f64) -> Result<Interval> {
    let z = two_sided_z(alpha)?;
    let sd = s.checked_std_dev()?;
    let v = cw.checked_norm()?;
    let center = weighted_mean_estimator(s, cw)?;
    let half = z * sd * v / cw.sum_abs();
    Ok(Interval::symmetric(center, half, alpha, Recipe::GStarPopulationMean))
}

/// Confidence set for the sample mean `X̄_n` built from `T*`.
pub fn ci_sample_mean(s: &Sample, w: &WeightVector, cw: &CenteredWeights, alpha: f64) -> Result<Interval> {
    let z = two_sided_z(alpha)?;
    let center = bootstrap_mean(s, w)?;
    let sd = s.checked_std_dev()?;
    let v = cw.checked_norm()?;
    Ok(Interval::symmetric(center, z * sd * v, alpha, Recipe::TStarSampleMean))
}

/// Confidence set for the finite-population mean `X̄_N`: as [`ci_sample_mean`]
/// with `S*` in place of `S_n`.
pub fn ci_finite_pop_mean(
    s: &Sample,
    w: &WeightVector,
    cw: &CenteredWeights,
    alpha: f64,
) -> Result<Interval> {
    let z = two_sided_z(alpha)?;
    let center = bootstrap_mean(s, w)?;
    let sd_star = checked_bootstrap_std_dev(s, w)?;
    let v = cw.checked_norm()?;
    Ok(Interval::symmetric(
        center,
        z * sd_star * v,
        alpha,
        Recipe::TDoubleStarFinitePopMean,
    ))
}

/// Interval for the super-population mean `μ`: as [`ci_population_mean`]
/// with `S*` in place of `S_n`.
pub fn ci_superpop_mean(
    s: &Sample,
    w: &WeightVector,
    cw: &CenteredWeights,
    alpha: f64,
) -> Result<Interval> {
    let z = two_sided_z(alpha)?;
    let sd_star = checked_bootstrap_std_dev(s, w)?;
    let v = cw.checked_norm()?;
    let center = weighted_mean_estimator(s, cw)?;
    Ok(Interval::symmetric(
        center,
        z * sd_star * v / cw.sum_abs(),
        alpha,
        Recipe::GDoubleStarSuperPopMean,
    ))
}

/// Pointwise band for `F_n(x)` (`EcdfValue`) or `F(x)` (`CdfValue`), centered
/// at the bootstrapped empirical distribution `F*(x)` and clamped into `[0, 1]`.
pub fn ci_ecdf(
    s: &Sample,
    w: &WeightVector,
    cw: &CenteredWeights,
    x: f64,
    alpha: f64,
    target: Target,
) -> Result<Interval> {
    let recipe = match target {
        Target::EcdfValue => Recipe::EcdfBand,
        Target::CdfValue => Recipe::CdfBand,
        other => {
            return Err(Error::Domain(format!(
                "ci_ecdf covers EcdfValue or CdfValue, not {other:?}"
            )))
        }
    };
    let z = two_sided_z(alpha)?;
    let v = cw.checked_norm()?;
    let f_star = bootstrap_ecdf(s, w, x)?;
    let spread = f_star * (1.0 - f_star);
    if spread <= 0.0 {
        return Err(Error::DegenerateScale);
    }
    let mut half = z * spread.sqrt() * v;
    if recipe == Recipe::CdfBand {
        half /= cw.sum_abs();
    }
    let mut iv = Interval::symmetric(f_star, half, alpha, recipe);
    if iv.lo < 0.0 {
        iv.lo = 0.0;
        iv.clamped = true;
    }
    if iv.hi > 1.0 {
        iv.hi = 1.0;
        iv.clamped = true;
    }
    Ok(iv)
}
