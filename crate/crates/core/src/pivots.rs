//! Studentized and self-normalized pivots for the mean and the distribution
//! function.
//!
//! Notation used in the doc comments: `c_i = w_i/m - 1/n` are the centered
//! weights, `V^2 = sum c_i^2`, `S_n` the sample standard deviation (divisor
//! `n`) and `S*` the bootstrapped standard deviation (divisor `m`).
//!
//! | kind            | numerator                 | scale                      |
//! |-----------------|---------------------------|----------------------------|
//! | `StudentT`      | `X̄_n - mu`                | `S_n / sqrt(n)`            |
//! | `TStar`         | `sum c_i x_i`             | `S_n V`                    |
//! | `GStar`         | `sum abs(c_i) (x_i - mu)` | `S_n V`                    |
//! | `TDoubleStar`   | `sum c_i x_i`             | `S* V`                     |
//! | `GDoubleStar`   | `sum abs(c_i) (x_i - mu)` | `S* V`                     |
//! | `TTilde`        | `sum c_i x_i`             | `S* / sqrt(m)`             |
//! | `GTilde`        | `sum abs(c_i) (x_i - mu)` | `S* / sqrt(m)`             |
//! | `Alpha1Hat`     | `sum c_i 1(x_i<=x)`       | `sqrt(F_n(1-F_n)) V`       |
//! | `Alpha1HatHat`  | `sum c_i 1(x_i<=x)`       | `sqrt(F*(1-F*)) V`         |
//! | `Alpha2Hat`     | `sum abs(c_i)(1(x_i<=x) - F(x))` | `sqrt(F_n(1-F_n)) V` |
//! | `Alpha2HatHat`  | `sum abs(c_i)(1(x_i<=x) - F(x))` | `sqrt(F*(1-F*)) V`   |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{bootstrap_ecdf, checked_bootstrap_std_dev, ecdf, Sample};
use crate::weights::{CenteredWeights, WeightVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PivotKind {
    StudentT,
    TStar,
    GStar,
    TDoubleStar,
    GDoubleStar,
    TTilde,
    GTilde,
    Alpha1Hat,
    Alpha1HatHat,
    Alpha2Hat,
    Alpha2HatHat,
}

impl PivotKind {
    pub const ALL: [PivotKind; 11] = [
        PivotKind::StudentT,
        PivotKind::TStar,
        PivotKind::GStar,
        PivotKind::TDoubleStar,
        PivotKind::GDoubleStar,
        PivotKind::TTilde,
        PivotKind::GTilde,
        PivotKind::Alpha1Hat,
        PivotKind::Alpha1HatHat,
        PivotKind::Alpha2Hat,
        PivotKind::Alpha2HatHat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PivotKind::StudentT => "student_t",
            PivotKind::TStar => "t_star",
            PivotKind::GStar => "g_star",
            PivotKind::TDoubleStar => "t_double_star",
            PivotKind::GDoubleStar => "g_double_star",
            PivotKind::TTilde => "t_tilde",
            PivotKind::GTilde => "g_tilde",
            PivotKind::Alpha1Hat => "alpha1_hat",
            PivotKind::Alpha1HatHat => "alpha1_hat_hat",
            PivotKind::Alpha2Hat => "alpha2_hat",
            PivotKind::Alpha2HatHat => "alpha2_hat_hat",
        }
    }

    /// Whether the pivot is centered at a caller-supplied truth (`mu` or `F(x)`).
    pub fn needs_truth(self) -> bool {
        matches!(
            self,
            PivotKind::StudentT
                | PivotKind::GStar
                | PivotKind::GDoubleStar
                | PivotKind::GTilde
                | PivotKind::Alpha2Hat
                | PivotKind::Alpha2HatHat
        )
    }

    pub fn is_empirical(self) -> bool {
        matches!(
            self,
            PivotKind::Alpha1Hat | PivotKind::Alpha1HatHat | PivotKind::Alpha2Hat | PivotKind::Alpha2HatHat
        )
    }
}

impl std::fmt::Display for PivotKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Weight-norm factor of the empirical pivots.
///
/// `InverseSqrtM` replaces `V` by `1/sqrt(m)`, which is asymptotically
/// equivalent when `m = o(n^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EmpiricalScale {
    #[default]
    WeightNorm,
    InverseSqrtM,
}

fn check_len(s: &Sample, cw: &CenteredWeights) -> Result<()> {
    if s.len() == cw.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: s.len(),
            found: cw.len(),
        })
    }
}

fn signed_sum(s: &Sample, cw: &CenteredWeights) -> f64 {
    s.values().iter().zip(cw.values()).map(|(x, c)| c * x).sum()
}

fn abs_sum(s: &Sample, cw: &CenteredWeights, mu: f64) -> f64 {
    s.values()
        .iter()
        .zip(cw.values())
        .map(|(x, c)| c.abs() * (x - mu))
        .sum()
}

/// `T_n(X - mu) = (X̄_n - mu) / (S_n / sqrt(n))`; `mu = 0` gives `T_n(X)`.
pub fn student_t(s: &Sample, mu: f64) -> Result<f64> {
    if s.len() < 2 {
        return Err(Error::ZeroVariance);
    }
    let sd = s.checked_std_dev()?;
    Ok((s.mean() - mu) / (sd / (s.len() as f64).sqrt()))
}

/// `G* = sum |c_i| (x_i - mu) / (S_n V)`, the randomized pivot for the population mean.
pub fn g_star(s: &Sample, cw: &CenteredWeights, mu: f64) -> Result<f64> {
    check_len(s, cw)?;
    let sd = s.checked_std_dev()?;
    let v = cw.checked_norm()?;
    Ok(abs_sum(s, cw, mu) / (sd * v))
}

/// `T* = sum c_i x_i / (S_n V) = (X̄*_m - X̄_n) / (S_n V)`.
pub fn t_star(s: &Sample, cw: &CenteredWeights) -> Result<f64> {
    check_len(s, cw)?;
    let sd = s.checked_std_dev()?;
    let v = cw.checked_norm()?;
    Ok(signed_sum(s, cw) / (sd * v))
}

/// The pivots that studentize with the bootstrapped standard deviation `S*`.
pub fn starred_variant(
    kind: PivotKind,
    s: &Sample,
    w: &WeightVector,
    cw: &CenteredWeights,
    mu: Option<f64>,
) -> Result<f64> {
    check_len(s, cw)?;
    let g_form = match kind {
        PivotKind::TDoubleStar | PivotKind::TTilde => false,
        PivotKind::GDoubleStar | PivotKind::GTilde => true,
        other => {
            return Err(Error::Domain(format!("{other} is not a bootstrapped-variance pivot")));
        }
    };
    let numerator = match (g_form, mu) {
        (true, Some(mu)) => abs_sum(s, cw, mu),
        (false, None) => signed_sum(s, cw),
        (true, None) => {
            return Err(Error::MuArity {
                kind: kind.name(),
                requirement: "requires mu",
            })
        }
        (false, Some(_)) => {
            return Err(Error::MuArity {
                kind: kind.name(),
                requirement: "does not take mu",
            })
        }
    };
    let sd_star = checked_bootstrap_std_dev(s, w)?;
    let scale = match kind {
        PivotKind::TDoubleStar | PivotKind::GDoubleStar => sd_star * cw.checked_norm()?,
        _ => sd_star / w.resample_size().sqrt(),
    };
    Ok(numerator / scale)
}

/// Pointwise pivots for the empirical (`Alpha1*`) and theoretical (`Alpha2*`)
/// distribution functions at `x`.
pub fn empirical_pivot(
    kind: PivotKind,
    s: &Sample,
    w: &WeightVector,
    cw: &CenteredWeights,
    x: f64,
    f_true: Option<f64>,
    scale: EmpiricalScale,
) -> Result<f64> {
    check_len(s, cw)?;
    let (second, hat_hat) = match kind {
        PivotKind::Alpha1Hat => (false, false),
        PivotKind::Alpha1HatHat => (false, true),
        PivotKind::Alpha2Hat => (true, false),
        PivotKind::Alpha2HatHat => (true, true),
        other => return Err(Error::Domain(format!("{other} is not an empirical-process pivot"))),
    };
    let ind = s.indicators(x);
    let numerator = match (second, f_true) {
        (false, None) => signed_sum(&ind, cw),
        (true, Some(f)) => {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::Domain(format!("F(x) must lie in (0, 1), got {f}")));
            }
            abs_sum(&ind, cw, f)
        }
        (true, None) => {
            return Err(Error::MuArity {
                kind: kind.name(),
                requirement: "requires F(x)",
            })
        }
        (false, Some(_)) => {
            return Err(Error::MuArity {
                kind: kind.name(),
                requirement: "does not take F(x)",
            })
        }
    };
    let p = if hat_hat {
        bootstrap_ecdf(s, w, x)?
    } else {
        ecdf(s, x)
    };
    let spread = p * (1.0 - p);
    if spread <= 0.0 {
        return Err(Error::DegenerateScale);
    }
    let norm = match scale {
        EmpiricalScale::WeightNorm => cw.checked_norm()?,
        EmpiricalScale::InverseSqrtM => {
            cw.checked_norm()?;
            1.0 / w.resample_size().sqrt()
        }
    };
    Ok(numerator / (spread.sqrt() * norm))
}

/// Everything a pivot might need, bundled for dispatch by [`PivotKind`].
#[derive(Debug, Clone, Copy)]
pub struct PivotInputs<'a> {
    pub sample: &'a Sample,
    pub weights: &'a WeightVector,
    pub centered: &'a CenteredWeights,
    /// `mu` for the mean pivots, `F(x)` for `Alpha2*`.
    pub truth: Option<f64>,
    /// Evaluation point of the empirical pivots.
    pub x: Option<f64>,
    pub scale: EmpiricalScale,
}

/// Evaluate any pivot kind.
pub fn evaluate(kind: PivotKind, inp: &PivotInputs<'_>) -> Result<f64> {
    let truth = || {
        inp.truth.ok_or(Error::MuArity {
            kind: kind.name(),
            requirement: "requires a truth value",
        })
    };
    match kind {
        PivotKind::StudentT => student_t(inp.sample, truth()?),
        PivotKind::TStar => t_star(inp.sample, inp.centered),
        PivotKind::GStar => g_star(inp.sample, inp.centered, truth()?),
        PivotKind::TDoubleStar | PivotKind::TTilde => {
            starred_variant(kind, inp.sample, inp.weights, inp.centered, None)
        }
        PivotKind::GDoubleStar | PivotKind::GTilde => {
            starred_variant(kind, inp.sample, inp.weights, inp.centered, Some(truth()?))
        }
        PivotKind::Alpha1Hat | PivotKind::Alpha1HatHat | PivotKind::Alpha2Hat | PivotKind::Alpha2HatHat => {
            let x = inp
                .x
                .ok_or_else(|| Error::Domain(format!("{kind} needs an evaluation point x")))?;
            let f = if kind.needs_truth() { Some(truth()?) } else { None };
            empirical_pivot(kind, inp.sample, inp.weights, inp.centered, x, f, inp.scale)
        }
    }
}
