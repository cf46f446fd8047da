//! Bootstrap cutoffs from `B` independent replicates of `T*`.
//!
//! Let `Y` count the replicates lying below the studentized statistic. In the
//! limit the `B` differences form an exchangeable Gaussian vector with
//! correlation `1/2`, `Z_b = (Z_0 + U_b)/sqrt(2)`, so every sign pattern with
//! `l` negatives has probability
//!
//! ```text
//! P(Z_1<0,..,Z_l<0, Z_{l+1}>0,..,Z_B>0) = int phi(z) Phi(-z)^l Phi(z)^(B-l) dz
//!                                       = l! (B-l)! / (B+1)!
//! ```
//!
//! and `Y` is uniform on `{0, .., B}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::Sample;
use crate::normal;
use crate::pivots::t_star;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::rng::StreamKey;
use crate::weights::draw_nondegenerate;

/// Degenerate weight draws tolerated per replicate before giving up.
pub const MAX_REDRAWS: usize = 100;

// Slack for floating point noise in (1 - alpha)(B + 1).
const RANK_SLACK: f64 = 1e-9;

fn binomial(b: usize, l: usize) -> f64 {
    let l = l.min(b - l);
    (0..l).fold(1.0, |acc, i| acc * (b - i) as f64 / (i + 1) as f64)
}

/// `l! (B-l)! / (B+1)!`.
pub fn orthant_closed_form(b: usize, l: usize) -> Result<f64> {
    if l > b {
        return Err(Error::Domain(format!("need 0 <= l <= B, got l={l}, B={b}")));
    }
    Ok(1.0 / ((b + 1) as f64 * binomial(b, l)))
}

/// Orthant probability of the equicorrelated (`rho = 1/2`) Gaussian vector
/// with the first `l` coordinates negative and the rest positive, by
/// quadrature of the one-dimensional reduction.
pub fn orthant_probability(b: usize, l: usize, quadrature: &QuadratureSpec) -> Result<f64> {
    if b == 0 || l > b {
        return Err(Error::Domain(format!("need B >= 1 and 0 <= l <= B, got l={l}, B={b}")));
    }
    let (neg, pos) = (l as i32, (b - l) as i32);
    let r = integrate(
        |z| normal::pdf(z) * normal::sf(z).powi(neg) * normal::cdf(z).powi(pos),
        quadrature,
    )?;
    Ok(r.value)
}

/// Law of the counting variable `Y` over `{0, .., B}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YDistribution {
    pub b: usize,
    /// `C(B, l)` times the quadrature orthant probability.
    pub pmf: Vec<f64>,
    /// `1 / (B + 1)` for every `l`.
    pub closed_form: Vec<f64>,
}

impl YDistribution {
    pub fn cumulative(&self) -> Vec<f64> {
        self.pmf
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect()
    }

    /// `P(Y >= 1) = 1 - pmf[0]`, the nominal level of the max-of-`B` bound.
    pub fn max_coverage(&self) -> f64 {
        1.0 - self.pmf[0]
    }

    pub fn max_abs_deviation(&self) -> f64 {
        self.pmf
            .iter()
            .zip(&self.closed_form)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn y_distribution(b: usize) -> Result<YDistribution> {
    if b < 2 {
        return Err(Error::Domain(format!("B must be at least 2, got {b}")));
    }
    let spec = QuadratureSpec::default();
    let pmf = (0..=b)
        .map(|l| Ok(binomial(b, l) * orthant_probability(b, l, &spec)?))
        .collect::<Result<Vec<_>>>()?;
    let closed_form = vec![1.0 / (b + 1) as f64; b + 1];
    Ok(YDistribution { b, pmf, closed_form })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Smallest `y` with `P(Y <= y) >= 1 - alpha`, i.e. `ceil((1-alpha)(B+1)) - 1`.
pub fn y_quantile(b: usize, alpha: f64) -> Result<usize> {
    if b < 2 {
        return Err(Error::Domain(format!("B must be at least 2, got {b}")));
    }
    check_alpha(alpha)?;
    let need = ((1.0 - alpha) * (b + 1) as f64 - RANK_SLACK).ceil();
    Ok((need as usize).clamp(1, b + 1) - 1)
}

/// The rank `nu = (B+1)(1-alpha)` of the classical percentile bound, counted
/// from the smallest replicate.
pub fn classical_cutoff_rank(b: usize, alpha: f64) -> Result<usize> {
    if b < 2 {
        return Err(Error::Domain(format!("B must be at least 2, got {b}")));
    }
    check_alpha(alpha)?;
    let rank = (b + 1) as f64 * (1.0 - alpha);
    let rounded = rank.round();
    if (rank - rounded).abs() > RANK_SLACK || rounded < 1.0 || rounded > b as f64 {
        return Err(Error::NonIntegerRank { rank });
    }
    Ok(rounded as usize)
}

/// `T*` evaluated on `B` independent weight draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateSet {
    pub values: Vec<f64>,
    pub m: u64,
    /// Degenerate weight draws discarded across all replicates.
    pub redraws: usize,
}

impl ReplicateSet {
    pub fn new(values: Vec<f64>, m: u64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Domain(format!("need at least 2 replicates, got {}", values.len())));
        }
        Ok(Self { values, m, redraws: 0 })
    }

    pub fn b(&self) -> usize {
        self.values.len()
    }

    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// The `rank`-th smallest replicate, 1-based.
    pub fn order_statistic(&self, rank: usize) -> Result<f64> {
        if rank == 0 || rank > self.b() {
            return Err(Error::Domain(format!("rank {rank} outside 1..={}", self.b())));
        }
        Ok(self.sorted()[rank - 1])
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Draws `B` replicates of `T*`, replicate `b` from the sub-stream `key.at(b)`.
pub fn draw_replicates(s: &Sample, b: usize, m: u64, key: StreamKey) -> Result<ReplicateSet> {
    s.checked_std_dev()?;
    let mut values = Vec::with_capacity(b);
    let mut redraws = 0;
    for i in 0..b {
        let mut rng = key.at(i as u64).stream();
        let (_, cw, r) = draw_nondegenerate(s.len(), m, &mut rng, MAX_REDRAWS)?;
        redraws += r;
        values.push(t_star(s, &cw)?);
    }
    let mut set = ReplicateSet::new(values, m)?;
    set.redraws = redraws;
    Ok(set)
}

/// Upper bound `T*[y]` for the studentized statistic.
///
/// `T_n <= T*_(k)` (the `k`-th smallest) exactly when fewer than `k`
/// replicates fall below `T_n`, i.e. `Y <= k - 1`. The rank is therefore
/// `k = y + 1`, capped at `B`; for `B = 9`, `alpha = 0.1` it is the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedCutoff {
    pub b: usize,
    pub alpha: f64,
    pub y: usize,
    pub rank: usize,
}

impl RefinedCutoff {
    pub fn new(b: usize, alpha: f64) -> Result<Self> {
        let y = y_quantile(b, alpha)?;
        Ok(Self { b, alpha, y, rank: (y + 1).min(b) })
    }

    pub fn cutoff(&self, reps: &ReplicateSet) -> Result<f64> {
        if reps.b() != self.b {
            return Err(Error::DimensionMismatch { expected: self.b, found: reps.b() });
        }
        reps.order_statistic(self.rank)
    }

    pub fn contains(&self, t_value: f64, reps: &ReplicateSet) -> Result<bool> {
        Ok(t_value <= self.cutoff(reps)?)
    }
}

pub fn refined_contains(t_value: f64, reps: &ReplicateSet, alpha: f64) -> Result<bool> {
    RefinedCutoff::new(reps.b(), alpha)?.contains(t_value, reps)
}
