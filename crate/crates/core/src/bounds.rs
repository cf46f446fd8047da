//! Finite-sample Berry–Esseen type bound for the conditional laws of `G*` and
//! `T*`, and the rates it implies.
//!
//! The bound holds for `P_w{ sup_t |P_{X|w}(G* <= t) - Phi(t)| > delta }`
//! (part A) and for the same event with `T*` and `eps` (part B); the right-hand
//! side is identical in both parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weights::sixth_moment_expression;

/// A known admissible value of the universal Berry-Esseen constant.
pub const DEFAULT_BERRY_ESSEEN_CONSTANT: f64 = 0.56;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub n: u64,
    pub m: u64,
    pub delta: f64,
    pub eps: f64,
    pub eps1: f64,
    pub eps2: f64,
    /// `E|X - mu|^3 / sigma^{3/2}`.
    pub third_abs_moment_ratio: f64,
    /// `P_X(|S_n^2 - sigma^2| > eps1^2)`.
    pub p_var_dev: f64,
    pub c: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        Self {
            n: 100,
            m: 100,
            delta: 0.5,
            eps: 0.5,
            eps1: 0.1,
            eps2: 0.1,
            third_abs_moment_ratio: 1.0,
            p_var_dev: 0.0,
            c: DEFAULT_BERRY_ESSEEN_CONSTANT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundPart {
    /// Deviation of the conditional law of `G*` by more than `delta`.
    A,
    /// Deviation of the conditional law of `T*` by more than `eps`.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub part: BoundPart,
    pub delta_n: f64,
    /// `delta_n^-2 (1-eps)^-3 (1-1/n)^-3 (n/m^3 + n^2/m^3) {15 m^3/n^3 + 25 m^2/n^2 + m/n}`.
    pub first: f64,
    /// `eps^-2 m^2 / (1-1/n)` times the nine-term bracket.
    pub second: f64,
    pub total: f64,
    /// `delta_n` with `-eps2` in the numerator.
    pub delta_n_alt: f64,
    pub total_alt: f64,
}

fn inadmissible(msg: impl Into<String>) -> Error {
    Error::InadmissibleParams(msg.into())
}

fn check_common(p: &BoundParams) -> Result<f64> {
    let reals = [
        ("delta", p.delta),
        ("eps", p.eps),
        ("eps1", p.eps1),
        ("eps2", p.eps2),
        ("third_abs_moment_ratio", p.third_abs_moment_ratio),
        ("p_var_dev", p.p_var_dev),
        ("c", p.c),
    ];
    if let Some((name, v)) = reals.iter().find(|(_, v)| !v.is_finite()) {
        return Err(inadmissible(format!("{name} must be finite, got {v}")));
    }
    if p.delta <= 0.0 || p.eps <= 0.0 {
        return Err(inadmissible("delta > 0 and eps > 0 are required"));
    }
    if p.eps1 < 0.0 || p.eps2 < 0.0 {
        return Err(inadmissible("eps1 >= 0 and eps2 >= 0 are required"));
    }
    if !(0.0..=1.0).contains(&p.p_var_dev) {
        return Err(inadmissible(format!("p_var_dev must lie in [0, 1], got {}", p.p_var_dev)));
    }
    if p.c <= 0.0 || p.third_abs_moment_ratio <= 0.0 {
        return Err(inadmissible("c > 0 and third_abs_moment_ratio > 0 are required"));
    }
    let slack = (p.eps1 / p.eps).powi(2) + p.p_var_dev + p.eps2;
    if p.delta <= slack {
        return Err(inadmissible(format!(
            "delta > (eps1/eps)^2 + p_var_dev + eps2 violated: {} <= {slack}",
            p.delta
        )));
    }
    Ok(slack)
}

/// `(delta - (eps1/eps)^2 - p_var_dev + eps2) / (C E|X-mu|^3/sigma^{3/2})`.
pub fn delta_n(p: &BoundParams) -> Result<f64> {
    check_common(p)?;
    let num = p.delta - (p.eps1 / p.eps).powi(2) - p.p_var_dev + p.eps2;
    Ok(num / (p.c * p.third_abs_moment_ratio))
}

/// As [`delta_n`] with `-eps2`. Admissibility is exactly the positivity of
/// this numerator.
pub fn delta_n_alt(p: &BoundParams) -> Result<f64> {
    let slack = check_common(p)?;
    Ok((p.delta - slack) / (p.c * p.third_abs_moment_ratio))
}

fn first_term(p: &BoundParams, dn: f64) -> f64 {
    let n = p.n as f64;
    let m = p.m as f64;
    let q = 1.0 - 1.0 / n;
    dn.powi(-2)
        * (1.0 - p.eps).powi(-3)
        * q.powi(-3)
        * (n / m.powi(3) + n.powi(2) / m.powi(3))
        * sixth_moment_expression(p.n as usize, p.m)
}

fn second_term(p: &BoundParams) -> f64 {
    let n = p.n as f64;
    let m = p.m as f64;
    let q = 1.0 - 1.0 / n;
    let m2 = m * m;
    let m3 = m2 * m;
    let n2 = n * n;
    let n3 = n2 * n;
    let bracket = q / (n3 * m3) + q.powi(4) / m3 + (m - 1.0) * q.powi(2) / (n * m3)
        + 4.0 * (n - 1.0) / (n3 * m)
        + 1.0 / m2
        - 1.0 / (n * m2)
        + (n - 1.0) / (n3 * m3)
        + 4.0 * (n - 1.0) / (n2 * m3)
        - q.powi(2) / m2;
    p.eps.powi(-2) * m2 / q * bracket
}

/// Right-hand side of the bound, transcribed term by term.
pub fn berry_esseen_bound(p: &BoundParams, part: BoundPart) -> Result<BoundReport> {
    if p.n < 2 {
        return Err(inadmissible("n >= 2 is required: (1 - 1/n)^-3 is singular at n = 1"));
    }
    if p.m < 1 {
        return Err(inadmissible("m >= 1 is required"));
    }
    if p.eps >= 1.0 {
        return Err(inadmissible("eps < 1 is required: (1 - eps)^-3 is singular at eps = 1"));
    }
    let dn = delta_n(p)?;
    let first = first_term(p, dn);
    let second = second_term(p);
    let alt = delta_n_alt(p)?;
    Ok(BoundReport {
        part,
        delta_n: dn,
        first,
        second,
        total: first + second,
        delta_n_alt: alt,
        total_alt: first_term(p, alt) + second,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RateKind {
    GStarRate,
    TStarRate,
    GDoubleStarRate,
    TDoubleStarRate,
}

/// `max{m/n^2, 1/m}`, with the extra branch `n/m^2` for the double-star pivots.
pub fn convergence_rate(kind: RateKind, n: u64, m: u64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    let base = (m / (n * n)).max(1.0 / m);
    match kind {
        RateKind::GStarRate | RateKind::TStarRate => base,
        RateKind::GDoubleStarRate | RateKind::TDoubleStarRate => base.max(n / (m * m)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_n_examples() {
        let p = BoundParams {
            delta: 1.0,
            eps: 1.0,
            eps1: 0.0,
            eps2: 0.0,
            third_abs_moment_ratio: 1.0,
            c: 1.0,
            p_var_dev: 0.0,
            ..Default::default()
        };
        assert_eq!(delta_n(&p).unwrap(), 1.0);
        assert_eq!(delta_n_alt(&p).unwrap(), 1.0);

        let p = BoundParams { third_abs_moment_ratio: 2.0, ..Default::default() };
        assert!((delta_n(&p).unwrap() - 0.5).abs() < 1e-15);
        let alt = delta_n_alt(&p).unwrap();
        assert!((alt - 0.36 / 1.12).abs() < 1e-15);

        let p = BoundParams {
            delta: 1.0,
            eps: 1.0,
            eps1: 1.0,
            eps2: 0.0,
            p_var_dev: 0.0,
            ..Default::default()
        };
        assert!(matches!(delta_n(&p), Err(Error::InadmissibleParams(_))));
    }

    #[test]
    fn alt_reading_is_positive_and_smaller() {
        let p = BoundParams { delta: 0.3, eps1: 0.05, eps2: 0.15, ..Default::default() };
        let plus = delta_n(&p).unwrap();
        let minus = delta_n_alt(&p).unwrap();
        assert!(minus > 0.0 && minus < plus);
        assert!((plus - minus - 0.3 / 0.56).abs() < 1e-12);
    }

    #[test]
    fn rejects_singular_and_invalid_inputs() {
        let bad = [
            BoundParams { n: 1, ..Default::default() },
            BoundParams { m: 0, ..Default::default() },
            BoundParams { eps: 1.0, delta: 2.0, ..Default::default() },
            BoundParams { p_var_dev: 1.5, ..Default::default() },
            BoundParams { c: 0.0, ..Default::default() },
            BoundParams { delta: f64::NAN, ..Default::default() },
            BoundParams { eps1: -0.1, ..Default::default() },
        ];
        for p in bad {
            assert!(matches!(berry_esseen_bound(&p, BoundPart::A), Err(Error::InadmissibleParams(_))), "{p:?}");
        }
    }

    #[test]
    fn parts_share_the_right_hand_side() {
        let p = BoundParams::default();
        let a = berry_esseen_bound(&p, BoundPart::A).unwrap();
        let b = berry_esseen_bound(&p, BoundPart::B).unwrap();
        assert_eq!(a.total, b.total);
        assert_eq!(a.part, BoundPart::A);
        assert!(a.total > 0.0 && a.first > 0.0 && a.second > 0.0);
        assert!(a.total_alt > a.total);
    }

    #[test]
    fn tail_is_nonincreasing_at_m_equal_n() {
        let mut prev = f64::INFINITY;
        let mut n = 1_000u64;
        while n <= 10_000_000 {
            let p = BoundParams { n, m: n, ..Default::default() };
            let b = berry_esseen_bound(&p, BoundPart::A).unwrap().total;
            assert!(b <= prev, "n={n}");
            prev = b;
            n += n / 7 + 1;
        }
    }

    #[test]
    fn rate_examples() {
        assert_eq!(convergence_rate(RateKind::GStarRate, 100, 100), 0.01);
        assert_eq!(convergence_rate(RateKind::GDoubleStarRate, 100, 10), 1.0);
        for n in [1u64, 2, 3, 7, 10, 99, 12345, 1_000_000, 9_999_991] {
            assert_eq!(convergence_rate(RateKind::TStarRate, n, n), 1.0 / n as f64);
            assert_eq!(convergence_rate(RateKind::GStarRate, n, n), 1.0 / n as f64);
        }
    }

    #[test]
    fn double_star_rates_dominate() {
        for n in 1..60u64 {
            for m in 1..60u64 {
                let star = convergence_rate(RateKind::GStarRate, n, m);
                let double = convergence_rate(RateKind::GDoubleStarRate, n, m);
                assert!(double >= star);
                assert_eq!(double, convergence_rate(RateKind::TDoubleStarRate, n, m));
                let extra = n as f64 / (m * m) as f64;
                if extra > star {
                    assert_eq!(double, extra);
                    assert_eq!(double - star, extra - star);
                } else {
                    assert_eq!(double, star);
                }
            }
        }
    }
}
