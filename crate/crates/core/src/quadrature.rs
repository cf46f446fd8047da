//! Globally adaptive Gauss–Kronrod (7, 15) quadrature on a finite interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integration interval and stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub lo: f64,
    pub hi: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
}

impl Default for QuadratureSpec {
    /// `[-12, 12]` is wide enough for integrands carrying a standard normal
    /// density factor: the discarded mass is below `1e-32`. The tolerance is
    /// purely relative so that tiny orthant probabilities keep full accuracy.
    fn default() -> Self {
        Self {
            lo: -12.0,
            hi: 12.0,
            abs_tol: 0.0,
            rel_tol: 1e-13,
            max_segments: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub segments: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[spec.lo, spec.hi]`, bisecting the segment with the
/// largest error estimate until the summed estimate meets the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<QuadratureResult> {
    if !(spec.lo.is_finite() && spec.hi.is_finite() && spec.lo < spec.hi) {
        return Err(Error::Domain(format!(
            "quadrature needs finite lo < hi, got [{}, {}]",
            spec.lo, spec.hi
        )));
    }
    if spec.max_segments == 0 {
        return Err(Error::Domain("quadrature needs max_segments >= 1".into()));
    }
    let mut segments = vec![kronrod(&f, spec.lo, spec.hi)];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() {
            return Err(Error::Domain("integrand produced a non-finite value".into()));
        }
        let tol = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= tol || segments.len() >= spec.max_segments {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                segments: segments.len(),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let Segment { a, b, .. } = segments.swap_remove(worst);
        let mid = 0.5 * (a + b);
        segments.push(kronrod(&f, a, mid));
        segments.push(kronrod(&f, mid, b));
    }
}
