//! Data-generating laws used by the simulations, with their exact moments.

use std::f64::consts::{E, LN_2};
use std::fmt;
use std::str::FromStr;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::Sample;
use crate::normal;
use crate::rng::Stream;
use crate::weights::open_unit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    Poisson1,
    Lognormal01,
    Exponential1,
    Normal01,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Poisson1, Model::Lognormal01, Model::Exponential1, Model::Normal01];

    pub fn name(self) -> &'static str {
        match self {
            Model::Poisson1 => "Poisson1",
            Model::Lognormal01 => "Lognormal01",
            Model::Exponential1 => "Exponential1",
            Model::Normal01 => "Normal01",
        }
    }

    pub fn mean(self) -> f64 {
        match self {
            Model::Poisson1 | Model::Exponential1 => 1.0,
            Model::Lognormal01 => E.sqrt(),
            Model::Normal01 => 0.0,
        }
    }

    pub fn variance(self) -> f64 {
        match self {
            Model::Poisson1 | Model::Exponential1 | Model::Normal01 => 1.0,
            Model::Lognormal01 => E * (E - 1.0),
        }
    }

    pub fn cdf(self, x: f64) -> f64 {
        match self {
            Model::Poisson1 => {
                if x < 0.0 {
                    return 0.0;
                }
                let k_max = x.floor().min(200.0) as u32;
                let mut term = (-1.0f64).exp();
                let mut total = term;
                for k in 1..=k_max {
                    term /= k as f64;
                    total += term;
                }
                total.min(1.0)
            }
            Model::Lognormal01 => {
                if x <= 0.0 {
                    0.0
                } else {
                    normal::cdf(x.ln())
                }
            }
            Model::Exponential1 => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x).exp_m1()
                }
            }
            Model::Normal01 => normal::cdf(x),
        }
    }

    /// Smallest `x` with `F(x) >= 1/2`.
    pub fn median(self) -> f64 {
        match self {
            Model::Poisson1 | Model::Lognormal01 => 1.0,
            Model::Exponential1 => LN_2,
            Model::Normal01 => 0.0,
        }
    }

    /// One draw. Poisson by sequential inversion, exponential by inverse cdf,
    /// lognormal as the exponential of a normal draw.
    pub fn draw(self, rng: &mut Stream) -> f64 {
        match self {
            Model::Poisson1 => {
                let u = open_unit(rng);
                let mut k = 0u32;
                let mut term = (-1.0f64).exp();
                let mut cdf = term;
                while u > cdf && k < 200 {
                    k += 1;
                    term /= k as f64;
                    cdf += term;
                }
                k as f64
            }
            Model::Lognormal01 => {
                let z: f64 = StandardNormal.sample(rng);
                z.exp()
            }
            Model::Exponential1 => -open_unit(rng).ln(),
            Model::Normal01 => StandardNormal.sample(rng),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "poisson1" | "poisson" => Ok(Model::Poisson1),
            "lognormal01" | "lognormal" => Ok(Model::Lognormal01),
            "exponential1" | "exponential" => Ok(Model::Exponential1),
            "normal01" | "normal" => Ok(Model::Normal01),
            _ => Err(Error::InvalidConfig(format!(
                "unknown model {s:?}; expected one of Poisson1, Lognormal01, Exponential1, Normal01"
            ))),
        }
    }
}

/// `n` independent draws from `model`.
pub fn sample_model(model: Model, n: usize, rng: &mut Stream) -> Result<Sample> {
    if n == 0 {
        return Err(Error::InvalidConfig("sample size must be positive".into()));
    }
    Sample::new((0..n).map(|_| model.draw(rng)).collect())
}
