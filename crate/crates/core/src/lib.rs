//! Bootstrapped pivots built from multinomial resampling weights.
//!
//! The crate evaluates randomized pivots for the population mean, the sample
//! mean and the distribution function, inverts them into confidence
//! intervals, computes the counting-variable law behind multi-replicate
//! bootstrap cutoffs, evaluates a finite-sample Berry–Esseen type bound, and
//! runs reproducible Monte Carlo coverage experiments.

pub mod bounds;
pub mod error;
pub mod estimators;
pub mod intervals;
pub mod models;
pub mod multi_bootstrap;
pub mod normal;
pub mod pivots;
pub mod quadrature;
pub mod rng;
pub mod simulation;
pub mod weights;

pub use error::{Error, Result};
pub use estimators::Sample;
pub use models::Model;
pub use pivots::PivotKind;
pub use weights::{CenteredWeights, WeightVector};
