//! Resolved configurations, the run manifest and the report envelope.

use std::collections::hash_map::RandomState;
use std::hash::{BuildHasher, Hasher};
use std::time::{SystemTime, UNIX_EPOCH};

use pivotboot::bounds::{BoundParams, BoundPart, BoundReport, RateKind};
use pivotboot::intervals::Interval;
use pivotboot::simulation::{CoverageConfig, CoverageReport, RefinedConfig, SimConfig};
use pivotboot::Model;
use serde::{Deserialize, Serialize};

use crate::args::Method;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSource {
    Draw { m: u64 },
    Given { counts: Vec<u64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiConfig {
    pub data_source: String,
    pub data: Vec<f64>,
    pub weights: WeightSource,
    pub method: Method,
    pub alpha: f64,
    pub x: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableConfig {
    pub which: u8,
    pub cells: Vec<SimConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YdistConfig {
    pub b: usize,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundConfig {
    Bound { params: BoundParams, part: BoundPart },
    Rate { kind: RateKind, n: u64, m: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightsConfig {
    pub n: usize,
    pub m: u64,
    pub count: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandConfig {
    Ci(CiConfig),
    Table(TableConfig),
    Ydist(YdistConfig),
    Bound(BoundConfig),
    Weights(WeightsConfig),
    Coverage(CoverageConfig),
    Refined(RefinedConfig),
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::Ci(_) => "ci",
            CommandConfig::Table(_) => "table",
            CommandConfig::Ydist(_) => "ydist",
            CommandConfig::Bound(_) => "bound",
            CommandConfig::Weights(_) => "weights",
            CommandConfig::Coverage(_) => "coverage",
            CommandConfig::Refined(_) => "refined",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            CommandConfig::Ci(c) => c.seed,
            CommandConfig::Table(t) => t.cells.first().map(|c| c.seed),
            CommandConfig::Ydist(_) | CommandConfig::Bound(_) => None,
            CommandConfig::Weights(w) => Some(w.seed),
            CommandConfig::Coverage(c) => Some(c.seed),
            CommandConfig::Refined(r) => Some(r.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: CommandConfig,
    pub seed: Option<u64>,
    pub version: String,
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(config: CommandConfig) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: config.name().to_string(),
            seed: config.seed(),
            config,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix,
        }
    }
}

/// A seed for runs that did not specify one; it is recorded in the manifest.
pub fn fresh_seed() -> u64 {
    let mut h = RandomState::new().build_hasher();
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    h.write_u128(nanos);
    h.write_u32(std::process::id());
    h.finish()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CiOutput {
    pub n: usize,
    pub weights: Vec<u64>,
    /// Degenerate weight draws discarded before this one.
    pub redraws: usize,
    pub interval: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableCell {
    pub distribution: Model,
    pub n: usize,
    pub m: u64,
    #[serde(rename = "emp_G_star")]
    pub emp_g_star: f64,
    #[serde(rename = "emp_T")]
    pub emp_t: f64,
    #[serde(rename = "emp_Boot", skip_serializing_if = "Option::is_none", default)]
    pub emp_boot: Option<f64>,
    pub report: CoverageReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableOutput {
    pub which: u8,
    pub cells: Vec<TableCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YdistOutput {
    pub b: usize,
    /// Quadrature values.
    pub pmf: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub cumulative: Vec<f64>,
    /// `P(Y >= 1)`, the level of the max-of-B bound.
    pub max_coverage: f64,
    pub alpha: Option<f64>,
    pub y: Option<usize>,
    /// `P(Y <= y)`.
    pub level: Option<f64>,
    /// Level of the max-of-9 bound obtained by a numerical multivariate
    /// normal integration, for comparison with the exact 0.9.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reference_level: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundOutput {
    Bound(BoundReport),
    Rate { kind: RateKind, n: u64, m: u64, rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDraw {
    pub counts: Vec<u64>,
    pub centered: Vec<f64>,
    pub sum_squares: f64,
    pub sum_abs: f64,
    /// `max c_i^2 / V^2`; absent for a degenerate draw.
    pub max_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsOutput {
    pub draws: Vec<WeightDraw>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Ci(CiOutput),
    Table(TableOutput),
    Ydist(YdistOutput),
    Bound(BoundOutput),
    Weights(WeightsOutput),
    Coverage(CoverageReport),
    Refined(CoverageReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub manifest: RunManifest,
    pub result: Output,
}

#[derive(Deserialize)]
struct Envelope {
    manifest: RunManifest,
}

/// Accepts either a full report or a bare manifest.
pub fn parse_manifest(text: &str) -> Result<RunManifest, serde_json::Error> {
    serde_json::from_str::<Envelope>(text)
        .map(|e| e.manifest)
        .or_else(|_| serde_json::from_str::<RunManifest>(text))
}
