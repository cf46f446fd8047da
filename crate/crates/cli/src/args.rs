use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pivotboot::bounds::{BoundPart, RateKind};
use pivotboot::intervals::Recipe;
use pivotboot::Model;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "pivotboot", version, about = "Bootstrapped pivots, intervals and coverage experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for simulations. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Emit an aligned text rendering instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    pub text: bool,

    /// Emit JSON (the default).
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Confidence interval from a data file and one weight draw.
    Ci(CiArgs),
    /// Coverage-comparison table, one cell or the full nine-cell grid.
    Table(TableArgs),
    /// Law of the counting variable Y for B bootstrap replicates.
    Ydist(YdistArgs),
    /// Berry-Esseen type bound, or a convergence rate with --rate.
    Bound(BoundArgs),
    /// Dump multinomial weight draws.
    Weights(WeightsArgs),
    /// Monte Carlo coverage of an interval recipe.
    Coverage(CoverageArgs),
    /// Monte Carlo coverage of the refined and max-of-B bootstrap bounds.
    Refined(RefinedArgs),
    /// Re-run the manifest embedded in a report.
    Replay(ReplayArgs),
}

pub fn parse_model(s: &str) -> Result<Model, String> {
    s.parse::<Model>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Population,
    Sample,
    Finitepop,
    Superpop,
    Ecdf,
    Cdf,
}

impl Method {
    pub fn recipe(self) -> Recipe {
        match self {
            Method::Population => Recipe::GStarPopulationMean,
            Method::Sample => Recipe::TStarSampleMean,
            Method::Finitepop => Recipe::TDoubleStarFinitePopMean,
            Method::Superpop => Recipe::GDoubleStarSuperPopMean,
            Method::Ecdf => Recipe::EcdfBand,
            Method::Cdf => Recipe::CdfBand,
        }
    }
}

#[derive(Debug, Args)]
pub struct CiArgs {
    /// Data file: one number per line, '#' comments.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value = "population")]
    pub method: Method,
    /// Resample size of the weight draw (default: sample size).
    #[arg(long, conflicts_with = "weights_file")]
    pub m: Option<u64>,
    /// Use the integer counts in this file instead of drawing weights.
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    /// Evaluation point of the ecdf and cdf methods.
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long, env = "PIVOTBOOT_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// 1: weights fixed per outer cell; 2: weights and data drawn jointly.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub which: u8,
    /// Run all nine grid cells; --model and --n are ignored.
    #[arg(long)]
    pub grid: bool,
    #[arg(long, value_parser = parse_model, required_unless_present = "grid")]
    pub model: Option<Model>,
    #[arg(long, required_unless_present = "grid")]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub outer: Option<usize>,
    #[arg(long)]
    pub inner: Option<usize>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub nominal: Option<f64>,
    #[arg(long)]
    pub band: Option<f64>,
    #[arg(long = "B", alias = "b")]
    pub b: Option<usize>,
    #[arg(long, env = "PIVOTBOOT_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct YdistArgs {
    #[arg(long = "B", alias = "b")]
    pub b: usize,
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RateArg {
    #[value(alias = "GStarRate")]
    GStar,
    #[value(alias = "TStarRate")]
    TStar,
    #[value(alias = "GDoubleStarRate")]
    GDoubleStar,
    #[value(alias = "TDoubleStarRate")]
    TDoubleStar,
}

impl From<RateArg> for RateKind {
    fn from(r: RateArg) -> Self {
        match r {
            RateArg::GStar => RateKind::GStarRate,
            RateArg::TStar => RateKind::TStarRate,
            RateArg::GDoubleStar => RateKind::GDoubleStarRate,
            RateArg::TDoubleStar => RateKind::TDoubleStarRate,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PartArg {
    A,
    B,
}

impl From<PartArg> for BoundPart {
    fn from(p: PartArg) -> Self {
        match p {
            PartArg::A => BoundPart::A,
            PartArg::B => BoundPart::B,
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: u64,
    /// Resample size (default: n).
    #[arg(long)]
    pub m: Option<u64>,
    /// Report the convergence rate of this pivot instead of the bound.
    #[arg(long, value_enum)]
    pub rate: Option<RateArg>,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps1: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps2: f64,
    /// E|X - mu|^3 / sigma^(3/2).
    #[arg(long, default_value_t = 1.0)]
    pub ratio: f64,
    /// P(|S_n^2 - sigma^2| > eps1^2).
    #[arg(long, default_value_t = 0.0)]
    pub p_var_dev: f64,
    /// Berry-Esseen universal constant.
    #[arg(long, default_value_t = pivotboot::bounds::DEFAULT_BERRY_ESSEEN_CONSTANT)]
    pub c: f64,
    #[arg(long, value_enum, default_value = "a")]
    pub part: PartArg,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub n: usize,
    /// Resample size (default: n).
    #[arg(long)]
    pub m: Option<u64>,
    /// Number of independent draws.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, env = "PIVOTBOOT_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long, value_parser = parse_model)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    /// Evaluation point of the ecdf and cdf methods (default: model median).
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long, env = "PIVOTBOOT_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RefinedArgs {
    #[arg(long, value_parser = parse_model)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long = "B", alias = "b", default_value_t = 9)]
    pub b: usize,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long, env = "PIVOTBOOT_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// A report or a bare manifest emitted by any command.
    pub manifest: PathBuf,
}
