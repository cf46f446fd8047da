//! Turning parsed arguments into resolved configurations, and running them.

use pivotboot::bounds::{berry_esseen_bound, convergence_rate, BoundParams};
use pivotboot::intervals::{
    ci_ecdf, ci_finite_pop_mean, ci_population_mean, ci_sample_mean, ci_superpop_mean, Interval, Target,
};
use pivotboot::multi_bootstrap::{y_distribution, y_quantile, MAX_REDRAWS};
use pivotboot::rng::{Purpose, StreamKey};
use pivotboot::simulation::{
    run_coverage, run_refined_coverage, run_table, CoverageConfig, RefinedConfig, SimConfig, TableKind,
    STAT_BOOT, STAT_G_STAR, STAT_T,
};
use pivotboot::weights::{center, draw_multinomial_weights, max_ratio, WeightVector};
use pivotboot::{CenteredWeights, Error, Sample};

use crate::args::{BoundArgs, CiArgs, CoverageArgs, Method, RefinedArgs, TableArgs, WeightsArgs, YdistArgs};
use crate::data::{read_counts, read_values};
use crate::error::CliError;
use crate::manifest::{
    fresh_seed, BoundConfig, BoundOutput, CiConfig, CiOutput, CommandConfig, Output, TableCell, TableConfig,
    TableOutput, WeightDraw, WeightSource, WeightsConfig, WeightsOutput, YdistConfig, YdistOutput,
};

const REFERENCE_LEVEL_B9: f64 = 0.9000169;

pub fn resolve_ci(a: &CiArgs) -> Result<CommandConfig, CliError> {
    let data = read_values(&a.data)?;
    let weights = match &a.weights_file {
        Some(path) => WeightSource::Given { counts: read_counts(path)? },
        None => WeightSource::Draw { m: a.m.unwrap_or(data.len() as u64) },
    };
    let seed = match weights {
        WeightSource::Draw { .. } => Some(a.seed.unwrap_or_else(fresh_seed)),
        WeightSource::Given { .. } => None,
    };
    Ok(CommandConfig::Ci(CiConfig {
        data_source: a.data.display().to_string(),
        data,
        weights,
        method: a.method,
        alpha: a.alpha,
        x: a.x,
        seed,
    }))
}

pub fn resolve_table(a: &TableArgs) -> Result<CommandConfig, CliError> {
    let kind = TableKind::from_number(a.which)?;
    let seed = a.seed.unwrap_or_else(fresh_seed);
    let cells: Vec<(pivotboot::Model, usize)> = if a.grid {
        kind.grid()
    } else {
        match (a.model, a.n) {
            (Some(model), Some(n)) => vec![(model, n)],
            _ => return Err(CliError::Usage("--model and --n are required without --grid".into())),
        }
    };
    let cells = cells
        .into_iter()
        .map(|(model, n)| {
            let base = SimConfig::new(kind, model, n, seed);
            let cfg = SimConfig {
                m: a.m.unwrap_or(base.m),
                outer: a.outer.unwrap_or(base.outer),
                inner: a.inner.unwrap_or(base.inner),
                threshold: a.threshold.unwrap_or(base.threshold),
                nominal: a.nominal.unwrap_or(base.nominal),
                band: a.band.unwrap_or(base.band),
                b: a.b.unwrap_or(base.b),
                ..base
            };
            cfg.validate()?;
            Ok(cfg)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(CommandConfig::Table(TableConfig { which: a.which, cells }))
}

pub fn resolve_ydist(a: &YdistArgs) -> Result<CommandConfig, CliError> {
    if a.b < 2 {
        return Err(CliError::Usage(format!("B must be at least 2, got {}", a.b)));
    }
    Ok(CommandConfig::Ydist(YdistConfig { b: a.b, alpha: a.alpha }))
}

pub fn resolve_bound(a: &BoundArgs) -> CommandConfig {
    let m = a.m.unwrap_or(a.n);
    let cfg = match a.rate {
        Some(kind) => BoundConfig::Rate { kind: kind.into(), n: a.n, m },
        None => BoundConfig::Bound {
            params: BoundParams {
                n: a.n,
                m,
                delta: a.delta,
                eps: a.eps,
                eps1: a.eps1,
                eps2: a.eps2,
                third_abs_moment_ratio: a.ratio,
                p_var_dev: a.p_var_dev,
                c: a.c,
            },
            part: a.part.into(),
        },
    };
    CommandConfig::Bound(cfg)
}

pub fn resolve_weights(a: &WeightsArgs) -> CommandConfig {
    CommandConfig::Weights(WeightsConfig {
        n: a.n,
        m: a.m.unwrap_or(a.n as u64),
        count: a.count,
        seed: a.seed.unwrap_or_else(fresh_seed),
    })
}

pub fn resolve_coverage(a: &CoverageArgs) -> CommandConfig {
    CommandConfig::Coverage(CoverageConfig {
        recipe: a.method.recipe(),
        model: a.model,
        n: a.n,
        m: a.m.unwrap_or(a.n as u64),
        alpha: a.alpha,
        reps: a.reps,
        seed: a.seed.unwrap_or_else(fresh_seed),
        x: a.x,
    })
}

pub fn resolve_refined(a: &RefinedArgs) -> CommandConfig {
    CommandConfig::Refined(RefinedConfig {
        model: a.model,
        n: a.n,
        m: a.m.unwrap_or(a.n as u64),
        b: a.b,
        alpha: a.alpha,
        reps: a.reps,
        seed: a.seed.unwrap_or_else(fresh_seed),
    })
}

fn interval(
    method: Method,
    s: &Sample,
    w: &WeightVector,
    cw: &CenteredWeights,
    alpha: f64,
    x: Option<f64>,
) -> Result<Interval, Error> {
    let at = || x.ok_or_else(|| Error::InvalidConfig("--x is required for the ecdf and cdf methods".into()));
    match method {
        Method::Population => ci_population_mean(s, cw, alpha),
        Method::Sample => ci_sample_mean(s, w, cw, alpha),
        Method::Finitepop => ci_finite_pop_mean(s, w, cw, alpha),
        Method::Superpop => ci_superpop_mean(s, w, cw, alpha),
        Method::Ecdf => ci_ecdf(s, w, cw, at()?, alpha, Target::EcdfValue),
        Method::Cdf => ci_ecdf(s, w, cw, at()?, alpha, Target::CdfValue),
    }
}

fn weight_induced(e: &Error) -> bool {
    matches!(e, Error::DegenerateWeights | Error::ZeroBootstrapVariance | Error::DegenerateScale)
}

fn run_ci(c: &CiConfig) -> Result<CiOutput, CliError> {
    let s = Sample::new(c.data.clone())?;
    match &c.weights {
        WeightSource::Given { counts } => {
            let w = WeightVector::from_counts(counts)?;
            if w.len() != s.len() {
                return Err(Error::DimensionMismatch { expected: s.len(), found: w.len() }.into());
            }
            let iv = interval(c.method, &s, &w, &center(&w), c.alpha, c.x)?;
            Ok(CiOutput { n: s.len(), weights: counts.clone(), redraws: 0, interval: iv })
        }
        WeightSource::Draw { m } => {
            let seed = c.seed.ok_or_else(|| CliError::Usage("a seed is required to draw weights".into()))?;
            let mut rng = StreamKey::new(seed, Purpose::Weights).stream();
            for redraws in 0..=MAX_REDRAWS {
                let w = draw_multinomial_weights(s.len(), *m, &mut rng)?;
                match interval(c.method, &s, &w, &center(&w), c.alpha, c.x) {
                    Ok(iv) => {
                        return Ok(CiOutput {
                            n: s.len(),
                            weights: w.integer_counts().unwrap_or_default(),
                            redraws,
                            interval: iv,
                        })
                    }
                    Err(e) if weight_induced(&e) => continue,
                    Err(e) => return Err(e.into()),
                }
            }
            Err(CliError::Degenerate(format!(
                "weights stayed degenerate after {MAX_REDRAWS} redraws"
            )))
        }
    }
}

fn run_table_cells(t: &TableConfig) -> Result<TableOutput, CliError> {
    let cells = t
        .cells
        .iter()
        .map(|cfg| {
            let report = run_table(cfg)?;
            let freq = |stat: &str| report.frequency(stat);
            Ok(TableCell {
                distribution: cfg.model,
                n: cfg.n,
                m: cfg.m,
                emp_g_star: freq(STAT_G_STAR).unwrap_or(0.0),
                emp_t: freq(STAT_T).unwrap_or(0.0),
                emp_boot: freq(STAT_BOOT),
                report,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(TableOutput { which: t.which, cells })
}

fn run_ydist(c: &YdistConfig) -> Result<YdistOutput, CliError> {
    let dist = y_distribution(c.b)?;
    let cumulative = dist.cumulative();
    let y = c.alpha.map(|a| y_quantile(c.b, a)).transpose()?;
    Ok(YdistOutput {
        b: c.b,
        max_coverage: dist.max_coverage(),
        level: y.map(|y| cumulative[y]),
        pmf: dist.pmf,
        closed_form: dist.closed_form,
        cumulative,
        alpha: c.alpha,
        y,
        reference_level: (c.b == 9).then_some(REFERENCE_LEVEL_B9),
    })
}

fn run_weights(c: &WeightsConfig) -> Result<WeightsOutput, CliError> {
    if c.count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    let key = StreamKey::new(c.seed, Purpose::Weights);
    let draws = (0..c.count as u64)
        .map(|i| {
            let w = draw_multinomial_weights(c.n, c.m, &mut key.at(i).stream())?;
            let cw = center(&w);
            Ok(WeightDraw {
                counts: w.integer_counts().unwrap_or_default(),
                centered: cw.values().to_vec(),
                sum_squares: cw.sum_squares(),
                sum_abs: cw.sum_abs(),
                max_ratio: max_ratio(&cw).ok(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(WeightsOutput { draws })
}

pub fn execute(config: &CommandConfig) -> Result<Output, CliError> {
    Ok(match config {
        CommandConfig::Ci(c) => Output::Ci(run_ci(c)?),
        CommandConfig::Table(t) => Output::Table(run_table_cells(t)?),
        CommandConfig::Ydist(c) => Output::Ydist(run_ydist(c)?),
        CommandConfig::Bound(BoundConfig::Bound { params, part }) => {
            Output::Bound(BoundOutput::Bound(berry_esseen_bound(params, *part)?))
        }
        CommandConfig::Bound(BoundConfig::Rate { kind, n, m }) => {
            if *n == 0 || *m == 0 {
                return Err(CliError::Usage("rates need n >= 1 and m >= 1".into()));
            }
            Output::Bound(BoundOutput::Rate { kind: *kind, n: *n, m: *m, rate: convergence_rate(*kind, *n, *m) })
        }
        CommandConfig::Weights(c) => Output::Weights(run_weights(c)?),
        CommandConfig::Coverage(c) => Output::Coverage(run_coverage(c)?),
        CommandConfig::Refined(c) => Output::Refined(run_refined_coverage(c)?),
    })
}
