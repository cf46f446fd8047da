//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{bound_grid, bound_oracle, enumerate_counts, v_squared};
use pivotboot::bounds::{berry_esseen_bound, convergence_rate, BoundParams, BoundPart, RateKind};
use pivotboot::intervals::{
    ci_finite_pop_mean, ci_population_mean, ci_sample_mean, ci_superpop_mean, two_sided_z,
};
use pivotboot::models::Model;
use pivotboot::multi_bootstrap::{orthant_closed_form, orthant_probability, y_distribution};
use pivotboot::pivots::{empirical_pivot, g_star, starred_variant, t_star, EmpiricalScale, PivotKind};
use pivotboot::quadrature::QuadratureSpec;
use pivotboot::rng::{Purpose, StreamKey};
use pivotboot::simulation::{
    run_coverage, run_pivot_frequency, run_refined_coverage, run_table, CoverageConfig, CoverageReport,
    PivotFrequencyConfig, RefinedConfig, SimConfig, TableKind, STAT_BOOT, STAT_G_STAR, STAT_MAX_OF_B,
    STAT_REFINED, STAT_T,
};
use pivotboot::weights::{center, draw_multinomial_weights, draw_nondegenerate, expected_sum_squares, WeightVector};
use pivotboot::Sample;
use rand::Rng;

const SEED: u64 = 20240601;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn exact_combinatorics() -> Verdict {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let mut worst_uniform: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    for b in 2..=25 {
        let y = y_distribution(b).unwrap();
        let u = 1.0 / (b + 1) as f64;
        worst_uniform = y.pmf.iter().map(|p| (p - u).abs()).fold(worst_uniform, f64::max);
        for l in 0..=b {
            let q = orthant_probability(b, l, &spec).unwrap();
            let c = orthant_closed_form(b, l).unwrap();
            worst_closed = worst_closed.max((q - c).abs());
        }
    }
    let level = y_distribution(9).unwrap().max_coverage();
    let elapsed = start.elapsed().as_secs_f64();
    let pass = worst_uniform <= 1e-9
        && worst_closed <= 1e-10
        && (level - 0.9).abs() <= 1e-10
        && (level - 0.9000169).abs() <= 2e-5
        && elapsed < 1.0;
    verdict(
        pass,
        format!(
            "max |pmf - 1/(B+1)| = {worst_uniform:.1e}, max |quad - closed| = {worst_closed:.1e}, \
             B=9 level = {level:.12}, {elapsed:.3}s"
        ),
    )
}

fn moment_identity() -> Verdict {
    let start = Instant::now();
    let draws = 100_000;
    let mut parts = Vec::new();
    let mut pass = true;
    for (i, (n, m)) in [(10usize, 10u64), (20, 40), (50, 25)].into_iter().enumerate() {
        let mut rng = StreamKey::new(SEED, Purpose::Misc).at(i as u64).stream();
        let values: Vec<f64> = (0..draws)
            .map(|_| center(&draw_multinomial_weights(n, m, &mut rng).unwrap()).sum_squares())
            .collect();
        let mean = values.iter().sum::<f64>() / draws as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        let se = (var / draws as f64).sqrt();
        let target = (1.0 - 1.0 / n as f64) / m as f64;
        let z = (mean - target) / se;
        pass &= z.abs() <= 3.0 && (expected_sum_squares(n, m) - target).abs() < 1e-15;
        parts.push(format!("({n},{m}) z={z:+.2}"));
    }
    let exact: f64 = {
        let all = enumerate_counts(2, 2);
        let lib: f64 = all
            .iter()
            .map(|c| center(&WeightVector::from_counts(c).unwrap()).sum_squares())
            .sum::<f64>()
            / all.len() as f64;
        let oracle = all.iter().map(|c| v_squared(c)).sum::<f64>() / all.len() as f64;
        pass &= (lib - oracle).abs() < 1e-15;
        lib
    };
    let elapsed = start.elapsed().as_secs_f64();
    pass &= (exact - 0.25).abs() < 1e-15 && elapsed < 10.0;
    parts.push(format!("enumerated (2,2) = {exact}"));
    parts.push(format!("{elapsed:.2}s"));
    verdict(pass, parts.join(", "))
}

fn table(kind: TableKind) -> Vec<CoverageReport> {
    kind.grid()
        .into_iter()
        .map(|(model, n)| run_table(&SimConfig::new(kind, model, n, SEED)).unwrap())
        .collect()
}

fn freq(r: &CoverageReport, stat: &str) -> f64 {
    r.frequency(stat).unwrap()
}

fn cells_text(reports: &[CoverageReport], stats: &[&str]) -> String {
    reports
        .iter()
        .map(|r| {
            let rec = &r.records[0];
            let values: Vec<String> = stats.iter().map(|s| format!("{:.3}", freq(r, s))).collect();
            format!("{} n={}: {}", rec.distribution, rec.n, values.join("/"))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn table1_reproduction() -> Verdict {
    let start = Instant::now();
    let reports = table(TableKind::Conditional);
    let first = &reports[0];
    let (g, t) = (freq(first, STAT_G_STAR), freq(first, STAT_T));
    let close = (g - 0.552).abs() <= 0.10 && (t - 0.322).abs() <= 0.10;
    let ordered = reports.iter().filter(|r| freq(r, STAT_G_STAR) > freq(r, STAT_T)).count();
    verdict(
        close && ordered == 9,
        format!(
            "Poisson1 n=20 (G*, T) = ({g:.3}, {t:.3}) vs (0.552, 0.322) +-0.10 [{}]; G* > T in {ordered}/9; \
             cells {}; {:.1}s",
            if close { "within" } else { "outside" },
            cells_text(&reports, &[STAT_G_STAR, STAT_T]),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn table2_reproduction() -> Verdict {
    let start = Instant::now();
    let reports = table(TableKind::Joint);
    let first = &reports[0];
    let got = [freq(first, STAT_G_STAR), freq(first, STAT_T), freq(first, STAT_BOOT)];
    let want = [0.48, 0.302, 0.248];
    let close = got.iter().zip(want).all(|(g, w)| (g - w).abs() <= 0.10);
    let largest = reports
        .iter()
        .filter(|r| {
            let g = freq(r, STAT_G_STAR);
            g > freq(r, STAT_T) && g > freq(r, STAT_BOOT)
        })
        .count();
    verdict(
        close && largest >= 8,
        format!(
            "Poisson1 n=20 (G*, T, Boot) = ({:.3}, {:.3}, {:.3}) vs (0.48, 0.302, 0.248) +-0.10; \
             G* strictly largest in {largest}/9; cells {}; {:.1}s",
            got[0],
            got[1],
            got[2],
            cells_text(&reports, &[STAT_G_STAR, STAT_T, STAT_BOOT]),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn clt_sanity() -> Verdict {
    let start = Instant::now();
    let kinds = vec![
        PivotKind::GStar,
        PivotKind::TStar,
        PivotKind::GDoubleStar,
        PivotKind::TDoubleStar,
        PivotKind::Alpha1Hat,
        PivotKind::Alpha2Hat,
    ];
    let cfg = PivotFrequencyConfig {
        model: Model::Normal01,
        n: 200,
        m: 200,
        reps: 10_000,
        threshold: 1.644854,
        kinds,
        x: None,
        scale: EmpiricalScale::WeightNorm,
        seed: SEED,
    };
    let r = run_pivot_frequency(&cfg).unwrap();
    let pass = r.records.iter().all(|rec| (rec.frequency - 0.95).abs() <= 0.02) && start.elapsed().as_secs_f64() < 60.0;
    let parts: Vec<String> = r.records.iter().map(|rec| format!("{}={:.4}", rec.statistic, rec.frequency)).collect();
    verdict(pass, format!("{}; {:.1}s", parts.join(", "), start.elapsed().as_secs_f64()))
}

fn refined_validity() -> Verdict {
    let cfg = RefinedConfig { model: Model::Normal01, n: 100, m: 100, b: 9, alpha: 0.1, reps: 10_000, seed: SEED };
    let r = run_refined_coverage(&cfg).unwrap();
    let f = r.frequency(STAT_REFINED).unwrap();
    verdict((f - 0.9).abs() <= 0.02, format!("coverage {f:.4} (target 0.90 +-0.02)"))
}

fn bound_checks() -> Verdict {
    let mut worst: f64 = 0.0;
    for p in bound_grid() {
        let r = berry_esseen_bound(&p, BoundPart::A).unwrap();
        let (first, second) = bound_oracle(p.n as f64, p.m as f64, r.delta_n, p.eps);
        worst = worst.max(((r.total - (first + second)) / (first + second)).abs());
    }
    let at = |n: u64| berry_esseen_bound(&BoundParams { n, m: n, ..Default::default() }, BoundPart::A).unwrap().total;
    let ratio = at(2_000_000) / at(1_000_000);
    let rates_exact = (1..=2000u64)
        .chain([10_000, 99_991, 1_000_000, 12_345_678])
        .all(|n| convergence_rate(RateKind::GStarRate, n, n) == 1.0 / n as f64);
    verdict(
        worst <= 1e-12 && (0.45..=0.55).contains(&ratio) && rates_exact,
        format!("max relative gap {worst:.1e} over 100 points, bound(2n)/bound(n) at n=1e6 = {ratio:.5}, rate 1/n exact: {rates_exact}"),
    )
}

fn random_instance(i: u64) -> (Sample, WeightVector, f64, f64) {
    let mut rng = StreamKey::new(SEED, Purpose::Misc).at(1000 + i).stream();
    let n = rng.random_range(3..40usize);
    let m = rng.random_range(2..60u64);
    let scale = rng.random_range(0.1..10.0);
    let xs: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0) * scale).collect();
    let s = Sample::new(xs).unwrap();
    let (w, _, _) = draw_nondegenerate(n, m, &mut rng, 1000).unwrap();
    let alpha = rng.random_range(0.01..0.5);
    let probe = rng.random_range(-2.0..2.0) * scale;
    (s, w, alpha, probe)
}

fn algebraic_dualities() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut membership_mismatch = 0;
    let mut reduction_gap: f64 = 0.0;
    let mut instances = 0;
    let mut i = 0;
    while instances < 1000 {
        i += 1;
        let (s, w, alpha, probe) = random_instance(i);
        let cw = center(&w);
        let z = two_sided_z(alpha).unwrap();
        let (Ok(ci_p), Ok(ci_s), Ok(ci_f), Ok(ci_g)) = (
            ci_population_mean(&s, &cw, alpha),
            ci_sample_mean(&s, &w, &cw, alpha),
            ci_finite_pop_mean(&s, &w, &cw, alpha),
            ci_superpop_mean(&s, &w, &cw, alpha),
        ) else {
            continue;
        };
        instances += 1;
        // Endpoints of the mean intervals sit exactly at |pivot| = z.
        for mu in [ci_p.lo, ci_p.hi] {
            worst = worst.max((g_star(&s, &cw, mu).unwrap().abs() - z).abs());
        }
        for mu in [ci_g.lo, ci_g.hi] {
            let g = starred_variant(PivotKind::GDoubleStar, &s, &w, &cw, Some(mu)).unwrap();
            worst = worst.max((g.abs() - z).abs());
        }
        // Sample-mean sets: the half width equals z times the pivot's scale.
        let t = t_star(&s, &cw).unwrap();
        worst = worst.max(((ci_s.center() - s.mean()) / (ci_s.width() / 2.0) * z - t).abs());
        let tt = starred_variant(PivotKind::TDoubleStar, &s, &w, &cw, None).unwrap();
        worst = worst.max(((ci_f.center() - s.mean()) / (ci_f.width() / 2.0) * z - tt).abs());
        // Membership equivalence at a random probe point.
        let g = g_star(&s, &cw, probe).unwrap();
        if (g.abs() - z).abs() > 1e-10 && ci_p.contains(probe) != (g.abs() <= z) {
            membership_mismatch += 1;
        }
        if (t.abs() - z).abs() > 1e-10 && ci_s.contains(s.mean()) != (t.abs() <= z) {
            membership_mismatch += 1;
        }
        if (tt.abs() - z).abs() > 1e-10 && ci_f.contains(s.mean()) != (tt.abs() <= z) {
            membership_mismatch += 1;
        }
        // Empirical pivots are the mean pivots of the indicator sample.
        let x = s.values()[0];
        let ind = s.indicators(x);
        let f_true = 0.37;
        let pairs = [
            (
                empirical_pivot(PivotKind::Alpha1Hat, &s, &w, &cw, x, None, EmpiricalScale::WeightNorm),
                t_star(&ind, &cw),
            ),
            (
                empirical_pivot(PivotKind::Alpha2Hat, &s, &w, &cw, x, Some(f_true), EmpiricalScale::WeightNorm),
                g_star(&ind, &cw, f_true),
            ),
            (
                empirical_pivot(PivotKind::Alpha1HatHat, &s, &w, &cw, x, None, EmpiricalScale::WeightNorm),
                starred_variant(PivotKind::TDoubleStar, &ind, &w, &cw, None),
            ),
            (
                empirical_pivot(PivotKind::Alpha2HatHat, &s, &w, &cw, x, Some(f_true), EmpiricalScale::WeightNorm),
                starred_variant(PivotKind::GDoubleStar, &ind, &w, &cw, Some(f_true)),
            ),
        ];
        for (a, b) in pairs {
            match (a, b) {
                (Ok(a), Ok(b)) => reduction_gap = reduction_gap.max((a - b).abs() / b.abs().max(1.0)),
                (Err(_), Err(_)) => {}
                _ => reduction_gap = f64::INFINITY,
            }
        }
    }
    verdict(
        worst <= 1e-10 && membership_mismatch == 0 && reduction_gap <= 1e-10,
        format!(
            "{instances} instances: max ||pivot| - z| at endpoints {worst:.1e}, membership mismatches {membership_mismatch}, \
             empirical-to-mean gap {reduction_gap:.1e}"
        ),
    )
}

fn json_in_pool(threads: usize, f: impl FnOnce() -> CoverageReport + Send) -> String {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    serde_json::to_string(&pool.install(f)).unwrap()
}

fn determinism() -> Verdict {
    let table = SimConfig { outer: 60, inner: 60, ..SimConfig::new(TableKind::Joint, Model::Poisson1, 20, SEED) };
    let cov = CoverageConfig {
        recipe: pivotboot::intervals::Recipe::EcdfBand,
        model: Model::Exponential1,
        n: 50,
        m: 50,
        alpha: 0.1,
        reps: 2000,
        seed: SEED,
        x: None,
    };
    let t1 = json_in_pool(1, || run_table(&table).unwrap());
    let t8 = json_in_pool(8, || run_table(&table).unwrap());
    let c1 = json_in_pool(1, || run_coverage(&cov).unwrap());
    let c8 = json_in_pool(8, || run_coverage(&cov).unwrap());
    verdict(
        t1 == t8 && c1 == c8,
        format!("table report {} bytes identical: {}; coverage report identical: {}", t1.len(), t1 == t8, c1 == c8),
    )
}

fn max_of_b_trend() -> Verdict {
    let errors: Vec<f64> = [50usize, 200, 800]
        .into_iter()
        .map(|n| {
            let cfg = RefinedConfig {
                model: Model::Lognormal01,
                n,
                m: n as u64,
                b: 9,
                alpha: 0.1,
                reps: 10_000,
                seed: SEED,
            };
            (run_refined_coverage(&cfg).unwrap().frequency(STAT_MAX_OF_B).unwrap() - 0.9).abs()
        })
        .collect();
    verdict(
        errors[0] >= errors[1] && errors[1] >= errors[2],
        format!(
            "Lognormal01 |coverage - 0.9| at n = 50, 200, 800: {:.4}, {:.4}, {:.4}",
            errors[0], errors[1], errors[2]
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("1 exact combinatorics", exact_combinatorics),
        ("2 moment identity", moment_identity),
        ("3 conditional table reproduction", table1_reproduction),
        ("4 joint table reproduction", table2_reproduction),
        ("5 CLT sanity", clt_sanity),
        ("6 refined interval validity", refined_validity),
        ("7 bound determinism and scaling", bound_checks),
        ("8 algebraic dualities", algebraic_dualities),
        ("9 determinism across thread counts", determinism),
        ("10 max-of-B coverage error trend", max_of_b_trend),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let v = check();
        println!("{} [{name}] {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
