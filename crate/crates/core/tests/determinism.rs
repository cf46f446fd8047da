use pivotboot::intervals::Recipe;
use pivotboot::models::Model;
use pivotboot::simulation::{
    run_coverage, run_refined_coverage, run_table, CoverageConfig, CoverageReport, RefinedConfig, SimConfig,
    TableKind,
};

fn in_pool(threads: usize, f: impl FnOnce() -> CoverageReport + Send) -> String {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    serde_json::to_string(&pool.install(f)).unwrap()
}

#[test]
fn tables_ignore_thread_count() {
    for table in [TableKind::Conditional, TableKind::Joint] {
        let cfg = SimConfig { outer: 16, inner: 25, ..SimConfig::new(table, Model::Lognormal01, 20, 31) };
        let one = in_pool(1, || run_table(&cfg).unwrap());
        let eight = in_pool(8, || run_table(&cfg).unwrap());
        assert_eq!(one, eight);
    }
}

#[test]
fn coverage_ignores_thread_count() {
    let cfg = CoverageConfig {
        recipe: Recipe::GDoubleStarSuperPopMean,
        model: Model::Exponential1,
        n: 40,
        m: 40,
        alpha: 0.1,
        reps: 500,
        seed: 12,
        x: None,
    };
    assert_eq!(in_pool(1, || run_coverage(&cfg).unwrap()), in_pool(8, || run_coverage(&cfg).unwrap()));
    let cfg = RefinedConfig { model: Model::Poisson1, n: 20, m: 20, b: 9, alpha: 0.1, reps: 300, seed: 2 };
    assert_eq!(
        in_pool(1, || run_refined_coverage(&cfg).unwrap()),
        in_pool(8, || run_refined_coverage(&cfg).unwrap())
    );
}

#[test]
fn reports_round_trip_through_json() {
    let cfg = SimConfig { outer: 4, inner: 10, ..SimConfig::new(TableKind::Joint, Model::Poisson1, 20, 5) };
    let report = run_table(&cfg).unwrap();
    let text = serde_json::to_string_pretty(&report).unwrap();
    let back: CoverageReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
}
