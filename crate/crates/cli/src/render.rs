//! Aligned text rendering. Every number is printed from the output struct
//! with the same shortest round-trip formatting JSON uses.

use std::fmt::Write;

use pivotboot::simulation::CoverageReport;

use crate::manifest::{BoundOutput, Output, Report};

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn coverage(out: &mut String, r: &CoverageReport) {
    let _ = writeln!(
        out,
        "{:<14} {:>20} {:>8} {:>8} {:>10} {:>8}",
        "statistic", "frequency", "hits", "trials", "degenerate", "redraws"
    );
    for rec in &r.records {
        let _ = writeln!(
            out,
            "{:<14} {:>20} {:>8} {:>8} {:>10} {:>8}",
            rec.statistic, rec.frequency, rec.hits, rec.trials, rec.degenerate_count, rec.weight_redraws
        );
    }
}

pub fn text(report: &Report) -> String {
    let m = &report.manifest;
    let mut out = String::new();
    let seed = m.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    let _ = writeln!(out, "# pivotboot {} {} seed={}", m.version, m.command, seed);
    match &report.result {
        Output::Ci(c) => {
            let iv = &c.interval;
            let _ = writeln!(out, "recipe   {}", iv.recipe.id());
            let _ = writeln!(out, "n        {}", c.n);
            let _ = writeln!(out, "level    {}", iv.level);
            let _ = writeln!(out, "lo       {}", iv.lo);
            let _ = writeln!(out, "hi       {}", iv.hi);
            let _ = writeln!(out, "clamped  {}", iv.clamped);
            let _ = writeln!(out, "redraws  {}", c.redraws);
        }
        Output::Table(t) => {
            let boot = t.cells.iter().any(|c| c.emp_boot.is_some());
            let _ = write!(out, "Table {}\n{:<14} {:>4} {:>8} {:>20} {:>20}", t.which, "Distribution", "n", "m", "emp_G_star", "emp_T");
            if boot {
                let _ = write!(out, " {:>20}", "emp_Boot");
            }
            out.push('\n');
            for c in &t.cells {
                let _ = write!(
                    out,
                    "{:<14} {:>4} {:>8} {:>20} {:>20}",
                    c.distribution.name(),
                    c.n,
                    c.m,
                    c.emp_g_star,
                    c.emp_t
                );
                if boot {
                    let _ = write!(out, " {:>20}", opt(c.emp_boot));
                }
                out.push('\n');
            }
        }
        Output::Ydist(y) => {
            let _ = writeln!(out, "{:>4} {:>24} {:>24} {:>24}", "l", "pmf", "closed_form", "cumulative");
            for l in 0..=y.b {
                let _ = writeln!(out, "{:>4} {:>24} {:>24} {:>24}", l, y.pmf[l], y.closed_form[l], y.cumulative[l]);
            }
            let _ = writeln!(out, "max_coverage     {}", y.max_coverage);
            if let (Some(a), Some(yq)) = (y.alpha, y.y) {
                let _ = writeln!(out, "alpha            {a}");
                let _ = writeln!(out, "y                {yq}");
                let _ = writeln!(out, "level            {}", opt(y.level));
            }
            if let Some(r) = y.reference_level {
                let _ = writeln!(out, "reference_level  {r}");
            }
        }
        Output::Bound(BoundOutput::Bound(b)) => {
            let _ = writeln!(out, "part         {:?}", b.part);
            let _ = writeln!(out, "delta_n      {}", b.delta_n);
            let _ = writeln!(out, "first        {}", b.first);
            let _ = writeln!(out, "second       {}", b.second);
            let _ = writeln!(out, "total        {}", b.total);
            let _ = writeln!(out, "delta_n_alt  {}", b.delta_n_alt);
            let _ = writeln!(out, "total_alt    {}", b.total_alt);
        }
        Output::Bound(BoundOutput::Rate { kind, n, m, rate }) => {
            let _ = writeln!(out, "{kind:?} n={n} m={m} rate={rate}");
        }
        Output::Weights(w) => {
            for (i, d) in w.draws.iter().enumerate() {
                let counts: Vec<String> = d.counts.iter().map(u64::to_string).collect();
                let _ = writeln!(out, "draw {i}: counts [{}]", counts.join(" "));
                let _ = writeln!(
                    out,
                    "  sum_squares {}  sum_abs {}  max_ratio {}",
                    d.sum_squares,
                    d.sum_abs,
                    opt(d.max_ratio)
                );
            }
        }
        Output::Coverage(r) | Output::Refined(r) => coverage(&mut out, r),
    }
    out
}
