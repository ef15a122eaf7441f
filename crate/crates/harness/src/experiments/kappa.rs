use percolab_core::loewner::{
    DrivingSample, IncrementReport, LoewnerError, Zipper, brownian_driving, estimate_kappa, extract_driving, forward_trace,
    increment_tests,
};
use percolab_core::percolation::HashedColors;
use percolab_core::rng::{replica_seed, stream};
use rayon::prelude::*;
use serde_json::json;

use super::Timer;
use crate::config::{DomainShape, ExperimentConfig};
use crate::halfplane::Strip;
use crate::report::{Check, ExperimentReport, Table};
use crate::HarnessError;

enum PathOutcome {
    /// The driving function and the number of points skipped because their
    /// image was numerically on the real line.
    Driving(DrivingSample, usize),
    /// The path came within the margin of a side or ran out of strip.
    Breach,
}

fn lattice_driving(strip: &Strip, sites: HashedColors, t_max: f64, margin: f64) -> Result<PathOutcome, LoewnerError> {
    let limit = strip.width / 2.0 - margin;
    let mut zipper = Zipper::new();
    let mut skipped = 0;
    for e in strip.explore(sites) {
        let p = Strip::to_half_plane(e.head());
        if p.re.abs() > limit {
            return Ok(PathOutcome::Breach);
        }
        // deep inside a fjord the image loses all its height to rounding;
        // such a point carries no capacity, so it is passed over
        match zipper.push(p) {
            Ok(_) => {}
            Err(LoewnerError::NonPositiveIncrement(_)) if !zipper.is_empty() => skipped += 1,
            Err(e) => return Err(e),
        }
        if zipper.time() >= t_max {
            return Ok(PathOutcome::Driving(zipper.driving(), skipped));
        }
    }
    Ok(PathOutcome::Breach)
}

fn sample_variances(samples: &[DrivingSample], grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&t| {
            let v: Vec<f64> = samples.iter().filter_map(|s| s.value_at(t)).collect();
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        })
        .collect()
}

pub fn run_kappa_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let timer = Timer::start();
    let t_max = cfg.params.t_max;
    let m = cfg.params.grid_points;
    let grid: Vec<f64> = (1..=m).map(|j| j as f64 * t_max / m as f64).collect();

    let mut skipped: Vec<usize> = Vec::new();
    let (samples, breaches, source) = match cfg.params.synthetic_kappa {
        Some(k0) => {
            let steps = cfg.params.synthetic_steps.max(1);
            let samples = (0..cfg.n_samples as u64)
                .into_par_iter()
                .map(|i| {
                    let d = brownian_driving(k0, t_max, steps, &mut stream(cfg.seed, i));
                    let traced = forward_trace(&d).map_err(|source| HarnessError::Path { id: i as usize, source })?;
                    extract_driving(&traced).map_err(|source| HarnessError::Path { id: i as usize, source })
                })
                .collect::<Result<Vec<_>, _>>()?;
            (samples, 0, format!("synthetic Brownian driving, kappa {k0}, {steps} steps, traced and unzipped"))
        }
        None => {
            let DomainShape::StripHalfPlane { width, height } = cfg.domain_shape else {
                return Err(HarnessError::Config("kappa needs a stripHalfPlane domain".into()));
            };
            if !(cfg.params.side_margin >= 0.0) || cfg.params.side_margin >= width / 2.0 {
                return Err(HarnessError::Config("side margin leaves no room".into()));
            }
            let strip = Strip::new(width, height)?;
            let outcomes = (0..cfg.n_samples as u64)
                .into_par_iter()
                .map(|i| {
                    let sites = HashedColors::new(cfg.params.p, replica_seed(cfg.seed, i));
                    lattice_driving(&strip, sites, t_max, cfg.params.side_margin)
                        .map_err(|source| HarnessError::Path { id: i as usize, source })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut samples = Vec::new();
            let mut breaches = 0;
            for o in outcomes {
                match o {
                    PathOutcome::Driving(d, k) => {
                        samples.push(d);
                        skipped.push(k);
                    }
                    PathOutcome::Breach => breaches += 1,
                }
            }
            (samples, breaches, format!("exploration in a {width} x {height} strip, side margin {}", cfg.params.side_margin))
        }
    };

    let est = estimate_kappa(&samples, &grid)?;
    let incr = increment_tests(&samples, &grid)?;
    // control: a deterministic ramp must fail the independence test
    let ramp: Vec<DrivingSample> = (0..10)
        .map(|_| DrivingSample::uniform(t_max / (4 * m) as f64, (1..=4 * m).map(|k| k as f64 / (4 * m) as f64)))
        .collect::<Result<_, _>>()?;
    let ramp_report = increment_tests(&ramp, &grid)?;
    let ramp_rejected = ramp_report.lags.iter().all(|l| l.independence_p < cfg.tolerances.alpha);

    let alpha = cfg.tolerances.alpha;
    let structural = incr.normality_and_independence_p();
    let rejections = structural.iter().filter(|&&p| p < alpha).count();
    let budget = IncrementReport::false_positive_budget(structural.len(), alpha);
    let all_p = incr.p_values();
    let all_rejections = all_p.iter().filter(|&&p| p < alpha).count();

    let mut checks = Vec::new();
    match cfg.params.synthetic_kappa {
        Some(k0) => checks.push(Check::within("synthetic_kappa_in_ci", k0, est.confidence.0, est.confidence.1)),
        None => checks.push(Check::within("kappa_hat", est.kappa_hat, cfg.tolerances.kappa_range.0, cfg.tolerances.kappa_range.1)),
    }
    checks.push(Check::at_most("normality_independence_rejections", rejections as f64, budget as f64));
    checks.push(Check::holds("ramp_rejected", ramp_rejected));

    let variances = sample_variances(&samples, &grid);
    let mut var_table = Table::new("variance", &["t", "variance", "fitted"]);
    for (t, v) in grid.iter().zip(&variances) {
        var_table.push(vec![t.to_string(), v.to_string(), (est.kappa_hat * t).to_string()]);
    }
    let mut lag_table = Table::new(
        "increments",
        &["lag", "count", "mean", "variance_rate", "mean_p", "stationarity_p", "scaling_p", "autocorrelation", "independence_p", "jarque_bera", "normality_p"],
    );
    for l in &incr.lags {
        lag_table.push(vec![
            l.lag.to_string(),
            l.count.to_string(),
            l.mean.to_string(),
            l.variance_rate.to_string(),
            l.mean_p.to_string(),
            l.stationarity_p.to_string(),
            l.scaling_p.map(|p| p.to_string()).unwrap_or_default(),
            l.autocorrelation.to_string(),
            l.independence_p.to_string(),
            l.jarque_bera.to_string(),
            l.normality_p.to_string(),
        ]);
    }
    let mut drivings = Table::new("drivings", &["path", "t", "U"]);
    for (i, s) in samples.iter().take(10).enumerate() {
        for (t, u) in s.times.iter().zip(&s.values) {
            drivings.push(vec![i.to_string(), t.to_string(), u.to_string()]);
        }
    }
    let mean_len = samples.iter().map(|s| s.len() as f64).sum::<f64>() / samples.len().max(1) as f64;
    let stats = json!({
        "source": source, "tMax": t_max, "grid": grid, "pathsUsed": samples.len(), "marginBreaches": breaches,
        "skippedPoints": skipped.iter().sum::<usize>(), "pathsWithSkips": skipped.iter().filter(|&&k| k > 0).count(),
        "meanKnotsPerPath": mean_len, "estimate": est, "increments": incr,
        "normalityIndependenceRejections": rejections, "normalityIndependenceTests": structural.len(), "falsePositiveBudget": budget,
        "allRejections": all_rejections, "allTests": all_p.len(),
        "allBudget": IncrementReport::false_positive_budget(all_p.len(), alpha),
        "ramp": { "rejected": ramp_rejected, "independenceP": ramp_report.lags.iter().map(|l| l.independence_p).collect::<Vec<_>>() },
    });
    Ok(ExperimentReport::new(cfg, stats, checks, vec![var_table, lag_table, drivings], timer.seconds()))
}
