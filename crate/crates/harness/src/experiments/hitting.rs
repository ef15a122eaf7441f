use std::f64::consts::PI;

use num_complex::Complex64;
use percolab_core::conformal_cardy::semicircle_hitting_cdf;
use percolab_core::percolation::{HashedColors, SiteColors};
use percolab_core::rng::replica_seed;
use rayon::prelude::*;
use serde_json::json;

use super::Timer;
use crate::config::{DomainShape, ExperimentConfig};
use crate::halfplane::{MirroredSwapped, Strip};
use crate::report::{Check, ExperimentReport, Table};
use crate::HarnessError;

/// Number of leading samples re-run on the mirrored, color-swapped
/// configuration.
const MIRROR_CHECKS: usize = 200;

/// Kolmogorov–Smirnov distance between the empirical distribution of
/// `samples` and the continuous CDF `f`.
pub fn ks_distance(samples: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let fx = f(x);
            (fx - i as f64 / n).max((i + 1) as f64 / n - fx)
        })
        .fold(0.0, f64::max)
}

/// First vertex of the exploration beyond distance `r` from the origin, in
/// half-plane coordinates; `None` if the walk ends first.
fn exit_point<S: SiteColors>(strip: &Strip, sites: S, r: f64) -> Option<Complex64> {
    strip.explore(sites).map(|e| Strip::to_half_plane(e.head())).find(|p| p.norm() > r)
}

pub fn run_hitting_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let DomainShape::StripHalfPlane { width, height } = cfg.domain_shape else {
        return Err(HarnessError::Config("hitting needs a stripHalfPlane domain".into()));
    };
    let r = cfg.params.exit_radius;
    if !(r >= 1.0) || r + 3.0 > width / 2.0 || r + 3.0 > 1.5 * (height - 1) as f64 {
        return Err(HarnessError::Config(format!("semicircle of radius {r} does not fit the strip")));
    }
    let timer = Timer::start();
    let strip = Strip::new(width, height)?;
    let p = cfg.params.p;
    let exits: Vec<(Option<Complex64>, Option<bool>)> = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let sites = HashedColors::new(p, replica_seed(cfg.seed, i));
            let hit = exit_point(&strip, sites, r);
            let mirrored = ((i as usize) < MIRROR_CHECKS).then(|| {
                let m = exit_point(&strip, MirroredSwapped(sites), r);
                match (hit, m) {
                    (Some(a), Some(b)) => a.re == -b.re && a.im == b.im,
                    (None, None) => true,
                    _ => false,
                }
            });
            (hit, mirrored)
        })
        .collect();

    let thetas: Vec<f64> = exits.iter().filter_map(|e| e.0).map(|p| p.im.atan2(p.re).clamp(0.0, PI)).collect();
    let lost = exits.len() - thetas.len();
    let mirror_checked = exits.iter().filter(|e| e.1.is_some()).count();
    let mirror_failures = exits.iter().filter(|e| e.1 == Some(false)).count();
    let ks = if thetas.is_empty() { 1.0 } else { ks_distance(&thetas, semicircle_hitting_cdf) };

    let mut table = Table::new("exits", &["sample", "x", "y", "theta", "predicted_cdf"]);
    for (i, e) in exits.iter().enumerate() {
        if let Some(p) = e.0 {
            let t = p.im.atan2(p.re).clamp(0.0, PI);
            table.push(vec![i.to_string(), p.re.to_string(), p.im.to_string(), t.to_string(), semicircle_hitting_cdf(t).to_string()]);
        }
    }
    let mean_theta = thetas.iter().sum::<f64>() / thetas.len().max(1) as f64;
    let stats = json!({
        "strip": { "width": width, "height": height, "hexes": strip.domain.len() },
        "exitRadius": r, "samples": cfg.n_samples, "exits": thetas.len(), "lostSamples": lost,
        "ksDistance": ks, "meanExitAngle": mean_theta,
        "mirrorChecked": mirror_checked, "mirrorFailures": mirror_failures,
    });
    let checks = vec![
        Check::at_most("ks_distance", ks, cfg.tolerances.ks),
        Check::at_most("mirror_failures", mirror_failures as f64, 0.0),
        Check::at_most("lost_samples", lost as f64, 0.0),
    ];
    Ok(ExperimentReport::new(cfg, stats, checks, vec![table], timer.seconds()))
}
