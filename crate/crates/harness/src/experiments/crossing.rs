use std::f64::consts::TAU;

use num_complex::Complex64;
use percolab_core::conformal_cardy::{ReferenceDomain, cross_ratio, crossing_probability};
use percolab_core::exploration::Exploration;
use percolab_core::hexlattice::{LatticeDomain, shapes};
use percolab_core::percolation::{Color, HashedColors, SiteColors, has_crossing, rhombus_sides, sample_coloring};
use percolab_core::rng::replica_seed;
use rayon::prelude::*;
use serde_json::json;

use super::{Timer, binomial_se};
use crate::config::{DomainShape, ExperimentConfig};
use crate::halfplane::Swapped;
use crate::report::{Check, ExperimentReport, Table};
use crate::HarnessError;

fn in_arc(pos: usize, from: usize, to: usize, n: usize) -> bool {
    (pos + n - from) % n < (to + n - from) % n
}

/// Blue crossing from arc `[z0, z1)` to `[z2, z3)`, decided by the
/// exploration from `z0` with `[z0, z2)` Blue: it touches `[z2, z3)` before
/// `[z1, z2)` exactly when the crossing exists. Sites are read lazily.
fn blue_crosses<S: SiteColors>(d: &LatticeDomain, sites: S, z: [usize; 4]) -> bool {
    let n = d.boundary_adjacent().len();
    let boundary = |i: usize| if in_arc(i, z[0], z[2], n) { Color::Blue } else { Color::Yellow };
    let walk = Exploration::new(d, sites, boundary, z[0]).expect("valid split");
    for e in walk {
        for h in [e.left, e.right()] {
            if let Some(pos) = d.boundary_position(h) {
                if in_arc(pos, z[2], z[3], n) {
                    return true;
                }
                if in_arc(pos, z[1], z[2], n) {
                    return false;
                }
            }
        }
    }
    false
}

/// Boundary positions of a disc domain nearest to the given angles, with the
/// angles of their entry edges.
pub fn disc_arc_positions(d: &LatticeDomain, angles: [f64; 4]) -> Result<([usize; 4], [f64; 4]), HarnessError> {
    let n = d.boundary_adjacent().len();
    let angle_of = |i: usize| {
        let [x, y] = d.entry_edge(i).midpoint(1.0);
        y.atan2(x).rem_euclid(TAU)
    };
    let gap = |a: f64, b: f64| {
        let g = (a - b).rem_euclid(TAU);
        g.min(TAU - g)
    };
    let mut pos = [0usize; 4];
    let mut actual = [0.0; 4];
    for k in 0..4 {
        pos[k] = (0..n).min_by(|&a, &b| gap(angle_of(a), angles[k]).total_cmp(&gap(angle_of(b), angles[k]))).expect("nonempty ring");
        actual[k] = angle_of(pos[k]);
    }
    let ccw = (0..4).all(|k| {
        let (a, b, c) = (pos[k], pos[(k + 1) % 4], pos[(k + 2) % 4]);
        a != b && (b + n - a) % n < (c + n - a) % n
    });
    if !ccw {
        return Err(HarnessError::Config(format!("arc angles {angles:?} do not give four counterclockwise boundary positions")));
    }
    Ok((pos, actual))
}

pub fn run_crossing_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    match cfg.domain_shape {
        DomainShape::DiscApprox { radius } => disc(cfg, radius),
        DomainShape::Rhombus { l } => rhombus(cfg, l),
        _ => Err(HarnessError::Config("crossing needs a disc or rhombus domain".into())),
    }
}

fn disc(cfg: &ExperimentConfig, radius: f64) -> Result<ExperimentReport, HarnessError> {
    let timer = Timer::start();
    let d = LatticeDomain::new(shapes::disc(radius), 1.0)?;
    if cfg.params.arcs.is_empty() {
        return Err(HarnessError::Config("no arc configurations".into()));
    }
    let mut setups = Vec::new();
    for &angles in &cfg.params.arcs {
        let (pos, actual) = disc_arc_positions(&d, angles)?;
        let nominal = angles.map(|t| Complex64::from_polar(1.0, t));
        let lattice = actual.map(|t| Complex64::from_polar(1.0, t));
        let eta = cross_ratio(nominal[0], nominal[1], nominal[2], nominal[3])?;
        let predicted = crossing_probability(ReferenceDomain::Disc, nominal)?.probability;
        let predicted_lattice = crossing_probability(ReferenceDomain::Disc, lattice)?.probability;
        setups.push((angles, pos, actual, eta, predicted, predicted_lattice));
    }
    let n = d.boundary_adjacent().len();
    let p = cfg.params.p;
    let outcomes: Vec<Vec<(bool, bool)>> = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let sites = HashedColors::new(p, replica_seed(cfg.seed, i));
            setups
                .iter()
                .map(|s| {
                    let z = s.1;
                    let blue = blue_crosses(&d, sites, z);
                    // dual: Yellow crossing between the other two arcs
                    let dual = blue_crosses(&d, Swapped(sites), [z[1], z[2], z[3], z[0]]);
                    (blue, dual)
                })
                .collect()
        })
        .collect();

    let n_samples = cfg.n_samples;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let mut table = Table::new("crossing", &["config", "theta0", "theta1", "theta2", "theta3", "eta", "predicted", "p_hat", "se"]);
    for (j, (angles, pos, actual, eta, predicted, predicted_lattice)) in setups.iter().enumerate() {
        let hits = outcomes.iter().filter(|o| o[j].0).count();
        let duals = outcomes.iter().filter(|o| o[j].1).count();
        let xor_violations = outcomes.iter().filter(|o| o[j].0 == o[j].1).count();
        let p_hat = hits as f64 / n_samples as f64;
        let se = binomial_se(p_hat, n_samples);
        let symmetric = (eta - 0.5).abs() < 1e-12;
        let tol = if symmetric { cfg.tolerances.crossing_symmetric } else { cfg.tolerances.crossing_general };
        checks.push(Check::at_most(&format!("config{j}_abs_error"), (p_hat - predicted).abs(), tol));
        checks.push(Check::holds(&format!("config{j}_complementary_sum_is_one"), hits + duals == n_samples && xor_violations == 0));
        rows.push(json!({
            "angles": angles, "boundaryPositions": pos, "latticeAngles": actual, "ringLength": n,
            "eta": eta, "predicted": predicted, "predictedAtLatticePoints": predicted_lattice,
            "pHat": p_hat, "standardError": se, "absError": (p_hat - predicted).abs(), "tolerance": tol,
            "complementaryPHat": duals as f64 / n_samples as f64, "xorViolations": xor_violations,
        }));
        table.push(
            [j as f64, angles[0], angles[1], angles[2], angles[3], *eta, *predicted, p_hat, se].iter().map(|v| v.to_string()).collect(),
        );
    }
    let stats = json!({ "domainHexes": d.len(), "samples": n_samples, "configurations": rows });
    Ok(ExperimentReport::new(cfg, stats, checks, vec![table], timer.seconds()))
}

/// Blue left-right against Yellow top-bottom crossings of the `l × l`
/// rhombus; exactly one occurs in every configuration.
fn rhombus(cfg: &ExperimentConfig, l: i32) -> Result<ExperimentReport, HarnessError> {
    let timer = Timer::start();
    let d = LatticeDomain::new(shapes::rhombus(l, l), 1.0)?;
    let [left, right, bottom, top] = rhombus_sides(l, l);
    let p = cfg.params.p;
    let results: Vec<(bool, bool)> = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let c = sample_coloring(&d, p, replica_seed(cfg.seed, i));
            (has_crossing(&c, &left, &right, Color::Blue), has_crossing(&c, &bottom, &top, Color::Yellow))
        })
        .collect();
    let n = cfg.n_samples;
    let blue = results.iter().filter(|r| r.0).count();
    let violations = results.iter().filter(|r| r.0 == r.1).count();
    let p_hat = blue as f64 / n as f64;
    let mut table = Table::new("rhombus_crossings", &["sample", "blue_left_right", "yellow_top_bottom"]);
    for (i, r) in results.iter().enumerate() {
        table.push(vec![i.to_string(), r.0.to_string(), r.1.to_string()]);
    }
    let stats = json!({
        "side": l, "samples": n, "pHatBlueLeftRight": p_hat, "standardError": binomial_se(p_hat, n),
        // the swap q <-> r is a lattice reflection exchanging the two crossing directions
        "predicted": 0.5, "xorViolations": violations,
    });
    let checks = vec![Check::at_most("xor_violations", violations as f64, 0.0)];
    Ok(ExperimentReport::new(cfg, stats, checks, vec![table], timer.seconds()))
}
