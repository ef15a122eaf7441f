use std::collections::{HashMap, VecDeque};

use percolab_core::hexlattice::{HexCoord, shapes};
use percolab_core::percolation::{Color, HashedColors, SiteColors};
use percolab_core::rng::replica_seed;
use rayon::prelude::*;
use serde_json::json;

use super::{Timer, binomial_se};
use crate::config::{DomainShape, ExperimentConfig};
use crate::halfplane::{Swapped, center_in_half_plane};
use crate::report::{Check, ExperimentReport, Table};
use crate::HarnessError;

/// Leading samples on which the color-swapped event is compared.
const SWAP_CHECKS: usize = 1000;

/// Hexagons of the strip whose centers lie between the two radii around the
/// origin vertex, with adjacency and the hexagons touching each rim.
pub struct SemiAnnulus {
    pub hexes: Vec<HexCoord>,
    adj: Vec<Vec<usize>>,
    inner: Vec<bool>,
    outer: Vec<bool>,
}

impl SemiAnnulus {
    pub fn new(width: f64, height: i32, r_in: f64, r_out: f64) -> Self {
        let dist = |h: HexCoord| center_in_half_plane(h).norm();
        let hexes: Vec<HexCoord> = shapes::strip(width, height).into_iter().filter(|&h| (r_in..=r_out).contains(&dist(h))).collect();
        let index: HashMap<HexCoord, usize> = hexes.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        let adj = hexes.iter().map(|h| h.neighbors().iter().filter_map(|nb| index.get(nb).copied()).collect()).collect();
        let touches = |h: &HexCoord, inside: bool| {
            h.neighbors().iter().any(|nb| nb.r >= 0 && if inside { dist(*nb) < r_in } else { dist(*nb) > r_out })
        };
        let inner = hexes.iter().map(|h| touches(h, true)).collect();
        let outer = hexes.iter().map(|h| touches(h, false)).collect();
        Self { hexes, adj, inner, outer }
    }

    fn crossing(&self, open: &[bool]) -> bool {
        let mut seen = vec![false; self.hexes.len()];
        let mut queue: VecDeque<usize> = (0..self.hexes.len()).filter(|&i| open[i] && self.inner[i]).collect();
        for &i in &queue {
            seen[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            if self.outer[i] {
                return true;
            }
            for &j in &self.adj[i] {
                if open[j] && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        false
    }

    /// At least `k` vertex-disjoint crossings through `open` hexagons, by
    /// augmenting paths on the vertex-split graph.
    fn disjoint_crossings(&self, open: &[bool], k: usize) -> bool {
        let n = self.hexes.len();
        let (source, sink) = (2 * n, 2 * n + 1);
        let mut flow = Flow::new(2 * n + 2);
        for i in (0..n).filter(|&i| open[i]) {
            flow.edge(2 * i, 2 * i + 1);
            if self.inner[i] {
                flow.edge(source, 2 * i);
            }
            if self.outer[i] {
                flow.edge(2 * i + 1, sink);
            }
            for &j in self.adj[i].iter().filter(|&&j| open[j]) {
                flow.edge(2 * i + 1, 2 * j);
            }
        }
        (0..k).all(|_| flow.augment(source, sink))
    }

    /// Two disjoint crossings of the opposite color and one of `single`.
    pub fn three_arm<S: SiteColors>(&self, sites: &S, single: Color) -> bool {
        let single_open: Vec<bool> = self.hexes.iter().map(|&h| sites.site_color(h) == single).collect();
        if !self.crossing(&single_open) {
            return false;
        }
        let other: Vec<bool> = single_open.iter().map(|b| !b).collect();
        self.disjoint_crossings(&other, 2)
    }
}

pub fn run_arm_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let DomainShape::StripHalfPlane { width, height } = cfg.domain_shape else {
        return Err(HarnessError::Config("arm decay needs a stripHalfPlane domain".into()));
    };
    let r_in = cfg.params.inner_radius;
    let mut ratios = cfg.params.ratios.clone();
    ratios.sort_by(f64::total_cmp);
    if ratios.is_empty() || !(r_in > 0.0) || ratios[0] < 1.0 {
        return Err(HarnessError::Config("ratios must be at least 1 with a positive inner radius".into()));
    }
    let r_max = r_in * ratios[ratios.len() - 1];
    if r_max + 2.0 > width / 2.0 || r_max + 2.0 > 1.5 * (height - 1) as f64 {
        return Err(HarnessError::Config(format!("semi-annulus of radius {r_max} does not fit the strip")));
    }
    let timer = Timer::start();
    let annuli: Vec<Option<SemiAnnulus>> =
        ratios.iter().map(|&q| (q > 1.0).then(|| SemiAnnulus::new(width, height, r_in, r_in * q))).collect();
    let p = cfg.params.p;
    // the same colorings serve every ratio
    let results: Vec<(Vec<bool>, bool)> = (0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let sites = HashedColors::new(p, replica_seed(cfg.seed, i));
            let events: Vec<bool> = annuli.iter().map(|a| a.as_ref().is_none_or(|a| a.three_arm(&sites, Color::Blue))).collect();
            let swap_ok = (i as usize) >= SWAP_CHECKS
                || annuli
                    .iter()
                    .zip(&events)
                    .all(|(a, &ev)| a.as_ref().is_none_or(|a| a.three_arm(&Swapped(sites), Color::Yellow) == ev));
            (events, swap_ok)
        })
        .collect();

    let n = cfg.n_samples;
    let probs: Vec<f64> = (0..ratios.len()).map(|k| results.iter().filter(|r| r.0[k]).count() as f64 / n as f64).collect();
    let swap_mismatches = results.iter().filter(|r| !r.1).count();
    let decreasing = probs.windows(2).all(|w| w[1] < w[0]);
    let fit: Vec<(f64, f64)> = ratios.iter().zip(&probs).filter(|(q, p)| **q > 1.0 && **p > 0.0).map(|(q, p)| (q.ln(), p.ln())).collect();
    let slope = if fit.len() >= 2 {
        let mx = fit.iter().map(|f| f.0).sum::<f64>() / fit.len() as f64;
        let my = fit.iter().map(|f| f.1).sum::<f64>() / fit.len() as f64;
        fit.iter().map(|f| (f.0 - mx) * (f.1 - my)).sum::<f64>() / fit.iter().map(|f| (f.0 - mx).powi(2)).sum::<f64>()
    } else {
        f64::NAN
    };

    let mut table = Table::new("three_arm", &["ratio", "outer_radius", "hexes", "probability", "se"]);
    for (k, q) in ratios.iter().enumerate() {
        let hexes = annuli[k].as_ref().map_or(0, |a| a.hexes.len());
        table.push(vec![q.to_string(), (r_in * q).to_string(), hexes.to_string(), probs[k].to_string(), binomial_se(probs[k], n).to_string()]);
    }
    let stats = json!({
        "innerRadius": r_in, "ratios": ratios, "probabilities": probs, "logLogSlope": slope,
        "samples": n, "swapChecked": n.min(SWAP_CHECKS), "swapMismatches": swap_mismatches,
    });
    let checks = vec![
        Check::holds("strictly_decreasing", decreasing),
        Check::at_most("log_log_slope", slope, 0.0),
        Check::at_most("swap_mismatches", swap_mismatches as f64, 0.0),
    ];
    Ok(ExperimentReport::new(cfg, stats, checks, vec![table], timer.seconds()))
}

/// Unit-capacity residual graph.
struct Flow {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u8>,
}

impl Flow {
    fn new(nodes: usize) -> Self {
        Self { head: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(1);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// One breadth-first augmenting path; edge `e ^ 1` is the reverse of `e`.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut via = vec![usize::MAX; self.head.len()];
        let mut queue = VecDeque::from([s]);
        via[s] = usize::MAX - 1;
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && via[v] == usize::MAX {
                    via[v] = e;
                    if v == t {
                        let mut w = t;
                        while w != s {
                            let e = via[w];
                            self.cap[e] -= 1;
                            self.cap[e ^ 1] += 1;
                            w = self.to[e ^ 1];
                        }
                        return true;
                    }
                    queue.push_back(v);
                }
            }
        }
        false
    }
}
