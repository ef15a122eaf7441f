use percolab_core::exploration::{LatticePath, default_pretend, explore_chordal};
use percolab_core::hexlattice::{HexCoord, shapes};
use percolab_core::loop_ensemble::{extract_loops_direct, paste_excursions, touches_first};
use percolab_core::percolation::Coloring;
use rayon::prelude::*;
use serde_json::json;

use super::Timer;
use crate::config::ExperimentConfig;
use crate::report::{Check, ExperimentReport, Table};
use crate::HarnessError;

/// With `c` the midpoint of arc `[a, b)` and `d` the midpoint of `[b, a)`:
/// does the path touch `[b, d)` before `[c, b)`?
pub fn pasting_functional(ring: &[HexCoord], path: &LatticePath, a: usize, b: usize) -> bool {
    let n = ring.len();
    let c = (a + ((b + n - a) % n) / 2) % n;
    let d = (b + ((a + n - b) % n) / 2) % n;
    let arc = |from: usize, to: usize| -> Vec<HexCoord> { (0..(to + n - from) % n).map(|k| ring[(from + k) % n]).collect() };
    touches_first(path, &arc(b, d), &arc(c, b))
}

struct Row {
    hexes: usize,
    a: usize,
    b: usize,
    configurations: usize,
    pasted_true: usize,
    explored_true: usize,
    identical: usize,
    agreeing: usize,
}

pub fn run_excursion_pasting(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    if cfg.params.max_hexes > 16 {
        return Err(HarnessError::Config("excursion pasting is exhaustive only, at most 16 hexagons".into()));
    }
    let timer = Timer::start();
    let family = shapes::small_domain_family(cfg.params.max_hexes);
    let rows: Vec<Row> = family
        .par_iter()
        .flat_map_iter(|d| {
            let ring = d.boundary_adjacent();
            let n = ring.len();
            let mut pairs = vec![(0, n / 2), (n / 3, 0), (1, n - 2)];
            pairs.retain(|&(a, b)| a != b);
            pairs.dedup();
            pairs.into_iter().map(move |(a, b)| {
                let mut row = Row { hexes: d.len(), a, b, configurations: 0, pasted_true: 0, explored_true: 0, identical: 0, agreeing: 0 };
                for mask in 0..(1u64 << d.len()) {
                    let c = Coloring::from_mask(d, mask);
                    let e = extract_loops_direct(&c).expect("lattice-Jordan domain");
                    let pasted = paste_excursions(&e, d, a, b).expect("valid arc");
                    let explored = explore_chordal(&c.clone().with_pretend(default_pretend(n, a, b)), a, b).expect("valid split");
                    let fp = pasting_functional(ring, &pasted, a, b);
                    let fe = pasting_functional(ring, &explored, a, b);
                    row.configurations += 1;
                    row.pasted_true += usize::from(fp);
                    row.explored_true += usize::from(fe);
                    row.identical += usize::from(pasted == explored);
                    row.agreeing += usize::from(fp == fe);
                }
                row
            })
        })
        .collect();

    let tv = |r: &Row| (r.pasted_true as f64 - r.explored_true as f64).abs() / r.configurations as f64;
    let max_tv = rows.iter().map(tv).fold(0.0, f64::max);
    let total: usize = rows.iter().map(|r| r.configurations).sum();
    let identical: usize = rows.iter().map(|r| r.identical).sum();
    // one hexagon: the path runs along the side fixed by its color, so the two
    // constructions must agree coloring by coloring
    let one_hex = rows.iter().filter(|r| r.hexes == 1).all(|r| r.agreeing == r.configurations);
    let mut table = Table::new("pasting", &["hexes", "a", "b", "configurations", "pasted_true", "explored_true", "tv", "identity_rate"]);
    for r in &rows {
        table.push(vec![
            r.hexes.to_string(),
            r.a.to_string(),
            r.b.to_string(),
            r.configurations.to_string(),
            r.pasted_true.to_string(),
            r.explored_true.to_string(),
            tv(r).to_string(),
            (r.identical as f64 / r.configurations as f64).to_string(),
        ]);
    }
    let stats = json!({
        "domains": family.len(), "cases": rows.len(), "configurations": total,
        "maxTotalVariation": max_tv, "identityRate": identical as f64 / total as f64,
    });
    let checks = vec![Check::at_most("max_total_variation", max_tv, 0.0), Check::holds("one_hexagon_agrees_per_coloring", one_hex)];
    Ok(ExperimentReport::new(cfg, stats, checks, vec![table], timer.seconds()))
}
