use std::collections::BTreeMap;

use percolab_core::hexlattice::{LatticeDomain, shapes};
use percolab_core::loop_ensemble::{LoopEnsemble, extract_loops_algorithmic, extract_loops_direct};
use percolab_core::percolation::{Color, Coloring, sample_coloring};
use percolab_core::rng::replica_seed;
use rayon::prelude::*;
use serde_json::json;

use super::Timer;
use crate::config::{DomainShape, ExperimentConfig, LoopsMode};
use crate::report::{Check, ExperimentReport, Table};
use crate::HarnessError;

#[derive(Default)]
struct Tally {
    configurations: usize,
    violations: usize,
    first_violation: Option<String>,
    loop_counts: BTreeMap<usize, usize>,
    loop_lengths: BTreeMap<usize, usize>,
}

impl Tally {
    fn add(&mut self, label: impl FnOnce() -> String, algo: Result<LoopEnsemble, String>, direct: &LoopEnsemble) {
        self.configurations += 1;
        *self.loop_counts.entry(direct.len()).or_default() += 1;
        for l in &direct.loops {
            *self.loop_lengths.entry(l.len()).or_default() += 1;
        }
        if algo.as_ref() != Ok(direct) {
            self.violations += 1;
            if self.first_violation.is_none() {
                self.first_violation = Some(label());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.configurations += other.configurations;
        self.violations += other.violations;
        self.first_violation = self.first_violation.or(other.first_violation);
        for (k, v) in other.loop_counts {
            *self.loop_counts.entry(k).or_default() += v;
        }
        for (k, v) in other.loop_lengths {
            *self.loop_lengths.entry(k).or_default() += v;
        }
        self
    }
}

pub fn run_loops_equivalence(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let timer = Timer::start();
    let rule = cfg.params.seed_rule;
    let (tally, domains, probe) = match cfg.params.loops_mode {
        LoopsMode::Exhaustive => {
            if cfg.params.max_hexes > 20 {
                return Err(HarnessError::Config("exhaustive mode is limited to 20 hexagons".into()));
            }
            let family = shapes::small_domain_family(cfg.params.max_hexes);
            let tally = family
                .par_iter()
                .map(|d| {
                    let mut t = Tally::default();
                    for mask in 0..(1u64 << d.len()) {
                        let c = Coloring::from_mask(d, mask);
                        let direct = extract_loops_direct(&c).expect("lattice-Jordan domain");
                        let algo = extract_loops_algorithmic(&c, rule).map_err(|e| e.to_string());
                        t.add(|| format!("{} hexes, mask {mask:#b}", d.len()), algo, &direct);
                    }
                    t
                })
                .reduce(Tally::default, Tally::merge);
            let probe = family.last().cloned().expect("family is nonempty");
            (tally, family.len(), probe)
        }
        LoopsMode::Sampled => {
            let DomainShape::Rhombus { l } = cfg.domain_shape else {
                return Err(HarnessError::Config("sampled loops mode needs a rhombus".into()));
            };
            let d = LatticeDomain::new(shapes::rhombus(l, l), 1.0)?;
            let tally = (0..cfg.n_samples as u64)
                .into_par_iter()
                .map(|i| {
                    let seed = replica_seed(cfg.seed, i);
                    let c = sample_coloring(&d, cfg.params.p, seed);
                    let direct = extract_loops_direct(&c).expect("rhombus is lattice-Jordan");
                    let algo = extract_loops_algorithmic(&c, rule).map_err(|e| e.to_string());
                    let mut t = Tally::default();
                    t.add(|| format!("replica {i}, seed {seed}"), algo, &direct);
                    t
                })
                .reduce(Tally::default, Tally::merge);
            (tally, 1, d)
        }
    };

    let blue = Coloring::uniform(&probe, Color::Blue);
    let all_blue_empty = extract_loops_direct(&blue)?.is_empty() && extract_loops_algorithmic(&blue, rule)?.is_empty();

    let mut counts = Table::new("loop_count_histogram", &["loops", "configurations"]);
    for (k, v) in &tally.loop_counts {
        counts.push(vec![k.to_string(), v.to_string()]);
    }
    let mut lengths = Table::new("loop_length_histogram", &["edges", "loops"]);
    for (k, v) in &tally.loop_lengths {
        lengths.push(vec![k.to_string(), v.to_string()]);
    }
    let stats = json!({
        "mode": cfg.params.loops_mode, "domains": domains, "configurations": tally.configurations,
        "violations": tally.violations, "firstViolation": tally.first_violation, "allBlueEmpty": all_blue_empty,
    });
    let checks = vec![Check::at_most("violations", tally.violations as f64, 0.0), Check::holds("all_blue_gives_no_loops", all_blue_empty)];
    Ok(ExperimentReport::new(cfg, stats, checks, vec![counts, lengths], timer.seconds()))
}
