//! One driver per experiment kind.

mod arms;
mod crossing;
mod hitting;
mod kappa;
mod loops;
mod pasting;

use std::time::Instant;

pub use arms::{SemiAnnulus, run_arm_experiment};
pub use crossing::{disc_arc_positions, run_crossing_experiment};
pub use hitting::{ks_distance, run_hitting_experiment};
pub use kappa::run_kappa_experiment;
pub use loops::run_loops_equivalence;
pub use pasting::{pasting_functional, run_excursion_pasting};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::report::ExperimentReport;
use crate::HarnessError;

/// Validates the configuration and dispatches on its kind.
pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    cfg.validate()?;
    match cfg.kind {
        ExperimentKind::Crossing => run_crossing_experiment(cfg),
        ExperimentKind::Hitting => run_hitting_experiment(cfg),
        ExperimentKind::Kappa => run_kappa_experiment(cfg),
        ExperimentKind::LoopsEquivalence => run_loops_equivalence(cfg),
        ExperimentKind::ArmDecay => run_arm_experiment(cfg),
        ExperimentKind::ExcursionPasting => run_excursion_pasting(cfg),
    }
}

struct Timer(Instant);

impl Timer {
    fn start() -> Self {
        Self(Instant::now())
    }

    fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
