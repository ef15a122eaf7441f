//! Experiment drivers for percolab: each run turns a configuration into a
//! report of empirical statistics, continuum predictions and pass/fail
//! checks.

pub mod config;
pub mod experiments;
pub mod halfplane;
pub mod report;

use thiserror::Error;

pub use config::{DomainShape, ExperimentConfig, ExperimentKind, LoopsMode, Params, Tolerances};
pub use experiments::run;
pub use report::{Check, ExperimentReport, Table};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("path {id}: {source}")]
    Path { id: usize, source: percolab_core::loewner::LoewnerError },
    #[error(transparent)]
    Loewner(#[from] percolab_core::loewner::LoewnerError),
    #[error(transparent)]
    Lattice(#[from] percolab_core::hexlattice::LatticeError),
    #[error(transparent)]
    Exploration(#[from] percolab_core::exploration::ExplorationError),
    #[error(transparent)]
    Loops(#[from] percolab_core::loop_ensemble::LoopError),
    #[error(transparent)]
    Cardy(#[from] percolab_core::conformal_cardy::CardyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
