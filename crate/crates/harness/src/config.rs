//! Experiment configuration, read from JSON and echoed into every report.

use std::f64::consts::PI;
use std::path::PathBuf;

use percolab_core::loop_ensemble::SeedRule;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Crossing,
    Hitting,
    Kappa,
    LoopsEquivalence,
    ArmDecay,
    ExcursionPasting,
}

/// Domain sizes are in lattice units: hexagon circumradius 1, so the
/// physical size is the value times the mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum DomainShape {
    Rhombus { l: i32 },
    DiscApprox { radius: f64 },
    StripHalfPlane { width: f64, height: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopsMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct Tolerances {
    /// Allowed |p̂ − F(η)| when η = 1/2.
    pub crossing_symmetric: f64,
    pub crossing_general: f64,
    pub ks: f64,
    pub kappa_range: (f64, f64),
    pub alpha: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { crossing_symmetric: 0.01, crossing_general: 0.015, ks: 0.03, kappa_range: (5.4, 6.6), alpha: 0.01 }
    }
}

/// Settings used by a single experiment kind; the others ignore them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase")]
pub struct Params {
    /// Blue probability.
    pub p: f64,
    /// Crossing: counterclockwise angles of the four arc endpoints, one
    /// quadruple per configuration.
    pub arcs: Vec<[f64; 4]>,
    /// Hitting: semicircle radius.
    pub exit_radius: f64,
    /// Kappa: capacity at which explorations stop (lattice units squared).
    pub t_max: f64,
    /// Kappa: distance the path must keep from the strip's sides.
    pub side_margin: f64,
    /// Kappa: number of uniform grid times up to `t_max`.
    pub grid_points: usize,
    /// Kappa: replace the lattice by Brownian drivings of this κ, traced and
    /// unzipped again.
    pub synthetic_kappa: Option<f64>,
    pub synthetic_steps: usize,
    pub loops_mode: LoopsMode,
    pub seed_rule: SeedRule,
    /// Loops and pasting: largest domain enumerated exhaustively.
    pub max_hexes: usize,
    /// Arms: inner radius of the semi-annulus and the outer/inner ratios.
    pub inner_radius: f64,
    pub ratios: Vec<f64>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            p: 0.5,
            arcs: vec![[0.0, PI / 2.0, PI, 1.5 * PI], [0.0, PI / 3.0, PI, 1.5 * PI], [0.0, 0.75 * PI, 1.25 * PI, 1.5 * PI]],
            exit_radius: 100.0,
            t_max: 1000.0,
            side_margin: 100.0,
            grid_points: 4,
            synthetic_kappa: None,
            synthetic_steps: 100,
            loops_mode: LoopsMode::Exhaustive,
            seed_rule: SeedRule::MaxDistance,
            max_hexes: 12,
            inner_radius: 4.0,
            ratios: vec![2.0, 4.0, 8.0, 16.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub domain_shape: DomainShape,
    pub mesh: f64,
    pub n_samples: usize,
    pub seed: u64,
    /// Directory under which the run directory is created.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub params: Params,
}

impl ExperimentConfig {
    /// The configuration used when no file is given.
    pub fn default_for(kind: ExperimentKind) -> Self {
        let (domain_shape, n_samples) = match kind {
            ExperimentKind::Crossing => (DomainShape::DiscApprox { radius: 100.0 }, 100_000),
            ExperimentKind::Hitting => (DomainShape::StripHalfPlane { width: 300.0, height: 80 }, 5000),
            ExperimentKind::Kappa => (DomainShape::StripHalfPlane { width: 800.0, height: 100 }, 2000),
            ExperimentKind::LoopsEquivalence => (DomainShape::Rhombus { l: 50 }, 1000),
            ExperimentKind::ArmDecay => (DomainShape::StripHalfPlane { width: 140.0, height: 46 }, 10_000),
            ExperimentKind::ExcursionPasting => (DomainShape::Rhombus { l: 1 }, 1),
        };
        let mut params = Params::default();
        if kind == ExperimentKind::ExcursionPasting {
            params.max_hexes = 14;
        }
        Self { kind, domain_shape, mesh: 1.0, n_samples, seed: 20_240_601, output: None, tolerances: Tolerances::default(), params }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.n_samples < 1 {
            return bad("nSamples must be at least 1");
        }
        if !(self.mesh > 0.0 && self.mesh.is_finite()) {
            return bad("mesh must be positive");
        }
        if !(0.0..=1.0).contains(&self.params.p) {
            return bad("p must lie in [0, 1]");
        }
        match self.domain_shape {
            DomainShape::Rhombus { l } if l < 1 => bad("rhombus side must be positive"),
            DomainShape::DiscApprox { radius } if !(radius >= 1.0) => bad("disc radius must be at least 1"),
            DomainShape::StripHalfPlane { width, height } if !(width >= 4.0) || height < 2 => bad("strip too small"),
            _ => Ok(()),
        }
    }

    /// Hex digest of the configuration without its output location.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        let bytes = serde_json::to_vec(&c).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}
