//! Critical site percolation on the triangular lattice: exploration paths,
//! interface loops, Cardy's formula and chordal Loewner evolution.

pub mod hexlattice;
pub mod percolation;
pub mod rng;
pub mod exploration;
pub mod loop_ensemble;
pub mod conformal_cardy;
pub mod loewner;
pub mod metrics;
