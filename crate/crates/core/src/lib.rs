//! Steady state, stability, cooling and entanglement of a driven
//! optomechanical cavity containing a Kerr medium and an optical parametric
//! amplifier.
//!
//! The pipeline for one operating point is
//! [`steady_state::solve_branches`] → [`dynamics::linearize`] →
//! [`dynamics::assess_stability`] → [`covariance::observables`];
//! [`sweep`] runs it over parameter grids and the named figure presets.

pub mod analytic;
pub mod checks;
pub mod config;
pub mod covariance;
pub mod dynamics;
pub mod numerics;
pub mod steady_state;
pub mod sweep;
pub mod units;

pub use units::{DerivedParams, SystemParams};

/// Engine version recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
