//! Simulator for spin-Hall MTJ winner-take-all (WTA) columns.
//!
//! A column is a set of cells, each built from a spin-Hall-effect driven
//! magnetic tunnel junction in a voltage-divider stack with an output
//! inverter. Cells receive a shared proximal input current and inhibit one
//! another through memristive connections from their output inverters back
//! into the heavy-metal write paths. A cell with a larger inhibitory output
//! conductance (higher "competitive advantage") suppresses its neighbours
//! faster and wins the competition, emulating the predictive state of a
//! cortical-memory column; when no cell has an advantage the column settles
//! into a shared, partially-active equilibrium (a "burst").
//!
//! Crate layout mirrors the physical stack:
//!
//! - [`magnetics`]: stochastic macrospin Landau-Lifshitz-Gilbert integration
//!   with shape/crystalline anisotropy, spin-Hall and thermal fields.
//! - [`devices`]: MTJ conductance, voltage-divider and inverter models with
//!   RC gate dynamics.
//! - [`column`]: the coupled N-cell simulation, steady-state detection and
//!   outcome classification.
//! - [`montecarlo`]: process-variation sampling and ensemble execution.
//! - [`analysis`]: power, energy and delay accounting.
//! - [`defaults`]: the calibrated operating point and scenario presets.
//! - [`output`]: CSV/JSON writers for traces and ensemble tables.
//!
//! # Axis and sign conventions
//!
//! Fixed project-wide (see [`conventions`] for the details):
//!
//! - x: free-layer length axis, heavy-metal charge-current direction, and
//!   crystalline easy axis.
//! - y: spin-Hall polarization axis and pinned-layer axis. The magnetization
//!   projection `m·y` sets the MTJ conductance.
//! - z: film normal (strong demagnetizing hard axis).
//! - Negative heavy-metal charge current drives the free layer toward the
//!   parallel (high-conductance, high-output) state; positive current drives
//!   it antiparallel (low-output). Inhibitory currents are positive.

pub mod analysis;
pub mod column;
pub mod conventions;
pub mod defaults;
pub mod devices;
pub mod magnetics;
pub mod montecarlo;
pub mod output;
pub mod vec3;

pub use vec3::Vec3;

use thiserror::Error;

/// Errors produced by simulation and I/O paths.
#[derive(Debug, Error)]
pub enum SimError {
    /// The integrator produced a non-finite magnetization or voltage.
    #[error("integration failure at t = {time_s:.3e} s: non-finite state")]
    Integration { time_s: f64 },
    /// A configuration value violates an invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// Output files could not be written.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
