//! Geometry and sign conventions, fixed project-wide.
//!
//! All modules share one coordinate frame tied to the cell layout:
//!
//! | axis | meaning |
//! |------|---------|
//! | x    | free-layer length; heavy-metal charge-current direction; crystalline easy axis |
//! | y    | spin-Hall polarization; pinned-layer axis |
//! | z    | film normal |
//!
//! The free layer is a thin in-plane prism (length > width >> thickness), so
//! the demagnetizing tensor makes z a strong hard axis and x the shape easy
//! axis. The spin-Hall effective field lies along ±y; sweeping the
//! heavy-metal current rotates the magnetization smoothly within the film
//! plane against the x-axis anisotropy, which is what produces the smooth
//! (hysteresis-free) conductance response of the cell: `m·y` moves linearly
//! with current until it saturates at ±1.
//!
//! Sign conventions:
//!
//! - Charge current `I` is positive along +x in the heavy metal.
//! - The spin-Hall field is `-y` for positive current, so *negative* current
//!   produces torque toward the parallel state (`m·y = +1`, high
//!   conductance) and positive current drives antiparallel (`m·y = -1`).
//! - The voltage divider places the MTJ against the low sensing rail by
//!   default, so the parallel state pulls the inverter input low and the
//!   inverter output high: parallel = winning (high-output) state,
//!   antiparallel = resting state at the low rail.
//! - Inhibitory currents `G·(V_out - V_S1)` are therefore non-negative and
//!   always push the receiving cell toward the resting state; they vanish
//!   once the source cell output sits at the low rail.
//! - "Excitation" means current of the parallel-driving (negative) sign.
//!   Sweep tables and CSV outputs report the signed heavy-metal current.

use crate::Vec3;

/// Charge-current direction in the heavy metal.
pub const CURRENT_AXIS: Vec3 = Vec3::X;
/// Spin-Hall polarization axis; also the default pinned-layer axis.
pub const SPIN_POLARIZATION_AXIS: Vec3 = Vec3::Y;
/// Film normal.
pub const FILM_NORMAL_AXIS: Vec3 = Vec3::Z;
/// Default crystalline easy axis (free-layer length).
pub const EASY_AXIS: Vec3 = Vec3::X;
