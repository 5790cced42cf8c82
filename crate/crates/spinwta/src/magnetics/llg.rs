//! Landau-Lifshitz-Gilbert right-hand side and the RK4 stepper.

use super::MagnetParams;
use crate::{SimError, Vec3};

/// LLG time derivative,
/// `dm/dt = -gamma*mu0 * ( m x H  +  alpha * m x (m x H) )`.
///
/// The damping term relaxes `m` toward the effective field so the intrinsic
/// energy is non-increasing; precession alone conserves it. The output is
/// orthogonal to `m` for any input, which is what preserves the norm of the
/// exact flow.
pub fn llg_rhs(m: Vec3, h_eff: Vec3, p: &MagnetParams) -> Vec3 {
    let m_x_h = m.cross(h_eff);
    let m_x_m_x_h = m.cross(m_x_h);
    -(m_x_h + m_x_m_x_h * p.alpha) * p.gamma_mu0()
}

/// One classical RK4 step of the LLG flow under a state-dependent field,
/// followed by renormalization to unit length. `field_fn` must be
/// deterministic within the step (the thermal field is frozen before
/// calling).
pub fn rk4_step<F>(m: Vec3, p: &MagnetParams, field_fn: F, dt: f64) -> crate::Result<Vec3>
where
    F: Fn(Vec3) -> Vec3,
{
    let f = |m: Vec3| llg_rhs(m, field_fn(m), p);
    let k1 = f(m);
    let k2 = f(m + k1 * (dt / 2.0));
    let k3 = f(m + k2 * (dt / 2.0));
    let k4 = f(m + k3 * dt);
    let next = m + (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0);
    if !next.is_finite() {
        return Err(SimError::Integration { time_s: f64::NAN });
    }
    Ok(next.normalized())
}

/// Intrinsic magnetic energy (demagnetization + crystalline anisotropy), J.
/// Used by the relaxation monotonicity checks; drive and thermal terms are
/// excluded.
pub fn magnetic_energy(m: Vec3, p: &MagnetParams) -> f64 {
    let (nx, ny, nz) = p.demag_factors;
    let e_demag = 0.5
        * p.mu0
        * p.ms
        * p.ms
        * p.volume
        * (nx * m.x * m.x + ny * m.y * m.y + nz * m.z * m.z);
    let proj = m.dot(p.easy_axis);
    let e_anis = -p.k_u * p.volume * proj * proj;
    e_demag + e_anis
}
