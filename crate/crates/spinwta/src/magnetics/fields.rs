//! Effective-field contributions: demagnetization, crystalline anisotropy,
//! spin-Hall drive and thermal fluctuations. All fields are in A/m.

use super::{MagnetParams, ThermalConfig};
use crate::conventions;
use crate::Vec3;
use rand::Rng;
use rand_distr::StandardNormal;

/// Demagnetizing field of the uniformly magnetized prism,
/// `H_d = -Ms * (Nx*mx, Ny*my, Nz*mz)`.
pub fn demag_field(m: Vec3, p: &MagnetParams) -> Vec3 {
    let (nx, ny, nz) = p.demag_factors;
    Vec3::new(-p.ms * nx * m.x, -p.ms * ny * m.y, -p.ms * nz * m.z)
}

/// Uniaxial crystalline anisotropy field,
/// `H_k = (2*K / (mu0 * Ms)) * (m . e) * e`.
pub fn anisotropy_field(m: Vec3, p: &MagnetParams) -> Vec3 {
    let e = p.easy_axis;
    e * (2.0 * p.k_u / (p.mu0 * p.ms) * m.dot(e))
}

/// Spin current collected by the free layer from a heavy-metal charge
/// current, `I_s = theta * (t_hm / L_fm) * I`.
pub fn spin_current(i_charge: f64, p: &MagnetParams) -> f64 {
    p.theta_sh * (p.t_hm / p.l_fm) * i_charge
}

/// Spin-Hall effective field along the spin-polarization axis,
/// `H_she = (1/mu0) * (I_s / 2q) * (hbar / (alpha * V * Ms)) * y_hat`,
/// scaled by the calibrated torque prefactor. The sign is fixed so that
/// negative charge current yields torque toward the parallel state
/// (`m·y -> +1`).
///
pub fn she_field(i_charge: f64, p: &MagnetParams) -> Vec3 {
    let i_s = spin_current(i_charge, p);
    let magnitude =
        (1.0 / p.mu0) * (i_s / (2.0 * p.q)) * (p.hbar / (p.alpha * p.volume * p.ms));
    -conventions::SPIN_POLARIZATION_AXIS * (p.she_scale * magnitude)
}

/// Standard deviation of each thermal-field component, A/m. The variance
/// expression `2*kB*T*alpha / (gamma*Ms*V*dt)` yields tesla^2 with the
/// rad/(s·T) gyromagnetic ratio; the division by mu0 converts to A/m.
pub fn thermal_sigma(tc: &ThermalConfig, p: &MagnetParams) -> f64 {
    let var = 2.0 * p.k_b * p.temperature * p.alpha / (p.gamma * p.ms * p.volume * tc.dt);
    var.sqrt() / p.mu0
}

/// One thermal-field draw: i.i.d. Gaussian components with standard
/// deviation [`thermal_sigma`], held constant across the substeps of the
/// step it is drawn for. Disabled configs and T = 0 return zero.
pub fn thermal_field<R: Rng + ?Sized>(rng: &mut R, tc: &ThermalConfig, p: &MagnetParams) -> Vec3 {
    if !tc.enabled || p.temperature == 0.0 {
        return Vec3::ZERO;
    }
    let sigma = thermal_sigma(tc, p);
    let gx: f64 = rng.sample(StandardNormal);
    let gy: f64 = rng.sample(StandardNormal);
    let gz: f64 = rng.sample(StandardNormal);
    Vec3::new(gx, gy, gz) * sigma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magnetics::MU_0;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn demag_field_is_linear_and_axis_aligned() {
        let p = MagnetParams::default();
        assert_eq!(demag_field(Vec3::ZERO, &p), Vec3::ZERO);

        let mut p2 = p.clone();
        p2.demag_factors = (0.0, 0.1, 0.9);
        assert_eq!(demag_field(Vec3::X, &p2), Vec3::ZERO);

        // (0,0,1) with Nz = 0.9, Ms = 1e6 -> (0,0,-9e5)
        let h = demag_field(Vec3::Z, &p2);
        assert_relative_eq!(h.z, -9e5, max_relative = 1e-12);
        assert_eq!((h.x, h.y), (0.0, 0.0));
    }

    #[test]
    fn anisotropy_field_magnitude_and_nulls() {
        let p = MagnetParams::default(); // K = 10 kJ/m^3, Ms = 1 MA/m, easy x
        // m perpendicular to easy axis
        assert_eq!(anisotropy_field(Vec3::Y, &p), Vec3::ZERO);
        // m along easy axis: |H| = 2K/(mu0 Ms)
        let h = anisotropy_field(Vec3::X, &p);
        assert_relative_eq!(h.x, 2.0 * 1e4 / (MU_0 * 1e6), max_relative = 1e-12);
        assert_relative_eq!(h.x, 1.5915494309e4, max_relative = 1e-9);
        // K = 0
        let mut p0 = p.clone();
        p0.k_u = 0.0;
        assert_eq!(anisotropy_field(Vec3::X, &p0), Vec3::ZERO);
    }

    #[test]
    fn spin_current_geometry_ratio() {
        // theta = 0.3, t_hm = 5 nm, L_fm = 60 nm, I = 1 uA -> I_s = 25 nA
        let p = MagnetParams::default();
        assert_relative_eq!(spin_current(1e-6, &p), 25e-9, max_relative = 1e-12);
        assert_eq!(spin_current(0.0, &p), 0.0);
    }

    #[test]
    fn she_field_magnitude_matches_hand_computation() {
        let mut p = MagnetParams::default();
        p.she_scale = 1.0; // bare torque prefactor
        let h = she_field(1e-6, &p);
        // independent grouping of the same arithmetic
        let i_s = 25e-9;
        let expected = (i_s / (2.0 * 1.602176634e-19)) * 1.054571817e-34
            / (0.01 * 1.8e-24 * 1e6)
            / MU_0;
        assert_relative_eq!(h.y.abs(), expected, max_relative = 1e-12);
        assert_relative_eq!(expected, 363.7419, max_relative = 1e-5);
        assert_eq!((h.x, h.z), (0.0, 0.0));
    }

    #[test]
    fn she_field_sign_drives_parallel_for_negative_current() {
        let p = MagnetParams::default();
        let h = she_field(-1e-6, &p);
        assert!(h.y > 0.0, "negative current must produce +y field (parallel torque)");
        assert_eq!(she_field(0.0, &p), Vec3::ZERO);
    }

    #[test]
    fn thermal_field_zero_when_disabled_or_cold() {
        let p = MagnetParams::default();
        let tc = ThermalConfig { enabled: false, ..ThermalConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(thermal_field(&mut rng, &tc, &p), Vec3::ZERO);

        let mut cold = p.clone();
        cold.temperature = 0.0;
        let tc_on = ThermalConfig::default();
        assert_eq!(thermal_field(&mut rng, &tc_on, &cold), Vec3::ZERO);
    }

    #[test]
    fn thermal_field_is_deterministic_per_seed() {
        let p = MagnetParams::default();
        let tc = ThermalConfig::default();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..8).map(|_| thermal_field(&mut rng, &tc, &p)).collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
    }

    /// Sample variance over 1e6 draws matches the closed-form variance
    /// within 2% for each component.
    #[test]
    fn thermal_field_variance_matches_formula() {
        let p = MagnetParams::default();
        let tc = ThermalConfig::default();
        let sigma = thermal_sigma(&tc, &p);
        let n = 1_000_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut sum = Vec3::ZERO;
        let mut sq = Vec3::ZERO;
        for _ in 0..n {
            let h = thermal_field(&mut rng, &tc, &p);
            sum += h;
            sq += Vec3::new(h.x * h.x, h.y * h.y, h.z * h.z);
        }
        let nf = n as f64;
        for (s, q) in [(sum.x, sq.x), (sum.y, sq.y), (sum.z, sq.z)] {
            let mean = s / nf;
            let var = q / nf - mean * mean;
            assert_relative_eq!(var, sigma * sigma, max_relative = 0.02);
            // |mean| < 3 sigma / sqrt(N)
            assert!(mean.abs() < 3.0 * sigma / nf.sqrt());
        }
    }
}
