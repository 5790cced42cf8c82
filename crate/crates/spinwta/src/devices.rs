//! Electrical models of the SHE-MTJ voltage-divider cell and the empirical
//! CMOS inverter, including the RC gate dynamics.

use crate::Vec3;
use serde::{Deserialize, Serialize};

/// Tunnel-junction electrical parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MtjParams {
    /// Resistance-area product, Ohm·m^2.
    pub ra_product: f64,
    /// Tunnel magnetoresistance ratio, (R_AP - R_P)/R_P.
    pub tmr: f64,
    /// Junction area, m^2.
    pub area: f64,
    /// Parallel-state resistance, Ohm.
    pub r_p: f64,
    /// Antiparallel-state resistance, Ohm.
    pub r_ap: f64,
    /// Pinned-layer axis (unit vector); `m · pl_axis = cos(phi)`.
    pub pl_axis: Vec3,
}

impl MtjParams {
    /// Derives the junction resistances from the RA product (given in
    /// Ohm·um^2) and the free-layer footprint.
    pub fn from_geometry(ra_ohm_um2: f64, tmr: f64, length: f64, width: f64, pl_axis: Vec3) -> Self {
        let area = length * width;
        let r_p = ra_ohm_um2 * 1e-12 / area;
        MtjParams {
            ra_product: ra_ohm_um2 * 1e-12,
            tmr,
            area,
            r_p,
            r_ap: r_p * (1.0 + tmr),
            pl_axis,
        }
    }

    pub fn g_p(&self) -> f64 {
        1.0 / self.r_p
    }

    pub fn g_ap(&self) -> f64 {
        1.0 / self.r_ap
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.r_ap > self.r_p && self.r_p > 0.0) {
            return Err(format!("need R_AP > R_P > 0, got {} / {}", self.r_ap, self.r_p));
        }
        Ok(())
    }
}

impl Default for MtjParams {
    /// RA = 8 Ohm·um^2 and TMR = 1.5 on the default 60 x 30 nm footprint,
    /// giving R_P ~ 4.44 kOhm and R_AP = 2.5 R_P.
    fn default() -> Self {
        MtjParams::from_geometry(8.0, 1.5, 60e-9, 30e-9, crate::conventions::SPIN_POLARIZATION_AXIS)
    }
}

/// Which sensing rail the MTJ side of the divider stack connects to.
///
/// `MtjToLowRail` makes the parallel (high-conductance) state pull the
/// inverter input toward V_S1, so the inverter output goes high: parallel =
/// winning state. That is the orientation the winner-take-all coupling
/// requires, since inhibitory currents are positive (antiparallel-driving).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DividerOrientation {
    #[default]
    MtjToLowRail,
    MtjToHighRail,
}

/// Voltage-divider stack parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CellParams {
    /// Reference resistor, Ohm.
    pub r_ref: f64,
    /// Low sensing rail, V.
    pub v_s1: f64,
    /// High sensing rail, V.
    pub v_s2: f64,
    /// Heavy-metal resistance, Ohm.
    pub r_hm: f64,
    /// Divider orientation flag.
    pub orientation: DividerOrientation,
}

impl CellParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.v_s2 <= self.v_s1 {
            return Err("V_S2 must exceed V_S1".into());
        }
        if !(3.25e3..=140e3).contains(&self.r_ref) {
            return Err(format!("R_R = {} Ohm outside the 3.25-140 kOhm range", self.r_ref));
        }
        Ok(())
    }
}

impl Default for CellParams {
    fn default() -> Self {
        CellParams {
            r_ref: crate::defaults::R_REF,
            v_s1: -0.5,
            v_s2: 0.4,
            r_hm: 50.0,
            orientation: DividerOrientation::MtjToLowRail,
        }
    }
}

/// Empirical inverter model: piecewise-linear transfer with rail clamps and
/// a first-order output lag.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InverterParams {
    /// Rail magnitude, V (output spans ±V_DD).
    pub v_dd: f64,
    /// Intrinsic delay, s.
    pub tau_inv: f64,
    /// Gate capacitance, F.
    pub c_g: f64,
    /// On-resistance, Ohm.
    pub r_t: f64,
    /// Fan-out capacitance the output drives through `r_t`: the eight
    /// crossbar connections plus interconnect, F. Together with `tau_inv`
    /// this sets the output lag.
    pub c_out: f64,
    /// Transfer-curve midpoint, V.
    pub v_ref: f64,
    /// Linear-region slope magnitude, V/V.
    pub gain: f64,
    /// Per-device threshold shift, V (process variation).
    pub v_th_offset: f64,
}

impl InverterParams {
    /// Total output time constant: intrinsic delay plus the `R_T * C_out`
    /// drive pole.
    pub fn tau_out(&self) -> f64 {
        self.tau_inv + self.r_t * self.c_out
    }
}

impl Default for InverterParams {
    fn default() -> Self {
        InverterParams {
            v_dd: 0.5,
            tau_inv: 4.5e-12,
            c_g: 6.6e-15,
            r_t: 10.8e3,
            c_out: crate::defaults::C_OUT,
            v_ref: -0.5 + 0.035,
            gain: crate::defaults::INVERTER_GAIN,
            v_th_offset: 0.0,
        }
    }
}

/// MTJ conductance at magnetization `m`,
/// `G = (G_P + G_AP)/2 + (G_P - G_AP)/2 * cos(phi)` with
/// `cos(phi) = m · pl_axis`.
pub fn mtj_conductance(m: Vec3, mtj: &MtjParams) -> f64 {
    let cos_phi = m.dot(mtj.pl_axis);
    0.5 * (mtj.g_p() + mtj.g_ap()) + 0.5 * (mtj.g_p() - mtj.g_ap()) * cos_phi
}

/// Node voltage of the series divider between the sensing rails. With the
/// MTJ against the high rail the node is
/// `(V_S2*G + V_S1/R_R) / (G + 1/R_R)`; the low-rail orientation swaps the
/// rails.
pub fn divider_voltage(g_mtj: f64, cell: &CellParams) -> f64 {
    let g_ref = 1.0 / cell.r_ref;
    let (v_mtj_rail, v_ref_rail) = match cell.orientation {
        DividerOrientation::MtjToHighRail => (cell.v_s2, cell.v_s1),
        DividerOrientation::MtjToLowRail => (cell.v_s1, cell.v_s2),
    };
    (v_mtj_rail * g_mtj + v_ref_rail * g_ref) / (g_mtj + g_ref)
}

/// Thevenin source resistance seen by the inverter gate, Ohm.
pub fn divider_thevenin_resistance(g_mtj: f64, cell: &CellParams) -> f64 {
    1.0 / (g_mtj + 1.0 / cell.r_ref)
}

/// Piecewise-linear inverter transfer: rails for inputs beyond
/// `v_ref ± V_DD/gain`, slope `-gain` between, midpoint shifted by the
/// per-device threshold offset.
pub fn inverter_transfer(v_in: f64, inv: &InverterParams) -> f64 {
    let center = inv.v_ref + inv.v_th_offset;
    (-inv.gain * (v_in - center)).clamp(-inv.v_dd, inv.v_dd)
}

/// Advances the inverter gate voltage toward the divider node by `dt` with
/// the RC time constant `Thevenin(divider) * C_g`. Exact exponential update,
/// stable for any step size.
pub fn gate_update(v_gate: f64, v_node: f64, g_mtj: f64, cell: &CellParams, inv: &InverterParams, dt: f64) -> f64 {
    let tau_rc = divider_thevenin_resistance(g_mtj, cell) * inv.c_g;
    v_node + (v_gate - v_node) * (-dt / tau_rc).exp()
}

/// Advances the inverter output toward its transfer value with the output
/// lag [`InverterParams::tau_out`]. A zero time constant responds
/// instantly.
pub fn output_update(v_out: f64, v_gate: f64, inv: &InverterParams, dt: f64) -> f64 {
    let target = inverter_transfer(v_gate, inv);
    let tau = inv.tau_out();
    if tau <= 0.0 {
        target
    } else {
        target + (v_out - target) * (-dt / tau).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn conductance_hits_endpoints_and_midpoint() {
        let mtj = MtjParams::default();
        let pl = mtj.pl_axis;
        // parallel / antiparallel / perpendicular
        assert_relative_eq!(mtj_conductance(pl, &mtj), mtj.g_p(), max_relative = 1e-12);
        assert_relative_eq!(mtj_conductance(-pl, &mtj), mtj.g_ap(), max_relative = 1e-12);
        assert_relative_eq!(
            mtj_conductance(Vec3::X, &mtj),
            0.5 * (mtj.g_p() + mtj.g_ap()),
            max_relative = 1e-12
        );
    }

    #[test]
    fn resistances_follow_tmr() {
        let mtj = MtjParams::default();
        assert_relative_eq!(mtj.r_p, 8.0e-12 / (60e-9 * 30e-9), max_relative = 1e-12);
        assert_relative_eq!(mtj.r_p, 4444.444444, max_relative = 1e-9);
        assert_relative_eq!(mtj.r_ap, 2.5 * mtj.r_p, max_relative = 1e-12);
        mtj.validate().unwrap();
    }

    proptest! {
        #[test]
        fn conductance_is_monotone_in_cos_phi(c1 in -1.0f64..1.0, c2 in -1.0f64..1.0) {
            let mtj = MtjParams::default();
            let m = |c: f64| Vec3::new((1.0 - c * c).sqrt(), c, 0.0);
            let (lo, hi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
            prop_assert!(mtj_conductance(m(lo), &mtj) <= mtj_conductance(m(hi), &mtj));
        }
    }

    fn high_rail_cell(r_ref: f64) -> CellParams {
        CellParams { r_ref, orientation: DividerOrientation::MtjToHighRail, ..CellParams::default() }
    }

    #[test]
    fn divider_limits_and_symmetric_point() {
        let cell = high_rail_cell(7e3);
        // G -> inf pulls to the MTJ rail, G -> 0 to the reference rail
        assert_relative_eq!(divider_voltage(1e9, &cell), cell.v_s2, max_relative = 1e-6);
        assert_relative_eq!(divider_voltage(1e-12, &cell), cell.v_s1, max_relative = 1e-6);
        // G = 1/R_R: midpoint of the rails
        assert_relative_eq!(divider_voltage(1.0 / 7e3, &cell), -0.05, max_relative = 1e-12);
        // low-rail orientation mirrors the limits
        let low = CellParams { r_ref: 7e3, ..CellParams::default() };
        assert_relative_eq!(divider_voltage(1e9, &low), low.v_s1, max_relative = 1e-6);
    }

    #[test]
    fn divider_matches_series_stack_oracle() {
        // R_P ~ 4.44 kOhm, R_R = geometric mean of R_P and R_AP, phi = pi/2
        let mtj = MtjParams::default();
        let r_r = (mtj.r_p * mtj.r_ap).sqrt();
        let cell = high_rail_cell(r_r);
        let g_mid = 0.5 * (mtj.g_p() + mtj.g_ap());
        // series-divider arithmetic: V_S1 + (V_S2 - V_S1) * R_R/(R_R + R_mtj)
        let r_mtj = 1.0 / g_mid;
        let expected = cell.v_s1 + (cell.v_s2 - cell.v_s1) * r_r / (r_r + r_mtj);
        assert_relative_eq!(divider_voltage(g_mid, &cell), expected, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn divider_monotone_and_bounded(g1 in 1e-6f64..1e-2, g2 in 1e-6f64..1e-2) {
            let cell = high_rail_cell(7e3);
            let (lo, hi) = if g1 < g2 { (g1, g2) } else { (g2, g1) };
            let (v_lo, v_hi) = (divider_voltage(lo, &cell), divider_voltage(hi, &cell));
            prop_assert!(v_lo <= v_hi + 1e-15);
            prop_assert!(v_lo > cell.v_s1 && v_hi < cell.v_s2);
        }
    }

    #[test]
    fn inverter_anchor_points() {
        // the readout-stage slope (500 mV output difference over a 70 mV
        // input window around V_S1 + 35 mV)
        let inv = InverterParams { gain: 500.0 / 70.0, ..InverterParams::default() };
        let lo = inverter_transfer(-0.5, &inv);
        let hi = inverter_transfer(-0.5 + 0.070, &inv);
        assert_relative_eq!(lo - hi, 0.500, max_relative = 1e-12);
        // midpoint and rail saturation
        assert_relative_eq!(inverter_transfer(inv.v_ref, &inv), 0.0, epsilon = 1e-15);
        assert_relative_eq!(inverter_transfer(inv.v_dd, &inv), -inv.v_dd, epsilon = 1e-15);
    }

    #[test]
    fn inverter_threshold_offset_shifts_midpoint() {
        let inv = InverterParams { v_th_offset: 0.02, ..InverterParams::default() };
        assert_relative_eq!(inverter_transfer(inv.v_ref + 0.02, &inv), 0.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn inverter_is_monotone_non_increasing_and_clamped(
            v1 in -1.0f64..1.0, v2 in -1.0f64..1.0,
        ) {
            let inv = InverterParams::default();
            let (lo, hi) = if v1 < v2 { (v1, v2) } else { (v2, v1) };
            let (o_lo, o_hi) = (inverter_transfer(lo, &inv), inverter_transfer(hi, &inv));
            prop_assert!(o_lo >= o_hi);
            prop_assert!(o_lo.abs() <= inv.v_dd && o_hi.abs() <= inv.v_dd);
        }
    }

    #[test]
    fn gate_update_fixed_point_and_time_constant() {
        let cell = CellParams::default();
        let inv = InverterParams::default();
        let mtj = MtjParams::default();
        let g = mtj.g_p();
        // fixed point
        assert_eq!(gate_update(0.1, 0.1, g, &cell, &inv, 1e-12), 0.1);
        // one tau_RC reaches 1 - 1/e of the step
        let tau = divider_thevenin_resistance(g, &cell) * inv.c_g;
        let v = gate_update(0.0, 1.0, g, &cell, &inv, tau);
        assert_relative_eq!(v, 1.0 - (-1.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn rc_time_constants_scale_with_thevenin_resistance() {
        let cell = CellParams::default();
        let mtj = MtjParams::default();
        let r_th_p = divider_thevenin_resistance(mtj.g_p(), &cell);
        let r_th_ap = divider_thevenin_resistance(mtj.g_ap(), &cell);
        let ratio = (mtj.g_p() + 1.0 / cell.r_ref) / (mtj.g_ap() + 1.0 / cell.r_ref);
        assert_relative_eq!(r_th_ap / r_th_p, ratio, max_relative = 1e-12);
    }

    #[test]
    fn output_update_lags_and_responds_instantly_without_delay() {
        let inv = InverterParams::default();
        let target = inverter_transfer(0.0, &inv);
        // after one output time constant the output covers 1 - 1/e of the gap
        let v = output_update(0.0, 0.0, &inv, inv.tau_out());
        assert_relative_eq!(v, target * (1.0 - (-1.0f64).exp()), max_relative = 1e-12);
        let instant = InverterParams { tau_inv: 0.0, c_out: 0.0, ..inv };
        assert_eq!(output_update(0.3, 0.0, &instant, 1e-12), target);
    }
}
