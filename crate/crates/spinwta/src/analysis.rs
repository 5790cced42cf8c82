//! Power, energy and delay accounting for the WTA circuit.
//!
//! Three static power draws: inverter rail-to-rail leakage, crossbar input
//! power and voltage-divider leakage. The energy of one competition is the
//! total power times the settling time.

use crate::column::ColumnTrace;
use serde::{Deserialize, Serialize};

/// Power-model operands. Defaults reproduce the nominal bookkeeping for a
/// nine-cell column with nine powered input connections per cell (nine
/// divider stacks, 162 inverters).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerModel {
    /// Rail-to-rail leakage per inverter, W.
    pub p_inverter: f64,
    /// Average inhibition output resistance, Ohm.
    pub r_inh_avg: f64,
    /// Expected squared crossbar input swing `E[(V_in - V_S1)^2]`, V^2.
    /// The nominal value is the one implied by the 1.2 uW crossbar draw
    /// through 280 kOhm; the trace-statistics path recomputes it.
    pub mean_sq_swing: f64,
    /// Total series resistance of one divider stack `R_R + E[R_MTJ]`, Ohm.
    /// The nominal value is the one implied by the 30.4 uW divider draw at
    /// the 0.9 V rail span.
    pub divider_resistance_total: f64,
    /// Inverter count.
    pub n_inverters: usize,
    /// Divider-stack count.
    pub n_dividers: usize,
    /// Sensing rails, V.
    pub v_s1: f64,
    pub v_s2: f64,
}

impl Default for PowerModel {
    fn default() -> Self {
        PowerModel {
            p_inverter: 7.3e-6,
            r_inh_avg: 280e3,
            mean_sq_swing: 1.2e-6 * 280e3,        // 0.336 V^2
            divider_resistance_total: 0.81 / 30.4e-6, // ~26.6 kOhm
            n_inverters: 162,
            n_dividers: 9,
            v_s1: -0.5,
            v_s2: 0.4,
        }
    }
}

impl PowerModel {
    /// Replaces the nominal squared swing with statistics of a simulated
    /// trace: the time- and cell-averaged `(V_out - V_S1)^2`.
    pub fn with_trace_swing(mut self, trace: &ColumnTrace) -> Self {
        let mut acc = 0.0;
        let mut count = 0usize;
        for cell in &trace.v_out {
            for &v in cell {
                let d = v - self.v_s1;
                acc += d * d;
                count += 1;
            }
        }
        if count > 0 {
            self.mean_sq_swing = acc / count as f64;
        }
        self
    }
}

/// Average crossbar connection draw, `P_CB = E[(V_in - V_S1)^2] / R`.
pub fn power_crossbar(model: &PowerModel) -> f64 {
    model.mean_sq_swing / model.r_inh_avg
}

/// Voltage-divider leakage, `P_VD = (V_S2 - V_S1)^2 / (R_R + E[R_MTJ])`.
pub fn power_divider(model: &PowerModel) -> f64 {
    let span = model.v_s2 - model.v_s1;
    span * span / model.divider_resistance_total
}

/// Total energy of one competition settling in time `tau`:
/// `E = tau * (N_I * (P_I + P_CB) + N_VD * P_VD)`.
pub fn total_energy(tau: f64, model: &PowerModel) -> f64 {
    tau * (model.n_inverters as f64 * (model.p_inverter + power_crossbar(model))
        + model.n_dividers as f64 * power_divider(model))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn crossbar_power_nominal_and_scaling() {
        let model = PowerModel::default();
        assert_relative_eq!(power_crossbar(&model), 1.2e-6, max_relative = 1e-12);
        // zero swing
        let zero = PowerModel { mean_sq_swing: 0.0, ..model.clone() };
        assert_eq!(power_crossbar(&zero), 0.0);
        // doubling R halves P
        let doubled = PowerModel { r_inh_avg: 2.0 * model.r_inh_avg, ..model };
        assert_relative_eq!(power_crossbar(&doubled), 0.6e-6, max_relative = 1e-12);
    }

    #[test]
    fn divider_power_nominal_and_zero_span() {
        let model = PowerModel::default();
        assert_relative_eq!(power_divider(&model), 30.4e-6, max_relative = 1e-12);
        // the implied series resistance sits near 26.6 kOhm
        assert_relative_eq!(model.divider_resistance_total, 26644.7368, max_relative = 1e-6);
        let flat = PowerModel { v_s2: model.v_s1, ..model };
        assert_eq!(power_divider(&flat), 0.0);
    }

    #[test]
    fn energy_nominal_point_and_linearity() {
        let model = PowerModel::default();
        assert_eq!(total_energy(0.0, &model), 0.0);
        // tau = 60 ns at the nominal powers: 162*8.5uW + 9*30.4uW = 1650.6 uW
        let e = total_energy(60e-9, &model);
        assert_relative_eq!(e, 99.036e-12, max_relative = 1e-9);
        assert!((e - 99.0e-12).abs() < 0.1e-12);
        // per-cell cost at the 60 ns maximum is on the 13 pJ scale
        assert!((e / 9.0 - 13e-12).abs() < 2e-12);
        // linear in tau
        assert_relative_eq!(total_energy(120e-9, &model), 2.0 * e, max_relative = 1e-12);
    }
}
