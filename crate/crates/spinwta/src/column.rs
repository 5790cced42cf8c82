//! Coupled simulation of an N-cell winner-take-all column.
//!
//! Cells share a proximal input current and exchange inhibitory currents
//! sourced by their output inverters. Coupling is explicit: each step uses
//! the previous step's outputs to form the heavy-metal currents, which is
//! well resolved at the sub-picosecond step against the nanosecond-scale
//! magnetic and sub-100 ps electrical time constants.

use crate::defaults;
use crate::devices::{
    divider_voltage, gate_update, inverter_transfer, mtj_conductance, output_update, CellParams,
    InverterParams, MtjParams,
};
use crate::magnetics::{
    anisotropy_field, demag_field, rk4_step, she_field, thermal_field, MagnetParams,
    ThermalConfig,
};
use crate::{SimError, Vec3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Per-device electrical/magnetic parameters after process-variation
/// sampling. Nominal devices use `r_p`/`r_ap` from the shared `MtjParams`,
/// unit torque scale and zero threshold shift.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellDevices {
    pub r_p: f64,
    pub r_ap: f64,
    /// Multiplies the cell's spin-Hall torque prefactor (base switching
    /// current variation).
    pub she_scale_mult: f64,
    /// Inverter threshold shift, V.
    pub v_th_offset: f64,
}

impl CellDevices {
    pub fn nominal(mtj: &MtjParams) -> Self {
        CellDevices { r_p: mtj.r_p, r_ap: mtj.r_ap, she_scale_mult: 1.0, v_th_offset: 0.0 }
    }
}

/// Full configuration of one column simulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColumnConfig {
    /// Number of competing cells (>= 2).
    pub n_cells: usize,
    /// Per-cell proximal currents, A. Standard operation feeds every cell
    /// the same current.
    pub i_prox: Vec<f64>,
    /// Per-source-cell inhibitory output conductances, S.
    pub g_inh: Vec<f64>,
    /// Ratio of the predictive cell's inhibitory conductance to the others.
    pub advantage: f64,
    /// Index of the predictive cell, if any.
    pub predictive_index: Option<usize>,
    /// Integration horizon, s.
    pub duration_max: f64,
    /// Time step, s.
    pub dt: f64,
    /// Master seed; per-cell noise streams derive from it unless
    /// `noise_seeds` is set explicitly.
    pub seed: u64,
    /// Explicit per-cell noise seeds (permutation tests move these with the
    /// cells they belong to).
    pub noise_seeds: Option<Vec<u64>>,
    /// Whether the thermal field is on.
    pub thermal_enabled: bool,
    /// Initial tilt of the magnetization toward the antiparallel side.
    pub initial_tilt: f64,
    /// Stop integrating once the column has been steady for
    /// `steady_window` (see `simulate`); 0 disables early stopping.
    pub steady_window: f64,
    /// Per-cell output movement below this over the window counts as
    /// steady, V.
    pub steady_tol: f64,
    pub magnet: MagnetParams,
    pub mtj: MtjParams,
    pub cell: CellParams,
    pub inverter: InverterParams,
}

impl ColumnConfig {
    /// A uniform column: identical proximal current everywhere, baseline
    /// inhibitory conductance with `advantage` applied to the predictive
    /// cell.
    pub fn uniform(n: usize, i_prox: f64, advantage: f64, predictive: Option<usize>) -> Self {
        let mut g_inh = vec![defaults::G_INH_BASE; n];
        if let Some(p) = predictive {
            g_inh[p] = defaults::G_INH_BASE * advantage;
        }
        ColumnConfig {
            n_cells: n,
            i_prox: vec![i_prox; n],
            g_inh,
            advantage,
            predictive_index: predictive,
            duration_max: 60e-9,
            dt: defaults::DT,
            seed: 0,
            noise_seeds: None,
            thermal_enabled: true,
            initial_tilt: defaults::INITIAL_TILT,
            steady_window: 3e-9,
            steady_tol: 0.5e-3,
            magnet: MagnetParams::default(),
            mtj: MtjParams::default(),
            cell: CellParams::default(),
            inverter: InverterParams::default(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n_cells < 2 {
            return Err("a column needs at least 2 cells".into());
        }
        if self.i_prox.len() != self.n_cells || self.g_inh.len() != self.n_cells {
            return Err("i_prox and g_inh must have one entry per cell".into());
        }
        if self.advantage < 1.0 {
            return Err("advantage must be >= 1".into());
        }
        if self.g_inh.iter().any(|&g| g <= 0.0) {
            return Err("inhibitory conductances must be positive".into());
        }
        if self.dt <= 0.0 || self.duration_max <= 0.0 {
            return Err("dt and duration_max must be positive".into());
        }
        if let Some(seeds) = &self.noise_seeds {
            if seeds.len() != self.n_cells {
                return Err("noise_seeds must have one entry per cell".into());
            }
        }
        self.magnet.validate()?;
        self.mtj.validate()?;
        self.cell.validate()?;
        Ok(())
    }

    fn thermal_config(&self) -> ThermalConfig {
        ThermalConfig { dt: self.dt, rng_seed: self.seed, enabled: self.thermal_enabled }
    }

    fn cell_noise_seed(&self, i: usize) -> u64 {
        match &self.noise_seeds {
            Some(seeds) => seeds[i],
            // distinct odd-multiplier mix per cell index
            None => self.seed.wrapping_add((i as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)),
        }
    }
}

/// Instantaneous state of one cell.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CellState {
    pub m: Vec3,
    pub v_gate: f64,
    pub v_out: f64,
}

/// Recorded time series of a column simulation.
#[derive(Debug, Clone, Serialize)]
pub struct ColumnTrace {
    /// Uniform time grid, s.
    pub times: Vec<f64>,
    /// Per-cell output voltages, `v_out[cell][sample]`.
    pub v_out: Vec<Vec<f64>>,
    /// Per-cell magnetization projections on the pinned-layer axis.
    pub m_pl: Vec<Vec<f64>>,
    /// Echo of key configuration values.
    pub n_cells: usize,
    pub dt: f64,
    pub seed: u64,
    /// False when `duration_max` elapsed without reaching steady state.
    pub settled: bool,
}

impl ColumnTrace {
    /// Cell-averaged output at each sample.
    pub fn mean_output(&self) -> Vec<f64> {
        let n = self.n_cells as f64;
        (0..self.times.len())
            .map(|k| self.v_out.iter().map(|cell| cell[k]).sum::<f64>() / n)
            .collect()
    }

    /// Final per-cell outputs, averaged over the trailing 5% of samples
    /// (at least one) to be robust against thermal jitter.
    pub fn final_outputs(&self) -> Vec<f64> {
        let len = self.times.len();
        let tail = (len / 20).max(1);
        self.v_out
            .iter()
            .map(|cell| cell[len - tail..].iter().sum::<f64>() / tail as f64)
            .collect()
    }
}

/// Inhibitory current injected by a source cell's output through its
/// memristive connection, `I = G * (V_out - V_S1)`. Zero once the source
/// rests at the low rail, positive (antiparallel-driving, suppressive)
/// above it.
pub fn inhibitory_current(v_out_source: f64, g: f64, cell: &CellParams) -> f64 {
    g * (v_out_source - cell.v_s1)
}

/// Net heavy-metal current of cell `i`: its proximal input plus the
/// inhibitory currents from every other cell's previous-step output.
///
/// The inhibition terms are added in value order, not cell order, so
/// relabeling the cells reproduces bit-identical currents (permutation
/// equivariance of the traces).
pub fn hm_current(i: usize, v_out_prev: &[f64], cfg: &ColumnConfig) -> f64 {
    let mut terms: Vec<f64> = v_out_prev
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(j, &v)| inhibitory_current(v, cfg.g_inh[j], &cfg.cell))
        .collect();
    terms.sort_by(f64::total_cmp);
    cfg.i_prox[i] + terms.iter().sum::<f64>()
}

/// Advances every cell by one step from a consistent snapshot. Coupling is
/// explicit through `v_out_prev`.
pub fn step_column(
    states: &mut [CellState],
    cfg: &ColumnConfig,
    devices: &[CellDevices],
    rngs: &mut [ChaCha8Rng],
    time_s: f64,
) -> crate::Result<()> {
    let dt = cfg.dt;
    let tc = cfg.thermal_config();

    // sort the inhibition terms once; each cell sums them in that fixed
    // value order, skipping its own (see `hm_current`)
    let mut terms: Vec<(f64, usize)> = states
        .iter()
        .enumerate()
        .map(|(j, s)| (inhibitory_current(s.v_out, cfg.g_inh[j], &cfg.cell), j))
        .collect();
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));

    for i in 0..cfg.n_cells {
        let dev = &devices[i];
        let mut i_hm = cfg.i_prox[i];
        for &(t, j) in &terms {
            if j != i {
                i_hm += t;
            }
        }

        let mut magnet = cfg.magnet.clone();
        magnet.she_scale *= dev.she_scale_mult;
        let h_drive = she_field(i_hm, &magnet) + thermal_field(&mut rngs[i], &tc, &magnet);

        let m_next = rk4_step(
            states[i].m,
            &magnet,
            |m| demag_field(m, &magnet) + anisotropy_field(m, &magnet) + h_drive,
            dt,
        )
        .map_err(|_| SimError::Integration { time_s })?;

        let mut mtj = cfg.mtj.clone();
        mtj.r_p = dev.r_p;
        mtj.r_ap = dev.r_ap;
        let g_mtj = mtj_conductance(m_next, &mtj);
        let v_node = divider_voltage(g_mtj, &cfg.cell);

        let mut inv = cfg.inverter.clone();
        inv.v_th_offset += dev.v_th_offset;
        let v_gate = gate_update(states[i].v_gate, v_node, g_mtj, &cfg.cell, &inv, dt);
        let v_out = output_update(states[i].v_out, v_gate, &inv, dt);

        if !(v_gate.is_finite() && v_out.is_finite()) {
            return Err(SimError::Integration { time_s });
        }
        states[i] = CellState { m: m_next, v_gate, v_out };
    }
    Ok(())
}

/// Initial states: magnetization tilted toward the antiparallel side of the
/// easy axis so every output starts at the low rail, with the gate node
/// consistent with that magnetization.
pub fn initial_states(cfg: &ColumnConfig, devices: &[CellDevices]) -> Vec<CellState> {
    let t = cfg.initial_tilt.clamp(0.0, 1.0);
    let m0 = Vec3::new((1.0 - t * t).sqrt(), -t, 0.0);
    (0..cfg.n_cells)
        .map(|i| {
            let mut mtj = cfg.mtj.clone();
            mtj.r_p = devices[i].r_p;
            mtj.r_ap = devices[i].r_ap;
            let mut inv = cfg.inverter.clone();
            inv.v_th_offset += devices[i].v_th_offset;
            let v_gate = divider_voltage(mtj_conductance(m0, &mtj), &cfg.cell);
            let v_out = inverter_transfer(v_gate, &inv);
            CellState { m: m0, v_gate, v_out }
        })
        .collect()
}

/// Runs one column simulation with nominal devices and records the full
/// trace.
pub fn simulate(cfg: &ColumnConfig) -> crate::Result<ColumnTrace> {
    let devices = vec![CellDevices::nominal(&cfg.mtj); cfg.n_cells];
    simulate_with(cfg, &devices)
}

/// Runs one column simulation with explicit per-cell devices.
///
/// Integrates until `duration_max`, or earlier once every cell's output has
/// moved less than `steady_tol` over the trailing `steady_window` (the
/// recorded trace keeps that settled tail).
pub fn simulate_with(cfg: &ColumnConfig, devices: &[CellDevices]) -> crate::Result<ColumnTrace> {
    cfg.validate().map_err(SimError::InvalidConfig)?;
    assert_eq!(devices.len(), cfg.n_cells);

    let mut rngs: Vec<ChaCha8Rng> =
        (0..cfg.n_cells).map(|i| ChaCha8Rng::seed_from_u64(cfg.cell_noise_seed(i))).collect();
    let mut states = initial_states(cfg, devices);

    let steps = (cfg.duration_max / cfg.dt).round() as usize;
    let window_steps = if cfg.steady_window > 0.0 {
        (cfg.steady_window / cfg.dt).round() as usize
    } else {
        0
    };

    let mut times = Vec::with_capacity(steps + 1);
    let mut v_out = vec![Vec::with_capacity(steps + 1); cfg.n_cells];
    let mut m_pl = vec![Vec::with_capacity(steps + 1); cfg.n_cells];
    fn record(
        t: f64,
        states: &[CellState],
        pl_axis: Vec3,
        times: &mut Vec<f64>,
        v_out: &mut [Vec<f64>],
        m_pl: &mut [Vec<f64>],
    ) {
        times.push(t);
        for (i, s) in states.iter().enumerate() {
            v_out[i].push(s.v_out);
            m_pl[i].push(s.m.dot(pl_axis));
        }
    }
    record(0.0, &states, cfg.mtj.pl_axis, &mut times, &mut v_out, &mut m_pl);

    let mut settled = false;
    for k in 1..=steps {
        let t = k as f64 * cfg.dt;
        step_column(&mut states, cfg, devices, &mut rngs, t)?;
        record(t, &states, cfg.mtj.pl_axis, &mut times, &mut v_out, &mut m_pl);

        if window_steps > 0 && k >= window_steps && k % (window_steps / 4).max(1) == 0 {
            let start = times.len() - 1 - window_steps;
            let steady = (0..cfg.n_cells).all(|i| {
                let w = &v_out[i][start..];
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for &v in w {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                hi - lo <= cfg.steady_tol
            });
            if steady {
                settled = true;
                break;
            }
        }
    }
    if !settled {
        // the horizon ran out; flag unless the tail happens to be steady
        settled = window_steps == 0;
    }

    Ok(ColumnTrace {
        times,
        v_out,
        m_pl,
        n_cells: cfg.n_cells,
        dt: cfg.dt,
        seed: cfg.seed,
        settled,
    })
}

/// Earliest time after which the cell-averaged output remains within `tol`
/// of its final value for the remainder of the trace. Returns the trace end
/// time with `settled = false` when the tail never stays inside the band.
pub fn detect_steady(trace: &ColumnTrace, tol: f64) -> (f64, bool) {
    let avg = trace.mean_output();
    let final_v = *avg.last().expect("trace must be non-empty");
    // walk backward to the last excursion outside the band
    let mut first_inside = 0;
    for k in (0..avg.len()).rev() {
        if (avg[k] - final_v).abs() > tol {
            first_inside = k + 1;
            break;
        }
    }
    // the final sample is trivially inside its own band; a tail of one
    // sample means the trace was still moving when it ended
    if first_inside + 1 >= avg.len() {
        (*trace.times.last().unwrap(), false)
    } else {
        (trace.times[first_inside], true)
    }
}

/// Outcome of a settled competition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    /// Every output stayed within 70 mV of the low rail.
    Inactive,
    /// One cell's output exceeds the mean of the others by at least 70 mV.
    PredictiveWin { index: usize, ambiguous: bool },
    /// The column average exceeds the low rail by at least 70 mV with no
    /// individual winner.
    Burst,
}

/// Minimum output separation a downstream digital stage can distinguish, V.
pub const MIN_SEPARATION: f64 = 0.070;

/// Classifies the settled trace per the 70 mV separation criterion.
pub fn classify_outcome(trace: &ColumnTrace, cfg: &ColumnConfig) -> Outcome {
    let finals = trace.final_outputs();
    let n = finals.len();
    let total: f64 = finals.iter().sum();

    let mut winners: Vec<usize> = Vec::new();
    for i in 0..n {
        let others_mean = (total - finals[i]) / (n - 1) as f64;
        if finals[i] - others_mean >= MIN_SEPARATION {
            winners.push(i);
        }
    }
    if !winners.is_empty() {
        let best = winners
            .iter()
            .copied()
            .max_by(|&a, &b| finals[a].partial_cmp(&finals[b]).expect("finite outputs"))
            .unwrap();
        return Outcome::PredictiveWin { index: best, ambiguous: winners.len() > 1 };
    }
    if total / n as f64 - cfg.cell.v_s1 >= MIN_SEPARATION {
        return Outcome::Burst;
    }
    Outcome::Inactive
}
