//! Experiment configuration: a TOML file with one section per subsystem.
//! Missing fields take the built-in defaults; unknown fields are rejected.
//! Currents are in amperes, voltages in volts, times in seconds.

use serde::{Deserialize, Serialize};
use spinwta::column::ColumnConfig;
use spinwta::devices::{CellParams, InverterParams, MtjParams};
use spinwta::magnetics::{prism_demag_factors, MagnetParams};
use spinwta::montecarlo::{EnsembleConfig, VariationSpec};
use spinwta::analysis::PowerModel;
use spinwta::{defaults, Vec3};
use std::path::PathBuf;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Free-form scenario label echoed into output metadata.
    pub scenario: Option<String>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub magnet: MagnetSection,
    pub mtj: MtjSection,
    pub cell: CellParams,
    pub inverter: InverterParams,
    pub column: ColumnSection,
    pub variation: VariationSpec,
    pub ensemble: EnsembleSection,
    pub power: PowerModel,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MagnetSection {
    /// Free-layer dimensions (length, width, thickness), m.
    pub dims: [f64; 3],
    pub ms: f64,
    pub alpha: f64,
    pub k_u: f64,
    pub easy_axis: [f64; 3],
    pub theta_sh: f64,
    pub t_hm: f64,
    /// Free-layer length along the current; defaults to dims[0].
    pub l_fm: Option<f64>,
    pub she_scale: f64,
    pub temperature: f64,
    /// Computed from dims unless given explicitly.
    pub volume: Option<f64>,
    /// Computed from dims unless given explicitly.
    pub demag_factors: Option<[f64; 3]>,
}

impl Default for MagnetSection {
    fn default() -> Self {
        let p = MagnetParams::default();
        MagnetSection {
            dims: [p.dims.0, p.dims.1, p.dims.2],
            ms: p.ms,
            alpha: p.alpha,
            k_u: p.k_u,
            easy_axis: [p.easy_axis.x, p.easy_axis.y, p.easy_axis.z],
            theta_sh: p.theta_sh,
            t_hm: p.t_hm,
            l_fm: None,
            she_scale: p.she_scale,
            temperature: p.temperature,
            volume: None,
            demag_factors: None,
        }
    }
}

impl MagnetSection {
    pub fn resolve(&self) -> MagnetParams {
        let [l, w, t] = self.dims;
        let mut p = MagnetParams::from_dims(l, w, t);
        p.ms = self.ms;
        p.alpha = self.alpha;
        p.k_u = self.k_u;
        p.easy_axis = Vec3::new(self.easy_axis[0], self.easy_axis[1], self.easy_axis[2]).normalized();
        p.theta_sh = self.theta_sh;
        p.t_hm = self.t_hm;
        p.l_fm = self.l_fm.unwrap_or(l);
        p.she_scale = self.she_scale;
        p.temperature = self.temperature;
        if let Some(v) = self.volume {
            p.volume = v;
        }
        if let Some(n) = self.demag_factors {
            p.demag_factors = (n[0], n[1], n[2]);
        } else {
            p.demag_factors = prism_demag_factors(l, w, t);
        }
        p
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MtjSection {
    /// Resistance-area product, Ohm * um^2.
    pub ra_ohm_um2: f64,
    pub tmr: f64,
    pub pl_axis: [f64; 3],
}

impl Default for MtjSection {
    fn default() -> Self {
        MtjSection { ra_ohm_um2: 8.0, tmr: 1.5, pl_axis: [0.0, 1.0, 0.0] }
    }
}

impl MtjSection {
    pub fn resolve(&self, dims: [f64; 3]) -> MtjParams {
        let pl = Vec3::new(self.pl_axis[0], self.pl_axis[1], self.pl_axis[2]).normalized();
        MtjParams::from_geometry(self.ra_ohm_um2, self.tmr, dims[0], dims[1], pl)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnSection {
    pub n_cells: usize,
    /// Proximal current fed to every cell, A (negative = excitatory).
    pub i_prox: f64,
    pub advantage: f64,
    pub predictive_index: Option<usize>,
    /// Baseline inhibitory conductance, S.
    pub g_inh_base: f64,
    pub duration_max: f64,
    pub dt: f64,
    pub initial_tilt: f64,
    pub thermal: bool,
    pub steady_window: f64,
    pub steady_tol: f64,
}

impl Default for ColumnSection {
    fn default() -> Self {
        ColumnSection {
            n_cells: defaults::N_CELLS,
            i_prox: defaults::FIG4_EXCITED_I,
            advantage: 1.0,
            predictive_index: None,
            g_inh_base: defaults::G_INH_BASE,
            duration_max: 60e-9,
            dt: defaults::DT,
            initial_tilt: defaults::INITIAL_TILT,
            thermal: true,
            steady_window: 3e-9,
            steady_tol: 0.5e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSection {
    pub rounds: usize,
    pub master_seed: Option<u64>,
    /// Input grid for the predictive sweep, A.
    pub inputs: Vec<f64>,
    /// Advantage grid for the predictive sweep.
    pub advantages: Vec<f64>,
    /// Input grid for the bursting sweep, A.
    pub burst_inputs: Vec<f64>,
    /// Advantage grid for the delay/energy sweep.
    pub energy_advantages: Vec<f64>,
    /// Input used by the delay/energy sweep, A.
    pub energy_input: f64,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        EnsembleSection {
            rounds: 100,
            master_seed: None,
            inputs: vec![1e-6, 0.0, -1e-6, -2e-6],
            advantages: vec![1.0, 1.1, 1.2, 1.4, 1.6, 1.8, 2.0, 2.2, 2.4],
            burst_inputs: vec![
                3e-6, 2e-6, 1e-6, 0.5e-6, 0.0, -0.5e-6, -1e-6, -2e-6, -3e-6,
            ],
            energy_advantages: vec![1.0, 1.2, 1.4, 1.6, 1.8, 2.0, 2.4, 2.8],
            energy_input: defaults::FIG4_EXCITED_I,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Resolved column configuration with every device section applied.
    pub fn column_config(&self) -> ColumnConfig {
        let mut cfg = ColumnConfig::uniform(
            self.column.n_cells,
            self.column.i_prox,
            self.column.advantage,
            self.column.predictive_index,
        );
        cfg.g_inh = vec![self.column.g_inh_base; self.column.n_cells];
        if let Some(p) = self.column.predictive_index {
            cfg.g_inh[p] = self.column.g_inh_base * self.column.advantage;
        }
        cfg.duration_max = self.column.duration_max;
        cfg.dt = self.column.dt;
        cfg.initial_tilt = self.column.initial_tilt;
        cfg.thermal_enabled = self.column.thermal;
        cfg.steady_window = self.column.steady_window;
        cfg.steady_tol = self.column.steady_tol;
        cfg.seed = self.seed.unwrap_or(0);
        cfg.magnet = self.magnet.resolve();
        cfg.mtj = self.mtj.resolve(self.magnet.dims);
        cfg.cell = self.cell.clone();
        cfg.inverter = self.inverter.clone();
        cfg
    }

    /// Resolved ensemble configuration over an explicit grid.
    pub fn ensemble_config(&self, grid: Vec<(f64, f64)>) -> EnsembleConfig {
        EnsembleConfig {
            rounds: self.ensemble.rounds,
            grid,
            base: self.column_config(),
            variation: self.variation.clone(),
            master_seed: self.ensemble.master_seed.or(self.seed).unwrap_or(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_resolves_to_defaults() {
        let cfg = ExperimentConfig::from_toml("").unwrap();
        let col = cfg.column_config();
        col.validate().unwrap();
        assert_eq!(col.n_cells, 9);
        assert_eq!(col.cell.r_ref, defaults::R_REF);
    }

    #[test]
    fn partial_sections_override_defaults() {
        let cfg = ExperimentConfig::from_toml(
            "seed = 7\n[column]\nn_cells = 5\nadvantage = 1.5\npredictive_index = 2\n[cell]\nr_ref = 90e3\n",
        )
        .unwrap();
        let col = cfg.column_config();
        assert_eq!(col.n_cells, 5);
        assert_eq!(col.cell.r_ref, 90e3);
        assert_eq!(col.seed, 7);
        // untouched sections keep defaults
        assert_eq!(col.inverter.c_g, 6.6e-15);
        assert_eq!(col.g_inh[2], defaults::G_INH_BASE * 1.5);
    }

    #[test]
    fn unknown_fields_are_rejected_with_field_name() {
        let err = ExperimentConfig::from_toml("[cell]\nr_reff = 1e3\n").unwrap_err();
        assert!(err.to_string().contains("r_reff"), "{err}");
    }

    #[test]
    fn demag_factors_recomputed_for_custom_dims() {
        let cfg = ExperimentConfig::from_toml("[magnet]\ndims = [40e-9, 40e-9, 1.125e-9]\n").unwrap();
        let p = cfg.magnet.resolve();
        let (nx, ny, _) = p.demag_factors;
        assert!((nx - ny).abs() < 1e-12, "square footprint must have Nx = Ny");
        assert!((p.volume - 1.8e-24).abs() < 1e-30);
        p.validate().unwrap();
    }
}
