//! Process-variation sampling and ensemble execution.
//!
//! Every round of an ensemble draws fresh per-cell device parameters (when
//! variation is enabled) and fresh per-cell thermal streams, runs one column
//! simulation, and reduces the rounds into per-grid-point statistics. Rounds
//! are independent; parallel execution writes into indexed slots so the
//! aggregate is identical for any thread count.

use crate::analysis::{total_energy, PowerModel};
use crate::column::{
    detect_steady, simulate_with, CellDevices, ColumnConfig, ColumnTrace,
};
use crate::devices::MtjParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Fractional and absolute spreads of the varied device parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VariationSpec {
    /// Fractional standard deviation of the parallel resistance.
    pub sigma_rp_frac: f64,
    /// Fractional standard deviation of the antiparallel resistance.
    pub sigma_rap_frac: f64,
    /// Fractional standard deviation of the base switching current, applied
    /// as a multiplicative scale on the spin-Hall torque prefactor.
    pub sigma_ic0_frac: f64,
    /// Transistor threshold deviation, V.
    pub sigma_vth: f64,
    pub enabled: bool,
}

impl Default for VariationSpec {
    fn default() -> Self {
        VariationSpec {
            sigma_rp_frac: 0.05,
            sigma_rap_frac: 0.05,
            sigma_ic0_frac: 0.05,
            sigma_vth: 0.020,
            enabled: true,
        }
    }
}

impl VariationSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.sigma_rp_frac < 0.0
            || self.sigma_rap_frac < 0.0
            || self.sigma_ic0_frac < 0.0
            || self.sigma_vth < 0.0
        {
            return Err("variation sigmas must be non-negative".into());
        }
        Ok(())
    }
}

/// Draws a normal variate, redrawing until the result is positive. Used for
/// resistances and torque scales, which are physically positive; at the 5%
/// spreads in use a redraw is essentially never needed.
fn positive_normal<R: Rng + ?Sized>(rng: &mut R, mean: f64, sigma: f64) -> f64 {
    loop {
        let g: f64 = rng.sample(StandardNormal);
        let v = mean + sigma * g;
        if v > 0.0 {
            return v;
        }
    }
}

/// Per-cell device parameters for one round. Disabled specs return nominal
/// devices (and consume no randomness).
pub fn sample_devices<R: Rng + ?Sized>(
    spec: &VariationSpec,
    rng: &mut R,
    mtj: &MtjParams,
    n_cells: usize,
) -> Vec<CellDevices> {
    if !spec.enabled {
        return vec![CellDevices::nominal(mtj); n_cells];
    }
    (0..n_cells)
        .map(|_| {
            let r_p = positive_normal(rng, mtj.r_p, spec.sigma_rp_frac * mtj.r_p);
            let r_ap = positive_normal(rng, mtj.r_ap, spec.sigma_rap_frac * mtj.r_ap);
            let she_scale_mult = positive_normal(rng, 1.0, spec.sigma_ic0_frac);
            let g: f64 = rng.sample(StandardNormal);
            let v_th_offset = spec.sigma_vth * g;
            CellDevices { r_p, r_ap, she_scale_mult, v_th_offset }
        })
        .collect()
}

/// Ensemble request: `rounds` simulations at every `(i_prox, advantage)`
/// grid point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub rounds: usize,
    /// Grid of (proximal current A, competitive advantage) points.
    pub grid: Vec<(f64, f64)>,
    pub base: ColumnConfig,
    pub variation: VariationSpec,
    pub master_seed: u64,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.rounds == 0 {
            return Err("rounds must be >= 1".into());
        }
        if self.grid.is_empty() {
            return Err("grid must contain at least one point".into());
        }
        self.variation.validate()?;
        self.base.validate()
    }
}

/// Result of one simulated round.
#[derive(Debug, Clone)]
pub struct RoundResult {
    /// Trailing-averaged per-cell outputs, V.
    pub final_outputs: Vec<f64>,
    /// Settling time of the cell-averaged output (5 mV criterion), s.
    pub tau: f64,
    pub settled: bool,
}

/// Mean and sample standard deviation of per-round aggregates at one grid
/// point. Separation is winner minus mean-of-others per round, then
/// averaged.
#[derive(Debug, Clone, Serialize)]
pub struct GridStats {
    pub i_prox: f64,
    pub advantage: f64,
    pub mean_winner: f64,
    pub std_winner: f64,
    pub mean_others: f64,
    pub std_others: f64,
    pub mean_separation: f64,
    pub std_separation: f64,
    /// Mean column-average output excess over the low rail, V.
    pub mean_avg_excess: f64,
    pub std_avg_excess: f64,
    pub mean_tau: f64,
    pub std_tau: f64,
    pub mean_energy: f64,
    pub std_energy: f64,
    pub rounds: usize,
    pub failed_rounds: usize,
}

/// Ensemble output: one stats row per grid point, in grid order.
#[derive(Debug, Clone, Serialize)]
pub struct EnsembleStats {
    pub points: Vec<GridStats>,
    pub master_seed: u64,
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Deterministic per-round stream id from grid and round indices.
fn round_stream(grid_idx: usize, round: usize) -> u64 {
    ((grid_idx as u64) << 32) | round as u64
}

/// Runs every round at one grid point. Failed rounds (integration blow-ups)
/// are recorded as `None`.
fn run_grid_point(
    cfg: &EnsembleConfig,
    grid_idx: usize,
    i_prox: f64,
    advantage: f64,
) -> Vec<Option<RoundResult>> {
    let n = cfg.base.n_cells;
    let predictive = cfg.base.predictive_index;

    let run_round = |round: usize| -> Option<RoundResult> {
        // one stream per (grid point, round); device draws and per-cell
        // thermal seeds both come from it
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.master_seed);
        rng.set_stream(round_stream(grid_idx, round));

        let devices = sample_devices(&cfg.variation, &mut rng, &cfg.base.mtj, n);
        let noise_seeds: Vec<u64> = (0..n).map(|_| rng.random()).collect();

        let mut col = cfg.base.clone();
        col.i_prox = vec![i_prox; n];
        col.advantage = advantage;
        col.g_inh = vec![crate::defaults::G_INH_BASE; n];
        if let Some(p) = predictive {
            col.g_inh[p] = crate::defaults::G_INH_BASE * advantage;
        }
        col.noise_seeds = Some(noise_seeds);

        let trace = simulate_with(&col, &devices).ok()?;
        Some(round_to_result(&trace))
    };

    let mut results: Vec<Option<RoundResult>> = Vec::with_capacity(cfg.rounds);
    (0..cfg.rounds).into_par_iter().map(run_round).collect_into_vec(&mut results);
    results
}

fn round_to_result(trace: &ColumnTrace) -> RoundResult {
    let (tau, settled) = detect_steady(trace, 5e-3);
    RoundResult { final_outputs: trace.final_outputs(), tau, settled: settled && trace.settled }
}

fn aggregate(
    rounds: &[Option<RoundResult>],
    i_prox: f64,
    advantage: f64,
    predictive: Option<usize>,
    v_s1: f64,
    power: &PowerModel,
) -> GridStats {
    let ok: Vec<&RoundResult> = rounds.iter().flatten().collect();
    let failed = rounds.len() - ok.len();

    let mut winners = Vec::with_capacity(ok.len());
    let mut others = Vec::with_capacity(ok.len());
    let mut seps = Vec::with_capacity(ok.len());
    let mut excesses = Vec::with_capacity(ok.len());
    let mut taus = Vec::with_capacity(ok.len());
    let mut energies = Vec::with_capacity(ok.len());

    for r in &ok {
        let n = r.final_outputs.len();
        // the designated predictive cell when present, else the top output
        let w = predictive.unwrap_or_else(|| {
            (0..n)
                .max_by(|&a, &b| {
                    r.final_outputs[a].partial_cmp(&r.final_outputs[b]).expect("finite outputs")
                })
                .unwrap()
        });
        let win = r.final_outputs[w];
        let rest =
            (r.final_outputs.iter().sum::<f64>() - win) / (n - 1) as f64;
        winners.push(win);
        others.push(rest);
        seps.push(win - rest);
        excesses.push(r.final_outputs.iter().sum::<f64>() / n as f64 - v_s1);
        taus.push(r.tau);
        energies.push(total_energy(r.tau, power));
    }

    let (mean_winner, std_winner) = mean_std(&winners);
    let (mean_others, std_others) = mean_std(&others);
    let (mean_separation, std_separation) = mean_std(&seps);
    let (mean_avg_excess, std_avg_excess) = mean_std(&excesses);
    let (mean_tau, std_tau) = mean_std(&taus);
    let (mean_energy, std_energy) = mean_std(&energies);

    GridStats {
        i_prox,
        advantage,
        mean_winner,
        std_winner,
        mean_others,
        std_others,
        mean_separation,
        std_separation,
        mean_avg_excess,
        std_avg_excess,
        mean_tau,
        std_tau,
        mean_energy,
        std_energy,
        rounds: ok.len(),
        failed_rounds: failed,
    }
}

/// Runs the full ensemble and aggregates per grid point.
pub fn run_ensemble(cfg: &EnsembleConfig, power: &PowerModel) -> crate::Result<EnsembleStats> {
    cfg.validate().map_err(crate::SimError::InvalidConfig)?;
    let mut points = Vec::with_capacity(cfg.grid.len());
    for (gi, &(i_prox, advantage)) in cfg.grid.iter().enumerate() {
        let rounds = run_grid_point(cfg, gi, i_prox, advantage);
        points.push(aggregate(
            &rounds,
            i_prox,
            advantage,
            cfg.base.predictive_index,
            cfg.base.cell.v_s1,
            power,
        ));
    }
    Ok(EnsembleStats { points, master_seed: cfg.master_seed })
}

/// Bursting sweep: advantage pinned to 1 (no predictive cell), reporting the
/// mean column-average output excess over the low rail per input current.
pub fn sweep_burst(cfg: &EnsembleConfig, power: &PowerModel) -> crate::Result<EnsembleStats> {
    let mut burst_cfg = cfg.clone();
    burst_cfg.base.predictive_index = None;
    burst_cfg.base.advantage = 1.0;
    burst_cfg.grid = cfg.grid.iter().map(|&(i, _)| (i, 1.0)).collect();
    run_ensemble(&burst_cfg, power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::column::simulate;
    use approx::assert_relative_eq;

    #[test]
    fn disabled_variation_yields_nominal_devices() {
        let spec = VariationSpec { enabled: false, ..VariationSpec::default() };
        let mtj = MtjParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let devs = sample_devices(&spec, &mut rng, &mtj, 9);
        for d in devs {
            assert_eq!(d.r_p, mtj.r_p);
            assert_eq!(d.r_ap, mtj.r_ap);
            assert_eq!(d.she_scale_mult, 1.0);
            assert_eq!(d.v_th_offset, 0.0);
        }
    }

    #[test]
    fn sampled_spreads_match_spec_within_two_percent() {
        let spec = VariationSpec::default();
        let mtj = MtjParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let devs = sample_devices(&spec, &mut rng, &mtj, n);
        let rps: Vec<f64> = devs.iter().map(|d| d.r_p).collect();
        let (mean, std) = mean_std(&rps);
        assert_relative_eq!(mean, mtj.r_p, max_relative = 0.005);
        assert_relative_eq!(std, 0.05 * mtj.r_p, max_relative = 0.02);
        let vths: Vec<f64> = devs.iter().map(|d| d.v_th_offset).collect();
        let (vm, vs) = mean_std(&vths);
        assert!(vm.abs() < 3.0 * 0.020 / (n as f64).sqrt());
        assert_relative_eq!(vs, 0.020, max_relative = 0.02);
        // every draw positive
        assert!(devs.iter().all(|d| d.r_p > 0.0 && d.r_ap > 0.0 && d.she_scale_mult > 0.0));
    }

    #[test]
    fn rp_and_rap_vary_independently() {
        let spec = VariationSpec::default();
        let mtj = MtjParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let devs = sample_devices(&spec, &mut rng, &mtj, 10_000);
        let ratios: Vec<f64> = devs.iter().map(|d| d.r_ap / d.r_p).collect();
        let (_, std) = mean_std(&ratios);
        // a common-TMR draw would pin the ratio at exactly 2.5
        assert!(std > 0.05, "ratio spread {std} too small for independent draws");
    }

    #[test]
    fn positive_normal_rejects_nonpositive_draws() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..2000 {
            assert!(positive_normal(&mut rng, 0.5, 1.0) > 0.0);
        }
    }

    fn small_ensemble(rounds: usize, variation: bool, thermal: bool) -> EnsembleConfig {
        let mut base = ColumnConfig::uniform(3, -2e-6, 1.5, Some(0));
        base.duration_max = 4e-9;
        base.thermal_enabled = thermal;
        EnsembleConfig {
            rounds,
            grid: vec![(-2e-6, 1.5)],
            base,
            variation: VariationSpec { enabled: variation, ..VariationSpec::default() },
            master_seed: 11,
        }
    }

    #[test]
    fn single_round_without_randomness_equals_direct_simulation() {
        let cfg = small_ensemble(1, false, false);
        let stats = run_ensemble(&cfg, &PowerModel::default()).unwrap();

        let mut col = cfg.base.clone();
        col.noise_seeds = Some(vec![0, 0, 0]); // ignored with thermal off
        let trace = simulate(&col).unwrap();
        let finals = trace.final_outputs();
        let win = finals[0];
        let rest = (finals[1] + finals[2]) / 2.0;

        let p = &stats.points[0];
        assert_relative_eq!(p.mean_winner, win, max_relative = 1e-12);
        assert_relative_eq!(p.mean_separation, win - rest, max_relative = 1e-9);
        assert_eq!(p.failed_rounds, 0);
    }

    #[test]
    fn no_randomness_means_zero_spread() {
        let cfg = small_ensemble(4, false, false);
        let stats = run_ensemble(&cfg, &PowerModel::default()).unwrap();
        let p = &stats.points[0];
        assert_eq!(p.std_winner, 0.0);
        assert_eq!(p.std_separation, 0.0);
        assert_eq!(p.std_tau, 0.0);
    }

    #[test]
    fn identical_master_seed_reproduces_stats() {
        let cfg = small_ensemble(6, true, true);
        let a = run_ensemble(&cfg, &PowerModel::default()).unwrap();
        let b = run_ensemble(&cfg, &PowerModel::default()).unwrap();
        for (pa, pb) in a.points.iter().zip(b.points.iter()) {
            assert_eq!(pa.mean_separation, pb.mean_separation);
            assert_eq!(pa.std_separation, pb.std_separation);
            assert_eq!(pa.mean_tau, pb.mean_tau);
        }
        let mut cfg2 = cfg.clone();
        cfg2.master_seed = 12;
        let c = run_ensemble(&cfg2, &PowerModel::default()).unwrap();
        assert_ne!(a.points[0].mean_separation, c.points[0].mean_separation);
    }

    #[test]
    fn stats_are_independent_of_thread_count() {
        let cfg = small_ensemble(6, true, true);
        let run_with = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| run_ensemble(&cfg, &PowerModel::default()).unwrap())
        };
        let a = run_with(1);
        let b = run_with(3);
        assert_eq!(
            serde_json::to_string(&a.points).unwrap(),
            serde_json::to_string(&b.points).unwrap()
        );
    }

    #[test]
    fn sweep_burst_forces_unit_advantage() {
        let mut cfg = small_ensemble(2, false, false);
        cfg.grid = vec![(3e-6, 2.0)];
        let stats = sweep_burst(&cfg, &PowerModel::default()).unwrap();
        assert_eq!(stats.points[0].advantage, 1.0);
        // deeply sub-threshold input: excess essentially zero
        assert!(stats.points[0].mean_avg_excess.abs() < 1e-3);
    }
}
