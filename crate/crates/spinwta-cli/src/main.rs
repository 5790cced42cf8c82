//! Experiment runner for the spin-Hall MTJ winner-take-all column
//! simulator.
//!
//! Exit codes: 0 success, 1 configuration error, 2 simulation failure.

mod config;

use clap::{Args, Parser, Subcommand};
use config::ExperimentConfig;
use spinwta::analysis::{power_crossbar, power_divider, PowerModel};
use spinwta::column::{classify_outcome, detect_steady, simulate, ColumnConfig, Outcome};
use spinwta::defaults::TracePreset;
use spinwta::montecarlo::{run_ensemble, sweep_burst, EnsembleStats};
use spinwta::output;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "spinwta", version, about = "Spin-Hall MTJ winner-take-all column simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Configuration file (TOML); missing sections take built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default "out").
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Ensemble rounds override.
    #[arg(long, global = true)]
    rounds: Option<usize>,
    /// Worker-thread count (parallelism hint; results are identical for any
    /// value).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Disable the thermal fluctuation field.
    #[arg(long, global = true)]
    no_thermal: bool,
    /// Disable process variation sampling.
    #[arg(long, global = true)]
    no_variation: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one column simulation and write the voltage/magnetization trace.
    Trace {
        /// Built-in scenario: fig4-insufficient, fig4-equal, fig4-advantage.
        #[arg(long)]
        preset: Option<String>,
    },
    /// Ensemble sweep over (input, advantage): predictive-state statistics.
    SweepPredictive,
    /// Ensemble sweep over input at advantage 1: bursting statistics.
    SweepBurst,
    /// Delay and energy versus advantage.
    Energy,
    /// Quasi-static response curve plus derived device constants.
    Calibrate,
}

enum CliError {
    Config(String),
    Simulation(String),
}

impl From<spinwta::SimError> for CliError {
    fn from(e: spinwta::SimError) -> Self {
        match e {
            spinwta::SimError::InvalidConfig(m) => CliError::Config(m),
            other => CliError::Simulation(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Simulation(format!("i/o: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };

    let run = || -> Result<(), CliError> {
        let experiment = load_config(&cli.common)?;
        let threads = cli.common.threads.unwrap_or(0);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
        pool.install(|| dispatch(&cli, &experiment))
    };

    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Simulation(msg)) => {
            eprintln!("simulation failure: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_config(common: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            ExperimentConfig::from_toml(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = Some(seed);
    }
    if let Some(out) = &common.out {
        cfg.out_dir = Some(out.clone());
    }
    if let Some(rounds) = common.rounds {
        cfg.ensemble.rounds = rounds;
    }
    if common.no_thermal {
        cfg.column.thermal = false;
    }
    if common.no_variation {
        cfg.variation.enabled = false;
    }
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
}

fn dispatch(cli: &Cli, experiment: &ExperimentConfig) -> Result<(), CliError> {
    match &cli.command {
        Command::Trace { preset } => cmd_trace(experiment, preset.as_deref()),
        Command::SweepPredictive => cmd_sweep_predictive(experiment),
        Command::SweepBurst => cmd_sweep_burst(experiment),
        Command::Energy => cmd_energy(experiment),
        Command::Calibrate => cmd_calibrate(experiment),
    }
}

fn describe_outcome(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Inactive => "inactive (all outputs at the low rail)".into(),
        Outcome::Burst => "burst (shared above-threshold activation)".into(),
        Outcome::PredictiveWin { index, ambiguous } => {
            if *ambiguous {
                format!("predictive win by cell {index} (ambiguous: multiple qualifiers)")
            } else {
                format!("predictive win by cell {index}")
            }
        }
    }
}

fn cmd_trace(experiment: &ExperimentConfig, preset: Option<&str>) -> Result<(), CliError> {
    let col: ColumnConfig = match preset {
        Some(name) => {
            let preset = TracePreset::from_name(name).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown preset '{name}' (expected fig4-insufficient, fig4-equal or fig4-advantage)"
                ))
            })?;
            let mut col = preset.column_config(experiment.seed.unwrap_or(0));
            // device sections still apply under a preset
            col.magnet = experiment.magnet.resolve();
            col.mtj = experiment.mtj.resolve(experiment.magnet.dims);
            col.cell = experiment.cell.clone();
            col.inverter = experiment.inverter.clone();
            col
        }
        None => experiment.column_config(),
    };
    col.validate().map_err(CliError::Config)?;

    let trace = simulate(&col)?;
    let (tau, steady_ok) = detect_steady(&trace, 5e-3);
    let outcome = classify_outcome(&trace, &col);

    let dir = out_dir(experiment);
    let path = dir.join("trace.csv");
    let extra = serde_json::json!({
        "preset": preset,
        "settled": trace.settled && steady_ok,
        "settling_time_s": tau,
        "outcome": outcome,
    });
    output::write_with_sidecar(&path, &output::trace_csv(&trace), &col, extra)?;

    println!("trace: {} samples over {:.3e} s", trace.times.len(), trace.times.last().unwrap());
    println!("settling time: {:.3e} s (settled: {})", tau, trace.settled && steady_ok);
    println!("outcome: {}", describe_outcome(&outcome));
    println!("wrote {}", path.display());
    Ok(())
}

fn write_ensemble(
    experiment: &ExperimentConfig,
    stats: &EnsembleStats,
    name: &str,
    csv: String,
) -> Result<PathBuf, CliError> {
    let dir = out_dir(experiment);
    let path = dir.join(name);
    let failed: usize = stats.points.iter().map(|p| p.failed_rounds).sum();
    let extra = serde_json::json!({
        "master_seed": stats.master_seed,
        "failed_rounds": failed,
        "grid_points": stats.points.len(),
    });
    output::write_with_sidecar(&path, &csv, experiment, extra)?;
    Ok(path)
}

fn cmd_sweep_predictive(experiment: &ExperimentConfig) -> Result<(), CliError> {
    let mut grid = Vec::new();
    for &i in &experiment.ensemble.inputs {
        for &a in &experiment.ensemble.advantages {
            grid.push((i, a));
        }
    }
    let mut cfg = experiment.ensemble_config(grid);
    if cfg.base.predictive_index.is_none() {
        cfg.base.predictive_index = Some(0);
    }
    let stats = run_ensemble(&cfg, &experiment.power)?;
    let path = write_ensemble(experiment, &stats, "predictive.csv", output::ensemble_csv(&stats))?;
    println!(
        "predictive sweep: {} grid points x {} rounds",
        stats.points.len(),
        cfg.rounds
    );
    for p in &stats.points {
        println!(
            "  I = {:+.2e} A, a = {:.2}: separation {:+.1} mV (sd {:.1})",
            p.i_prox,
            p.advantage,
            p.mean_separation * 1e3,
            p.std_separation * 1e3
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_sweep_burst(experiment: &ExperimentConfig) -> Result<(), CliError> {
    let grid: Vec<(f64, f64)> =
        experiment.ensemble.burst_inputs.iter().map(|&i| (i, 1.0)).collect();
    let cfg = experiment.ensemble_config(grid);
    let stats = sweep_burst(&cfg, &experiment.power)?;
    let path = write_ensemble(experiment, &stats, "burst.csv", output::burst_csv(&stats))?;
    println!("burst sweep ({} rounds per input):", cfg.rounds);
    for p in &stats.points {
        println!(
            "  I = {:+.2e} A: column-average excess {:+.1} mV (sd {:.1})",
            p.i_prox,
            p.mean_avg_excess * 1e3,
            p.std_avg_excess * 1e3
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_energy(experiment: &ExperimentConfig) -> Result<(), CliError> {
    let input = experiment.ensemble.energy_input;
    let grid: Vec<(f64, f64)> =
        experiment.ensemble.energy_advantages.iter().map(|&a| (input, a)).collect();
    let mut cfg = experiment.ensemble_config(grid);
    // delay/energy curves are deterministic characterizations
    cfg.base.thermal_enabled = false;
    cfg.variation.enabled = false;
    if cfg.base.predictive_index.is_none() {
        cfg.base.predictive_index = Some(0);
    }
    // advantage 1 has no predictive cell
    let stats = {
        let mut per_point = Vec::new();
        for &(i, a) in &cfg.grid {
            let mut one = cfg.clone();
            one.grid = vec![(i, a)];
            if a <= 1.0 {
                one.base.predictive_index = None;
            }
            per_point.push(run_ensemble(&one, &experiment.power)?.points.remove(0));
        }
        EnsembleStats { points: per_point, master_seed: cfg.master_seed }
    };
    let path = write_ensemble(experiment, &stats, "energy.csv", output::energy_csv(&stats))?;
    println!("delay/energy vs advantage at I = {input:+.2e} A:");
    for p in &stats.points {
        println!(
            "  a = {:.2}: tau = {:.2} ns, E = {:.1} pJ",
            p.advantage,
            p.mean_tau * 1e9,
            p.mean_energy * 1e12
        );
    }
    println!(
        "power constants: P_CB = {:.3e} W, P_VD = {:.3e} W",
        power_crossbar(&experiment.power),
        power_divider(&experiment.power)
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_calibrate(experiment: &ExperimentConfig) -> Result<(), CliError> {
    let base = experiment.column_config();
    base.validate().map_err(CliError::Config)?;

    // quasi-static single-cell response: steady state at each input
    let mut csv = String::from("i_prox,v_out,m_pl\n");
    let n_pts = 61;
    for k in 0..n_pts {
        let i = -6e-6 + 12e-6 * k as f64 / (n_pts - 1) as f64;
        let mut col = base.clone();
        col.n_cells = 2;
        col.i_prox = vec![i; 2];
        col.g_inh = vec![1e-12; 2]; // isolate the cells
        col.predictive_index = None;
        col.advantage = 1.0;
        col.thermal_enabled = false;
        col.duration_max = 15e-9;
        let trace = simulate(&col)?;
        use std::fmt::Write as _;
        writeln!(
            csv,
            "{},{},{}",
            i,
            trace.v_out[0].last().unwrap(),
            trace.m_pl[0].last().unwrap()
        )
        .unwrap();
    }

    let dir = out_dir(experiment);
    let path = dir.join("calibration.csv");
    let (nx, ny, nz) = base.magnet.demag_factors;
    let extra = serde_json::json!({
        "demag_factors": [nx, ny, nz],
        "r_p_ohm": base.mtj.r_p,
        "r_ap_ohm": base.mtj.r_ap,
        "r_ref_ohm": base.cell.r_ref,
        "inverter_gain": base.inverter.gain,
        "she_scale": base.magnet.she_scale,
    });
    output::write_with_sidecar(&path, &csv, &base, extra)?;

    println!("calibration report");
    println!("  free layer: {:.0} x {:.0} x {:.0} nm", base.magnet.dims.0 * 1e9, base.magnet.dims.1 * 1e9, base.magnet.dims.2 * 1e9);
    println!("  demag factors: Nx = {nx:.6}, Ny = {ny:.6}, Nz = {nz:.6}");
    println!("  R_P = {:.1} Ohm, R_AP = {:.1} Ohm", base.mtj.r_p, base.mtj.r_ap);
    println!("  R_R = {:.1} Ohm (choice within the 3.25-140 kOhm table range)", base.cell.r_ref);
    println!("  inverter gain = {:.1} V/V, SHE scale = {:.0}", base.inverter.gain, base.magnet.she_scale);
    println!("wrote {}", path.display());
    Ok(())
}
