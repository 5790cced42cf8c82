//! Operating-point scan used to freeze the calibrated defaults.
//!
//! Modes:
//!   transfer <r_ref> <she_scale> <gain>   quasi-static response curve
//!   anchors  <r_ref> <she_scale> <gain> [rounds]   acceptance anchors
//!   fig4     <r_ref> <she_scale> <gain>   the three trace presets
//!   delay    <r_ref> <she_scale> <gain>   settling time vs advantage

use spinwta::analysis::PowerModel;
use spinwta::column::{simulate, ColumnConfig};
use spinwta::montecarlo::{run_ensemble, EnsembleConfig, VariationSpec};

fn apply(cfg: &mut ColumnConfig, r_ref: f64, she_scale: f64, gain: f64) {
    cfg.cell.r_ref = r_ref;
    cfg.magnet.she_scale = she_scale;
    cfg.inverter.gain = gain;
    if let Ok(a) = std::env::var("OPSCAN_ALPHA") {
        cfg.magnet.alpha = a.parse().unwrap();
    }
    if let Ok(c) = std::env::var("OPSCAN_COUT") {
        cfg.inverter.c_out = c.parse::<f64>().unwrap() * 1e-15;
    }
}

fn steady_outputs(i_prox: f64, advantage: f64, r_ref: f64, s: f64, g: f64) -> (f64, f64, f64, bool) {
    let pred = if advantage > 1.0 { Some(0) } else { None };
    let mut cfg = ColumnConfig::uniform(9, i_prox, advantage, pred);
    cfg.thermal_enabled = false;
    cfg.duration_max = 40e-9;
    apply(&mut cfg, r_ref, s, g);
    let trace = simulate(&cfg).unwrap();
    let finals = trace.final_outputs();
    let win = finals[0];
    let rest: f64 = finals[1..].iter().sum::<f64>() / (finals.len() - 1) as f64;
    let avg: f64 = finals.iter().sum::<f64>() / finals.len() as f64;
    (win, rest, avg, trace.settled)
}

fn transfer(r_ref: f64, s: f64, g: f64) {
    println!("# single-cell steady output vs input current (uA), T=0");
    println!("i_uA,v_out,m_pl");
    for k in -30..=30 {
        let i = k as f64 * 0.2e-6;
        let mut cfg = ColumnConfig::uniform(2, i, 1.0, None);
        cfg.g_inh = vec![1e-12; 2]; // isolate the cells
        cfg.thermal_enabled = false;
        cfg.duration_max = 15e-9;
        apply(&mut cfg, r_ref, s, g);
        let trace = simulate(&cfg).unwrap();
        let v = *trace.v_out[0].last().unwrap();
        let m = *trace.m_pl[0].last().unwrap();
        println!("{:.2},{:.4},{:.4}", i * 1e6, v, m);
    }
}

fn ensemble_sep(i_prox: f64, advantage: f64, r_ref: f64, s: f64, g: f64, rounds: usize, variation: bool, seed: u64) -> (f64, f64) {
    let mut base = ColumnConfig::uniform(9, i_prox, advantage, Some(0));
    base.duration_max = 40e-9;
    apply(&mut base, r_ref, s, g);
    let cfg = EnsembleConfig {
        rounds,
        grid: vec![(i_prox, advantage)],
        base,
        variation: VariationSpec { enabled: variation, ..VariationSpec::default() },
        master_seed: seed,
    };
    let stats = run_ensemble(&cfg, &PowerModel::default()).unwrap();
    (stats.points[0].mean_separation, stats.points[0].mean_avg_excess)
}

fn crossing(i_prox: f64, r_ref: f64, s: f64, g: f64, rounds: usize, variation: bool) -> f64 {
    let grid: Vec<f64> = (0..=26).map(|k| 1.0 + 0.1 * k as f64).collect();
    let mut prev: Option<(f64, f64)> = None;
    for &a in &grid {
        let (sep, _) = ensemble_sep(i_prox, a, r_ref, s, g, rounds, variation, 42);
        eprintln!("    a={a:.2} sep={:.1} mV", sep * 1e3);
        if sep >= 0.070 {
            if let Some((pa, ps)) = prev {
                // linear interpolation to the 70 mV crossing
                return pa + (a - pa) * (0.070 - ps) / (sep - ps);
            }
            return a;
        }
        prev = Some((a, sep));
    }
    f64::INFINITY
}

fn anchors(r_ref: f64, s: f64, g: f64, rounds: usize) {
    println!("== anchors at R_R={:.0}k s={s} gain={g:.2} rounds={rounds}", r_ref / 1e3);
    let (_, _, avg_rest, _) = steady_outputs(0.0, 1.0, r_ref, s, g);
    println!("rest(I=0,T=0) column avg excess: {:.1} mV", (avg_rest + 0.5) * 1e3);

    let (_, burst_m1) = ensemble_sep(-1e-6, 1.0, r_ref, s, g, rounds, false, 7);
    let (_, burst_sub) = ensemble_sep(3e-6, 1.0, r_ref, s, g, rounds, false, 7);
    println!("burst excess @ -1uA: {:.1} mV   @ +3uA: {:.2} mV", burst_m1 * 1e3, burst_sub * 1e3);

    eprintln!("  crossing scan I=0 ideal");
    let a0 = crossing(0.0, r_ref, s, g, rounds, false);
    eprintln!("  crossing scan I=+1uA ideal");
    let a1 = crossing(1e-6, r_ref, s, g, rounds, false);
    println!("a*(0) ideal = {a0:.2}   a*(+1uA) ideal = {a1:.2}");
}

fn fig4(r_ref: f64, s: f64, g: f64) {
    let cases = [("insufficient", 2e-6, 1.0), ("equal", -2e-6, 1.0), ("advantage", -2e-6, 2.5)];
    for (name, i, a) in cases {
        let (win, rest, avg, settled) = steady_outputs(i, a, r_ref, s, g);
        println!(
            "fig4-{name:13} win={:+.3} V others={:+.3} V avg_excess={:.1} mV sep={:.1} mV settled={settled}",
            win, rest, (avg + 0.5) * 1e3, (win - rest) * 1e3
        );
    }
}

fn delay(r_ref: f64, s: f64, g: f64) {
    use spinwta::column::detect_steady;
    println!("advantage,tau_ns,settled");
    for a in [1.0, 1.2, 1.4, 1.6, 2.0, 2.4, 3.0] {
        let pred = if a > 1.0 { Some(0) } else { None };
        let mut cfg = ColumnConfig::uniform(9, -2e-6, a, pred);
        cfg.thermal_enabled = false;
        cfg.duration_max = 80e-9;
        apply(&mut cfg, r_ref, s, g);
        let trace = simulate(&cfg).unwrap();
        let (tau, ok) = detect_steady(&trace, 5e-3);
        println!("{a:.1},{:.2},{}", tau * 1e9, ok && trace.settled);
    }
}

fn dump(r_ref: f64, s: f64, g: f64, i_ua: f64, advantage: f64, thermal: bool) {
    let pred = if advantage > 1.0 { Some(0) } else { None };
    let mut cfg = ColumnConfig::uniform(9, i_ua * 1e-6, advantage, pred);
    cfg.thermal_enabled = thermal;
    cfg.duration_max = 40e-9;
    cfg.steady_window = 0.0;
    apply(&mut cfg, r_ref, s, g);
    let trace = simulate(&cfg).unwrap();
    println!("t_ns,v0,v1,v8,m0,m1,m8");
    let stride = (0.25e-9 / cfg.dt) as usize;
    for k in (0..trace.times.len()).step_by(stride) {
        println!(
            "{:.2},{:+.3},{:+.3},{:+.3},{:+.3},{:+.3},{:+.3}",
            trace.times[k] * 1e9,
            trace.v_out[0][k],
            trace.v_out[1][k],
            trace.v_out[8][k],
            trace.m_pl[0][k],
            trace.m_pl[1][k],
            trace.m_pl[8][k],
        );
    }
}

fn race(r_ref: f64, s: f64, g: f64, i_ua: f64, advantage: f64, rounds: usize) {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut base = ColumnConfig::uniform(9, i_ua * 1e-6, advantage, Some(0));
    base.duration_max = 40e-9;
    apply(&mut base, r_ref, s, g);
    let mut p_wins = 0;
    let mut seps = Vec::new();
    for round in 0..rounds {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        rng.set_stream(round as u64);
        let seeds: Vec<u64> = (0..9).map(|_| rng.random()).collect();
        let mut col = base.clone();
        col.noise_seeds = Some(seeds);
        let trace = simulate(&col).expect("sim failed");
        let finals = trace.final_outputs();
        let best = (0..9).max_by(|&a, &b| finals[a].partial_cmp(&finals[b]).unwrap()).unwrap();
        let win = finals[0];
        let rest: f64 = finals[1..].iter().sum::<f64>() / 8.0;
        if best == 0 && win - rest >= 0.07 {
            p_wins += 1;
        }
        seps.push(win - rest);
        if round < 6 {
            let fs: Vec<String> = finals.iter().map(|v| format!("{v:+.2}")).collect();
            eprintln!("  round {round}: sep={:+.3} finals=[{}]", win - rest, fs.join(","));
        }
    }
    let mean = seps.iter().sum::<f64>() / seps.len() as f64;
    println!(
        "I={i_ua} uA a={advantage}: mean sep = {:.1} mV, predictive wins {p_wins}/{rounds}",
        mean * 1e3
    );
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(String::as_str).unwrap_or("anchors");
    let f = |k: usize, d: f64| args.get(k).and_then(|v| v.parse().ok()).unwrap_or(d);
    let r_ref = f(2, spinwta::defaults::R_REF);
    let s = f(3, spinwta::defaults::SHE_SCALE);
    let g = f(4, spinwta::defaults::INVERTER_GAIN);
    match mode {
        "transfer" => transfer(r_ref, s, g),
        "fig4" => fig4(r_ref, s, g),
        "delay" => delay(r_ref, s, g),
        "dump" => dump(r_ref, s, g, f(5, -2.0), f(6, 1.0), f(7, 0.0) > 0.5),
        "race" => race(r_ref, s, g, f(5, 1.0), f(6, 1.6), f(7, 16.0) as usize),
        _ => anchors(r_ref, s, g, f(5, 24.0) as usize),
    }
}
