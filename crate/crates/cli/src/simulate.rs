use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use secmux::dmic::{
    a_rho, bound_base, exact_block_error, exact_leakage, finite_length_leakage_rate_bound,
    sample_leakage, sampled_block_error, sampled_code, DiscreteInstance, FiniteLengthBound,
    LeakageReport,
};
use secmux::prob::Rho;
use secmux::Execution;

use crate::config::{RunConfig, Units};
use crate::output::OutputDir;
use crate::Failure;

/// Monte Carlo decoding trials per receiver for the minimum-leakage code.
const DECODE_TRIALS: usize = 4000;

#[derive(Debug, Serialize)]
struct RhoRow {
    rho: f64,
    single_letter_bound: f64,
    a_rho: f64,
    /// Per-symbol decay factor of the single-letter bound.
    decay_base: f64,
    finite_length: FiniteLengthBound,
}

#[derive(Debug, Serialize)]
struct RateSetting {
    r_i: f64,
    r_p: f64,
    delta: f64,
    /// Channel-code rate `R_p + δ`.
    r1: f64,
    /// `I(V1; Y2 | U, V2)`.
    cross_leakage: f64,
    /// `R_p - I(V1; Y2 | U, V2)`.
    max_equivocation_rate: f64,
    leakage_vanishes: bool,
}

#[derive(Debug, Serialize)]
struct LeakageSummary {
    samples: usize,
    seed: u64,
    mean: f64,
    std_error: f64,
    min: f64,
    max: f64,
    values: Vec<f64>,
    mean_within_bound_3se: bool,
}

#[derive(Debug, Serialize)]
struct DecodeErrors {
    /// Exact ML block error averaged over all sampled codes, per receiver.
    mean_exact: [f64; 2],
    /// Exact and Monte Carlo block error of the minimum-leakage code.
    min_leakage_exact: [f64; 2],
    min_leakage_sampled: [f64; 2],
    sampled_trials: usize,
}

#[derive(Debug, Serialize)]
struct SimulateReport {
    schema: u32,
    workflow: &'static str,
    units: Units,
    execution: Execution,
    instance: DiscreteInstance,
    rate: RateSetting,
    rho_grid: Vec<RhoRow>,
    best_rho: f64,
    best_bound: f64,
    leakage: LeakageSummary,
    min_leakage_sample: usize,
    min_leakage_report: LeakageReport,
    decoding: DecodeErrors,
}

pub fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let inst = cfg.simulate.instance.resolve();
    let grid = cfg.rho_grid().map_err(Failure::Config)?;
    let k = cfg.units.scale();
    let core = Failure::from_core;

    let (r_i, r_p) = inst.rates().map_err(core)?;
    let leak_mi = inst.law.cross_leakage(&inst.channel).map_err(core)?;
    let messages = inst.layouts[0].secret_count();
    let rows = grid
        .iter()
        .map(|&rho: &Rho| {
            let fl = finite_length_leakage_rate_bound(messages, inst.n, rho.value(), r_i, r_p, leak_mi);
            Ok(RhoRow {
                rho: rho.value(),
                single_letter_bound: inst.single_letter_bound(rho)? * k,
                a_rho: a_rho(&inst.law, &inst.channel, rho)? * k,
                decay_base: bound_base(&inst.law, &inst.channel, rho, r_i, r_p)?,
                finite_length: FiniteLengthBound { value: fl.value * k, ..fl },
            })
        })
        .collect::<secmux::Result<Vec<_>>>()
        .map_err(core)?;
    let (best_rho, best_bound) = inst.best_rho(&grid).map_err(core)?;

    let seed = cfg.seed;
    let samples = cfg.simulate.samples;
    let sample = sample_leakage(&inst, samples, seed, cfg.execution).map_err(core)?;
    let min_idx = sample
        .values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .expect("at least one sample");
    let proj = inst.projection().map_err(core)?;
    let min_code = sampled_code(&inst, seed, min_idx).map_err(core)?;
    let mut min_report = exact_leakage(&min_code, &inst.channel, &proj).map_err(core)?;
    min_report.bound = Some(best_bound);
    min_report.rho_used = Some(best_rho);

    let per_code = cfg
        .execution
        .map_indices(samples, |i| -> secmux::Result<[f64; 2]> {
            let code = sampled_code(&inst, seed, i)?;
            Ok([
                exact_block_error(&code, &inst.channel, 0)?,
                exact_block_error(&code, &inst.channel, 1)?,
            ])
        })
        .into_iter()
        .collect::<secmux::Result<Vec<_>>>()
        .map_err(core)?;
    let mean_exact = [0, 1].map(|t| per_code.iter().map(|e| e[t]).sum::<f64>() / samples as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let mut min_sampled = [0.0; 2];
    for (t, slot) in min_sampled.iter_mut().enumerate() {
        *slot = sampled_block_error(&min_code, &inst.channel, t, DECODE_TRIALS, &mut rng).map_err(core)?;
    }

    let delta = cfg.simulate.delta;
    let report = SimulateReport {
        schema: crate::config::SCHEMA_VERSION,
        workflow: "simulate",
        units: cfg.units,
        execution: cfg.execution,
        rate: RateSetting {
            r_i: r_i * k,
            r_p: r_p * k,
            delta: delta * k,
            r1: (r_p + delta) * k,
            cross_leakage: leak_mi * k,
            max_equivocation_rate: (r_p - leak_mi) * k,
            leakage_vanishes: r_p - r_i > leak_mi,
        },
        rho_grid: rows,
        best_rho: best_rho.value(),
        best_bound: best_bound * k,
        leakage: LeakageSummary {
            samples,
            seed,
            mean: sample.mean * k,
            std_error: sample.std_error * k,
            min: sample.min * k,
            max: sample.max * k,
            values: sample.values.iter().map(|v| v * k).collect(),
            mean_within_bound_3se: sample.mean <= best_bound + 3.0 * sample.std_error,
        },
        min_leakage_sample: min_idx,
        min_leakage_report: LeakageReport {
            exact_leakage: min_report.exact_leakage * k,
            equivocation: min_report.equivocation * k,
            secret_entropy: min_report.secret_entropy * k,
            bound: min_report.bound.map(|b| b * k),
            r_i: min_report.r_i * k,
            r_p: min_report.r_p * k,
            ..min_report
        },
        decoding: DecodeErrors {
            mean_exact,
            min_leakage_exact: [
                per_code[min_idx][0],
                per_code[min_idx][1],
            ],
            min_leakage_sampled: min_sampled,
            sampled_trials: DECODE_TRIALS,
        },
        instance: inst,
    };

    let u = cfg.units.label();
    println!(
        "rates: R_I {:.6} {u}, R_p {:.6} {u}, R1 {:.6} {u} (delta {:.4}), I(V1;Y2|U,V2) {:.6} {u}",
        report.rate.r_i, report.rate.r_p, report.rate.r1, report.rate.delta, report.rate.cross_leakage
    );
    println!("{:>6} {:>14} {:>12} {:>10} {:>14}", "rho", "bound", "A(rho)", "base", "finite-length");
    for r in &report.rho_grid {
        println!(
            "{:>6.3} {:>14.6} {:>12.6} {:>10.6} {:>14.6}",
            r.rho, r.single_letter_bound, r.a_rho, r.decay_base, r.finite_length.value
        );
    }
    let l = &report.leakage;
    println!(
        "leakage over {} codes: mean {:.6} +- {:.6} {u}, min {:.6}, max {:.6}; best bound {:.6} {u} at rho {}",
        l.samples, l.mean, l.std_error, l.min, l.max, report.best_bound, report.best_rho
    );
    println!(
        "block error (exact, mean over codes): receiver 1 {:.4}, receiver 2 {:.4}",
        report.decoding.mean_exact[0], report.decoding.mean_exact[1]
    );

    let out = OutputDir::create(&cfg.out_dir()).map_err(Failure::Config)?;
    out.write_json("report.json", &report).map_err(Failure::Config)?;
    println!("wrote {}", out.path("report.json").display());
    Ok(())
}
