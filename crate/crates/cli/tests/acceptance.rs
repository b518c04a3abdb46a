//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when
//! any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use qbm_ring::bath::BathSpec;
use qbm_ring::decoherence::{default_quad, gamma_early, gamma_early_lowt, tau_decoh, tau_q};
use qbm_ring::dynamics::{g_fun, tau_damp};
use qbm_ring::oracle::{discretize_bath, simulate_bath_ode};
use qbm_ring::ring::{charge_density_amplitude, w_early, w_general, w_isolated, RingState};
use qbm_ring::BathSpecF64;
use qbm_ring_cli::commands::{oracle_talbot, OracleOptions};
use qbm_ring_cli::{cmd_amplitude, RunConfig};
use rayon::prelude::*;

const MU: f64 = 1e-8;
const P: f64 = 4.0 * PI * MU;

fn scales(s: f64) -> BathSpecF64 {
    BathSpec::new(s, 1.0, 1.0 / MU, 0.0).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn ohmic_exactness() -> Outcome {
    let sp = BathSpec::new(1.0, 1.0, 1e8, 0.0).unwrap();
    let gamma = 0.5;
    let mut worst = 0.0f64;
    for k in 0..200 {
        let t = 10.0 * k as f64 / 199.0;
        let (g, gd) = g_fun(&sp, t).unwrap();
        let want_g = (1.0 - (-2.0 * gamma * t).exp()) / (2.0 * gamma);
        let want_gd = (-2.0 * gamma * t).exp();
        worst = worst.max(rel(g, want_g)).max(rel(gd, want_gd));
    }
    outcome(worst <= 1e-8, format!("max rel error {worst:.2e} (tol 1e-8)"))
}

fn cross_oracle() -> Outcome {
    match oracle_talbot(&OracleOptions::default()) {
        Ok(c) => outcome(c.max_error <= 1e-6, format!("max rel error {:.2e} (tol 1e-6)", c.max_error)),
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

/// Cutoff per exponent, in units of `ω_s`, balancing mode spacing against
/// the truncated high-frequency tail at 4096 modes.
fn ode_cutoff(s: f64) -> f64 {
    if s < 1.0 {
        160.0
    } else if s > 1.0 {
        2000.0
    } else {
        1e4
    }
}

fn discrete_bath() -> Outcome {
    let (theta0, thetadot0) = (0.1, 2.0);
    let results: Vec<(f64, f64)> = [0.8, 1.0, 1.2]
        .par_iter()
        .map(|&s| {
            let base = BathSpec::new(s, 1.0, 1.0, 0.0).unwrap();
            let sp = base.with_cutoff(ode_cutoff(s) * base.omega_s());
            let bath = discretize_bath(&sp, 1.0, 4096).unwrap();
            let t_max = tau_damp(&sp).unwrap().min(0.5 * bath.recurrence_time());
            let grid: Vec<f64> = (1..=40).map(|k| t_max * k as f64 / 40.0).collect();
            let theta = simulate_bath_ode(&bath, theta0, thetadot0, &grid).unwrap();
            let worst = grid
                .iter()
                .zip(theta)
                .map(|(&t, th)| {
                    let (g, gd) = g_fun(&sp, t).unwrap();
                    rel(th, g * thetadot0 + gd * theta0)
                })
                .fold(0.0, f64::max);
            (s, worst)
        })
        .collect();
    let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let parts: Vec<String> = results.iter().map(|(s, e)| format!("s={s}: {e:.2e}")).collect();
    outcome(worst <= 1e-3, format!("{} (tol 1e-3)", parts.join(", ")))
}

fn gamma_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for s in [0.5, 1.2] {
        let sp = scales(s);
        for k in 0..=40 {
            let t = 10.0 * P * k as f64 / 40.0;
            let a = gamma_early_lowt(&sp, MU, t).unwrap();
            let b = gamma_early(&sp, MU, t, &default_quad()).unwrap();
            worst = worst.max(rel(a, b));
        }
    }
    outcome(worst <= 1e-6, format!("max rel error {worst:.2e} (tol 1e-6)"))
}

/// Times at which `y` crosses zero upwards, by linear interpolation.
fn upward_crossings(t: &[f64], y: &[f64]) -> Vec<f64> {
    (1..y.len())
        .filter(|&i| y[i - 1] < 0.0 && y[i] >= 0.0)
        .map(|i| t[i - 1] + (t[i] - t[i - 1]) * (-y[i - 1]) / (y[i] - y[i - 1]))
        .collect()
}

fn amplitude_oscillation() -> Outcome {
    let cfg = RunConfig::from_json(r#"{"bath": {"s": 1.2, "g": 1.0}, "mu": 1e-8, "time": {"t_max_periods": 10, "points": 2001}}"#)
        .and_then(|c| c.resolve());
    let table = match cfg.and_then(|c| cmd_amplitude(&c)) {
        Ok(t) => t,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let tp = table.column("t_over_P").unwrap_or_default();
    let amp = table.column("n1_osc").unwrap_or_default();
    let gamma = table.column("Gamma").unwrap_or_default();
    let start_zero = amp.first() == Some(&0.0);
    let crossings = upward_crossings(&tp, &amp);
    let spacing_err = crossings.windows(2).map(|w| (w[1] - w[0] - 1.0).abs()).fold(0.0, f64::max);
    let spacing_ok = crossings.len() >= 5 && spacing_err <= 0.01;
    let envelope_ok = gamma.windows(2).all(|w| w[1] >= w[0]) && amp.iter().zip(&gamma).all(|(a, g)| a.abs() <= (-g).exp());
    outcome(
        start_zero && spacing_ok && envelope_ok,
        format!(
            "n1_osc(0) = {:e}, {} upward crossings, max spacing deviation {spacing_err:.2e} P (tol 0.01), envelope monotone: {envelope_ok}",
            amp.first().copied().unwrap_or(f64::NAN),
            crossings.len()
        ),
    )
}

fn no_damping_null() -> Outcome {
    let weak = BathSpec::new(1.2, 1e-12, 1.0 / MU, 0.0).unwrap();
    let values: Vec<Result<f64, String>> = (1..=20)
        .into_par_iter()
        .map(|k| {
            let t = 10.0 * P * k as f64 / 20.0;
            w_general(&RingState::Ground, &weak, MU, t, &default_quad()).map(|w| w.norm()).map_err(|e| e.to_string())
        })
        .collect();
    let mut worst = 0.0f64;
    for v in values {
        match v {
            Ok(x) => worst = worst.max(x),
            Err(e) => return outcome(false, format!("error: {e}")),
        }
    }
    outcome(worst < 1e-6, format!("max |W| {worst:.2e} (tol 1e-6)"))
}

fn isolated_periodicity() -> Outcome {
    let st = RingState::wrapped_gaussian(0.0, 0.3).unwrap();
    let mut worst = 0.0f64;
    for k in 0..10 {
        let t = 0.37 * P * k as f64;
        let a = w_isolated(&st, MU, t).unwrap();
        let b = w_isolated(&st, MU, t + P).unwrap();
        worst = worst.max((a - b).norm());
    }
    outcome(worst < 1e-9, format!("max |W(t+P) - W(t)| {worst:.2e} (tol 1e-9)"))
}

fn early_general_consistency() -> Outcome {
    let sp = scales(1.2);
    let tq = match tau_q(&sp, MU) {
        Ok(v) => v,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let times: Vec<f64> = (1..=12).map(|k| 0.3 * tq * k as f64 / 12.0).collect();
    let pairs: Vec<Result<(f64, f64), String>> = times
        .par_iter()
        .map(|&t| {
            let e = w_early(&RingState::Ground, &sp, MU, t, &default_quad()).map_err(|e| e.to_string())?;
            let g = w_general(&RingState::Ground, &sp, MU, t, &default_quad()).map_err(|e| e.to_string())?;
            Ok((e.norm(), (e - g).norm()))
        })
        .collect();
    let mut max_early = 0.0f64;
    let mut max_diff = 0.0f64;
    for p in pairs {
        match p {
            Ok((e, d)) => {
                max_early = max_early.max(e);
                max_diff = max_diff.max(d);
            }
            Err(e) => return outcome(false, format!("error: {e}")),
        }
    }
    let tol = 0.02 * max_early;
    outcome(
        max_diff <= tol,
        format!("max |W_early - W_general| {max_diff:.2e}, 2% of max |W_early| = {tol:.2e}, up to 0.3 tau_Q = {:.3e} s", 0.3 * tq),
    )
}

fn monotonicity_suite() -> Outcome {
    let mut failures = Vec::new();
    for s in [0.3, 0.8, 1.2, 1.7] {
        let mut last = 0.0;
        for k in 0..=30 {
            let g = gamma_early(&scales(s), MU, 0.5 * P * k as f64, &default_quad()).unwrap();
            if g < last {
                failures.push(format!("Gamma decreases in t at s={s}"));
            }
            last = g;
        }
        let mut last = 0.0;
        for temp in [0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0] {
            let g = gamma_early(&scales(s).with_temperature(temp), MU, 3.0 * P, &default_quad()).unwrap();
            if g < last {
                failures.push(format!("Gamma decreases in T at s={s}"));
            }
            last = g;
        }
        if g_fun(&scales(s), 0.0).unwrap() != (0.0, 1.0) {
            failures.push(format!("G(0), Gdot(0) wrong at s={s}"));
        }
        for k in 0..=40 {
            let t = 0.5 * P * k as f64;
            if charge_density_amplitude(&scales(s), MU, 2.0, t).unwrap().abs() > 2.0 {
                failures.push(format!("|n1_osc| > n1 at s={s}"));
            }
            let st = RingState::wrapped_gaussian(0.3 * k as f64 - 6.0, 0.1 + 0.05 * k as f64).unwrap();
            if w_isolated(&st, MU, t).unwrap().norm() > 1.0 + 1e-9
                || w_early(&st, &scales(s), MU, t, &default_quad()).unwrap().norm() > 1.0 + 1e-9
            {
                failures.push(format!("|W| > 1 at s={s}"));
            }
        }
    }
    failures.dedup();
    let detail = if failures.is_empty() { "all invariants hold".to_string() } else { failures.join("; ") };
    outcome(failures.is_empty(), detail)
}

fn cutoff_sensitivity() -> Outcome {
    let tau = |factor: f64| -> Result<f64, String> {
        let sp = BathSpec::new(1.2, 1.0, factor / MU, 0.0).unwrap();
        tau_decoh(&sp, MU).map_err(|e| e.to_string())
    };
    let low: Vec<f64> = match [0.1, 0.2, 0.3, 0.4, 0.5].iter().map(|&f| tau(f)).collect() {
        Ok(v) => v,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let high = match tau(5.0) {
        Ok(v) => v,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let max = low.iter().cloned().fold(f64::MIN, f64::max);
    let min = low.iter().cloned().fold(f64::MAX, f64::min);
    let spread = max / min;
    let drop = low[4] / high;
    outcome(
        spread < 2.0 && drop > 2.0,
        format!("spread over [0.1, 0.5]/mu = {spread:.3} (need < 2), tau(0.5/mu)/tau(5/mu) = {drop:.3} (need > 2)"),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "ohmic exactness", ohmic_exactness, Duration::from_secs(1)),
        (2, "cross-oracle G", cross_oracle, Duration::from_secs(10)),
        (3, "discrete-bath ODE", discrete_bath, Duration::from_secs(120)),
        (4, "Gamma closed form", gamma_closed_form, Duration::from_secs(30)),
        (5, "amplitude oscillation", amplitude_oscillation, Duration::from_secs(30)),
        (6, "no-damping null", no_damping_null, Duration::from_secs(60)),
        (7, "isolated periodicity", isolated_periodicity, Duration::from_secs(5)),
        (8, "early/general consistency", early_general_consistency, Duration::from_secs(300)),
        (9, "monotonicity suite", monotonicity_suite, Duration::from_secs(60)),
        (10, "cutoff sensitivity", cutoff_sensitivity, Duration::from_secs(120)),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (n, name, run, budget) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = out.passed && in_time;
        let tag = if passed { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {n}: {name}: {} [{:.2} s of {} s]",
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        if !passed {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
