//! Subcommand implementations. Each returns data; the binary decides where
//! it goes.

use qbm_ring::bath::{memory_kernel_laplace_complex, noise_kernel, BathSpec};
use qbm_ring::decoherence::{default_quad, gamma_early, gamma_early_lowt, tau_decoh, combine_tau_q};
use qbm_ring::dynamics::{g_fun, tau_damp};
use qbm_ring::oracle::{discretize_bath, noise_kernel_direct, simulate_bath_ode};
use qbm_ring::params::{circuit_coupling, coil_check, derived_scales, radius_lower_bound_check, radius_upper_bound};
use qbm_ring::ring::{charge_density_amplitude, w_early, w_general, w_isolated};
use qbm_ring::specfun::{inverse_laplace, DEFAULT_TALBOT_NODES};
use qbm_ring::Complex;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::Resolved;
use crate::error::CliError;
use crate::output::Table;

/// Evaluates `row` at every time for every bath, in parallel, keeping the
/// (s, t) order.
fn sweep<F>(cfg: &Resolved, columns: Vec<&'static str>, row: F) -> Result<Table, CliError>
where
    F: Fn(&BathSpec<f64>, f64) -> Result<Vec<f64>, qbm_ring::Error> + Sync,
{
    let times = cfg.times();
    let p = cfg.period();
    let jobs: Vec<(BathSpec<f64>, f64)> = cfg.baths.iter().flat_map(|b| times.iter().map(move |&t| (*b, t))).collect();
    let rows = jobs
        .par_iter()
        .map(|(b, t)| {
            let mut r = vec![b.s, *t, *t / p];
            r.extend(row(b, *t)?);
            Ok(r)
        })
        .collect::<Result<Vec<_>, qbm_ring::Error>>()?;
    let mut table = Table::new(columns);
    table.rows = rows;
    Ok(table)
}

/// `G(t)` and `Ġ(t)` for each exponent.
pub fn cmd_gfun(cfg: &Resolved) -> Result<Table, CliError> {
    sweep(cfg, vec!["s", "t", "t_over_P", "G", "Gdot"], |b, t| {
        let (g, gd) = g_fun(b, t)?;
        Ok(vec![g, gd])
    })
}

/// Oscillating charge-density amplitude and the early-time noise action.
/// `n₁` comes from the ring when one is configured, otherwise 1.
pub fn cmd_amplitude(cfg: &Resolved) -> Result<Table, CliError> {
    let n1 = cfg.ring.map(|r| r.n1).unwrap_or(1.0);
    let mu = cfg.mu;
    sweep(cfg, vec!["s", "t", "t_over_P", "n1_osc", "Gamma"], |b, t| {
        let amp = charge_density_amplitude(b, mu, n1, t)?;
        let gamma = gamma_early(b, mu, t, &default_quad())?;
        Ok(vec![amp, gamma])
    })
}

/// Which expression `wexp` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WMode {
    #[default]
    General,
    Early,
    Isolated,
}

/// `⟨Ŵ(t)⟩` for the configured state. At `t = 0` the general expression
/// is replaced by its limit, the isolated value.
pub fn cmd_wexp(cfg: &Resolved, mode: WMode) -> Result<Table, CliError> {
    let mu = cfg.mu;
    let state = &cfg.state;
    let q = default_quad();
    sweep(cfg, vec!["s", "t", "t_over_P", "re_W", "im_W", "abs_W"], |b, t| {
        let w: Complex<f64> = match mode {
            WMode::Isolated => w_isolated(state, mu, t)?,
            WMode::Early => w_early(state, b, mu, t, &q)?,
            WMode::General if t == 0.0 => w_isolated(state, mu, 0.0)?,
            WMode::General => w_general(state, b, mu, t, &q)?,
        };
        Ok(vec![w.re, w.im, w.norm()])
    })
}

fn quantity(value: Result<f64, qbm_ring::Error>, unit: &str) -> Value {
    match value {
        Ok(v) => json!({ "value": v, "unit": unit }),
        Err(e) => json!({ "value": null, "unit": unit, "reason": e.to_string() }),
    }
}

fn known(value: f64, unit: &str) -> Value {
    json!({ "value": value, "unit": unit })
}

/// Derived scales and timescales, one object per exponent.
pub fn cmd_params(cfg: &Resolved) -> Result<Value, CliError> {
    let mu = cfg.mu;
    let hbar = qbm_ring::constants::HBAR;
    let mut results = Vec::new();
    for b in &cfg.baths {
        let damp = tau_damp(b);
        let decoh = tau_decoh(b, mu);
        let tq = combine_tau_q(damp.clone(), decoh.clone());
        let n = tq.clone().map(|t| t / (4.0 * std::f64::consts::PI * mu));
        let mut obj = json!({
            "s": b.s,
            "inertia": known(hbar * mu, "kg m^2"),
            "mu": known(mu, "s"),
            "period": known(4.0 * std::f64::consts::PI * mu, "s"),
            "frequency": known(1.0 / (2.0 * mu), "rad/s"),
            "omega_s": known(b.omega_s(), "rad/s"),
            "tau_damp": quantity(damp, "s"),
            "tau_decoh": quantity(decoh, "s"),
            "tau_q": quantity(tq, "s"),
            "lattice_points": quantity(n, "1"),
        });
        let mut warnings = Vec::new();
        if let Some(ring) = &cfg.ring {
            let d = derived_scales(ring);
            obj["inertia"] = known(d.inertia, "kg m^2");
            obj["wavelength"] = known(ring.wavelength(), "m");
            if let Some(w) = radius_lower_bound_check(ring) {
                warnings.push(w.to_string());
            }
            if let Some(circuit) = &cfg.circuit {
                let c = circuit_coupling(ring, circuit);
                obj["beta"] = known(c.beta, "Hz/m");
                obj["gamma"] = known(c.gamma, "Hz");
                obj["mu_gamma"] = known(mu * c.gamma, "1");
                obj["radius_upper_bound"] = quantity(radius_upper_bound(ring, c.beta), "m");
                if let Some(w) = coil_check(ring, circuit) {
                    warnings.push(w.to_string());
                }
            }
            obj["radius_lower_bound"] = known(10.0 * ring.wavelength(), "m");
        }
        obj["warnings"] = json!(warnings);
        results.push(obj);
    }
    Ok(json!({
        "tool": "qbm-ring",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg.describe(),
        "results": results,
    }))
}

/// Settings of the oracle suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    /// Halve mode counts and loosen tolerances tenfold.
    pub quick: bool,
    /// Multiplies the coupling on the reference side of every check; any
    /// value other than 1 should make the checks fail.
    pub mismatch: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { quick: false, mismatch: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleReport {
    pub checks: Vec<CheckResult>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "[{tag}] {}: max error {:.3e} (tolerance {:.1e}) {}\n",
                c.name, c.max_error, c.tolerance, c.detail
            ));
        }
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        if failed.is_empty() {
            out.push_str("all oracle checks passed\n");
        } else {
            out.push_str(&format!("failed checks: {}\n", failed.join(", ")));
        }
        out
    }
}

fn check(name: &'static str, errors: Vec<f64>, tolerance: f64, detail: String) -> CheckResult {
    let max_error = errors.iter().fold(0.0f64, |m, e| if e.is_nan() { f64::INFINITY } else { m.max(*e) });
    CheckResult { name, max_error, tolerance, passed: max_error <= tolerance, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

/// Mittag-Leffler `G(t)` against a Talbot inversion of `1/(z² + zγ̂(z))`.
pub fn oracle_talbot(opts: &OracleOptions) -> Result<CheckResult, CliError> {
    let tol = if opts.quick { 1e-5 } else { 1e-6 };
    let mut errors = Vec::new();
    for s in [0.8, 1.2] {
        let spec = BathSpec::new(s, 1.0, 1.0, 0.0)?;
        let reference = spec.with_g(spec.g * opts.mismatch);
        let ws = spec.omega_s();
        for k in 0..50 {
            let t = 10f64.powf(-3.0 + 5.0 * k as f64 / 49.0) / ws;
            let (g, _) = g_fun(&spec, t)?;
            let gt = inverse_laplace(
                |z: Complex<f64>| (z * z + z * memory_kernel_laplace_complex(&reference, z)).inv(),
                t,
                DEFAULT_TALBOT_NODES,
            )?;
            errors.push(rel(g, gt));
        }
    }
    Ok(check("talbot_vs_mittag_leffler", errors, tol, "s in {0.8, 1.2}, 50 log-spaced times".into()))
}

/// Zero-temperature closed form of the early-time noise action against
/// its frequency quadrature.
pub fn oracle_gamma(opts: &OracleOptions) -> Result<CheckResult, CliError> {
    let tol = if opts.quick { 1e-5 } else { 1e-6 };
    let mu = 1e-8;
    let mut errors = Vec::new();
    for s in [0.5, 1.2] {
        let spec = BathSpec::new(s, 1.0, 1.0 / mu, 0.0)?;
        let reference = spec.with_g(spec.g * opts.mismatch);
        for k in 1..=20 {
            let t = 10.0 * 4.0 * std::f64::consts::PI * mu * k as f64 / 20.0;
            let a = gamma_early_lowt(&reference, mu, t)?;
            let b = gamma_early(&spec, mu, t, &default_quad())?;
            errors.push(rel(a, b));
        }
    }
    Ok(check("gamma_closed_form_vs_quadrature", errors, tol, "s in {0.5, 1.2}, t up to 10 P".into()))
}

/// Direct mode sum of the noise kernel against its frequency quadrature,
/// errors relative to `α_R(0)`.
pub fn oracle_kernel(opts: &OracleOptions) -> Result<CheckResult, CliError> {
    let (modes, tol) = if opts.quick { (1 << 15, 1e-3) } else { (1 << 16, 1e-4) };
    let mut errors = Vec::new();
    for s in [0.8, 1.2] {
        let spec = BathSpec::new(s, 1.0, 10.0, 0.0)?;
        let bath = discretize_bath(&spec.with_g(spec.g * opts.mismatch), 1.0, modes)?;
        let scale = noise_kernel(&spec, 1.0, 0.0, &Default::default())?;
        for t in [0.0, 0.1, 0.5, 1.0, 2.0, 5.0] {
            let a = noise_kernel(&spec, 1.0, t, &Default::default())?;
            let b = noise_kernel_direct(&bath, 0.0, t);
            errors.push(((a - b) / scale).abs());
        }
    }
    Ok(check("kernel_direct_vs_quadrature", errors, tol, format!("{modes} modes, s in {{0.8, 1.2}}")))
}

/// Cutoff (in units of `ω_s`) used for the discrete-bath check.
pub fn ode_cutoff_factor(s: f64) -> f64 {
    if s < 1.0 {
        200.0
    } else if s > 1.0 {
        3000.0
    } else {
        2000.0
    }
}

/// Explicit bath integration against `θ(t) = G(t)θ̇₀ + Ġ(t)θ₀`.
pub fn oracle_bath_ode(opts: &OracleOptions) -> Result<CheckResult, CliError> {
    let (modes, tol) = if opts.quick { (8192, 3e-2) } else { (16384, 3e-3) };
    let (theta0, thetadot0) = (0.1, 2.0);
    let mut errors = Vec::new();
    for s in [0.8, 1.0, 1.2] {
        let base = BathSpec::new(s, 1.0, 1.0, 0.0)?;
        let spec = base.with_cutoff(ode_cutoff_factor(s) * base.omega_s());
        let bath = discretize_bath(&spec.with_g(spec.g * opts.mismatch), 1.0, modes)?;
        let t_max = tau_damp(&spec)?.min(0.5 * bath.recurrence_time());
        let grid: Vec<f64> = (1..=20).map(|k| t_max * k as f64 / 20.0).collect();
        let theta = simulate_bath_ode(&bath, theta0, thetadot0, &grid)?;
        for (t, th) in grid.iter().zip(theta) {
            let (g, gd) = g_fun(&spec, *t)?;
            errors.push(rel(th, g * thetadot0 + gd * theta0));
        }
    }
    Ok(check("bath_ode_vs_fundamental_solution", errors, tol, format!("{modes} modes, s in {{0.8, 1.0, 1.2}}")))
}

/// Runs the whole oracle suite.
pub fn cmd_oracle(opts: &OracleOptions) -> Result<OracleReport, CliError> {
    let checks = vec![oracle_talbot(opts)?, oracle_gamma(opts)?, oracle_kernel(opts)?, oracle_bath_ode(opts)?];
    Ok(OracleReport { checks })
}
