//! Noise action, its early-time form `Γ_{T,s}(t)`, the zero-temperature
//! closed form, and the decoherence timescales derived from them.

use crate::bath::{noise_kernel_integral, thermal_weight, BathSpec};
use crate::constants::HBAR;
use crate::dynamics::{tau_damp, EndpointSolution, PathBoundary};
use crate::quad::{integrate, integrate_breaks, integrate_left_power, periodic_breaks, QuadControl};
use crate::specfun::{hyp1f2_tail, SeriesControl};
use crate::{Error, Real, Result};

/// How a value of the noise action was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaMethod {
    /// Full double integral over the classical difference path.
    GeneralQuadrature,
    /// Frequency integral of the early-time form.
    EarlyQuadrature,
    /// Zero-temperature hypergeometric closed form.
    LowTClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaResult<T> {
    pub t: T,
    pub gamma: T,
    pub method: GammaMethod,
}

/// Quadrature controls used for the noise action when callers pass none.
pub fn default_quad<T: Real>() -> QuadControl<T> {
    QuadControl { abs_tol: T::zero(), rel_tol: T::c(1e-9), max_intervals: 20_000 }
}

/// Collects the first error raised inside a quadrature closure.
struct ErrorSlot(Option<Error>);

impl ErrorSlot {
    fn take<T: Real>(&mut self, r: Result<T>) -> T {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.get_or_insert(e);
                T::zero()
            }
        }
    }

    fn check(self) -> Result<()> {
        match self.0 {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

/// Noise action `Γ = (1/2ħ) ∫₀^t∫₀^t φ⁻(τ) α_R(τ−τ') φ⁻(τ') dτ dτ'` along
/// the classical difference path with boundary values `φ⁻(0) = phi_minus_i`
/// and `φ⁻(t) = phi_minus_f`.
///
/// The kernel depends on `τ − τ'` only and the integrand is symmetric, so
/// the integral is evaluated over the triangle `τ' ≤ τ` in the lag variable
/// `Δ = τ − τ'`: `Γ = (1/ħ) ∫₀^t α_R(Δ) C(Δ) dΔ` with
/// `C(Δ) = ∫₀^{t−Δ} φ⁻(τ'+Δ) φ⁻(τ') dτ'`.
pub fn noise_action<T: Real>(
    phi_minus_f: T,
    phi_minus_i: T,
    t: T,
    spec: &BathSpec<T>,
    inertia: T,
    ctl: &QuadControl<T>,
) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("noise action needs t > 0, got {t:e}")));
    }
    if phi_minus_f == T::zero() && phi_minus_i == T::zero() {
        return Ok(T::zero());
    }
    let ep = EndpointSolution::new(spec, t)?;
    let b = PathBoundary::new(T::zero(), T::zero(), phi_minus_i, phi_minus_f, t)?;
    let inner_ctl = QuadControl { abs_tol: T::zero(), rel_tol: ctl.rel_tol * T::c(0.1), max_intervals: 200 };
    let kernel_ctl = QuadControl { rel_tol: ctl.rel_tol * T::c(0.1), ..*ctl };
    let mut slot = ErrorSlot(None);
    let outer = |delta: T| -> T {
        let k = slot.take(noise_kernel_integral(spec, delta, &kernel_ctl));
        if k == T::zero() {
            return T::zero();
        }
        let span = t - delta;
        if span <= T::zero() {
            return T::zero();
        }
        let mut inner_slot = ErrorSlot(None);
        let c = integrate(
            |tau: T| {
                let a = inner_slot.take(ep.phi_minus(&b, tau + delta));
                let c = inner_slot.take(ep.phi_minus(&b, tau));
                a * c
            },
            T::zero(),
            span,
            &inner_ctl,
        );
        if let Some(e) = inner_slot.0 {
            slot.0.get_or_insert(e);
            return T::zero();
        }
        k * slot.take(c.map(|r| r.value))
    };
    let breaks = periodic_breaks(T::zero(), t, spec.omega_cutoff, ctl.max_intervals / 2);
    let r = integrate_breaks(outer, &breaks, ctl);
    slot.check()?;
    let integral = r?.value;
    let gamma = inertia * spec.g / T::PI() * integral / T::c(HBAR);
    Ok(gamma.max(T::zero()))
}

/// `f(x) = 2 + x² − 2cos x − 2x sin x`, by its Taylor series for small `x`.
pub(crate) fn upsilon_core<T: Real>(x: T) -> T {
    if x.abs() < T::c(2.0) {
        // Σ_{n≥2} (−1)^n 2(2n−1) x^{2n} / (2n)!
        let x2 = x * x;
        let mut pow = x2 * x2 / T::c(24.0);
        let mut sum = T::zero();
        let mut n = 2usize;
        loop {
            let term = T::c(2.0 * (2.0 * n as f64 - 1.0)) * pow;
            let signed = if n.is_multiple_of(2) { term } else { -term };
            sum = sum + signed;
            if term.abs() <= T::epsilon() * sum.abs() * T::c(0.1) || n > 40 {
                return sum;
            }
            let nf = n as f64;
            pow = pow * x2 / T::c((2.0 * nf + 1.0) * (2.0 * nf + 2.0));
            n += 1;
        }
    }
    T::c(2.0) + x * x - T::c(2.0) * x.cos() - T::c(2.0) * x * x.sin()
}

/// Early-time noise action
/// `Γ_{T,s}(t) = (g/2πμ) ∫₀^Ω coth(ħω/2k_BT) ω^{s−4} f(ωt) dω`.
pub fn gamma_early<T: Real>(spec: &BathSpec<T>, mu: T, t: T, ctl: &QuadControl<T>) -> Result<T> {
    if !(mu > T::zero()) {
        return Err(Error::Domain(format!("mu must be positive, got {mu:e}")));
    }
    if !(t >= T::zero()) {
        return Err(Error::Domain(format!("time must be non-negative, got {t:e}")));
    }
    if t == T::zero() {
        return Ok(T::zero());
    }
    let (s, temp) = (spec.s, spec.temperature);
    let f = |w: T| thermal_weight(temp, w) * w.powf(s - T::c(4.0)) * upsilon_core(w * t);
    let omega = spec.omega_cutoff;
    // Beyond this many oscillations the tail is handled semi-analytically.
    let periods = T::c(EARLY_NUMERIC_PERIODS as f64);
    let split = T::TAU() * periods / t;
    let end = if split < omega { split } else { omega };
    let breaks = periodic_breaks(T::zero(), end, t, EARLY_NUMERIC_PERIODS + 1);
    let exponent = if temp > T::zero() { s - T::one() } else { s };
    let first = integrate_left_power(f, T::zero(), breaks[1], exponent, ctl)?;
    let mut integral = first.value;
    if breaks.len() > 2 {
        integral = integral + integrate_breaks(f, &breaks[1..], ctl)?.value;
    }
    if split < omega {
        integral = integral + early_tail(spec, t, split, integral, ctl)?;
    }
    Ok(spec.g / (T::TAU() * mu) * integral)
}

const EARLY_NUMERIC_PERIODS: usize = 1024;

/// `∫_A^Ω w(ω) ω^{s−4} f(ωt) dω` for `At` a multiple of 2π and many periods
/// long. The smooth part `w ω^{s−4}(2 + ω²t²)` is integrated numerically.
/// The oscillating part `−2w ω^{s−4}cos ωt − 2t w ω^{s−3} sin ωt` is
/// integrated by parts once; the remainder is bounded through the second
/// mean value theorem by `2|a'(A)|/t²` per amplitude `a`, using
/// `|d ln a / d ln ω| ≤ 5 − s`.
fn early_tail<T: Real>(spec: &BathSpec<T>, t: T, a: T, head: T, ctl: &QuadControl<T>) -> Result<T> {
    let (s, temp, b) = (spec.s, spec.temperature, spec.omega_cutoff);
    let two = T::c(2.0);
    let smooth = |w: T| thermal_weight(temp, w) * w.powf(s - T::c(4.0)) * (two + w * w * t * t);
    let mut points = vec![a];
    while *points.last().unwrap_or(&b) * two < b {
        let next = *points.last().unwrap_or(&b) * two;
        points.push(next);
    }
    points.push(b);
    let smooth_part = integrate_breaks(smooth, &points, ctl)?.value;
    let a1 = |w: T| thermal_weight(temp, w) * w.powf(s - T::c(4.0));
    let a2 = |w: T| thermal_weight(temp, w) * w.powf(s - T::c(3.0));
    let (sb, cb) = (b * t).sin_cos();
    let boundary = -two * a1(b) * sb / t - two * (a2(a) - a2(b) * cb);
    let slope = T::c(5.0) - s;
    let bound = T::c(4.0) * slope / a * (a1(a) / (t * t) + a2(a) / t);
    let total = head + smooth_part + boundary;
    if bound > ctl.rel_tol * T::c(0.1) * total.abs() {
        return Err(Error::eval(
            "gamma_early",
            format!("oscillatory tail bound {bound:e} too large against {total:e}"),
        ));
    }
    Ok(smooth_part + boundary)
}

/// `cos x − 1 + x²/2` without cancellation.
fn cos_remainder<T: Real>(x: T) -> T {
    if x.abs() < T::one() {
        let x2 = x * x;
        let mut term = x2 * x2 / T::c(24.0);
        let mut sum = T::zero();
        let mut k = 2usize;
        while term.abs() > T::epsilon() * T::c(0.01) * sum.abs().max(T::min_positive_value()) && k < 30 {
            sum = sum + if k.is_multiple_of(2) { term } else { -term };
            let kf = k as f64;
            term = term * x2 / T::c((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
            k += 1;
        }
        return sum;
    }
    x.cos() - T::one() + x * x * T::c(0.5)
}

/// Zero-temperature closed form of [`gamma_early`]:
///
/// `Γ = (g/2πμ) Ω^{s−3} [2(cos x − 1 + x²/2) − 2(s−2)/(s−3) · R(x)]`,
/// `x = Ωt`, where `R` is the ₁F₂((s−3)/2; 1/2, (s−1)/2; −x²/4) series
/// without its first two terms. At `s = 1` the removable singularity is
/// resolved by averaging `s = 1 ± 10⁻⁶`.
pub fn gamma_early_lowt<T: Real>(spec: &BathSpec<T>, mu: T, t: T) -> Result<T> {
    if !(mu > T::zero()) {
        return Err(Error::Domain(format!("mu must be positive, got {mu:e}")));
    }
    if !(t >= T::zero()) {
        return Err(Error::Domain(format!("time must be non-negative, got {t:e}")));
    }
    if t == T::zero() {
        return Ok(T::zero());
    }
    let eps = T::c(1e-6);
    if (spec.s - T::one()).abs() < eps {
        let lo = BathSpec { s: T::one() - eps, ..*spec };
        let hi = BathSpec { s: T::one() + eps, ..*spec };
        return Ok((gamma_lowt_raw(&lo, mu, t)? + gamma_lowt_raw(&hi, mu, t)?) * T::c(0.5));
    }
    gamma_lowt_raw(spec, mu, t)
}

fn gamma_lowt_raw<T: Real>(spec: &BathSpec<T>, mu: T, t: T) -> Result<T> {
    let s = spec.s;
    let omega = spec.omega_cutoff;
    let x = omega * t;
    let half = T::c(0.5);
    let ctl = SeriesControl { rel_tol: T::c(1e-13), max_terms: 1_000_000 };
    let tail = hyp1f2_tail((s - T::c(3.0)) * half, half, (s - T::one()) * half, -x * x * T::c(0.25), 2, &ctl)?;
    let two = T::c(2.0);
    let bracket = two * cos_remainder(x) - two * (s - two) / (s - T::c(3.0)) * tail;
    Ok(spec.g / (T::TAU() * mu) * omega.powf(s - T::c(3.0)) * bracket)
}

/// Noise action at time `t` by the chosen method. The general quadrature
/// uses the early-time difference path `φ⁻(τ) ≈ G(τ)/μ` boundary values
/// `φ⁻_i = 0`, `φ⁻_f = G(t)/μ`.
pub fn gamma_at<T: Real>(
    spec: &BathSpec<T>,
    mu: T,
    t: T,
    method: GammaMethod,
    ctl: &QuadControl<T>,
) -> Result<GammaResult<T>> {
    let gamma = match method {
        GammaMethod::EarlyQuadrature => gamma_early(spec, mu, t, ctl)?,
        GammaMethod::LowTClosedForm => {
            if spec.temperature != T::zero() {
                return Err(Error::Domain("closed form is valid at zero temperature only".into()));
            }
            gamma_early_lowt(spec, mu, t)?
        }
        GammaMethod::GeneralQuadrature => {
            if t == T::zero() {
                T::zero()
            } else {
                let (g, _) = crate::dynamics::g_fun(spec, t)?;
                noise_action(g / mu, T::zero(), t, spec, mu * T::c(HBAR), ctl)?
            }
        }
    };
    Ok(GammaResult { t, gamma, method })
}

/// Search controls for [`tau_decoh_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceSearch<T> {
    /// Horizon in units of `μ`.
    pub horizon_factor: T,
    pub rel_tol: T,
    pub quad: QuadControl<T>,
}

impl<T: Real> Default for DecoherenceSearch<T> {
    fn default() -> Self {
        Self { horizon_factor: T::c(1e8), rel_tol: T::c(1e-6), quad: default_quad() }
    }
}

/// Decoherence time: root of `Γ_{T,s}(t) = 1`.
pub fn tau_decoh<T: Real>(spec: &BathSpec<T>, mu: T) -> Result<T> {
    tau_decoh_with(spec, mu, &DecoherenceSearch::default())
}

pub fn tau_decoh_with<T: Real>(spec: &BathSpec<T>, mu: T, search: &DecoherenceSearch<T>) -> Result<T> {
    if !(mu > T::zero()) {
        return Err(Error::Domain(format!("mu must be positive, got {mu:e}")));
    }
    let horizon = search.horizon_factor * mu;
    let gamma = |t: T| gamma_early(spec, mu, t, &search.quad);
    let one = T::one();
    let mut lo = mu;
    while gamma(lo)? >= one {
        lo = lo * T::c(0.5);
        if lo < mu * T::c(1e-12) {
            return Err(Error::eval("tau_decoh", "noise action exceeds 1 at vanishing times"));
        }
    }
    let mut hi = lo * T::c(2.0);
    loop {
        if gamma(hi)? >= one {
            break;
        }
        if hi >= horizon {
            return Err(Error::not_found(
                "decoherence time",
                format!("noise action stays below 1 up to the horizon {horizon:e} s"),
            ));
        }
        lo = hi;
        hi = (hi * T::c(2.0)).min(horizon);
    }
    while hi - lo > search.rel_tol * hi {
        let mid = (lo + hi) * T::c(0.5);
        if gamma(mid)? >= one {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) * T::c(0.5))
}

/// Combines the two timescales: the minimum when both exist, otherwise
/// whichever was found.
pub fn combine_tau_q<T: Real>(tau_damp: Result<T>, tau_decoh: Result<T>) -> Result<T> {
    match (tau_damp, tau_decoh) {
        (Ok(a), Ok(b)) => Ok(a.min(b)),
        (Ok(a), Err(_)) | (Err(_), Ok(a)) => Ok(a),
        (Err(e1), Err(e2)) => Err(Error::not_found("quantum lifetime", format!("{e1}; {e2}"))),
    }
}

/// `τ_Q = min(τ_damp, τ_decoh)`.
pub fn tau_q<T: Real>(spec: &BathSpec<T>, mu: T) -> Result<T> {
    combine_tau_q(tau_damp(spec), tau_decoh(spec, mu))
}

/// Number of observable oscillation periods, `τ_Q / 4πμ`.
pub fn lattice_points<T: Real>(spec: &BathSpec<T>, mu: T) -> Result<T> {
    Ok(tau_q(spec, mu)? / (T::c(4.0) * T::PI() * mu))
}
