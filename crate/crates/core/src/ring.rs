//! Ring states and expectation values of the winding operator `Ŵ = e^{iθ}`.
//!
//! Three evaluations are provided: the isolated ring, the full
//! winding-summed ratio for the ring coupled to the bath, and the early-time
//! approximation that leads to the charge-density amplitude.

use num_complex::Complex;

use crate::bath::BathSpec;
use crate::constants::HBAR;
use crate::decoherence::{default_quad, gamma_early, noise_action};
use crate::dynamics::{g_ddot, g_fun};
use crate::quad::{integrate, QuadControl};
use crate::specfun::sinc_pi;
use crate::{Error, Real, Result};

/// Number of image copies on each side summed for the wrapped Gaussian.
const GAUSSIAN_IMAGES: i32 = 3;
const TRACE_TOL: f64 = 1e-9;

/// Wrapped Gaussian wave function `ψ(θ) ∝ Σ_k exp(−(θ−θ₀+2πk)²/4σ²)`, so
/// that `|ψ|²` has width `σ` before wrapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedGaussian<T> {
    theta0: T,
    sigma: T,
    norm: T,
}

impl<T: Real> WrappedGaussian<T> {
    pub fn theta0(&self) -> T {
        self.theta0
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    fn unnormalized(theta0: T, sigma: T, theta: T) -> T {
        let d = wrap_angle(theta - theta0);
        let four_var = T::c(4.0) * sigma * sigma;
        (-GAUSSIAN_IMAGES..=GAUSSIAN_IMAGES)
            .map(|k| {
                let x = d + T::TAU() * T::c(k as f64);
                (-(x * x) / four_var).exp()
            })
            .fold(T::zero(), |a, b| a + b)
    }

    fn psi(&self, theta: T) -> T {
        self.norm * Self::unnormalized(self.theta0, self.sigma, theta)
    }
}

/// Density matrix sampled on a uniform `n × n` mesh over `[−π, π)²`,
/// row index `θ`, column index `φ`. Off-mesh reads interpolate bilinearly.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState<T> {
    n: usize,
    values: Vec<Complex<T>>,
}

impl<T: Real> GridState<T> {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.values[i * self.n + j]
    }

    fn interpolate(&self, theta: T, phi: T) -> Complex<T> {
        let n = self.n;
        let h = T::TAU() / T::from_usize_lossy(n);
        let locate = |x: T| -> (usize, T) {
            let u = (wrap_angle(x) + T::PI()) / h;
            let i = u.floor();
            let frac = u - i;
            let i = i.to_usize().unwrap_or(0) % n;
            (i, frac)
        };
        let (i0, a) = locate(theta);
        let (j0, b) = locate(phi);
        let (i1, j1) = ((i0 + 1) % n, (j0 + 1) % n);
        let one = T::one();
        self.at(i0, j0) * ((one - a) * (one - b))
            + self.at(i1, j0) * (a * (one - b))
            + self.at(i0, j1) * ((one - a) * b)
            + self.at(i1, j1) * (a * b)
    }
}

/// Initial state of the ring.
#[derive(Debug, Clone, PartialEq)]
pub enum RingState<T> {
    /// `ρ(θ, φ) = 1/2π`.
    Ground,
    /// Angular momentum eigenstate `ψ_l = e^{ilθ}/√(2π)`.
    Momentum(i64),
    WrappedGaussian(WrappedGaussian<T>),
    Grid(GridState<T>),
}

impl<T: Real> RingState<T> {
    pub fn wrapped_gaussian(theta0: T, sigma: T) -> Result<Self> {
        if !(sigma > T::zero()) || !sigma.is_finite() || !theta0.is_finite() {
            return Err(Error::Domain(format!("wrapped Gaussian needs finite theta0 and sigma > 0, got {sigma:e}")));
        }
        // The trapezoid rule is spectrally accurate for this periodic integrand.
        let nodes = 2048usize;
        let h = T::TAU() / T::from_usize_lossy(nodes);
        let mut total = T::zero();
        for k in 0..nodes {
            let theta = -T::PI() + h * T::from_usize_lossy(k);
            let p = WrappedGaussian::unnormalized(theta0, sigma, theta);
            total = total + p * p;
        }
        let norm = T::one() / (total * h).sqrt();
        Ok(Self::WrappedGaussian(WrappedGaussian { theta0: wrap_angle(theta0), sigma, norm }))
    }

    /// Builds a sampled state from row-major values `ρ(θ_i, φ_j)` with
    /// `θ_i = −π + 2πi/n`. The matrix must be Hermitian and unit-trace.
    pub fn grid(n: usize, values: Vec<Complex<T>>) -> Result<Self> {
        if n < 2 || values.len() != n * n {
            return Err(Error::Domain(format!("grid state needs n ≥ 2 and n² values, got n = {n}, {} values", values.len())));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Domain("grid state contains non-finite values".into()));
        }
        let g = GridState { n, values };
        let scale = g.values.iter().fold(T::zero(), |m, v| m.max(v.norm()));
        for i in 0..n {
            for j in 0..i {
                if (g.at(i, j) - g.at(j, i).conj()).norm() > T::c(1e-9) * scale {
                    return Err(Error::Domain(format!("grid state is not Hermitian at ({i}, {j})")));
                }
            }
        }
        let h = T::TAU() / T::from_usize_lossy(n);
        let trace = (0..n).fold(T::zero(), |acc, i| acc + g.at(i, i).re) * h;
        if (trace - T::one()).abs() > T::c(TRACE_TOL) {
            return Err(Error::Domain(format!("grid state trace {trace:e} differs from 1")));
        }
        Ok(Self::Grid(g))
    }

    /// Samples this state onto an `n × n` grid.
    pub fn to_grid(&self, n: usize) -> Result<Self> {
        let h = T::TAU() / T::from_usize_lossy(n);
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            let theta = -T::PI() + h * T::from_usize_lossy(i);
            for j in 0..n {
                let phi = -T::PI() + h * T::from_usize_lossy(j);
                values.push(self.density(theta, phi));
            }
        }
        Self::grid(n, values)
    }

    /// Conjugate transpose `ρ†(θ, φ) = conj ρ(φ, θ)`.
    pub fn adjoint(&self) -> Self {
        match self {
            Self::Grid(g) => {
                let n = g.n;
                let values = (0..n * n).map(|k| g.at(k % n, k / n).conj()).collect();
                Self::Grid(GridState { n, values })
            }
            other => other.clone(),
        }
    }

    /// `ρ(θ, φ)`, 2π-periodic in both arguments.
    pub fn density(&self, theta: T, phi: T) -> Complex<T> {
        let inv_tau = T::one() / T::TAU();
        match self {
            Self::Ground => Complex::new(inv_tau, T::zero()),
            Self::Momentum(l) => {
                let arg = wrap_angle(T::c(*l as f64) * wrap_angle(theta - phi));
                Complex::from_polar(inv_tau, arg)
            }
            Self::WrappedGaussian(w) => Complex::new(w.psi(theta) * w.psi(phi), T::zero()),
            Self::Grid(g) => g.interpolate(theta, phi),
        }
    }

    /// `∫ρ(θ, θ)dθ` by the periodic trapezoid rule.
    pub fn trace(&self) -> T {
        let n = match self {
            Self::Grid(g) => g.n,
            _ => 1024,
        };
        let h = T::TAU() / T::from_usize_lossy(n);
        (0..n).fold(T::zero(), |acc, k| {
            let theta = -T::PI() + h * T::from_usize_lossy(k);
            acc + self.density(theta, theta).re
        }) * h
    }

    fn check_normalized(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - T::one()).abs() > T::c(TRACE_TOL) {
            return Err(Error::Domain(format!("state trace {tr:e} differs from 1")));
        }
        Ok(())
    }
}

/// Reduces an angle to `[−π, π)`.
pub fn wrap_angle<T: Real>(x: T) -> T {
    let pi = T::PI();
    if x >= -pi && x < pi {
        return x;
    }
    let r = x - T::TAU() * ((x + pi) / T::TAU()).floor();
    if r >= pi {
        r - T::TAU()
    } else {
        r
    }
}

/// Isolated-ring expectation value
/// `⟨Ŵ(t)⟩ = ½∫dθ e^{iθ}[e^{it/2μ}ρ(θ+t/μ, θ) + ρ(θ, θ−t/μ)e^{−it/2μ}]`,
/// by the periodic trapezoid rule starting at 512 nodes and doubling until
/// successive values agree to 1e-8.
pub fn w_isolated<T: Real>(state: &RingState<T>, mu: T, t: T) -> Result<Complex<T>> {
    if !(mu > T::zero()) {
        return Err(Error::Domain(format!("mu must be positive, got {mu:e}")));
    }
    state.check_normalized()?;
    let shift = t / mu;
    let phase = Complex::from_polar(T::one(), wrap_angle(t / (T::c(2.0) * mu)));
    let integrand = |theta: T| -> Complex<T> {
        let e = Complex::from_polar(T::one(), theta);
        e * (phase * state.density(theta + shift, theta) + state.density(theta, theta - shift) * phase.conj())
    };
    let trapezoid = |n: usize| -> Complex<T> {
        let h = T::TAU() / T::from_usize_lossy(n);
        let sum = (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
            acc + integrand(-T::PI() + h * T::from_usize_lossy(k))
        });
        sum * (h * T::c(0.5))
    };
    let mut n = 512usize;
    let mut prev = trapezoid(n);
    loop {
        n *= 2;
        let next = trapezoid(n);
        if (next - prev).norm() <= T::c(1e-8) {
            return Ok(next);
        }
        if n >= 1 << 20 {
            return Err(Error::eval("w_isolated", format!("trapezoid rule did not settle at {n} nodes")));
        }
        prev = next;
    }
}

/// `(f₁, f₂) = (2πnĠ(t) − G(t)/μ, 2πnĠ(t))`.
pub fn winding_shifts<T: Real>(n: i64, t: T, spec: &BathSpec<T>, mu: T) -> Result<(T, T)> {
    let (g, gdot) = g_fun(spec, t)?;
    let f2 = T::TAU() * T::c(n as f64) * gdot;
    Ok((f2 - g / mu, f2))
}

/// Integers `n` with `−π < θ + 2πn·slope − offset < π`.
fn window_integers<T: Real>(theta: T, slope: T, offset: T) -> Result<Vec<i64>> {
    if slope == T::zero() {
        return Err(Error::Degenerate("Ġ(t) = 0 admits every winding number".into()));
    }
    let step = T::TAU() * slope;
    let a = (-T::PI() - theta + offset) / step;
    let b = (T::PI() - theta + offset) / step;
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let first = lo.floor().to_i64().unwrap_or(i64::MIN) + 1;
    let last = hi.ceil().to_i64().unwrap_or(i64::MAX) - 1;
    Ok((first..=last).collect())
}

/// Winding sets `S₁ = {n : −π < θ + f₁ < π}` and `S₂ = {n : −π < θ + f₂ < π}`.
pub fn winding_sets<T: Real>(theta: T, t: T, spec: &BathSpec<T>, mu: T) -> Result<(Vec<i64>, Vec<i64>)> {
    if !(theta >= -T::PI() && theta < T::PI()) {
        return Err(Error::Domain(format!("theta {theta:e} outside [−π, π)")));
    }
    let (g, gdot) = g_fun(spec, t)?;
    Ok((window_integers(theta, gdot, g / mu)?, window_integers(theta, gdot, T::zero())?))
}

/// The four winding-summed integrals whose ratio is `⟨Ŵ(t)⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingTerms<T> {
    pub r1_plus: Complex<T>,
    pub r1_minus: Complex<T>,
    pub r2_plus: Complex<T>,
    pub r2_minus: Complex<T>,
}

impl<T: Real> WindingTerms<T> {
    pub fn numerator(&self) -> Complex<T> {
        self.r1_plus + self.r1_minus
    }

    pub fn denominator(&self) -> Complex<T> {
        self.r2_plus + self.r2_minus
    }

    pub fn ratio(&self) -> Result<Complex<T>> {
        let d = self.denominator();
        if d.norm() == T::zero() || !d.norm().is_finite() {
            return Err(Error::Degenerate(format!("normalization {d} cannot be divided by")));
        }
        Ok(self.numerator() / d)
    }
}

/// Sum over one family (`r₁` or `r₂`) of winding terms. `offset` is
/// `G/μ` for `r₁` and zero for `r₂`; `parity` marks `r₁`, which carries
/// the `e^{−inπ}` factor and the `−Ġ/μ` part of `ḟ₁`.
#[allow(clippy::too_many_arguments)]
fn winding_family<T: Real>(
    state: &RingState<T>,
    spec: &BathSpec<T>,
    mu: T,
    t: T,
    (gdot, gddot, offset): (T, T, T),
    parity: bool,
    ctl: &QuadControl<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    if gdot == T::zero() {
        return Err(Error::Degenerate("Ġ(t) = 0 admits every winding number".into()));
    }
    let pi = T::PI();
    let tau = T::TAU();
    // Windows are non-empty only while |f| < 2π.
    let a = (offset - tau) / (tau * gdot);
    let b = (offset + tau) / (tau * gdot);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let first = lo.floor().to_i64().unwrap_or(0);
    let last = hi.ceil().to_i64().unwrap_or(0);
    let inertia = mu * T::c(HBAR);
    let qctl = QuadControl { abs_tol: ctl.abs_tol.max(ctl.rel_tol * T::c(1e-2)), ..*ctl };
    let zero = Complex::new(T::zero(), T::zero());
    let (mut plus, mut minus) = (zero, zero);
    for n in first..=last {
        let nf = T::c(n as f64);
        let f = tau * nf * gdot - offset;
        let fdot = tau * nf * gddot - if parity { gdot / mu } else { T::zero() };
        let left = (-pi).max(-pi - f);
        let right = pi.min(pi - f);
        if !(right > left) {
            continue;
        }
        let gamma = if n == 0 && f == T::zero() {
            T::zero()
        } else {
            noise_action(tau * nf, f, t, spec, inertia, ctl)?
        };
        let sign = if parity && n.rem_euclid(2) == 1 { -T::one() } else { T::one() };
        let weight = sign * (-gamma).exp();
        if weight == T::zero() {
            continue;
        }
        let half = mu * f * fdot * T::c(0.5);
        let p = integrate(
            |theta: T| {
                let ph = Complex::from_polar(T::one(), -mu * theta * fdot + half);
                state.density(theta - f, theta) * ph
            },
            left,
            right,
            &qctl,
        )?;
        let m = integrate(
            |theta: T| {
                let ph = Complex::from_polar(T::one(), -mu * theta * fdot - half);
                state.density(theta, theta + f) * ph
            },
            left,
            right,
            &qctl,
        )?;
        plus = plus + p.value * weight;
        minus = minus + m.value * weight;
    }
    Ok((plus, minus))
}

/// `r₁±`, `r₂±` for the ring coupled to the bath. The sums over the winding
/// sets are reorganised per winding number: for each `n` the admissible
/// `θ` form one interval, integrated adaptively. The noise action of each
/// term comes from [`noise_action`] with boundaries `(2πn, f)`.
pub fn w_general_terms<T: Real>(
    state: &RingState<T>,
    spec: &BathSpec<T>,
    mu: T,
    t: T,
    ctl: &QuadControl<T>,
) -> Result<WindingTerms<T>> {
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("general expectation value needs t > 0, got {t:e}")));
    }
    if !(mu > T::zero()) {
        return Err(Error::Domain(format!("mu must be positive, got {mu:e}")));
    }
    state.check_normalized()?;
    let (g, gdot) = g_fun(spec, t)?;
    let gddot = g_ddot(spec, t)?;
    let (r1_plus, r1_minus) = winding_family(state, spec, mu, t, (gdot, gddot, g / mu), true, ctl)?;
    let (r2_plus, r2_minus) = winding_family(state, spec, mu, t, (gdot, gddot, T::zero()), false, ctl)?;
    Ok(WindingTerms { r1_plus, r1_minus, r2_plus, r2_minus })
}

/// `⟨Ŵ(t)⟩ = (r₁⁺ + r₁⁻)/(r₂⁺ + r₂⁻)`. The inertia entering the noise
/// action is `ħμ`.
pub fn w_general<T: Real>(
    state: &RingState<T>,
    spec: &BathSpec<T>,
    mu: T,
    t: T,
    ctl: &QuadControl<T>,
) -> Result<Complex<T>> {
    w_general_terms(state, spec, mu, t, ctl)?.ratio()
}

/// Early-time approximation, valid for `t` well below `τ_Q` (not enforced):
///
/// `⟨Ŵ⟩ ≈ ½e^{−Γ}[e^{−iGĠ/2μ}∫ρ(θ, θ−G/μ)e^{iθĠ}dθ + e^{iGĠ/2μ}∫ρ(θ+G/μ, θ)e^{iθĠ}dθ]`
///
/// with `Γ = Γ_{T,s}(t)` from [`gamma_early`]. The factor ½ matches the
/// normalization of the isolated ring, to which this reduces as `g → 0`.
pub fn w_early<T: Real>(
    state: &RingState<T>,
    spec: &BathSpec<T>,
    mu: T,
    t: T,
    ctl: &QuadControl<T>,
) -> Result<Complex<T>> {
    state.check_normalized()?;
    let (g, gdot) = g_fun(spec, t)?;
    let gamma = gamma_early(spec, mu, t, ctl)?;
    let damp = (-gamma).exp() * T::c(0.5);
    let shift = g / mu;
    let phase = Complex::from_polar(T::one(), wrap_angle(g * gdot / (T::c(2.0) * mu)));
    if let RingState::Ground = state {
        return Ok(Complex::new(sinc_pi(gdot) * phase.re * T::c(2.0) * damp, T::zero()));
    }
    let qctl = QuadControl { abs_tol: ctl.abs_tol.max(ctl.rel_tol * T::c(1e-2)), ..*ctl };
    let r = integrate(
        |theta: T| {
            let e = Complex::from_polar(T::one(), theta * gdot);
            (phase.conj() * state.density(theta, theta - shift) + phase * state.density(theta + shift, theta)) * e
        },
        -T::PI(),
        T::PI(),
        &qctl,
    )?;
    Ok(r.value * damp)
}

/// Oscillating charge-density amplitude
/// `n₁^osc(t) = n₁ sinc(πĠ) cos(ĠG/2μ) e^{−Γ_{T,s}(t)}`.
pub fn charge_density_amplitude<T: Real>(spec: &BathSpec<T>, mu: T, n1: T, t: T) -> Result<T> {
    let (g, gdot) = g_fun(spec, t)?;
    let gamma = gamma_early(spec, mu, t, &default_quad())?;
    Ok(n1 * sinc_pi(gdot) * (gdot * g / (T::c(2.0) * mu)).cos() * (-gamma).exp())
}

/// Charge density `n(x, t) = n₀ + n₁^osc(t) cos(2k_F x)`.
#[allow(clippy::too_many_arguments)]
pub fn charge_density<T: Real>(x: T, t: T, n0: T, n1: T, k_f: T, spec: &BathSpec<T>, mu: T) -> Result<T> {
    let amp = charge_density_amplitude(spec, mu, n1, t)?;
    Ok(n0 + amp * (T::c(2.0) * k_f * x).cos())
}
