//! Fundamental solution of the generalized Langevin equation and the
//! classical paths built from it.
//!
//! For the power-law bath the fundamental solution is
//! `G(t) = t E_{2−s,2}(−(ω_s t)^{2−s})` with `Ġ(t) = E_{2−s,1}(−(ω_s t)^{2−s})`
//! and `G̈(t) = −ω_s^{2−s} t^{1−s} E_{2−s,2−s}(−(ω_s t)^{2−s})`. The ohmic
//! case `s = 1` uses the exponential closed forms with `γ = g/2`.

use crate::bath::BathSpec;
use crate::specfun::{mittag_leffler, SeriesControl};
use crate::{Error, Real, Result};

/// `(G(t), Ġ(t))` with default series controls.
pub fn g_fun<T: Real>(spec: &BathSpec<T>, t: T) -> Result<(T, T)> {
    g_fun_with(spec, t, &SeriesControl::default())
}

/// `(G(t), Ġ(t))`; the ohmic closed form is used when `s = 1` exactly.
pub fn g_fun_with<T: Real>(spec: &BathSpec<T>, t: T, ctl: &SeriesControl<T>) -> Result<(T, T)> {
    check_time(t)?;
    if t == T::zero() {
        return Ok((T::zero(), T::one()));
    }
    if spec.is_ohmic() {
        let two_gamma = spec.g;
        let x = -two_gamma * t;
        return Ok((-x.exp_m1() / two_gamma, x.exp()));
    }
    g_fun_mittag_leffler(spec, t, ctl)
}

/// `(G(t), Ġ(t))` from the Mittag-Leffler representation for every `s`,
/// including `s = 1`.
pub fn g_fun_mittag_leffler<T: Real>(spec: &BathSpec<T>, t: T, ctl: &SeriesControl<T>) -> Result<(T, T)> {
    check_time(t)?;
    if t == T::zero() {
        return Ok((T::zero(), T::one()));
    }
    let alpha = spec.alpha();
    let x = -spec.lambda() * t.powf(alpha);
    let g = t * mittag_leffler(alpha, T::c(2.0), x, ctl)?;
    let gdot = mittag_leffler(alpha, T::one(), x, ctl)?;
    Ok((g, gdot))
}

/// `G̈(t)`. At `t = 0` the value is `−∞` for `s > 1`, `−g` for `s = 1`
/// and `0` for `s < 1`.
pub fn g_ddot<T: Real>(spec: &BathSpec<T>, t: T) -> Result<T> {
    g_ddot_with(spec, t, &SeriesControl::default())
}

pub fn g_ddot_with<T: Real>(spec: &BathSpec<T>, t: T, ctl: &SeriesControl<T>) -> Result<T> {
    check_time(t)?;
    if spec.is_ohmic() {
        return Ok(-spec.g * (-spec.g * t).exp());
    }
    let alpha = spec.alpha();
    let lambda = spec.lambda();
    if t == T::zero() {
        return Ok(if alpha < T::one() { T::neg_infinity() } else { T::zero() });
    }
    let x = -lambda * t.powf(alpha);
    Ok(-lambda * t.powf(alpha - T::one()) * mittag_leffler(alpha, alpha, x, ctl)?)
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite and non-negative, got {t:e}")));
    }
    Ok(())
}

/// `G` and `Ġ` tabulated on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalSolution<T> {
    pub spec: BathSpec<T>,
    pub grid: Vec<T>,
    pub g: Vec<T>,
    pub gdot: Vec<T>,
}

impl<T: Real> FundamentalSolution<T> {
    /// Evaluates `G` and `Ġ` on a strictly increasing, non-negative grid.
    pub fn tabulate(spec: &BathSpec<T>, grid: Vec<T>) -> Result<Self> {
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("time grid must be strictly increasing".into()));
        }
        let mut g = Vec::with_capacity(grid.len());
        let mut gdot = Vec::with_capacity(grid.len());
        for &t in &grid {
            let (a, b) = g_fun(spec, t)?;
            g.push(a);
            gdot.push(b);
        }
        Ok(Self { spec: *spec, grid, g, gdot })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Cubic Hermite interpolation of `G` using `Ġ` as the slope data.
    /// Returns `None` outside the tabulated range.
    pub fn interpolate_g(&self, t: T) -> Option<T> {
        let n = self.grid.len();
        if n < 2 || t < self.grid[0] || t > self.grid[n - 1] {
            return None;
        }
        let i = match self.grid.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return Some(self.g[i]),
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.grid[i], self.grid[i + 1]);
        let h = t1 - t0;
        let u = (t - t0) / h;
        let (u2, u3) = (u * u, u * u * u);
        let two = T::c(2.0);
        let three = T::c(3.0);
        let h00 = two * u3 - three * u2 + T::one();
        let h10 = u3 - two * u2 + u;
        let h01 = -two * u3 + three * u2;
        let h11 = u3 - u2;
        Some(h00 * self.g[i] + h10 * h * self.gdot[i] + h01 * self.g[i + 1] + h11 * h * self.gdot[i + 1])
    }
}

/// Deterministic trajectory `θ(t) = G(t) θ̇(0) + Ġ(t) θ(0)`.
pub fn classical_trajectory<T: Real>(theta0: T, thetadot0: T, spec: &BathSpec<T>, t: T) -> Result<T> {
    let (g, gdot) = g_fun(spec, t)?;
    Ok(g * thetadot0 + gdot * theta0)
}

/// Interpolation coefficients `(κ_i(u;t), κ_f(u;t))`.
pub fn kappa<T: Real>(spec: &BathSpec<T>, u: T, t: T) -> Result<(T, T)> {
    let paths = EndpointSolution::new(spec, t)?;
    paths.kappa(u)
}

/// Boundary values of the sum and difference paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathBoundary<T> {
    pub phi_plus_i: T,
    pub phi_plus_f: T,
    pub phi_minus_i: T,
    pub phi_minus_f: T,
    pub t: T,
}

impl<T: Real> PathBoundary<T> {
    pub fn new(phi_plus_i: T, phi_plus_f: T, phi_minus_i: T, phi_minus_f: T, t: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(Error::Domain(format!("path duration must be positive, got {t:e}")));
        }
        Ok(Self { phi_plus_i, phi_plus_f, phi_minus_i, phi_minus_f, t })
    }
}

/// `G(t)`, `Ġ(t)` at a fixed endpoint, reused for many interior times.
#[derive(Debug, Clone, Copy)]
pub struct EndpointSolution<T> {
    spec: BathSpec<T>,
    t: T,
    g_t: T,
    gdot_t: T,
}

impl<T: Real> EndpointSolution<T> {
    pub fn new(spec: &BathSpec<T>, t: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(Error::Domain(format!("endpoint time must be positive, got {t:e}")));
        }
        let (g_t, gdot_t) = g_fun(spec, t)?;
        if g_t == T::zero() {
            return Err(Error::Domain("G(t) vanishes at the endpoint".into()));
        }
        Ok(Self { spec: *spec, t, g_t, gdot_t })
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn g_t(&self) -> T {
        self.g_t
    }

    pub fn gdot_t(&self) -> T {
        self.gdot_t
    }

    fn check_interior(&self, u: T) -> Result<T> {
        let slack = self.t * T::c(1e-12);
        if u < -slack || u > self.t + slack {
            return Err(Error::Domain(format!("interior time {u:e} outside [0, {:e}]", self.t)));
        }
        Ok(u.max(T::zero()).min(self.t))
    }

    pub fn kappa(&self, u: T) -> Result<(T, T)> {
        let u = self.check_interior(u)?;
        if u == self.t {
            return Ok((T::zero(), T::one()));
        }
        let (g_u, gdot_u) = g_fun(&self.spec, u)?;
        Ok((gdot_u - self.gdot_t / self.g_t * g_u, g_u / self.g_t))
    }

    /// Time derivatives `(κ̇_i(u;t), κ̇_f(u;t))`.
    pub fn kappa_dot(&self, u: T) -> Result<(T, T)> {
        let u = self.check_interior(u)?;
        let (_, gdot_u) = g_fun(&self.spec, u)?;
        let gdd = g_ddot(&self.spec, u)?;
        Ok((gdd - self.gdot_t / self.g_t * gdot_u, gdot_u / self.g_t))
    }

    pub fn phi_plus(&self, b: &PathBoundary<T>, u: T) -> Result<T> {
        let (ki, kf) = self.kappa(u)?;
        Ok(ki * b.phi_plus_i + kf * b.phi_plus_f)
    }

    /// `φ⁻(u)`, which runs the interpolation backwards in time.
    pub fn phi_minus(&self, b: &PathBoundary<T>, u: T) -> Result<T> {
        let u = self.check_interior(u)?;
        let (ki, kf) = self.kappa(self.t - u)?;
        Ok(ki * b.phi_minus_f + kf * b.phi_minus_i)
    }

    /// `φ̇⁺(u)`; a vanishing initial value suppresses the divergent `G̈(0)`
    /// of super-ohmic baths.
    pub fn phi_plus_dot(&self, b: &PathBoundary<T>, u: T) -> Result<T> {
        let (kid, kfd) = self.kappa_dot(u)?;
        let initial = if b.phi_plus_i == T::zero() { T::zero() } else { kid * b.phi_plus_i };
        Ok(initial + kfd * b.phi_plus_f)
    }
}

fn endpoint_for<T: Real>(b: &PathBoundary<T>, spec: &BathSpec<T>) -> Result<EndpointSolution<T>> {
    EndpointSolution::new(spec, b.t)
}

/// `(φ⁺_cl(u), φ⁻_cl(u))` for `0 ≤ u ≤ t`.
pub fn classical_paths<T: Real>(b: &PathBoundary<T>, spec: &BathSpec<T>, u: T) -> Result<(T, T)> {
    let ep = endpoint_for(b, spec)?;
    Ok((ep.phi_plus(b, u)?, ep.phi_minus(b, u)?))
}

/// Classical action `S = −I[φ̇⁺(t) φ⁻_f − φ̇⁺(0) φ⁻_i]` in J·s; divide by
/// `ħ` for the phase.
pub fn classical_action<T: Real>(b: &PathBoundary<T>, spec: &BathSpec<T>, inertia: T) -> Result<T> {
    let ep = endpoint_for(b, spec)?;
    let end = if b.phi_minus_f == T::zero() { T::zero() } else { ep.phi_plus_dot(b, b.t)? * b.phi_minus_f };
    let start = if b.phi_minus_i == T::zero() { T::zero() } else { ep.phi_plus_dot(b, T::zero())? * b.phi_minus_i };
    let s = -inertia * (end - start);
    if !s.is_finite() {
        return Err(Error::Domain("initial velocity of the classical path diverges for this bath".into()));
    }
    Ok(s)
}

/// Search controls for [`tau_damp_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingSearch<T> {
    /// Horizon in units of `1/ω_s`.
    pub horizon_factor: T,
    /// Absolute horizon in seconds, applied on top of the relative one.
    pub max_time: Option<T>,
    pub rel_tol: T,
}

impl<T: Real> Default for DampingSearch<T> {
    fn default() -> Self {
        Self { horizon_factor: T::c(1e6), max_time: None, rel_tol: T::c(1e-6) }
    }
}

/// First time at which `Ġ(t) ≤ e^{−1}`.
pub fn tau_damp<T: Real>(spec: &BathSpec<T>) -> Result<T> {
    tau_damp_with(spec, &DampingSearch::default())
}

pub fn tau_damp_with<T: Real>(spec: &BathSpec<T>, search: &DampingSearch<T>) -> Result<T> {
    let omega = spec.omega_s();
    let mut horizon = search.horizon_factor / omega;
    if let Some(cap) = search.max_time {
        horizon = horizon.min(cap);
    }
    if !(omega > T::zero()) || !horizon.is_finite() {
        return Err(Error::NotFound {
            what: "damping time",
            reason: format!("characteristic frequency {omega:e} gives no finite search horizon"),
        });
    }
    let target = (-T::one()).exp();
    let gdot = |t: T| g_fun(spec, t).map(|v| v.1);
    let mut lo = T::zero();
    let mut hi = (T::c(1e-3) / omega).min(horizon);
    loop {
        if gdot(hi)? <= target {
            break;
        }
        if hi >= horizon {
            return Err(Error::NotFound {
                what: "damping time",
                reason: format!("Ġ stays above 1/e up to {horizon:e} s"),
            });
        }
        lo = hi;
        hi = (hi * T::c(1.5)).min(horizon);
    }
    while hi - lo > search.rel_tol * hi {
        let mid = (lo + hi) * T::c(0.5);
        if gdot(mid)? <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) * T::c(0.5))
}
