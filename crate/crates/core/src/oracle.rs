//! Brute-force reference: the bath as a finite set of oscillators, integrated
//! together with the ring phase, and kernels summed mode by mode.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::bath::{spectral_density, thermal_weight, BathSpec};
use crate::constants::{HBAR, K_B};
use crate::{Error, Real, Result};

/// One bath oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode<T> {
    pub omega: T,
    pub coupling: T,
}

/// Discretized bath with a common oscillator mass.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBath<T> {
    pub modes: Vec<Mode<T>>,
    pub mass: T,
    pub inertia: T,
}

impl<T: Real> DiscreteBath<T> {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn max_frequency(&self) -> T {
        self.modes.iter().fold(T::zero(), |m, md| m.max(md.omega))
    }

    /// `Σ_j π C_j²/(2mω_j)`, which approximates `∫₀^Ω J(ω)dω`.
    pub fn spectral_weight(&self) -> T {
        self.modes
            .iter()
            .map(|md| T::PI() * md.coupling * md.coupling / (T::c(2.0) * self.mass * md.omega))
            .fold(T::zero(), |a, b| a + b)
    }

    /// Poincaré recurrence time `2π/Δω` of the uniform mode grid.
    pub fn recurrence_time(&self) -> T {
        T::TAU() * T::from_usize_lossy(self.len()) / self.max_frequency_bound()
    }

    fn max_frequency_bound(&self) -> T {
        // Midpoints sit half a spacing below the cutoff.
        let n = T::from_usize_lossy(self.len());
        self.max_frequency() * T::c(2.0) * n / (T::c(2.0) * n - T::one())
    }

    /// Same bath with every coupling multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        let modes = self.modes.iter().map(|m| Mode { omega: m.omega, coupling: m.coupling * factor }).collect();
        Self { modes, ..*self }
    }
}

/// Uniform midpoint modes on `(0, Ω]` with `C_j² = (2/π) m ω_j J(ω_j) Δω`
/// and unit oscillator mass.
pub fn discretize_bath<T: Real>(spec: &BathSpec<T>, inertia: T, n_modes: usize) -> Result<DiscreteBath<T>> {
    if n_modes == 0 {
        return Err(Error::Domain("a discrete bath needs at least one mode".into()));
    }
    let mass = T::one();
    let dw = spec.omega_cutoff / T::from_usize_lossy(n_modes);
    let modes = (0..n_modes)
        .map(|j| {
            let omega = dw * (T::from_usize_lossy(j) + T::c(0.5));
            let c2 = T::c(2.0) / T::PI() * mass * omega * spectral_density(spec, inertia, omega) * dw;
            Mode { omega, coupling: c2.sqrt() }
        })
        .collect();
    Ok(DiscreteBath { modes, mass, inertia })
}

/// Initial bath configuration for [`simulate_bath_ode`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BathStart {
    /// `R_j = Ṙ_j = 0`. The counter-term then exerts the slip force that
    /// makes `θ(t) = G(t)θ̇₀ + Ġ(t)θ₀`.
    #[default]
    Rest,
    /// Oscillators at rest in the minimum shifted by the initial phase,
    /// `R_j = C_j θ₀/(mω_j²)`. The phase then stays put unless kicked:
    /// `θ(t) = θ₀ + G(t)θ̇₀`.
    Relaxed,
}

/// Integration settings for [`simulate_bath_ode_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeControl<T> {
    /// Fixed step; `None` picks the largest allowed step `2π/(50 ω_max)`.
    pub step: Option<T>,
    pub start: BathStart,
}

impl<T: Real> Default for OdeControl<T> {
    fn default() -> Self {
        Self { step: None, start: BathStart::default() }
    }
}

/// One sample of a bath trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSample<T> {
    pub t: T,
    pub theta: T,
    pub thetadot: T,
    pub energy: T,
}

/// `θ(t)` on `t_grid` for the ring coupled to the discrete bath through
/// `Iθ̈ = Σ C_j(R_j − C_jθ/(mω_j²))`, `mR̈_j = −mω_j²R_j + C_jθ`.
pub fn simulate_bath_ode<T: Real>(bath: &DiscreteBath<T>, theta0: T, thetadot0: T, t_grid: &[T]) -> Result<Vec<T>> {
    let samples = simulate_bath_ode_with(bath, theta0, thetadot0, t_grid, &OdeControl::default())?;
    Ok(samples.into_iter().map(|s| s.theta).collect())
}

/// Total energy `½Iθ̇² + Σ[½mṘ² + ½mω²(R − Cθ/(mω²))²]`.
fn energy<T: Real>(bath: &DiscreteBath<T>, y: &[T]) -> T {
    let n = bath.len();
    let (theta, thetadot) = (y[0], y[1]);
    let half = T::c(0.5);
    let mut e = half * bath.inertia * thetadot * thetadot;
    for (j, md) in bath.modes.iter().enumerate() {
        let (r, rdot) = (y[2 + j], y[2 + n + j]);
        let w2 = md.omega * md.omega;
        let d = r - md.coupling * theta / (bath.mass * w2);
        e = e + half * bath.mass * (rdot * rdot + w2 * d * d);
    }
    e
}

fn rhs<T: Real>(bath: &DiscreteBath<T>, y: &[T], out: &mut [T]) {
    let n = bath.len();
    let theta = y[0];
    let mut force = T::zero();
    for (j, md) in bath.modes.iter().enumerate() {
        let r = y[2 + j];
        let w2 = md.omega * md.omega;
        force = force + md.coupling * (r - md.coupling * theta / (bath.mass * w2));
        out[2 + j] = y[2 + n + j];
        out[2 + n + j] = -w2 * r + md.coupling * theta / bath.mass;
    }
    out[0] = y[1];
    out[1] = force / bath.inertia;
}

/// [`simulate_bath_ode`] with explicit step and initial bath state; also
/// reports `θ̇` and the conserved energy at each sample.
pub fn simulate_bath_ode_with<T: Real>(
    bath: &DiscreteBath<T>,
    theta0: T,
    thetadot0: T,
    t_grid: &[T],
    ctl: &OdeControl<T>,
) -> Result<Vec<OdeSample<T>>> {
    if !(bath.inertia > T::zero()) || !(bath.mass > T::zero()) {
        return Err(Error::Config("inertia and oscillator mass must be positive".into()));
    }
    let w_max = bath.max_frequency();
    let limit = if w_max > T::zero() { T::TAU() / (T::c(50.0) * w_max) } else { T::infinity() };
    let h_max = match ctl.step {
        Some(h) if !(h > T::zero()) || h > limit => {
            return Err(Error::Config(format!("step {h:e} exceeds the stability limit {limit:e}")));
        }
        Some(h) => h,
        None => limit,
    };
    if t_grid.iter().any(|t| !(*t >= T::zero())) || t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("time grid must be non-negative and sorted".into()));
    }
    if let Some(&t_end) = t_grid.last() {
        if !bath.is_empty() && t_end > bath.recurrence_time() {
            return Err(Error::Domain(format!(
                "time {t_end:e} exceeds the recurrence time {:e} of the mode grid",
                bath.recurrence_time()
            )));
        }
    }
    let n = bath.len();
    let dim = 2 + 2 * n;
    let mut y = vec![T::zero(); dim];
    y[0] = theta0;
    y[1] = thetadot0;
    if ctl.start == BathStart::Relaxed {
        for (j, md) in bath.modes.iter().enumerate() {
            y[2 + j] = md.coupling * theta0 / (bath.mass * md.omega * md.omega);
        }
    }
    let mut k = [vec![T::zero(); dim], vec![T::zero(); dim], vec![T::zero(); dim], vec![T::zero(); dim]];
    let mut tmp = vec![T::zero(); dim];
    let mut step = |y: &mut Vec<T>, h: T| {
        let half = h * T::c(0.5);
        rhs(bath, y, &mut k[0]);
        for i in 0..dim {
            tmp[i] = y[i] + half * k[0][i];
        }
        rhs(bath, &tmp, &mut k[1]);
        for i in 0..dim {
            tmp[i] = y[i] + half * k[1][i];
        }
        rhs(bath, &tmp, &mut k[2]);
        for i in 0..dim {
            tmp[i] = y[i] + h * k[2][i];
        }
        rhs(bath, &tmp, &mut k[3]);
        let sixth = h / T::c(6.0);
        for i in 0..dim {
            y[i] = y[i] + sixth * (k[0][i] + T::c(2.0) * (k[1][i] + k[2][i]) + k[3][i]);
        }
    };
    let mut out = Vec::with_capacity(t_grid.len());
    let mut now = T::zero();
    for &target in t_grid {
        let span = target - now;
        if span > T::zero() {
            let steps = (span / h_max).ceil().to_usize().unwrap_or(1).max(1);
            let h = span / T::from_usize_lossy(steps);
            for _ in 0..steps {
                step(&mut y, h);
            }
            now = target;
        }
        out.push(OdeSample { t: target, theta: y[0], thetadot: y[1], energy: energy(bath, &y) });
    }
    Ok(out)
}

/// `α_R(t) = Σ_j C_j²/(2mω_j) coth(ħω_j/2k_BT) cos(ω_j t)`.
pub fn noise_kernel_direct<T: Real>(bath: &DiscreteBath<T>, temperature: T, t: T) -> T {
    bath.modes
        .iter()
        .map(|md| {
            md.coupling * md.coupling / (T::c(2.0) * bath.mass * md.omega)
                * thermal_weight(temperature, md.omega)
                * (md.omega * t).cos()
        })
        .fold(T::zero(), |a, b| a + b)
}

/// One classical realization of the fluctuating force
/// `ξ(t) = Σ_j C_j[δR_j cos ω_j t + δṘ_j/ω_j sin ω_j t]` with the initial
/// displacements drawn from the classical equilibrium at `temperature`.
/// Its correlation approaches `ħα_R` when `k_BT ≫ ħΩ`.
pub fn sample_thermal_force<T: Real, R: Rng + ?Sized>(
    bath: &DiscreteBath<T>,
    temperature: T,
    times: &[T],
    rng: &mut R,
) -> Result<Vec<T>> {
    if !(temperature > T::zero()) {
        return Err(Error::Domain("classical thermal sampling needs T > 0".into()));
    }
    let kt = T::c(K_B) * temperature;
    let draws: Vec<(T, T)> = bath
        .modes
        .iter()
        .map(|md| {
            let z1: f64 = StandardNormal.sample(rng);
            let z2: f64 = StandardNormal.sample(rng);
            let sx = (kt / (bath.mass * md.omega * md.omega)).sqrt();
            let sv = (kt / bath.mass).sqrt();
            (T::c(z1) * sx, T::c(z2) * sv)
        })
        .collect();
    Ok(times
        .iter()
        .map(|&t| {
            bath.modes
                .iter()
                .zip(&draws)
                .map(|(md, &(dx, dv))| {
                    let (s, c) = (md.omega * t).sin_cos();
                    md.coupling * (dx * c + dv / md.omega * s)
                })
                .fold(T::zero(), |a, b| a + b)
        })
        .collect())
}

/// `ħ α_R(t)` for comparison with sampled force correlations.
pub fn force_correlation_target<T: Real>(bath: &DiscreteBath<T>, temperature: T, t: T) -> T {
    T::c(HBAR) * noise_kernel_direct(bath, temperature, t)
}
