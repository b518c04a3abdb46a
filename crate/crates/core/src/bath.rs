//! Power-law bath: spectral density `J(ω) = I g_s ω^s` with a hard cutoff
//! at `Ω`, the Laplace-domain memory kernel and the noise kernel `α_R(t)`.

use num_complex::Complex;

use crate::constants::{HBAR, K_B};
use crate::quad::{integrate_breaks, integrate_left_power, periodic_breaks, QuadControl};
use crate::{Error, Real, Result};

/// Environment parameters. Units: `g` in Hz^{2−s}, `omega_cutoff` in Hz
/// (angular), `temperature` in K.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec<T> {
    pub s: T,
    pub g: T,
    pub omega_cutoff: T,
    pub temperature: T,
}

impl<T: Real> BathSpec<T> {
    pub fn new(s: T, g: T, omega_cutoff: T, temperature: T) -> Result<Self> {
        let spec = Self { s, g, omega_cutoff, temperature };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s > T::zero() && self.s < T::c(2.0)) {
            return Err(Error::Domain(format!("bath exponent s = {:e} outside (0, 2)", self.s)));
        }
        if !(self.g > T::zero()) || !self.g.is_finite() {
            return Err(Error::Domain(format!("coupling g = {:e} must be positive", self.g)));
        }
        if !(self.omega_cutoff > T::zero()) || !self.omega_cutoff.is_finite() {
            return Err(Error::Domain(format!("cutoff {:e} must be positive", self.omega_cutoff)));
        }
        if !(self.temperature >= T::zero()) || !self.temperature.is_finite() {
            return Err(Error::Domain(format!("temperature {:e} must be non-negative", self.temperature)));
        }
        Ok(())
    }

    /// Ohmic bath, `s = 1` exactly.
    pub fn is_ohmic(&self) -> bool {
        self.s == T::one()
    }

    /// Memory exponent `α = 2 − s` of the fundamental solution.
    pub fn alpha(&self) -> T {
        T::c(2.0) - self.s
    }

    /// Characteristic frequency `ω_s`.
    pub fn omega_s(&self) -> T {
        omega_s(self)
    }

    /// `λ = ω_s^{2−s}`, the coefficient of the memory kernel.
    pub fn lambda(&self) -> T {
        let half_pi_s = T::FRAC_PI_2() * self.s;
        self.g / half_pi_s.sin()
    }

    pub fn with_g(mut self, g: T) -> Self {
        self.g = g;
        self
    }

    pub fn with_cutoff(mut self, omega_cutoff: T) -> Self {
        self.omega_cutoff = omega_cutoff;
        self
    }

    pub fn with_temperature(mut self, temperature: T) -> Self {
        self.temperature = temperature;
        self
    }
}

/// `J(ω) = I g_s ω^s` below the cutoff, zero above.
pub fn spectral_density<T: Real>(spec: &BathSpec<T>, inertia: T, omega: T) -> T {
    if omega <= T::zero() || omega > spec.omega_cutoff {
        return T::zero();
    }
    inertia * spec.g * omega.powf(spec.s)
}

/// `ω_s = (g_s / sin(πs/2))^{1/(2−s)}`.
pub fn omega_s<T: Real>(spec: &BathSpec<T>) -> T {
    spec.lambda().powf(T::one() / spec.alpha())
}

/// `γ̂(z) = ω_s^{2−s} z^{s−1}` for real `z > 0`.
pub fn memory_kernel_laplace<T: Real>(spec: &BathSpec<T>, z: T) -> T {
    spec.lambda() * z.powf(spec.s - T::one())
}

/// [`memory_kernel_laplace`] continued to the cut plane (principal branch).
pub fn memory_kernel_laplace_complex<T: Real>(spec: &BathSpec<T>, z: Complex<T>) -> Complex<T> {
    z.powf(spec.s - T::one()) * spec.lambda()
}

/// Thermal weight `coth(ħω / 2k_BT)`, exactly 1 at `T = 0`.
pub fn thermal_weight<T: Real>(temperature: T, omega: T) -> T {
    if temperature == T::zero() {
        return T::one();
    }
    let x = T::c(HBAR / (2.0 * K_B)) * omega / temperature;
    if x > T::c(20.0) {
        T::one()
    } else if x < T::c(1e-6) {
        T::one() / x + x / T::c(3.0)
    } else {
        T::one() / x.tanh()
    }
}

/// One sample of the noise kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample<T> {
    pub t: T,
    pub value: T,
}

/// Noise kernel `α_R(t) = (I g_s/π) ∫₀^Ω ω^s coth(ħω/2k_BT) cos(ωt) dω`.
///
/// The tolerance in `ctl` is applied relative to the zero-temperature value
/// at `t = 0`, the natural scale of the kernel, so that kernel zeros do not
/// stall the quadrature.
pub fn noise_kernel<T: Real>(spec: &BathSpec<T>, inertia: T, t: T, ctl: &QuadControl<T>) -> Result<T> {
    let k = noise_kernel_integral(spec, t, ctl)?;
    Ok(inertia * spec.g / T::PI() * k)
}

/// Samples [`noise_kernel`] on a list of times.
pub fn noise_kernel_samples<T: Real>(
    spec: &BathSpec<T>,
    inertia: T,
    times: &[T],
    ctl: &QuadControl<T>,
) -> Result<Vec<KernelSample<T>>> {
    times.iter().map(|&t| Ok(KernelSample { t, value: noise_kernel(spec, inertia, t, ctl)? })).collect()
}

/// `∫₀^Ω ω^s coth(ħω/2k_BT) cos(ωt) dω`, the kernel without prefactors.
pub(crate) fn noise_kernel_integral<T: Real>(spec: &BathSpec<T>, t: T, ctl: &QuadControl<T>) -> Result<T> {
    let t = t.abs();
    let (s, omega_c, temp) = (spec.s, spec.omega_cutoff, spec.temperature);
    let scale = omega_c.powf(s + T::one()) / (s + T::one());
    let qctl = QuadControl { abs_tol: ctl.abs_tol.max(ctl.rel_tol * scale), ..*ctl };
    let f = |w: T| w.powf(s) * thermal_weight(temp, w) * (w * t).cos();
    let breaks = periodic_breaks(T::zero(), omega_c, t, ctl.max_intervals / 4);
    // Near ω = 0 the integrand behaves like ω^s (T = 0) or ω^{s−1} (T > 0).
    let exponent = if temp > T::zero() { s - T::one() } else { s };
    let first = integrate_left_power(f, T::zero(), breaks[1], exponent, &qctl)?;
    if breaks.len() == 2 {
        return Ok(first.value);
    }
    let rest = integrate_breaks(f, &breaks[1..], &qctl)?;
    Ok(first.value + rest.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: f64) -> BathSpec<f64> {
        BathSpec::new(s, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn characteristic_frequency() {
        assert!((omega_s(&spec(1.0)) - 1.0).abs() < 1e-15);
        assert!((omega_s(&spec(0.5)) - 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
        let two_gamma: BathSpec<f64> = BathSpec::new(1.0, 0.37, 1.0, 0.0).unwrap();
        assert!((omega_s(&two_gamma) - 0.37).abs() < 1e-15);
    }

    #[test]
    fn density_and_kernel() {
        let sp: BathSpec<f64> = BathSpec::new(1.0, 1.0, 5.0, 0.0).unwrap();
        assert_eq!(spectral_density(&sp, 1.0, 2.0), 2.0);
        assert_eq!(spectral_density(&sp, 1.0, 0.0), 0.0);
        assert_eq!(spectral_density(&sp, 1.0, 5.0 + 1e-9), 0.0);
        assert!((memory_kernel_laplace(&sp, 3.7) - 1.0).abs() < 1e-15);
        let sp15: BathSpec<f64> = BathSpec::new(1.5, 1.0, 5.0, 0.0).unwrap();
        let expected = omega_s(&sp15).powf(0.5) * 2.0;
        assert!((memory_kernel_laplace(&sp15, 4.0) - expected).abs() < 1e-14);
    }

    #[test]
    fn kernel_at_zero_time() {
        let ctl = QuadControl::default();
        let v = noise_kernel(&spec(1.0), 1.0, 0.0, &ctl).unwrap();
        assert!((v - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-12);
        let sp = BathSpec::new(0.7, 2.0, 3.0, 0.0).unwrap();
        let v = noise_kernel(&sp, 0.5, 0.0, &ctl).unwrap();
        let exact = 0.5 * 2.0 * 3f64.powf(1.7) / (std::f64::consts::PI * 1.7);
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn invalid_specs() {
        assert!(BathSpec::new(2.0, 1.0, 1.0, 0.0).is_err());
        assert!(BathSpec::new(1.0, 0.0, 1.0, 0.0).is_err());
        assert!(BathSpec::new(1.0, 1.0, 1.0, -1.0).is_err());
    }
}
