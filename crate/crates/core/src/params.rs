//! Physical parameters of the ring and of the environment it couples to.

use std::fmt;

use crate::constants::{E_CHARGE, HBAR, MU_0};
use crate::{Error, Real, Result};

/// Ring crystal parameters (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingSpec<T> {
    /// Ring radius `R` in m.
    pub radius: T,
    /// Fermi velocity `v_F` in m/s.
    pub v_f: T,
    /// Phason velocity `c₀` in m/s.
    pub c0: T,
    /// Mean density `n₀`.
    pub n0: T,
    /// Modulation amplitude `n₁`.
    pub n1: T,
    /// Fermi wave number `k_F` in 1/m.
    pub k_f: T,
}

impl<T: Real> RingSpec<T> {
    pub fn new(radius: T, v_f: T, c0: T, n0: T, n1: T, k_f: T) -> Result<Self> {
        let spec = Self { radius, v_f, c0, n0, n1, k_f };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("radius", self.radius),
            ("v_f", self.v_f),
            ("c0", self.c0),
            ("n0", self.n0),
            ("n1", self.n1),
            ("k_f", self.k_f),
        ];
        for (name, v) in fields {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v:e}")));
            }
        }
        if self.c0 > self.v_f {
            return Err(Error::Domain(format!(
                "phason velocity {:e} exceeds the Fermi velocity {:e}",
                self.c0, self.v_f
            )));
        }
        Ok(())
    }

    /// CDW wavelength `λ = π/k_F`.
    pub fn wavelength(&self) -> T {
        T::PI() / self.k_f
    }
}

/// Scales derived from a [`RingSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales<T> {
    /// Moment of inertia `I = ħRv_F/c₀²` in kg·m².
    pub inertia: T,
    /// `μ = I/ħ` in s.
    pub mu: T,
    /// Oscillation period `P = 4πμ` in s.
    pub period: T,
    /// Angular frequency `ħ/2I = 1/2μ` in rad/s.
    pub frequency: T,
}

pub fn derived_scales<T: Real>(ring: &RingSpec<T>) -> DerivedScales<T> {
    let mu = ring.radius * ring.v_f / (ring.c0 * ring.c0);
    DerivedScales {
        inertia: T::c(HBAR) * mu,
        mu,
        period: T::c(4.0) * T::PI() * mu,
        frequency: T::one() / (T::c(2.0) * mu),
    }
}

/// External coil feeding the bath of LC modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitSpec<T> {
    /// Coil radius in m.
    pub r_coil: T,
    /// Mode density `ρ` (modes per unit angular frequency), in s.
    pub rho_modes: T,
    /// Coil self-inductance in H.
    pub inductance: T,
}

impl<T: Real> CircuitSpec<T> {
    pub fn new(r_coil: T, rho_modes: T, inductance: T) -> Result<Self> {
        for (name, v) in [("r_coil", r_coil), ("rho_modes", rho_modes), ("inductance", inductance)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v:e}")));
            }
        }
        Ok(Self { r_coil, rho_modes, inductance })
    }
}

/// Applicability warnings raised by parameter checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamWarning<T> {
    /// The coil is not much larger than the ring (`r_coil < 10R`).
    CoilNotLarge { ratio: T },
    /// The ring is not much larger than the CDW wavelength (`R ≤ 10λ`).
    RadiusNearWavelength { ratio: T },
}

impl<T: Real> fmt::Display for ParamWarning<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::CoilNotLarge { ratio } => write!(f, "coil radius is only {ratio:.3} ring radii"),
            Self::RadiusNearWavelength { ratio } => {
                write!(f, "ring radius is only {ratio:.3} CDW wavelengths; a Fermi surface needs R ≫ λ")
            }
        }
    }
}

/// Ohmic coupling from the equivalent circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitCoupling<T> {
    /// `β` in Hz/m.
    pub beta: T,
    /// `γ = βR` in Hz.
    pub gamma: T,
}

/// `β = πμ₀²e²ρc₀⁶ / (32ħ r_coil² L v_F³)` and `γ = βR`.
pub fn circuit_coupling<T: Real>(ring: &RingSpec<T>, circuit: &CircuitSpec<T>) -> CircuitCoupling<T> {
    let mu0 = T::c(MU_0);
    let e = T::c(E_CHARGE);
    let c0_3 = ring.c0 * ring.c0 * ring.c0;
    let num = T::PI() * mu0 * mu0 * e * e * circuit.rho_modes * c0_3 * c0_3;
    let den = T::c(32.0 * HBAR) * circuit.r_coil * circuit.r_coil * circuit.inductance * ring.v_f.powi(3);
    let beta = num / den;
    CircuitCoupling { beta, gamma: beta * ring.radius }
}

/// Warns when the concentric-coil mutual inductance formula is stretched.
pub fn coil_check<T: Real>(ring: &RingSpec<T>, circuit: &CircuitSpec<T>) -> Option<ParamWarning<T>> {
    let ratio = circuit.r_coil / ring.radius;
    (ratio < T::c(10.0)).then_some(ParamWarning::CoilNotLarge { ratio })
}

/// Largest radius that still shows more than one oscillation,
/// `R < c₀ / (4π√(v_F β))`.
pub fn radius_upper_bound<T: Real>(ring: &RingSpec<T>, beta: T) -> Result<T> {
    if !(beta > T::zero()) {
        return Err(Error::Domain(format!("beta must be positive, got {beta:e}")));
    }
    Ok(ring.c0 / (T::c(4.0) * T::PI() * (ring.v_f * beta).sqrt()))
}

/// Flags rings with `R ≤ 10λ`.
pub fn radius_lower_bound_check<T: Real>(ring: &RingSpec<T>) -> Option<ParamWarning<T>> {
    let ratio = ring.radius / ring.wavelength();
    (ratio <= T::c(10.0)).then_some(ParamWarning::RadiusNearWavelength { ratio })
}

/// Band parameters entering the commensurability energy, energies in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommensurabilitySpec<T> {
    pub gap: T,
    pub fermi_energy: T,
    pub bandwidth: T,
    pub m: u32,
}

impl<T: Real> CommensurabilitySpec<T> {
    pub fn new(gap: T, fermi_energy: T, bandwidth: T, m: u32) -> Result<Self> {
        for (name, v) in [("gap", gap), ("fermi_energy", fermi_energy), ("bandwidth", bandwidth)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive and finite, got {v:e}")));
            }
        }
        if m < 2 {
            return Err(Error::Domain(format!("commensurability order must be at least 2, got {m}")));
        }
        Ok(Self { gap, fermi_energy, bandwidth, m })
    }
}

/// Pinning energy `ε(φ; M) = (|Δ|²/ε_F)(|Δ|/W)^{M−2} Mφ²/2` in eV, with the
/// elementary charge equal to one in these units.
pub fn commensurability_energy<T: Real>(spec: &CommensurabilitySpec<T>, phi: T) -> T {
    let m = T::c(spec.m as f64);
    let ratio = spec.gap / spec.bandwidth;
    spec.gap * spec.gap / spec.fermi_energy * ratio.powi(spec.m as i32 - 2) * m * phi * phi * T::c(0.5)
}
