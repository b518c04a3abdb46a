//! Special functions: generalized Mittag-Leffler, ₁F₂, sinc, the gamma
//! function family and a fixed-Talbot numerical inverse Laplace transform.

mod gamma;
mod hyp;
mod mittag_leffler;
mod talbot;

pub use gamma::{gamma, ln_gamma, rgamma};
pub use hyp::{hyp1f2, hyp1f2_tail, hyp1f2_with_precision};
pub use mittag_leffler::{mittag_leffler, mittag_leffler_integral, mittag_leffler_series, mittag_leffler_with, MlControl};
pub use talbot::{inverse_laplace, DEFAULT_TALBOT_NODES};

use crate::{Error, Real, Result};

/// Convergence controls for series evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl<T> {
    pub rel_tol: T,
    pub max_terms: usize,
}

impl<T: Real> Default for SeriesControl<T> {
    fn default() -> Self {
        Self { rel_tol: T::c(1e-10), max_terms: 1_000_000 }
    }
}

impl<T: Real> SeriesControl<T> {
    pub fn new(rel_tol: T, max_terms: usize) -> Result<Self> {
        if !(rel_tol > T::zero()) {
            return Err(Error::Config("rel_tol must be positive".into()));
        }
        if max_terms == 0 {
            return Err(Error::Config("max_terms must be at least 1".into()));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// Unnormalized sinc, `sin(x)/x` with `sinc(0) = 1`.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::c(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::c(6.0) + x2 * x2 / T::c(120.0)
    } else {
        x.sin() / x
    }
}

/// `sinc(π y)` with the argument reduced to the nearest integer first, so
/// that integer `y ≠ 0` gives exactly zero and `y` near an integer keeps
/// full relative accuracy.
pub fn sinc_pi<T: Real>(y: T) -> T {
    if y.abs() < T::c(1e-4) {
        return sinc(T::PI() * y);
    }
    let k = y.round();
    let r = y - k;
    let parity = k.to_i64().map(|k| k.rem_euclid(2)).unwrap_or(0);
    let s = (T::PI() * r).sin();
    let s = if parity == 1 { -s } else { s };
    s / (T::PI() * y)
}
