use num_complex::Complex;

use crate::{Error, Real, Result};

/// Node count used when callers have no reason to pick another.
pub const DEFAULT_TALBOT_NODES: usize = 24;

/// Numerical inverse Laplace transform by the fixed Talbot contour
/// `s(θ) = rθ(cot θ + i)`, `r = 2M/(5t)`, with `M = n_nodes` nodes.
///
/// `f` must be analytic to the right of the contour, which wraps the
/// negative real axis; branch cuts along it are fine.
pub fn inverse_laplace<T, F>(f: F, t: T, n_nodes: usize) -> Result<T>
where
    T: Real,
    F: Fn(Complex<T>) -> Complex<T>,
{
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("inverse Laplace time must be positive, got {t:e}")));
    }
    if n_nodes < 2 {
        return Err(Error::Config("Talbot rule needs at least two nodes".into()));
    }
    let m = T::from_usize_lossy(n_nodes);
    let r = T::c(2.0) * m / (T::c(5.0) * t);
    let f0 = f(Complex::new(r, T::zero()));
    if !(f0.re.is_finite() && f0.im.is_finite()) {
        return Err(Error::eval("inverse_laplace", format!("transform singular at contour node s = {r:e}")));
    }
    let mut sum = T::c(0.5) * (r * t).exp() * f0.re;
    for k in 1..n_nodes {
        let theta = T::from_usize_lossy(k) * T::PI() / m;
        let cot = theta.cos() / theta.sin();
        let s = Complex::new(r * theta * cot, r * theta);
        let sigma = theta + (theta * cot - T::one()) * cot;
        let fs = f(s);
        if !(fs.re.is_finite() && fs.im.is_finite()) {
            return Err(Error::eval("inverse_laplace", format!("transform singular at contour node {k}")));
        }
        let term = (s * t).exp() * fs * Complex::new(T::one(), sigma);
        sum = sum + term.re;
    }
    Ok(r / m * sum)
}
