use crate::quad::{integrate_left_power, integrate_to_infinity, QuadControl};
use crate::specfun::gamma::{ln_gamma, rgamma};
use crate::specfun::SeriesControl;
use crate::{Error, Real, Result};

/// Controls for [`mittag_leffler_with`]: series tolerances plus the radius
/// (in units of `|x|^{1/α}`) beyond which negative arguments switch from the
/// power series to the real integral representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlControl<T> {
    pub series: SeriesControl<T>,
    pub switch_radius: T,
}

impl<T: Real> Default for MlControl<T> {
    fn default() -> Self {
        Self { series: SeriesControl::default(), switch_radius: T::c(5.0) }
    }
}

fn check_params<T: Real>(alpha: T, beta: T, x: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::c(2.0)) {
        return Err(Error::Domain(format!("Mittag-Leffler alpha {alpha:e} outside (0, 2]")));
    }
    if !(beta > T::zero()) || !beta.is_finite() {
        return Err(Error::Domain(format!("Mittag-Leffler beta {beta:e} must be positive")));
    }
    if !x.is_finite() {
        return Err(Error::Domain("Mittag-Leffler argument must be finite".into()));
    }
    Ok(())
}

/// Generalized Mittag-Leffler function `E_{α,β}(x) = Σ x^k / Γ(αk + β)`.
pub fn mittag_leffler<T: Real>(alpha: T, beta: T, x: T, ctl: &SeriesControl<T>) -> Result<T> {
    mittag_leffler_with(alpha, beta, x, &MlControl { series: *ctl, ..MlControl::default() })
}

/// [`mittag_leffler`] with an explicit switch-over radius.
pub fn mittag_leffler_with<T: Real>(alpha: T, beta: T, x: T, ctl: &MlControl<T>) -> Result<T> {
    check_params(alpha, beta, x)?;
    if x >= T::zero() || (-x).powf(T::one() / alpha) <= ctl.switch_radius {
        return mittag_leffler_series(alpha, beta, x, &ctl.series);
    }
    if alpha == T::one() {
        return ml_alpha_one(beta, x, &ctl.series);
    }
    mittag_leffler_integral(alpha, beta, x, &ctl.series)
}

fn effective_tol<T: Real>(ctl: &SeriesControl<T>) -> T {
    ctl.rel_tol.max(T::epsilon() * T::c(4.0))
}

/// Power-series evaluation. Terms are formed through `ln Γ` so that large
/// orders neither overflow nor lose the gamma normalization.
pub fn mittag_leffler_series<T: Real>(alpha: T, beta: T, x: T, ctl: &SeriesControl<T>) -> Result<T> {
    check_params(alpha, beta, x)?;
    if x == T::zero() {
        return Ok(rgamma(beta));
    }
    let tol = effective_tol(ctl) * T::c(0.01);
    let lnx = x.abs().ln();
    let negative = x < T::zero();
    let mut sum = T::zero();
    let mut prev_log = T::infinity();
    let mut last = T::zero();
    for k in 0..ctl.max_terms {
        let kf = T::from_usize_lossy(k);
        let arg = alpha * kf + beta;
        let log_mag = kf * lnx - ln_gamma(arg);
        // Direct products are a few ulps more accurate while they stay in range.
        let mut term = if arg < T::c(160.0) && log_mag.abs() < T::c(600.0) {
            x.abs().powi(k as i32) * rgamma(arg)
        } else {
            log_mag.exp()
        };
        if negative && k % 2 == 1 {
            term = -term;
        }
        sum = sum + term;
        last = term;
        if !sum.is_finite() {
            return Err(Error::eval("mittag_leffler", format!("series overflow at term {k} for x = {x:e}")));
        }
        let decreasing = log_mag < prev_log;
        if k > 0 && decreasing && term.abs() <= tol * sum.abs() {
            return Ok(sum);
        }
        prev_log = log_mag;
    }
    Err(Error::eval(
        "mittag_leffler",
        format!("series did not converge in {} terms (partial sum {sum:e}, last term {last:e})", ctl.max_terms),
    ))
}

/// Real integral representation of `E_{α,β}(x)` for `x < 0`, `α ≠ 1`,
/// obtained by collapsing the Hankel contour onto the negative real axis.
/// For `α > 1` the two poles `z = λ^{1/α} e^{±iπ/α}` contribute a damped
/// oscillation. The order `β` is first lowered by the recurrence
/// `E_{α,β}(x) = (E_{α,β−α}(x) − 1/Γ(β−α)) / x` until the integrand is
/// integrable at the origin.
pub fn mittag_leffler_integral<T: Real>(alpha: T, beta: T, x: T, ctl: &SeriesControl<T>) -> Result<T> {
    check_params(alpha, beta, x)?;
    if x >= T::zero() {
        return Err(Error::Domain("integral representation requires a negative argument".into()));
    }
    if alpha == T::one() {
        return Err(Error::Domain("integral representation is singular at alpha = 1".into()));
    }
    if beta > alpha + T::c(0.9) {
        let lower = mittag_leffler_integral(alpha, beta - alpha, x, ctl)?;
        return Ok((lower - rgamma(beta - alpha)) / x);
    }
    let lambda = -x;
    let pi = T::PI();
    let r_star = lambda.powf(T::one() / alpha);
    let (sa, ca) = ((alpha * pi).sin(), (alpha * pi).cos());
    let sb = (beta * pi).sin();
    let sba = ((beta - alpha) * pi).sin();
    let integrand = |r: T| -> T {
        if r <= T::zero() {
            return T::zero();
        }
        let ra = r.powf(alpha);
        let re = ra + lambda * ca;
        let im = lambda * sa;
        let den = re * re + im * im;
        (-r).exp() * r.powf(alpha - beta) * (ra * sb + lambda * sba) / den / pi
    };
    let qtol = (effective_tol(ctl) * T::c(1e-2)).max(T::epsilon() * T::c(32.0));
    let qctl = QuadControl { abs_tol: T::zero(), rel_tol: qtol, max_intervals: 2000 };
    let split = if r_star < T::c(60.0) { r_star } else { T::one() };
    let wrap = |e: Error| match e {
        Error::Evaluation { detail, .. } => Error::eval("mittag_leffler", detail),
        other => other,
    };
    let near = integrate_left_power(integrand, T::zero(), split, alpha - beta, &qctl).map_err(wrap)?;
    let far = integrate_to_infinity(integrand, split, &qctl).map_err(wrap)?;
    let mut value = near.value + far.value;
    if alpha > T::one() {
        let theta = pi / alpha;
        let amp = T::c(2.0) / alpha * r_star.powf(T::one() - beta) * (r_star * theta.cos()).exp();
        value = value + amp * ((T::one() - beta) * theta + r_star * theta.sin()).cos();
    }
    if !value.is_finite() {
        return Err(Error::eval("mittag_leffler", format!("non-finite integral value at x = {x:e}")));
    }
    Ok(value)
}

/// `α = 1`: exponential closed forms, the downward recurrence for integer
/// `β`, and a Beta-type integral otherwise.
fn ml_alpha_one<T: Real>(beta: T, x: T, ctl: &SeriesControl<T>) -> Result<T> {
    if beta == beta.floor() {
        let k = beta.to_usize().unwrap_or(1);
        let mut e = x.exp();
        for j in 1..k {
            e = (e - rgamma(T::from_usize_lossy(j))) / x;
        }
        return Ok(e);
    }
    if beta < T::one() {
        let upper = ml_alpha_one(beta + T::one(), x, ctl)?;
        return Ok(rgamma(beta) + x * upper);
    }
    // E_{1,β}(x) = (1/Γ(β−1)) ∫₀¹ e^{x(1−v)} v^{β−2} dv
    let qtol = (effective_tol(ctl) * T::c(1e-2)).max(T::epsilon() * T::c(32.0));
    let qctl = QuadControl { abs_tol: T::zero(), rel_tol: qtol, max_intervals: 2000 };
    let r = integrate_left_power(
        |v: T| (x * (T::one() - v)).exp() * v.powf(beta - T::c(2.0)),
        T::zero(),
        T::one(),
        beta - T::c(2.0),
        &qctl,
    )?;
    Ok(r.value * rgamma(beta - T::one()))
}
