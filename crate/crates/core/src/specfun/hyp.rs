use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::specfun::SeriesControl;
use crate::{Error, Real, Result};

fn is_nonpositive_integer<T: Real>(b: T) -> bool {
    b <= T::zero() && b == b.floor()
}

fn check<T: Real>(a: T, b1: T, b2: T, z: T) -> Result<()> {
    if is_nonpositive_integer(b1) || is_nonpositive_integer(b2) {
        return Err(Error::Domain(format!("1F2 lower parameter at a pole: b1 = {b1:e}, b2 = {b2:e}")));
    }
    if !(a.is_finite() && b1.is_finite() && b2.is_finite() && z.is_finite()) {
        return Err(Error::Domain("1F2 parameters must be finite".into()));
    }
    Ok(())
}

/// Generalized hypergeometric function `₁F₂(a; b₁, b₂; z)`.
///
/// Small arguments use the plain series. When the terms grow far beyond the
/// result (large negative `z`), the series is re-summed in binary fixed
/// point with enough bits to absorb the cancellation.
pub fn hyp1f2<T: Real>(a: T, b1: T, b2: T, z: T, ctl: &SeriesControl<T>) -> Result<T> {
    hyp1f2_tail(a, b1, b2, z, 0, ctl)
}

/// Tail `Σ_{k ≥ skip} (a)_k z^k / ((b₁)_k (b₂)_k k!)` of the ₁F₂ series.
/// Useful when leading terms cancel analytically against other expressions.
pub fn hyp1f2_tail<T: Real>(a: T, b1: T, b2: T, z: T, skip: usize, ctl: &SeriesControl<T>) -> Result<T> {
    check(a, b1, b2, z)?;
    if z == T::zero() {
        return Ok(if skip == 0 { T::one() } else { T::zero() });
    }
    let tol = ctl.rel_tol.max(T::epsilon() * T::c(4.0));
    let max_log = log_max_term(a, b1, b2, z, skip, ctl.max_terms)?;
    if max_log == f64::NEG_INFINITY {
        return Ok(T::zero());
    }
    // Cheap attempt in native precision when cancellation is mild.
    if max_log < 20.0 {
        let (sum, converged) = native_tail(a, b1, b2, z, skip, tol, ctl.max_terms);
        if converged {
            let lost = max_log - sum.abs().f64().ln();
            if lost.exp() * T::epsilon().f64() * 16.0 <= tol.f64() {
                return Ok(sum);
            }
        }
    }
    let target_bits = (-tol.f64().log2()).ceil() as i64 + 32;
    let mut bits = (max_log / std::f64::consts::LN_2).ceil().max(0.0) as i64 + target_bits + 64;
    for _ in 0..6 {
        let v = hyp1f2_with_precision(a, b1, b2, z, skip, bits as u64, ctl.max_terms)?;
        let need = if v == T::zero() {
            bits * 2
        } else {
            ((max_log - v.abs().f64().ln()) / std::f64::consts::LN_2).ceil() as i64 + target_bits
        };
        if need <= bits {
            return Ok(v);
        }
        bits = need.max(bits + 64);
    }
    Err(Error::eval("hyp1f2", format!("precision escalation did not settle for z = {z:e}")))
}

fn native_tail<T: Real>(a: T, b1: T, b2: T, z: T, skip: usize, tol: T, max_terms: usize) -> (T, bool) {
    let mut term = T::one();
    let mut sum = T::zero();
    for k in 0..max_terms {
        let kf = T::from_usize_lossy(k);
        if k >= skip {
            sum = sum + term;
        }
        let ratio = (a + kf) * z / ((b1 + kf) * (b2 + kf) * (kf + T::one()));
        let next = term * ratio;
        if next == T::zero() {
            return (sum, true);
        }
        if k >= skip && ratio.abs() < T::one() && next.abs() <= tol * T::c(0.01) * sum.abs() {
            return (sum + next, true);
        }
        if !next.is_finite() {
            return (sum, false);
        }
        term = next;
    }
    (sum, false)
}

/// Natural log of the largest included term magnitude, `-∞` if all vanish.
fn log_max_term<T: Real>(a: T, b1: T, b2: T, z: T, skip: usize, max_terms: usize) -> Result<f64> {
    let (a, b1, b2, z) = (a.f64(), b1.f64(), b2.f64(), z.f64());
    let lz = z.abs().ln();
    let mut lt = 0.0f64;
    let mut best = f64::NEG_INFINITY;
    for k in 0..max_terms {
        let kf = k as f64;
        if k >= skip {
            best = best.max(lt);
        }
        if a + kf == 0.0 {
            return Ok(best);
        }
        let step = (a + kf).abs().ln() + lz - (b1 + kf).abs().ln() - (b2 + kf).abs().ln() - (kf + 1.0).ln();
        lt += step;
        if k >= skip && step < 0.0 && lt < best - 80.0 {
            return Ok(best);
        }
    }
    Err(Error::eval("hyp1f2", format!("term magnitudes still significant after {max_terms} terms")))
}

/// Exact dyadic representation `x = n / 2^d` of a finite float.
fn dyadic<T: Real>(x: T) -> (BigInt, u64) {
    let (mantissa, exponent, sign) = x.integer_decode();
    let mut n = BigInt::from(mantissa);
    if sign < 0 {
        n = -n;
    }
    if exponent >= 0 {
        (n << (exponent as usize), 0)
    } else {
        (n, (-(exponent as i64)) as u64)
    }
}

fn big_to_real<T: Real>(s: &BigInt, frac_bits: u64) -> T {
    if s.is_zero() {
        return T::zero();
    }
    let bits = s.bits();
    let (m, shift) = if bits > 64 { (s >> ((bits - 64) as usize), (bits - 64) as i64) } else { (s.clone(), 0) };
    let mf = m.to_f64().unwrap_or(f64::NAN);
    let e = shift - frac_bits as i64;
    let half = (e / 2) as i32;
    let rest = (e - e / 2) as i32;
    T::c(mf * 2f64.powi(half) * 2f64.powi(rest))
}

/// ₁F₂ series tail from index `skip`, summed in fixed point with
/// `frac_bits` fractional bits. Parameters are decoded exactly, so the only
/// error is one unit of truncation per term.
pub fn hyp1f2_with_precision<T: Real>(
    a: T,
    b1: T,
    b2: T,
    z: T,
    skip: usize,
    frac_bits: u64,
    max_terms: usize,
) -> Result<T> {
    check(a, b1, b2, z)?;
    let (na, da) = dyadic(a);
    let (nb1, db1) = dyadic(b1);
    let (nb2, db2) = dyadic(b2);
    let (nz, dz) = dyadic(z);
    let one_a = BigInt::one() << (da as usize);
    let one_b1 = BigInt::one() << (db1 as usize);
    let one_b2 = BigInt::one() << (db2 as usize);
    let num_shift = (db1 + db2) as usize;
    let den_shift = (da + dz) as usize;
    let mut term = BigInt::one() << (frac_bits as usize);
    let mut sum = BigInt::zero();
    let (mut ak, mut b1k, mut b2k) = (na, nb1, nb2);
    let mut past_peak = false;
    for k in 0..max_terms {
        if k >= skip {
            sum += &term;
        }
        if ak.is_zero() || (past_peak && term.is_zero()) {
            return Ok(big_to_real(&sum, frac_bits));
        }
        let num = (&term * &ak * &nz) << num_shift;
        let den = (&b1k * &b2k * BigInt::from(k + 1)) << den_shift;
        let next = num / den;
        past_peak = past_peak || next.abs() < term.abs();
        term = next;
        ak += &one_a;
        b1k += &one_b1;
        b2k += &one_b2;
    }
    Err(Error::eval("hyp1f2", format!("fixed-point series did not terminate in {max_terms} terms")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_sine() {
        // 1F2(1/2; 1/2, 3/2; -x²/4) = sin(x)/x
        let ctl = SeriesControl::default();
        for &x in &[0.3f64, 2.0, 17.0, 90.0] {
            let v = hyp1f2(0.5, 0.5, 1.5, -x * x / 4.0, &ctl).unwrap();
            let exact = x.sin() / x;
            assert!((v - exact).abs() <= 1e-10 * exact.abs().max(1e-300), "x={x}: {v} vs {exact}");
        }
    }

    #[test]
    fn tail_matches_difference() {
        let ctl = SeriesControl::default();
        let (a, b1, b2, z) = (-0.9, 0.5, 0.1, -0.25);
        let full = hyp1f2(a, b1, b2, z, &ctl).unwrap();
        let first = 1.0 + a * z / (b1 * b2);
        let tail = hyp1f2_tail(a, b1, b2, z, 2, &ctl).unwrap();
        assert!((full - first - tail).abs() < 1e-14);
    }

    #[test]
    fn pole_parameters() {
        let ctl = SeriesControl::default();
        assert!(matches!(hyp1f2(1.0, 0.0, 1.0, 1.0f64, &ctl), Err(Error::Domain(_))));
        assert!(matches!(hyp1f2(1.0, 1.0, -2.0, 1.0f64, &ctl), Err(Error::Domain(_))));
    }

    #[test]
    fn terminating_series() {
        // a = -2: 1 + a z/(b1 b2) + a(a+1) z²/(b1(b1+1) b2(b2+1) 2)
        let ctl = SeriesControl::default();
        let v = hyp1f2(-2.0, 1.0, 1.0, 3.0f64, &ctl).unwrap();
        assert!((v - (1.0 - 6.0 + 2.0 * 9.0 / 8.0)).abs() < 1e-14);
    }
}
