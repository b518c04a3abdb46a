use crate::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum<T: Real>(z: T) -> T {
    // z is the shifted argument x - 1.
    let mut a = T::c(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a = a + T::c(c) / (z + T::from_usize_lossy(i));
    }
    a
}

/// Natural log of `|Γ(x)|`. Returns `+∞` at the poles.
pub fn ln_gamma<T: Real>(x: T) -> T {
    if x <= T::zero() && x == x.floor() {
        return T::infinity();
    }
    if x < T::c(0.5) {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx).
        let s = (T::PI() * x).sin().abs();
        return T::PI().ln() - s.ln() - ln_gamma(T::one() - x);
    }
    let z = x - T::one();
    let t = z + T::c(LANCZOS_G + 0.5);
    T::c(0.5) * T::TAU().ln() + (z + T::c(0.5)) * t.ln() - t + lanczos_sum(z).ln()
}

/// Gamma function for real arguments away from the poles.
pub fn gamma<T: Real>(x: T) -> T {
    if x <= T::zero() && x == x.floor() {
        return T::nan();
    }
    if x < T::c(0.5) {
        return T::PI() / ((T::PI() * x).sin() * gamma(T::one() - x));
    }
    let z = x - T::one();
    let t = z + T::c(LANCZOS_G + 0.5);
    T::TAU().sqrt() * t.powf(z + T::c(0.5)) * (-t).exp() * lanczos_sum(z)
}

/// Reciprocal gamma function `1/Γ(x)`, entire; zero at non-positive integers.
pub fn rgamma<T: Real>(x: T) -> T {
    if x <= T::zero() && x == x.floor() {
        return T::zero();
    }
    if x > T::c(170.0) {
        return (-ln_gamma(x)).exp();
    }
    if x < T::c(0.5) {
        return (T::PI() * x).sin() * gamma(T::one() - x) / T::PI();
    }
    T::one() / gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((gamma(5.0f64) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5f64) - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!((ln_gamma(100.0f64) - 359.134_205_369_575_4).abs() < 1e-11);
        assert!((gamma(-0.5f64) + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
        assert_eq!(rgamma(0.0f64), 0.0);
        assert_eq!(rgamma(-3.0f64), 0.0);
        assert!((rgamma(-0.2f64) - 1.0 / gamma(-0.2f64)).abs() < 1e-14);
    }
}
