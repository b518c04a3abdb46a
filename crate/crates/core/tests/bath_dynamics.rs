use approx::assert_relative_eq;
use qbm_ring::bath::{memory_kernel_laplace, noise_kernel, omega_s, spectral_density, BathSpec};
use qbm_ring::dynamics::{
    classical_action, classical_paths, classical_trajectory, g_ddot, g_fun, kappa, tau_damp, tau_damp_with,
    DampingSearch, FundamentalSolution, PathBoundary,
};
use qbm_ring::quad::QuadControl;
use qbm_ring::{BathSpecF64, Error};

fn spec(s: f64, g: f64) -> BathSpecF64 {
    BathSpec::new(s, g, 1e8, 0.0).unwrap()
}

#[test]
fn spectral_density_shape() {
    let sp = BathSpec::new(1.0, 1.0, 10.0, 0.0).unwrap();
    assert_eq!(spectral_density(&sp, 1.0, 2.0), 2.0);
    assert_eq!(spectral_density(&sp, 1.0, 0.0), 0.0);
    let sp = BathSpec::new(1.2, 1.0, 10.0, 0.0).unwrap();
    assert_eq!(spectral_density(&sp, 1.0, 10.0 + 1e-9), 0.0);
}

#[test]
fn omega_s_values() {
    assert_relative_eq!(omega_s(&spec(1.0, 1.0)), 1.0, max_relative = 1e-15);
    assert_relative_eq!(omega_s(&spec(1.0, 0.7)), 0.7, max_relative = 1e-15);
    assert_relative_eq!(omega_s(&spec(0.5, 1.0)), 2f64.sqrt().powf(2.0 / 3.0), max_relative = 1e-14);
}

#[test]
fn memory_kernel_values() {
    let sp = spec(1.0, 1.3);
    for z in [0.1, 1.0, 50.0] {
        assert_relative_eq!(memory_kernel_laplace(&sp, z), 1.3, max_relative = 1e-14);
    }
    let sp = spec(1.5, 1.0);
    assert_relative_eq!(memory_kernel_laplace(&sp, 4.0), omega_s(&sp).sqrt() * 2.0, max_relative = 1e-14);
    assert!(memory_kernel_laplace(&sp, 1e-30) < 1e-14);
}

#[test]
fn noise_kernel_at_zero_time() {
    let ctl = QuadControl::default();
    let sp = BathSpec::new(1.0, 1.0, 1.0, 0.0).unwrap();
    assert_relative_eq!(noise_kernel(&sp, 1.0, 0.0, &ctl).unwrap(), 1.0 / (2.0 * std::f64::consts::PI), max_relative = 1e-10);
    for s in [0.5, 1.2, 1.8] {
        let sp = BathSpec::new(s, 2.0, 3.0, 0.0).unwrap();
        let want = 0.5 * 2.0 * 3f64.powf(s + 1.0) / (std::f64::consts::PI * (s + 1.0));
        assert_relative_eq!(noise_kernel(&sp, 0.5, 0.0, &ctl).unwrap(), want, max_relative = 1e-10);
    }
}

#[test]
fn bath_spec_validation() {
    assert!(matches!(BathSpec::new(0.0, 1.0, 1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(BathSpec::new(2.0, 1.0, 1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(BathSpec::new(1.0, 0.0, 1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(BathSpec::new(1.0, 1.0, -1.0, 0.0), Err(Error::Domain(_))));
    assert!(matches!(BathSpec::new(1.0, 1.0, 1.0, -1.0), Err(Error::Domain(_))));
}

#[test]
fn ohmic_fundamental_solution() {
    let sp = spec(1.0, 1.0);
    let (g, gd) = g_fun(&sp, 1.0).unwrap();
    assert_relative_eq!(g, 1.0 - (-1f64).exp(), max_relative = 1e-12);
    assert_relative_eq!(gd, (-1f64).exp(), max_relative = 1e-12);
    assert_eq!(g_fun(&sp, 0.0).unwrap(), (0.0, 1.0));
    assert_relative_eq!(g_ddot(&sp, 1.0).unwrap(), -(-1f64).exp(), max_relative = 1e-10);
}

#[test]
fn super_ohmic_fundamental_solution_reference() {
    // Talbot inversion of 1/(z² + zγ̂(z)) at t = 1, 64 nodes.
    let sp = spec(1.2, 1.0);
    let (g, gd) = g_fun(&sp, 1.0).unwrap();
    assert!(g > 0.0 && g < 1.0);
    assert!(gd > 0.0 && gd < 1.0);
    let h = 1e-5;
    let (gp, _) = g_fun(&sp, 1.0 + h).unwrap();
    let (gm, _) = g_fun(&sp, 1.0 - h).unwrap();
    assert_relative_eq!((gp - gm) / (2.0 * h), gd, max_relative = 1e-8);
}

#[test]
fn tabulated_solution_interpolates() {
    let sp = spec(0.8, 1.0);
    let grid: Vec<f64> = (0..=100).map(|k| k as f64 * 0.05).collect();
    let tab = FundamentalSolution::tabulate(&sp, grid).unwrap();
    assert_eq!(tab.len(), 101);
    let (g, _) = g_fun(&sp, 1.234).unwrap();
    assert_relative_eq!(tab.interpolate_g(1.234).unwrap(), g, max_relative = 1e-5);
    assert!(tab.interpolate_g(10.0).is_none());
    assert!(FundamentalSolution::tabulate(&sp, vec![0.0, 1.0, 0.5]).is_err());
}

#[test]
fn trajectory_limits() {
    let weak = spec(1.2, 1e-14);
    for t in [0.5, 3.0, 40.0] {
        assert_relative_eq!(classical_trajectory(0.3, 0.0, &weak, t).unwrap(), 0.3, max_relative = 1e-10);
    }
    let ohmic = spec(1.0, 1.0);
    assert_relative_eq!(classical_trajectory(0.0, 1.0, &ohmic, 1.0).unwrap(), 1.0 - (-1f64).exp(), max_relative = 1e-12);
}

#[test]
fn kappa_values() {
    let sp = spec(1.0, 1.0);
    let (ki, kf) = kappa(&sp, 0.0, 1.0).unwrap();
    assert_relative_eq!(ki, 1.0, max_relative = 1e-12);
    assert!(kf.abs() < 1e-14);
    let (ki, kf) = kappa(&sp, 1.0, 1.0).unwrap();
    assert!(ki.abs() < 1e-12);
    assert_relative_eq!(kf, 1.0, max_relative = 1e-12);
    let (_, kf) = kappa(&sp, 0.5, 1.0).unwrap();
    assert_relative_eq!(kf, (1.0 - (-0.5f64).exp()) / (1.0 - (-1f64).exp()), max_relative = 1e-12);
}

#[test]
fn classical_paths_hit_boundaries() {
    let sp = spec(1.2, 1.0);
    let b = PathBoundary::new(0.2, 1.1, -0.4, 0.7, 2.0).unwrap();
    let (p0, m0) = classical_paths(&b, &sp, 0.0).unwrap();
    let (p1, m1) = classical_paths(&b, &sp, 2.0).unwrap();
    assert_relative_eq!(p0, 0.2, epsilon = 1e-12);
    assert_relative_eq!(m0, -0.4, epsilon = 1e-12);
    assert_relative_eq!(p1, 1.1, epsilon = 1e-12);
    assert_relative_eq!(m1, 0.7, epsilon = 1e-12);
}

#[test]
fn ohmic_classical_paths_closed_form() {
    let sp = spec(1.0, 1.0);
    let b = PathBoundary::new(0.0, 1.0, 0.0, 1.0, 1.0).unwrap();
    let (p, m) = classical_paths(&b, &sp, 0.5).unwrap();
    let want = (1.0 - (-0.5f64).exp()) / (1.0 - (-1f64).exp());
    assert_relative_eq!(p, want, max_relative = 1e-12);
    // φ⁻ runs backwards in time: κ_f(t − u) = κ_f(0.5) again at u = 0.5.
    assert!(m.is_finite());
}

#[test]
fn classical_action_matches_finite_differences() {
    let sp = spec(1.0, 1.0);
    let inertia = 1.0;
    let b = PathBoundary::new(0.0, 1.0, 0.0, 1.0, 1.0).unwrap();
    let zero = PathBoundary::new(0.0, 1.0, 0.0, 0.0, 1.0).unwrap();
    assert_eq!(classical_action(&zero, &sp, inertia).unwrap(), 0.0);
    let h = 1e-6;
    let dphi = |u: f64| {
        let (a, _) = classical_paths(&b, &sp, u + h).unwrap();
        let (c, _) = classical_paths(&b, &sp, u - h).unwrap();
        (a - c) / (2.0 * h)
    };
    let fd = -inertia * (1.0 * dphi(1.0 - h) - 0.0 * dphi(h));
    assert_relative_eq!(classical_action(&b, &sp, inertia).unwrap(), fd, max_relative = 1e-5);
}

#[test]
fn damping_time() {
    assert_relative_eq!(tau_damp(&spec(1.0, 1.0)).unwrap(), 1.0, max_relative = 1e-6);
    // Ġ decays on the scale 1/ω_s, so a vanishing coupling only fails once a time cap applies.
    let capped = DampingSearch { max_time: Some(1e6), ..DampingSearch::default() };
    assert!(matches!(tau_damp_with(&spec(1.2, 1e-20), &capped), Err(Error::NotFound { .. })));
    let coarse = tau_damp(&spec(0.5, 1.0)).unwrap();
    let fine = tau_damp_with(&spec(0.5, 1.0), &DampingSearch { rel_tol: 1e-12, ..DampingSearch::default() }).unwrap();
    assert_relative_eq!(coarse, fine, max_relative = 2e-6);
}
