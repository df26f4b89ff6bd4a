use hwlaw::quad::{expect_gaussian, integrate, integrate_halfline, integrate_line, integrate_log};
use hwlaw::special::*;
use hwlaw::{QuadratureConfig, TabulatedCdf};
use proptest::prelude::*;
use std::f64::consts::PI;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn h(mu: f64, x: f64) -> f64 {
    hermite_h(HermiteOrder::new(mu).unwrap(), x, &cfg()).unwrap().value
}

#[test]
fn gaussian_moments() {
    let m2 = expect_gaussian(|x| x * x, 2.0, 0.0, &cfg()).unwrap().value;
    assert!((m2 - 2.0).abs() < 1e-12);
    let mgf = expect_gaussian(|x| (2.0 * x).exp(), 1.0, 2.0, &cfg()).unwrap().value;
    assert!((mgf - 2f64.exp()).abs() < 1e-10 * 2f64.exp());
    for f in [f64::sinh, f64::sin, |x: f64| x * x * x] {
        assert!(expect_gaussian(f, 1.0, 1.0, &cfg()).unwrap().value.abs() < 1e-12);
    }
}

#[test]
fn elementary_integrals() {
    assert!((integrate(f64::sin, 0.0, PI, &cfg()).unwrap().value - 2.0).abs() < 1e-12);
    let line = integrate_line(|x| (-x * x).exp(), &cfg()).unwrap().value;
    assert!((line - PI.sqrt()).abs() < 1e-12);
    let half = integrate_halfline(|x| (-x).exp(), 0.0, &cfg()).unwrap().value;
    assert!((half - 1.0).abs() < 1e-12);
    let log = integrate_log(|x| 1.0 / x, 1e-3, 1e3, &cfg()).unwrap().value;
    assert!((log - 6.0 * 10f64.ln()).abs() < 1e-10);
}

#[test]
fn gamma_and_incomplete_gamma() {
    assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
    assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
    assert!(gamma_fn(-1.0).is_err());
    assert_eq!(gamma_lower_regularized(1.5, 0.0).unwrap(), 0.0);
    assert!((gamma_lower_regularized(1.0, 2.0).unwrap() - (1.0 - (-2.0f64).exp())).abs() < 1e-14);
    assert!((gamma_lower_regularized(0.5, 1.0).unwrap() - erf_fn(1.0)).abs() < 1e-14);
}

#[test]
fn bessel_series() {
    // I₀(1), I₁(1), I₂(2)
    assert!((bessel_i(0.0, 1.0).unwrap() - 1.2660658777520084).abs() < 1e-15);
    assert!((bessel_i(1.0, 1.0).unwrap() - 0.5651591039924851).abs() < 1e-15);
    assert!((bessel_i(2.0, 2.0).unwrap() - 0.6889484476987382).abs() < 1e-14);
    assert!(bessel_i(0.0, 31.0).is_err());
    assert!(bessel_i(-1.0, 1.0).is_err());
}

#[test]
fn hermite_closed_cases() {
    for &x in &[-2.0, -0.3, 0.0, 0.7, 3.0] {
        assert_eq!(h(2.0, x), 4.0 * x * x - 2.0);
        let m1 = (x * x).exp() * 0.5 * PI.sqrt() * erfc_fn(x);
        assert!((h(-1.0, x) - m1).abs() < 1e-13 * m1);
    }
    // non-integer degree approaches the polynomial
    for &x in &[-1.0, 0.4, 2.0] {
        assert!((h(2.0 - 1e-7, x) - h(2.0, x)).abs() < 1e-5 * h(2.0, x).abs().max(1.0));
    }
    assert!(HermiteOrder::new(-1.5).is_err());
}

#[test]
fn tabulated_exponential() {
    let tab = TabulatedCdf::from_density(|x| Ok((-x).exp()), 0.0, 40.0, 4000, false).unwrap();
    for &x in &[0.1, 1.0, 5.0] {
        assert!((tab.cdf(x) - (1.0 - (-x).exp())).abs() < 1e-5);
    }
    assert_eq!(tab.cdf(-1.0), 0.0);
    assert!(TabulatedCdf::from_density(|x| Ok(x), 1.0, 0.5, 10, false).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hermite_recurrence_holds_for_real_degree(mu in 0.05f64..2.9, x in -2.5f64..2.5) {
        // H_{μ+1} = 2xH_μ − 2μH_{μ−1}
        let lhs = h(mu + 1.0, x);
        let rhs = 2.0 * x * h(mu, x) - 2.0 * mu * h(mu - 1.0, x);
        prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn gaussian_expectation_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, t in 0.1f64..4.0) {
        let f = |x: f64| x.cos();
        let g = |x: f64| (0.5 * x).exp();
        let lhs = expect_gaussian(|x| a * f(x) + b * g(x), t, 0.5, &cfg()).unwrap().value;
        let rhs = a * (-t / 2.0).exp() + b * (t / 8.0).exp();
        prop_assert!((lhs - rhs).abs() < 1e-10 * (a.abs() + b.abs()).max(1.0));
    }

    #[test]
    fn polynomial_recurrence_matches_closed_form(x in -5.0f64..5.0) {
        let h3 = 8.0 * x.powi(3) - 12.0 * x;
        prop_assert!((hermite_polynomial(3, x) - h3).abs() < 1e-12 * h3.abs().max(1.0));
    }
}
