use hwlaw::theta::{
    companion_expectation, g_derivative, quarter_prefactor, theta, theta_g, theta_g_sin, theta_normalized, theta_value,
};
use hwlaw::{QuadratureConfig, ThetaPoint, ThetaRep};
use proptest::prelude::*;
use std::f64::consts::PI;

// Frozen from a brute-force trapezoid of Yor's sinh-sin integral (see `yor_trapezoid`).
const GOLDEN: [(f64, f64, f64); 3] =
    [(1.0, 1.0, 0.739076531303232), (2.0, 0.5, 4.0453290901483), (0.5, 2.0, 0.221266435124419)];

/// Θ(r,t) = r e^{π²/2t}/√(2π³t) ∫₀^∞ e^{−y²/2t − r cosh y} sinh y sin(πy/t) dy
/// by the plain trapezoid rule on [0, 30] with 10⁶ panels. The integrand is
/// even and analytic, so the rule converges geometrically.
fn yor_trapezoid(r: f64, t: f64) -> f64 {
    let n = 1_000_000;
    let h = 30.0 / n as f64;
    let mut s = 0.0;
    for i in 1..n {
        let y = i as f64 * h;
        s += (-y * y / (2.0 * t) - r * y.cosh()).exp() * y.sinh() * (PI * y / t).sin();
    }
    r * (PI * PI / (2.0 * t)).exp() / (2.0 * PI.powi(3) * t).sqrt() * s * h
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn golden_constants_match_trapezoid_oracle() {
    for &(r, t, want) in &GOLDEN {
        let got = yor_trapezoid(r, t);
        assert!((got - want).abs() < 1e-12 * want.max(1.0), "oracle ({r},{t}): {got} vs {want}");
    }
}

#[test]
fn default_representation_reproduces_golden_constants() {
    for &(r, t, want) in &GOLDEN {
        let e = theta(ThetaPoint::new(r, t).unwrap(), ThetaRep::CoshCosCos, &cfg()).unwrap();
        assert!(e.converged);
        assert!((e.value - want).abs() <= 1e-10 * want, "({r},{t}): {} vs {want}", e.value);
    }
}

#[test]
fn zero_shift_is_the_default_form() {
    let p = ThetaPoint::new(1.0, 1.0).unwrap();
    let a = theta(p, ThetaRep::CoshCosCos, &cfg()).unwrap().value;
    let b = theta(p, ThetaRep::Shifted(0.0), &cfg()).unwrap().value;
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn all_representations_agree() {
    let reps = [
        ThetaRep::YorSinhSin,
        ThetaRep::CoshCosCos,
        ThetaRep::CoshSinSin,
        ThetaRep::Averaged,
        ThetaRep::Shifted(0.3),
        ThetaRep::Shifted(-1.7),
    ];
    for &(r, t) in &[(2.0, 0.5), (0.1, 1.0), (5.0, 2.0), (10.0, 0.25)] {
        let p = ThetaPoint::new(r, t).unwrap();
        let vals: Vec<f64> = reps.iter().map(|&rep| theta(p, rep, &cfg()).unwrap().value).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(hi - lo <= 1e-8 * hi.abs().max(1.0), "({r},{t}): {vals:?}");
    }
}

#[test]
fn large_argument_uses_rotated_route() {
    // phase r·sinh(L) far past the direct budget
    let p = ThetaPoint::new(300.0, 1.0).unwrap();
    let a = theta(p, ThetaRep::CoshCosCos, &cfg()).unwrap();
    let b = theta(p, ThetaRep::Averaged, &cfg()).unwrap();
    assert!(a.converged && b.converged);
    assert!((a.value - b.value).abs() <= 1e-10);
}

#[test]
fn domain_errors() {
    assert!(ThetaPoint::new(-1.0, 1.0).is_err());
    assert!(ThetaPoint::new(1.0, 0.0).is_err());
    assert!(ThetaPoint::new(1.0, f64::NAN).is_err());
    let p = ThetaPoint::new(1.0, 0.2).unwrap();
    assert!(theta(p, ThetaRep::YorSinhSin, &cfg()).is_err());
    assert!(theta(p, ThetaRep::CoshCosCos, &cfg()).is_ok());
    assert!(theta(p, ThetaRep::Shifted(f64::INFINITY), &cfg()).is_err());
    let bad = QuadratureConfig { rel_tol: -1.0, ..cfg() };
    assert!(theta(ThetaPoint::new(1.0, 1.0).unwrap(), ThetaRep::CoshCosCos, &bad).is_err());
}

#[test]
fn g_links_to_theta_and_its_sine_form() {
    let g = theta_g(1.0, 1.0, &cfg()).unwrap().value;
    let th = 1.0 / PI * quarter_prefactor(1.0) * g;
    assert!((th - GOLDEN[0].2).abs() < 1e-10);
    let gs = theta_g_sin(1.0, 1.0, &cfg()).unwrap().value;
    assert!((g - gs).abs() < 1e-12);
    assert!(theta_g(1e-4, 1.0, &cfg()).unwrap().value.abs() < 1e-3);
}

#[test]
fn companion_vanishes() {
    for &(r, t) in &[(0.5, 0.5), (1.0, 1.0), (3.0, 2.0)] {
        let c = companion_expectation(r, t, &cfg()).unwrap();
        assert!(c.value.abs() < 1e-10, "({r},{t}): {}", c.value);
    }
}

#[test]
fn derivative_matches_finite_difference() {
    let h = 1e-3;
    let gp = theta_g(1.0 + h, 1.0, &cfg()).unwrap().value;
    let gm = theta_g(1.0 - h, 1.0, &cfg()).unwrap().value;
    let fd = (gp - gm) / (2.0 * h);
    let d1 = g_derivative(1, 1.0, 1.0, &cfg()).unwrap().value;
    assert!((fd - d1).abs() < 1e-5, "{fd} vs {d1}");
    let g0 = g_derivative(0, 0.7, 1.0, &cfg()).unwrap().value;
    assert!((g0 - theta_g(0.7, 1.0, &cfg()).unwrap().value).abs() < 1e-12);
}

#[test]
fn derivatives_vanish_near_origin() {
    assert!(g_derivative(0, 1e-5, 1.0, &cfg()).unwrap().value.abs() < 1e-4);
    assert!(g_derivative(3, 1e-5, 1.0, &cfg()).unwrap().value.abs() < 1e-3);
    assert!(g_derivative(7, 1e-3, 1.0, &cfg()).is_err());
}

#[test]
fn normalized_theta_at_golden_point() {
    let e = theta_normalized(ThetaPoint::new(1.0, 1.0).unwrap(), &cfg()).unwrap();
    assert!((e.value - GOLDEN[0].2 / 1.2660658777520084).abs() < 1e-10);
}

#[test]
fn flatness_of_theta_in_r() {
    for k in 1..=6 {
        let far = theta_value(1e-2, 1.0, &cfg()).unwrap().abs() / 1e-2f64.powi(k);
        let near = theta_value(1e-3, 1.0, &cfg()).unwrap().abs() / 1e-3f64.powi(k);
        assert!(near < far, "k={k}: {near} !< {far}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shift_does_not_change_value(nu in -3.0f64..3.0, r in 0.2f64..4.0, t in 0.4f64..2.5) {
        let p = ThetaPoint::new(r, t).unwrap();
        let base = theta(p, ThetaRep::CoshCosCos, &cfg()).unwrap().value;
        let shifted = theta(p, ThetaRep::Shifted(nu), &cfg()).unwrap().value;
        prop_assert!((base - shifted).abs() <= 1e-9 * base.abs().max(1.0));
    }

    #[test]
    fn label_round_trips(nu in -5.0f64..5.0) {
        let rep = ThetaRep::Shifted(nu);
        prop_assert_eq!(ThetaRep::parse(&rep.label()), Some(rep));
    }
}
