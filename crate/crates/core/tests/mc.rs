use hwlaw::bessel_law::{clock_cdf, survival_probability};
use hwlaw::exp_law::*;
use hwlaw::mc::*;
use hwlaw::{BesselParams, ExpFunctionalLaw, PathConfig, QuadratureConfig, TabulatedCdf};

fn loose() -> QuadratureConfig {
    QuadratureConfig::with_tol(1e-9, 1e-7)
}

#[test]
fn ensembles_are_deterministic() {
    let c = PathConfig::new(1.0, 200, 2000, 11).unwrap();
    let a = sample_bm_exp_functional(0.3, c).unwrap();
    let b = sample_bm_exp_functional(0.3, c).unwrap();
    assert_eq!(a, b);
    let d = sample_bm_exp_functional(0.3, c.with_seed(12)).unwrap();
    assert_ne!(a.functional_a, d.functional_a);
    assert_eq!(a.terminal_b.len(), 2000);
    assert!(a.functional_a.iter().all(|&x| x > 0.0));
    let mut x = Vec::new();
    let mut y = Vec::new();
    a.write_csv(&mut x).unwrap();
    b.write_csv(&mut y).unwrap();
    assert_eq!(x, y);
}

#[test]
fn invalid_configs() {
    assert!(PathConfig::new(1.0, 99, 1000, 0).is_err());
    assert!(PathConfig::new(1.0, 100, 999, 0).is_err());
    assert!(PathConfig::new(0.0, 100, 1000, 0).is_err());
}

#[test]
fn means_match_exact_moments() {
    let c = PathConfig::new(1.0, 500, 40_000, 5).unwrap();
    for &mu in &[-0.5, 0.0, 1.0] {
        let ens = sample_bm_exp_functional(mu, c).unwrap();
        let k = 2.0 * mu + 2.0;
        let ea = if k == 0.0 { 1.0 } else { (k.exp() - 1.0) / k };
        let m = ens.expectation(|_, a| a).unwrap();
        assert!(m.within(ea, 4.0), "mu={mu}: z={}", m.z_score(ea));
        let eb = (mu + 0.5f64).exp();
        let mb = ens.expectation(|b, _| b.exp()).unwrap();
        assert!(mb.within(eb, 4.0), "mu={mu}: z={}", mb.z_score(eb));
    }
}

#[test]
fn functional_matches_quadrature_law() {
    let c = PathConfig::new(1.0, 1000, 20_000, 21).unwrap();
    let ens = sample_bm_exp_functional(0.0, c).unwrap();
    let law = ExpFunctionalLaw::preferred(0.0, 1.0).unwrap();
    let (lo, hi) = a_mu_support(0.0, 1.0);
    let tab = TabulatedCdf::from_density(|v| density_a_mu(v, law, &loose()).map(|e| e.value), lo, hi, 2000, true).unwrap();
    let d = ks_statistic(&ens.functional_a, |x| tab.cdf(x)).unwrap();
    assert!(d < ks_threshold(ens.len()), "{d}");
}

#[test]
fn time_reversal_in_law() {
    let c = PathConfig::new(1.0, 1000, 20_000, 31).unwrap();
    let ens = sample_bm_exp_functional(0.0, c).unwrap();
    let rev: Vec<f64> = ens.terminal_b.iter().zip(&ens.functional_a).map(|(b, a)| (-2.0 * b).exp() * a).collect();
    let other = sample_bm_exp_functional(0.0, c.with_seed(derive_seed(31, 9))).unwrap();
    let d = ks_two_sample(&rev, &other.functional_a).unwrap();
    assert!(d < ks_two_sample_threshold(rev.len(), other.len()), "{d}");
}

#[test]
fn transform_identities_against_simulation() {
    let c = PathConfig::new(1.0, 1000, 40_000, 41).unwrap();
    let ens = sample_bm_exp_functional(0.0, c).unwrap();
    let q = loose();
    for &(lambda, r) in &[(0.5, 0.5), (1.0, 2.0), (2.0, 1.0)] {
        let rhs = laplace_joint_rhs(lambda, r, 1.0, LaplaceForm::Sinh, &q).unwrap().value;
        let m = laplace_joint_mc(&ens, lambda, r).unwrap();
        assert!(m.within(rhs, 3.0), "laplace ({lambda},{r}): z={}", m.z_score(rhs));
    }
    for n in 1..=2 {
        let rhs = hermite_indicator_moment_rhs(n, 0.5, 2.0, 1.0, &q).unwrap().value;
        let m = hermite_indicator_mc(&ens, n, 0.5, 2.0).unwrap();
        assert!(m.within(rhs, 3.0), "hermite n={n}: z={}", m.z_score(rhs));
    }
    let rhs = recip_exp_moment_rhs(1.0, 0.5, 2.0, 1.0, &q).unwrap().value;
    let m = recip_exp_mc(&ens, 1.0, 0.5, 2.0).unwrap();
    assert!(m.within(rhs, 3.0), "recip: z={}", m.z_score(rhs));
}

#[test]
fn reciprocal_moment_is_stable() {
    let c = PathConfig::new(1.0, 500, 20_000, 51).unwrap();
    let small = recip_moment_mc(&sample_bm_exp_functional(0.0, c).unwrap(), 0.4).unwrap();
    let big = recip_moment_mc(&sample_bm_exp_functional(0.0, PathConfig { n_paths: 40_000, ..c }).unwrap(), 0.4).unwrap();
    assert!(small.mean.is_finite() && big.mean.is_finite());
    let se = (small.std_error.powi(2) + big.std_error.powi(2)).sqrt();
    assert!((small.mean - big.mean).abs() < 4.0 * se, "{small:?} {big:?}");
}

#[test]
fn bougerol_identities() {
    let c = PathConfig::new(1.0, 1000, 20_000, 61).unwrap();
    for v in [BougerolVariant::Plain, BougerolVariant::Drifted] {
        let r = bougerol_check(1.0, v, c, None).unwrap();
        assert!(r.pass(), "{v:?}: {r:?}");
    }
    // a mismatched horizon on the sinh side must be detected
    let r = bougerol_check(1.0, BougerolVariant::Plain, c, Some(1.5)).unwrap();
    assert!(!r.pass(), "{r:?}");
}

#[test]
fn stieltjes_integrals_vanish() {
    for n in -3..=3 {
        for &t in &[0.5, 1.0, 2.0] {
            let e = stieltjes_check(n, t, &QuadratureConfig::default()).unwrap();
            assert!(e.value.abs() <= 1e-8, "n={n} t={t}: {}", e.value);
        }
    }
    assert!(stieltjes_check(11, 1.0, &QuadratureConfig::default()).is_err());
}

#[test]
fn clocks_match_quadrature_law() {
    let c = PathConfig::new(1.0, 400, 10_000, 71).unwrap();
    for &nu in &[0.0, 1.0] {
        let p = BesselParams::new(nu, 1.0, 1.0).unwrap();
        let ens = sample_bessel_clock(p, c).unwrap();
        assert_eq!(ens.count(ClockOutcome::Absorbed), 0);
        let tab = clock_cdf(p, ens.horizon, 800, &loose()).unwrap();
        let d = ks_statistic(&ens.surviving_clocks(), |x| tab.cdf(x)).unwrap();
        assert!(d < ks_threshold(ens.clock.len()), "nu={nu}: {d}");
    }
}

#[test]
fn absorbed_clocks_have_conditional_law() {
    let c = PathConfig::new(1.0, 400, 10_000, 81).unwrap();
    let p = BesselParams::new(-1.0, 1.0, 1.0).unwrap();
    let ens = sample_bessel_clock(p, c).unwrap();
    let s = survival_probability(p).unwrap();
    let frac = ens.survival_fraction().unwrap();
    assert!(frac.within(s, 3.0), "z={}", frac.z_score(s));
    let clocks = ens.surviving_clocks();
    assert!(clocks.iter().all(|x| x.is_finite()));
    let tab = clock_cdf(p, ens.horizon, 800, &loose()).unwrap();
    assert!((tab.mass() - s).abs() < 1e-3, "{} vs {s}", tab.mass());
    let d = ks_statistic(&clocks, |x| tab.conditional(x)).unwrap();
    assert!(d < ks_threshold(clocks.len()), "{d}");
}

#[test]
fn ks_statistic_small_cases() {
    let d = ks_statistic(&[0.5], |x| x.clamp(0.0, 1.0)).unwrap();
    assert!((d - 0.5).abs() < 1e-15);
    assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
    assert!((ks_threshold(10_000) - 0.0195).abs() < 1e-15);
}
