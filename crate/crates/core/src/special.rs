//! Γ, incomplete Γ, erf, modified Bessel I_ν and Hermite functions of real degree.

use crate::error::{domain, Result};
use crate::quad::{adaptive, IntegralEstimate, QuadratureConfig};
use num_complex::Complex64;
use std::f64::consts::PI;

fn check_gamma_arg(x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("gamma requires x > 0, got {x}"));
    }
    Ok(())
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_gamma_arg(x)?;
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// Euler Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    check_gamma_arg(x)?;
    if x == x.floor() && x <= 171.0 {
        return Ok((1..x as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// Regularized lower incomplete gamma P(s, x).
pub fn gamma_lower_regularized(s: f64, x: f64) -> Result<f64> {
    check_gamma_arg(s)?;
    if !(x >= 0.0) {
        return domain(format!("incomplete gamma requires x >= 0, got {x}"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok(statrs::function::gamma::gamma_lr(s, x))
}

pub fn erf_fn(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc_fn(x: f64) -> f64 {
    libm::erfc(x)
}

/// Largest argument accepted by [`bessel_i`].
pub const BESSEL_I_MAX_X: f64 = 30.0;

/// Modified Bessel function of the first kind I_ν(x) by its ascending series.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return domain(format!("bessel_i requires nu >= 0, got {nu}"));
    }
    if !(0.0..=BESSEL_I_MAX_X).contains(&x) {
        return domain(format!("bessel_i supports 0 <= x <= {BESSEL_I_MAX_X}, got {x}"));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let half = 0.5 * x;
    let q = half * half;
    let mut term = (nu * half.ln() - ln_gamma(nu + 1.0)?).exp();
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (nu + k));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        k += 1.0;
    }
    Ok(sum)
}

/// Degree of a Hermite function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteOrder {
    pub mu: f64,
    pub is_integer: bool,
}

impl HermiteOrder {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu >= -1.0 && mu.is_finite()) {
            return domain(format!("Hermite degree must be >= -1, got {mu}"));
        }
        Ok(Self { mu, is_integer: mu >= 0.0 && mu == mu.floor() })
    }
}

/// Largest |x| accepted by the unscaled [`hermite_h`] on the integral path.
pub const HERMITE_MAX_ABS_X: f64 = 8.0;

/// Physicists' Hermite polynomial H_n(x).
pub fn hermite_polynomial(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// H_μ(x). Integer degrees use the three-term recurrence, μ = −1 the erfc
/// closed form, everything else the integral representation.
pub fn hermite_h(order: HermiteOrder, x: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if order.is_integer {
        return Ok(IntegralEstimate::exact(hermite_polynomial(order.mu as usize, x)));
    }
    if order.mu == -1.0 {
        return Ok(IntegralEstimate::exact((x * x).exp() * 0.5 * PI.sqrt() * erfc_fn(x)));
    }
    if x.abs() > HERMITE_MAX_ABS_X {
        return domain(format!("Hermite integral path supports |x| <= {HERMITE_MAX_ABS_X}, got {x}"));
    }
    Ok(hermite_integral_scaled(order.mu, x, cfg)?.scaled((x * x).exp()))
}

/// e^{−x²}H_μ(x) for any real x; stays finite where H_μ itself overflows.
pub fn hermite_scaled(order: HermiteOrder, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if order.is_integer {
        let h = hermite_polynomial(order.mu as usize, x);
        return Ok(if h == 0.0 { 0.0 } else { h * (-x * x).exp() });
    }
    if order.mu == -1.0 {
        return Ok(0.5 * PI.sqrt() * erfc_fn(x));
    }
    Ok(hermite_integral_scaled(order.mu, x, cfg)?.value)
}

/// ∫₀^∞ s^μ e^{−s²}cos(2xs − πμ/2) ds taken literally; the e^{x²}-scaled
/// version of this integral defines H_μ.
pub fn hermite_defining_integral(mu: f64, x: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    HermiteOrder::new(mu)?;
    if mu == -1.0 {
        return domain("the defining integral diverges at mu = -1");
    }
    let regular = |s: f64| Complex64::new((-s * s).exp() * (2.0 * x * s - 0.5 * PI * mu).cos(), 0.0);
    let (v, est) = origin_integral(mu, 9.5, &regular, inner_rel_tol(cfg));
    Ok(IntegralEstimate { value: v.re, ..est })
}

fn inner_rel_tol(cfg: &QuadratureConfig) -> f64 {
    cfg.rel_tol.min(1e-12).max(1e-15)
}

/// ∫₀^W s^μ·r(s) ds with r regular at 0; for μ < 0 substitutes s = q^{1/(μ+1)}.
fn origin_integral(
    mu: f64,
    upper: f64,
    regular: &impl Fn(f64) -> Complex64,
    rel_tol: f64,
) -> (Complex64, IntegralEstimate) {
    let a = if mu < 0.0 {
        let p = mu + 1.0;
        let h = |q: f64| regular(q.powf(1.0 / p)) * (1.0 / p);
        adaptive(&h, &[0.0, 0.5 * upper.powf(p), upper.powf(p)], 1e-300, rel_tol, 2000, |z: Complex64| z.norm())
    } else {
        let h = |s: f64| regular(s) * s.powf(mu);
        adaptive(&h, &[0.0, 0.5 * upper, upper], 1e-300, rel_tol, 2000, |z: Complex64| z.norm())
    };
    let est = IntegralEstimate { value: a.value.re, abs_error: a.error, evaluations: a.evaluations, converged: a.converged };
    (a.value, est)
}

/// Rotation angle of the integration ray for negative arguments.
const NEG_RAY: f64 = PI / 8.0;

/// e^{−x²}H_μ(x) from contour-shifted forms of the defining integral.
///
/// For x ≥ 1/2 the path is moved to Im s = x, giving
/// Re[e^{−iπμ/2}∫₀^∞(u+ix)^μ e^{−u²}du] with no e^{x²} cancellation. For x < 0
/// the ray is turned clockwise so e^{−2i|x|s} decays. Near the origin the
/// defining integral is used as is.
pub fn hermite_integral_scaled(mu: f64, x: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    HermiteOrder::new(mu)?;
    if mu == -1.0 {
        return domain("the integral representation diverges at mu = -1");
    }
    let c = 2f64.powf(mu + 1.0) / PI.sqrt();
    let rel = inner_rel_tol(cfg);
    if x >= 0.5 {
        let h = |u: f64| (Complex64::new(u, x)).powf(mu) * (-u * u).exp();
        let a = adaptive(&h, &[0.0, 1.0, 3.0, 9.5], 1e-300, rel, 2000, |z: Complex64| z.norm());
        let rot = Complex64::from_polar(1.0, -0.5 * PI * mu);
        let damp = (-x * x).exp();
        return Ok(IntegralEstimate {
            value: c * damp * (rot * a.value).re,
            abs_error: c * damp * a.error,
            evaluations: a.evaluations,
            converged: a.converged,
        });
    }
    if x >= 0.0 {
        let regular = |s: f64| Complex64::new((-s * s).exp() * (2.0 * x * s - 0.5 * PI * mu).cos(), 0.0);
        let (_, est) = origin_integral(mu, 9.5, &regular, rel);
        return Ok(est.scaled(c));
    }
    let ax = -x;
    let e2 = Complex64::from_polar(1.0, -2.0 * NEG_RAY);
    let e1 = Complex64::from_polar(1.0, -NEG_RAY);
    let upper = (45.0 / (2.0 * NEG_RAY).cos()).sqrt().min(45.0 / (2.0 * ax * NEG_RAY.sin()));
    let regular = |w: f64| (-(e2 * (w * w)) - Complex64::new(0.0, 2.0 * ax) * e1 * w).exp();
    let (v, est) = origin_integral(mu, upper, &regular, rel);
    let rot = Complex64::from_polar(1.0, -0.5 * PI * mu - NEG_RAY * (mu + 1.0));
    Ok(IntegralEstimate { value: c * (rot * v).re, abs_error: c * est.abs_error, ..est })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn gamma_values() {
        assert_relative_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert_relative_eq!(gamma_fn(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(5.0).unwrap(), 24.0);
        assert_relative_eq!(gamma_fn(3.7).unwrap(), 4.170651783796603, max_relative = 1e-13);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn incomplete_gamma_closed_cases() {
        for &x in &[0.0, 0.1, 0.5, 2.0, 9.0] {
            assert_relative_eq!(gamma_lower_regularized(1.0, x).unwrap(), 1.0 - (-x).exp(), epsilon = 1e-14);
            assert_relative_eq!(gamma_lower_regularized(0.5, x).unwrap(), erf_fn(x.sqrt()), epsilon = 1e-14);
        }
        assert_eq!(gamma_lower_regularized(2.0, f64::INFINITY).unwrap(), 1.0);
        assert!(gamma_lower_regularized(2.0, -1.0).is_err());
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &x in &[0.1, 0.7, 2.5, 17.3, 55.0] {
            assert_relative_eq!(ln_gamma(x).unwrap(), gamma_fn(x).unwrap().ln(), max_relative = 1e-13, epsilon = 1e-14);
        }
    }

    #[test]
    fn erf_values() {
        assert_eq!(erf_fn(0.0), 0.0);
        assert!((erf_fn(10.0) - 1.0).abs() <= 1e-15);
        assert_relative_eq!(erf_fn(1.0), 0.8427007929497149, max_relative = 1e-15);
        assert_eq!(erf_fn(-0.3), -erf_fn(0.3));
    }

    #[test]
    fn bessel_values() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1.0, 0.0).unwrap(), 0.0);
        let closed = (2.0 / PI).sqrt() * 1f64.sinh();
        assert_relative_eq!(bessel_i(0.5, 1.0).unwrap(), closed, max_relative = 1e-14);
        assert_relative_eq!(bessel_i(0.0, 1.0).unwrap(), 1.2660658777520082, max_relative = 1e-14);
        assert!(bessel_i(0.0, 31.0).is_err());
        assert!(bessel_i(-0.5, 1.0).is_err());
    }

    #[test]
    fn hermite_table_values() {
        let h = |mu: f64, x: f64| hermite_h(HermiteOrder::new(mu).unwrap(), x, &cfg()).unwrap().value;
        assert_eq!(h(0.0, 3.3), 1.0);
        assert_relative_eq!(h(1.0, 0.7), 1.4, max_relative = 1e-15);
        assert_relative_eq!(h(-1.0, 0.0), 0.886226925452758, max_relative = 1e-14);
        assert_relative_eq!(h(2.0, 1.0), 2.0);
        assert!(HermiteOrder::new(-1.5).is_err());
    }

    #[test]
    fn contour_forms_match_recurrence() {
        for n in 0..=8usize {
            for &x in &[-3.0, -1.2, -0.3, 0.0, 0.2, 0.5, 1.7, 3.0] {
                let s = hermite_integral_scaled(n as f64, x, &cfg()).unwrap().value;
                let exact = hermite_polynomial(n, x) * (-x * x).exp();
                let scale = (0..=n).map(|k| 2f64.powi(k as i32) * x.abs().powi(k as i32)).sum::<f64>() * (-x * x).exp();
                assert!((s - exact).abs() <= 1e-11 * scale.max(1.0), "n={n} x={x}: {s} vs {exact}");
            }
        }
    }

    #[test]
    fn contour_forms_match_defining_integral() {
        for &mu in &[-0.75, -0.5, 0.3, 1.5, 2.5] {
            for &x in &[-2.0, -0.7, 0.3, 0.6, 1.9] {
                let a = hermite_integral_scaled(mu, x, &cfg()).unwrap().value;
                let b = hermite_defining_integral(mu, x, &cfg()).unwrap().value * 2f64.powf(mu + 1.0) / PI.sqrt();
                assert!((a - b).abs() < 1e-11, "mu={mu} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn scaled_hermite_is_finite_far_out() {
        let o = HermiteOrder::new(0.5).unwrap();
        let x = -1e4f64;
        let far_neg = hermite_scaled(o, x, &cfg()).unwrap();
        // e^{−x²}H_μ(x) ~ √π/Γ(−μ)·|x|^{−μ−1} as x → −∞
        let asym = PI.sqrt() / (-2.0 * PI.sqrt()) * x.abs().powf(-1.5);
        assert_relative_eq!(far_neg, asym, max_relative = 1e-6);
        assert_eq!(hermite_scaled(o, 1e4, &cfg()).unwrap(), 0.0);
    }
}
