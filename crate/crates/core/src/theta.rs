//! The Hartman–Watson function Θ(r,t) and the auxiliary g(r).
//!
//! Θ(r,t) is characterized by ∫₀^∞ e^{−λ²t/2}Θ(r,t)dt = I_|λ|(r).

use crate::error::{domain, Result};
use crate::quad::{
    expect_gaussian, expect_sinh_fourier, integrate_breaks, integrate_halfline, FourierRoute, IntegralEstimate,
    QuadratureConfig, T_MIN,
};
use crate::special::bessel_i;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Smallest t accepted by the sinh·sin representation, whose e^{π²/2t}
/// prefactor is the fourth power of the others.
pub const YOR_T_MIN: f64 = 0.25;

/// Integral representations of Θ(r,t).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ThetaRep {
    /// (r/2π)e^{π²/2t}E[e^{−r cosh B_t} sinh B_t sin(πB_t/t)]
    YorSinhSin,
    /// (r/π)e^{π²/8t}E[cosh B_t cos(r sinh B_t) cos(πB_t/2t)]
    CoshCosCos,
    /// (r/π)e^{π²/8t}E[cosh B_t sin(r sinh B_t) sin(πB_t/2t)]
    CoshSinSin,
    /// (r/2π)e^{π²/8t}E[cosh B_t cos(r sinh B_t − πB_t/2t)]
    Averaged,
    /// (r/π)e^{π²/8t}E[cosh B_t cos(r sinh B_t − ν) cos(πB_t/2t − ν)]
    Shifted(f64),
}

impl Default for ThetaRep {
    fn default() -> Self {
        ThetaRep::CoshCosCos
    }
}

impl ThetaRep {
    /// The four fixed representations.
    pub const FIXED: [ThetaRep; 4] =
        [ThetaRep::YorSinhSin, ThetaRep::CoshCosCos, ThetaRep::CoshSinSin, ThetaRep::Averaged];

    pub fn label(&self) -> String {
        match self {
            ThetaRep::YorSinhSin => "yor".into(),
            ThetaRep::CoshCosCos => "coscos".into(),
            ThetaRep::CoshSinSin => "sinsin".into(),
            ThetaRep::Averaged => "averaged".into(),
            ThetaRep::Shifted(nu) => format!("shifted:{nu}"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "yor" => Some(ThetaRep::YorSinhSin),
            "coscos" => Some(ThetaRep::CoshCosCos),
            "sinsin" => Some(ThetaRep::CoshSinSin),
            "averaged" => Some(ThetaRep::Averaged),
            _ => {
                let nu = s.strip_prefix("shifted:")?.parse::<f64>().ok()?;
                nu.is_finite().then_some(ThetaRep::Shifted(nu))
            }
        }
    }
}

/// A point (r, t) in the domain of Θ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaPoint {
    pub r: f64,
    pub t: f64,
}

impl ThetaPoint {
    pub fn new(r: f64, t: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return domain(format!("r must be positive, got {r}"));
        }
        check_t(t)?;
        Ok(Self { r, t })
    }
}

pub(crate) fn check_t(t: f64) -> Result<()> {
    if !(t >= T_MIN && t.is_finite()) {
        return domain(format!("t must be at least {T_MIN}, got {t}"));
    }
    Ok(())
}

/// Prefactor e^{π²/8t}.
pub fn quarter_prefactor(t: f64) -> f64 {
    (PI * PI / (8.0 * t)).exp()
}

/// Convert tolerances on a quantity `scale·E[...]` into tolerances on the expectation.
pub(crate) fn inner_cfg(cfg: &QuadratureConfig, scale: f64) -> QuadratureConfig {
    cfg.with_abs_tol(cfg.abs_tol / scale.abs())
}

/// E[Re(e^{iω sinh B_t}A(B_t))] with the automatic route.
pub(crate) fn fourier(
    omega: f64,
    amp: impl Fn(Complex64) -> Complex64,
    growth: f64,
    t: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    expect_sinh_fourier(omega, amp, growth, t, FourierRoute::Auto, cfg)
}

fn shifted_expectation(r: f64, t: f64, nu: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let phase = Complex64::from_polar(1.0, -nu);
    let k = PI / (2.0 * t);
    fourier(r, |z| phase * z.cosh() * (z * k - nu).cos(), 1.0, t, cfg)
}

/// Θ(r,t) through the chosen representation.
pub fn theta(p: ThetaPoint, rep: ThetaRep, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    cfg.validate()?;
    let ThetaPoint { r, t } = ThetaPoint::new(p.r, p.t)?;
    let k = PI / (2.0 * t);
    match rep {
        ThetaRep::YorSinhSin => {
            if t < YOR_T_MIN {
                return domain(format!("the sinh-sin representation needs t >= {YOR_T_MIN}, got {t}"));
            }
            let pref = r / (2.0 * PI) * (PI * PI / (2.0 * t)).exp();
            let f = |x: f64| (-r * x.cosh()).exp() * x.sinh() * (2.0 * k * x).sin();
            Ok(expect_gaussian(f, t, 1.0, &inner_cfg(cfg, pref))?.scaled(pref))
        }
        ThetaRep::CoshCosCos => theta(p, ThetaRep::Shifted(0.0), cfg),
        ThetaRep::CoshSinSin => {
            let pref = r / PI * quarter_prefactor(t);
            let amp = |z: Complex64| Complex64::new(0.0, -1.0) * z.cosh() * (z * k).sin();
            Ok(fourier(r, amp, 1.0, t, &inner_cfg(cfg, pref))?.scaled(pref))
        }
        ThetaRep::Averaged => {
            let pref = r / (2.0 * PI) * quarter_prefactor(t);
            let amp = |z: Complex64| z.cosh() * (Complex64::new(0.0, -k) * z).exp();
            Ok(fourier(r, amp, 1.0, t, &inner_cfg(cfg, pref))?.scaled(pref))
        }
        ThetaRep::Shifted(nu) => {
            if !nu.is_finite() {
                return domain("shift must be finite");
            }
            let pref = r / PI * quarter_prefactor(t);
            Ok(shifted_expectation(r, t, nu, &inner_cfg(cfg, pref))?.scaled(pref))
        }
    }
}

/// Θ(r,t) with the default representation, returning only the value.
pub fn theta_value(r: f64, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(theta(ThetaPoint::new(r, t)?, ThetaRep::default(), cfg)?.value)
}

/// g(r) = E[cosh B_t cos(r sinh B_t) cos(πB_t/2t)], so Θ = (r/π)e^{π²/8t}g.
pub fn theta_g(r: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    cfg.validate()?;
    check_r(r)?;
    check_t(t)?;
    shifted_expectation(r, t, 0.0, cfg)
}

/// The companion form E[cosh B_t sin(r sinh B_t) sin(πB_t/2t)] of g(r).
pub fn theta_g_sin(r: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    cfg.validate()?;
    check_r(r)?;
    check_t(t)?;
    let k = PI / (2.0 * t);
    fourier(r, |z| Complex64::new(0.0, -1.0) * z.cosh() * (z * k).sin(), 1.0, t, cfg)
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return domain(format!("r must be nonnegative, got {r}"));
    }
    Ok(())
}

/// Highest derivative order of g supported.
pub const G_DERIVATIVE_MAX: usize = 6;

/// g^{(n)}(r) from the differentiated expectation formulas.
///
/// g^{(2m)} = (−1)^m E[cosh B sinh^{2m}B sin(r sinh B) sin(πB/2t)],
/// g^{(2m+1)} = (−1)^{m+1} E[cosh B sinh^{2m+1}B sin(r sinh B) cos(πB/2t)].
pub fn g_derivative(n: usize, r: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    cfg.validate()?;
    if n > G_DERIVATIVE_MAX {
        return domain(format!("derivative order must be at most {G_DERIVATIVE_MAX}, got {n}"));
    }
    check_r(r)?;
    check_t(t)?;
    let k = PI / (2.0 * t);
    let m = n / 2;
    let sign = if (m + n % 2) % 2 == 0 { 1.0 } else { -1.0 };
    let even = n % 2 == 0;
    let amp = |z: Complex64| {
        let trig = if even { (z * k).sin() } else { (z * k).cos() };
        // sin(r sinh) = Re(−i e^{ir sinh})
        Complex64::new(0.0, -sign) * z.cosh() * z.sinh().powu(n as u32) * trig
    };
    fourier(r, amp, (n + 1) as f64, t, cfg)
}

/// E[cosh B_t cos(r sinh B_t + πB_t/2t)], which vanishes for every r and t.
pub fn companion_expectation(r: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    cfg.validate()?;
    check_r(r)?;
    check_t(t)?;
    let k = PI / (2.0 * t);
    fourier(r, |z| z.cosh() * (Complex64::new(0.0, k) * z).exp(), 1.0, t, cfg)
}

/// E[cosh B_t sin(r sinh B_t + πB_t/2t − 2ν)], which vanishes for every r, ν.
pub fn odd_shift_expectation(r: f64, nu: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    cfg.validate()?;
    check_r(r)?;
    check_t(t)?;
    let k = PI / (2.0 * t);
    let amp = |z: Complex64| Complex64::new(0.0, -1.0) * z.cosh() * (Complex64::new(0.0, 1.0) * (z * k - 2.0 * nu)).exp();
    fourier(r, amp, 1.0, t, cfg)
}

/// Outcome of a numerical check of an integral identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// Error bound on the numerical side(s).
    pub abs_error: f64,
    pub converged: bool,
}

impl IdentityCheck {
    pub fn new(lhs: IntegralEstimate, rhs: IntegralEstimate) -> Self {
        Self {
            lhs: lhs.value,
            rhs: rhs.value,
            residual: (lhs.value - rhs.value).abs(),
            abs_error: lhs.abs_error + rhs.abs_error,
            converged: lhs.converged && rhs.converged,
        }
    }
}

/// ∫₀^∞ (dr/r)e^{−r cosh x}Θ(r,t) against e^{−x²/2t}/√(2πt).
pub fn check_laplace_r(x: f64, t: f64, cfg: &QuadratureConfig) -> Result<IdentityCheck> {
    cfg.validate()?;
    check_t(t)?;
    if !x.is_finite() {
        return domain("x must be finite");
    }
    let c = x.cosh();
    let pref = quarter_prefactor(t) / PI;
    // |g| ≤ E[cosh B_t] = e^{t/2}
    let bound = pref * (0.5 * t).exp();
    let tail = cfg.tail_budget();
    let r_max = (bound / (c * tail)).ln().max(1.0) / c;
    let inner = inner_cfg(&cfg.tightened(1e-2), pref);
    let err_cell = std::cell::Cell::new((0.0f64, true));
    let integrand = |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        match theta_g(r, t, &inner) {
            Ok(g) => {
                let (e, ok) = err_cell.get();
                err_cell.set((e.max(g.abs_error), ok && g.converged));
                pref * (-r * c).exp() * g.value
            }
            Err(_) => f64::NAN,
        }
    };
    let n = 8;
    let breaks: Vec<f64> = (0..=n).map(|i| r_max * i as f64 / n as f64).collect();
    let lhs = integrate_breaks(integrand, &breaks, cfg)?;
    let (inner_err, inner_ok) = err_cell.get();
    let lhs = IntegralEstimate {
        abs_error: lhs.abs_error + tail + pref * inner_err / c,
        converged: lhs.converged && inner_ok,
        ..lhs
    };
    let rhs = IntegralEstimate::exact((-x * x / (2.0 * t)).exp() / (2.0 * PI * t).sqrt());
    Ok(IdentityCheck::new(lhs, rhs))
}

/// K₀(r) = ∫₀^∞ e^{−r cosh u} du.
pub fn bessel_k0(r: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("K0 requires r > 0, got {r}"));
    }
    integrate_halfline(|u| (-r * u.cosh()).exp(), 0.0, cfg)
}

/// Numerical Laplace transform in t of Θ(r,·), with its truncation bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaplaceInT {
    /// ∫_{t_min}^{T_max} e^{−λ²t/2}Θ(r,t)dt plus the analytic large-t tail when λ = 0.
    pub value: IntegralEstimate,
    pub t_min: f64,
    pub t_max: f64,
    /// Bound on the neglected mass below t_min.
    pub small_t_bound: f64,
    /// Contribution (λ = 0) or bound (λ > 0) of the mass above t_max.
    pub large_t_tail: f64,
}

/// Upper truncation of the t-integral when λ = 0; the rest comes from
/// Θ(r,t) ~ K₀(r)t^{−3/2}/√(2π).
pub const LAPLACE_T_MAX_ZERO_LAMBDA: f64 = 1e8;

/// ∫₀^∞ e^{−λ²t/2}Θ(r,t)dt in the variable s = ln t.
pub fn laplace_in_t(r: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<LaplaceInT> {
    cfg.validate()?;
    if !(r > 0.0 && r <= 10.0) {
        return domain(format!("r must lie in (0, 10], got {r}"));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return domain(format!("lambda must be nonnegative, got {lambda}"));
    }
    let l2 = lambda * lambda;
    let t_max = if lambda == 0.0 { LAPLACE_T_MAX_ZERO_LAMBDA } else { (40.0f64).max(40.0 / l2) };
    let inner = cfg.tightened(1e-2);
    let err_cell = std::cell::Cell::new((0.0f64, true));
    let integrand = |s: f64| {
        let t = s.exp();
        match theta(ThetaPoint { r, t }, ThetaRep::CoshCosCos, &inner) {
            Ok(th) => {
                let w = t * (-0.5 * l2 * t).exp();
                let (e, ok) = err_cell.get();
                err_cell.set((e + w * th.abs_error, ok && th.converged));
                w * th.value
            }
            Err(_) => f64::NAN,
        }
    };
    let (a, b) = (T_MIN.ln(), t_max.ln());
    let n = ((b - a) / 0.5).ceil() as usize;
    let breaks: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    let body = integrate_breaks(integrand, &breaks, cfg)?;
    let (_, inner_ok) = err_cell.get();
    let k0 = bessel_k0(r, &QuadratureConfig::with_tol(1e-15, 1e-14))?.value;
    let asym = k0 / (2.0 * PI).sqrt();
    let large_t_tail = if lambda == 0.0 {
        asym * 2.0 / t_max.sqrt()
    } else {
        asym * t_max.powf(-1.5) * 2.0 / l2 * (-0.5 * l2 * t_max).exp()
    };
    let th_min = theta(ThetaPoint { r, t: T_MIN }, ThetaRep::CoshCosCos, cfg)?;
    let small_t_bound = T_MIN * (th_min.value.abs() + th_min.abs_error);
    let mut value = IntegralEstimate { converged: body.converged && inner_ok, ..body };
    if lambda == 0.0 {
        // relative size of the next asymptotic term at t_max
        value = value.plus(IntegralEstimate::exact(large_t_tail)).with_extra_error(large_t_tail * 10.0 / t_max);
    } else {
        value = value.with_extra_error(large_t_tail);
    }
    value = value.with_extra_error(small_t_bound);
    Ok(LaplaceInT { value, t_min: T_MIN, t_max, small_t_bound, large_t_tail })
}

/// ∫e^{−λ²t/2}Θ(r,t)dt against I_|λ|(r).
pub fn check_laplace_t(r: f64, lambda: f64, cfg: &QuadratureConfig) -> Result<(IdentityCheck, LaplaceInT)> {
    let lt = laplace_in_t(r, lambda, cfg)?;
    let rhs = IntegralEstimate::exact(bessel_i(lambda.abs(), r)?);
    Ok((IdentityCheck::new(lt.value, rhs), lt))
}

/// Θ(r,t)/I₀(r), a probability density in t.
pub fn theta_normalized(p: ThetaPoint, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let i0 = bessel_i(0.0, p.r)?;
    Ok(theta(p, ThetaRep::default(), &cfg.with_abs_tol(cfg.abs_tol * i0))?.scaled(1.0 / i0))
}
