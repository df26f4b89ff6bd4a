//! Laws of A_t^{(μ)} = ∫₀^t e^{2(B_s+μs)}ds and of the pair (B_t, A_t).

use crate::error::{domain, Result};
use crate::quad::{expect_gaussian, integrate_breaks, integrate_log, IntegralEstimate, QuadratureConfig};
use crate::special::{hermite_scaled, HermiteOrder};
use crate::theta::{check_t, fourier, inner_cfg, quarter_prefactor, theta, theta_g, ThetaPoint, ThetaRep};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityMethod {
    /// Outer r-integral of r^{μ−1}e^{−vr²/2}Θ(r,t).
    DoubleIntegral,
    /// Single Gaussian expectation with H_μ, for μ > −1.
    Hermite,
    /// Integration by parts down from μ + 1, for μ ∈ {−3/2, −2}.
    NegIBP,
}

impl DensityMethod {
    /// Cheapest method valid for `mu`.
    pub fn preferred(mu: f64) -> Self {
        if mu > -1.0 {
            DensityMethod::Hermite
        } else if mu == -1.5 || mu == -2.0 {
            DensityMethod::NegIBP
        } else {
            DensityMethod::DoubleIntegral
        }
    }
}

/// Drift, horizon and evaluation method for the density of A_t^{(μ)}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpFunctionalLaw {
    pub mu: f64,
    pub t: f64,
    pub method: DensityMethod,
}

impl ExpFunctionalLaw {
    pub fn new(mu: f64, t: f64, method: DensityMethod) -> Result<Self> {
        if !mu.is_finite() {
            return domain("drift must be finite");
        }
        check_t(t)?;
        match method {
            DensityMethod::Hermite if !(mu > -1.0) => domain(format!("Hermite method needs mu > -1, got {mu}")),
            DensityMethod::NegIBP if mu != -1.5 && mu != -2.0 => {
                domain(format!("integration by parts is implemented for mu = -3/2 and -2 only, got {mu}"))
            }
            _ => Ok(Self { mu, t, method }),
        }
    }

    pub fn preferred(mu: f64, t: f64) -> Result<Self> {
        Self::new(mu, t, DensityMethod::preferred(mu))
    }
}

/// Normalizing constants C_μ(t) = e^{π²/8t − μ²t/2}/√(2^{μ+1}π) and c_t = e^{π²/8t}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormConstant {
    pub c_mu_t: f64,
    pub c_t: f64,
}

impl NormConstant {
    pub fn new(mu: f64, t: f64) -> Self {
        let c_t = quarter_prefactor(t);
        Self { c_mu_t: c_t * (-0.5 * mu * mu * t).exp() / (2f64.powf(mu + 1.0) * PI).sqrt(), c_t }
    }
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return domain(format!("{name} must be positive, got {x}"));
    }
    Ok(())
}

/// Density of (B_t, A_t) at (x, v).
pub fn joint_density_b_a(x: f64, v: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_positive("v", v)?;
    check_t(t)?;
    if !x.is_finite() {
        return domain("x must be finite");
    }
    let weight = (-(1.0 + (2.0 * x).exp()) / (2.0 * v)).exp() / v;
    if weight == 0.0 {
        return Ok(IntegralEstimate::exact(0.0));
    }
    let th = theta(ThetaPoint::new(x.exp() / v, t)?, ThetaRep::default(), &cfg.with_abs_tol(cfg.abs_tol / weight))?;
    Ok(th.scaled(weight))
}

/// Density of (e^{B_t}, A_t) at (u, v).
pub fn joint_density_expb_a(u: f64, v: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_positive("u", u)?;
    check_positive("v", v)?;
    check_t(t)?;
    let weight = (-(1.0 + u * u) / (2.0 * v)).exp() / (u * v);
    if weight == 0.0 {
        return Ok(IntegralEstimate::exact(0.0));
    }
    let th = theta(ThetaPoint::new(u / v, t)?, ThetaRep::default(), &cfg.with_abs_tol(cfg.abs_tol / weight))?;
    Ok(th.scaled(weight))
}

/// Θ(·, t) cached on quadrature nodes so several r-integrals at one t share kernel calls.
pub struct ThetaMemo {
    t: f64,
    table: Mutex<HashMap<u64, IntegralEstimate>>,
}

impl ThetaMemo {
    pub fn new(t: f64) -> Result<Self> {
        check_t(t)?;
        Ok(Self { t, table: Mutex::new(HashMap::new()) })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn len(&self) -> usize {
        self.table.lock().map(|m| m.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Θ(r, t) at the accuracy floor of the default representation.
    pub fn get(&self, r: f64) -> Result<IntegralEstimate> {
        if let Some(e) = self.table.lock().ok().and_then(|m| m.get(&r.to_bits()).copied()) {
            return Ok(e);
        }
        let e = theta_at_floor(r, self.t)?;
        if let Ok(mut m) = self.table.lock() {
            m.insert(r.to_bits(), e);
        }
        Ok(e)
    }
}

/// Θ(r,t) with tolerances near the roundoff floor of its expectation.
pub(crate) fn theta_at_floor(r: f64, t: f64) -> Result<IntegralEstimate> {
    let floor = 64.0 * f64::EPSILON * r / PI * quarter_prefactor(t) * (0.5 * t).exp();
    theta(ThetaPoint::new(r, t)?, ThetaRep::default(), &QuadratureConfig::with_tol(floor, 1e-13))
}

/// Window [r_lo, r_hi] outside which r^{p}Θ(r,t)e^{−vr²/2} is negligible.
///
/// The lower end uses Θ(r,t) ≤ exp(−ln²(2/r)/2t), an empirical envelope of
/// the flatness at r = 0+.
pub(crate) fn r_window(p: f64, v: f64, t: f64) -> (f64, f64) {
    let target = 18.0 * std::f64::consts::LN_10;
    let m = (-p).max(0.0);
    let mut rho = 1.0f64;
    while rho * rho / (2.0 * t) - m * (rho - std::f64::consts::LN_2) < target && rho < 700.0 {
        rho += 0.25;
    }
    let lo = 2.0 * (-rho).exp();
    let base = 45.0 + PI * PI / (8.0 * t) + 0.5 * t;
    let mut hi = 10.0f64;
    for _ in 0..4 {
        hi = (2.0 * (base + (p + 1.0).max(0.0) * hi.ln().max(0.0)) / v).sqrt();
    }
    (lo, hi.max(4.0 * lo))
}

const R_GRID: f64 = 0.5;

/// ∫₀^∞ r^{p}e^{−vr²/2}Θ(r,t)dr on the window from [`r_window`].
pub(crate) fn theta_moment(p: f64, v: f64, memo: &ThetaMemo, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let t = memo.t();
    let (lo, hi) = r_window(p, v, t);
    // breakpoints on a fixed grid in ln r, so calls at different v reuse memo entries
    let k_lo = (lo.ln() / R_GRID).floor() as i64;
    let k_hi = (hi.ln() / R_GRID).ceil() as i64;
    let breaks: Vec<f64> = (k_lo..=k_hi).map(|k| k as f64 * R_GRID).collect();
    let (a, b) = (breaks[0], breaks[breaks.len() - 1]);
    let failed = std::cell::Cell::new(false);
    let err = std::cell::Cell::new(0.0f64);
    let f = |s: f64| {
        let r = s.exp();
        match memo.get(r) {
            Ok(th) => {
                let w = r.powf(p + 1.0) * (-0.5 * v * r * r).exp();
                err.set(err.get().max(w * th.abs_error));
                w * th.value
            }
            Err(_) => {
                failed.set(true);
                0.0
            }
        }
    };
    let est = integrate_breaks(f, &breaks, cfg)?;
    if failed.get() {
        return domain("kernel evaluation failed inside the r-integral");
    }
    Ok(est.with_extra_error(err.get() * (b - a)))
}

/// ∫₀^∞ r^{μ}e^{−vr²/2}g(r)dr for μ > −1, via the Hermite function.
fn g_moment_hermite(mu: f64, v: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let order = HermiteOrder::new(mu)?;
    let c = (PI / (2.0 * v).powf(mu + 1.0)).sqrt();
    let s = 1.0 / (2.0 * v).sqrt();
    let k = PI / (2.0 * t);
    let hcfg = *cfg;
    let f = |x: f64| {
        let z = x.sinh() * s;
        let h = hermite_scaled(order, z, &hcfg).unwrap_or(f64::NAN);
        h * x.cosh() * (k * x - 0.5 * PI * mu).cos()
    };
    let growth = 2.0 + mu.abs();
    Ok(expect_gaussian(f, t, growth, &inner_cfg(cfg, c))?.scaled(c))
}

/// ∫₀^∞ r^{μ}e^{−vr²/2}g(r)dr for μ ∈ {−3/2, −2} by one integration by parts.
fn g_moment_ibp(mu: f64, v: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let k = PI / (2.0 * t);
    let s = 1.0 / (2.0 * v).sqrt();
    if mu == -1.5 {
        // I(−3/2) = −2v I(1/2) − 2E[cosh B sinh B h_{−1/2}(z) cos(πB/2t + 3π/4)]
        let upper = g_moment_hermite(0.5, v, t, cfg)?.scaled(-2.0 * v);
        let order = HermiteOrder::new(-0.5)?;
        let c = (PI / (2.0 * v).sqrt()).sqrt();
        let hcfg = *cfg;
        let f = |x: f64| {
            let h = hermite_scaled(order, x.sinh() * s, &hcfg).unwrap_or(f64::NAN);
            x.cosh() * x.sinh() * h * (k * x + 0.75 * PI).cos()
        };
        let corr = expect_gaussian(f, t, 2.5, &inner_cfg(cfg, 2.0 * c))?.scaled(-2.0 * c);
        Ok(upper.plus(corr))
    } else if mu == -2.0 {
        // I(−2) = −v I(0) − (π/2)E[cosh B sinh B cos(πB/2t) erf(z)], erf = 1 − (2/√π)e^{−z²}H_{−1}
        let upper = g_moment_hermite(0.0, v, t, cfg)?.scaled(-v);
        let order = HermiteOrder::new(-1.0)?;
        let hcfg = *cfg;
        let f = |x: f64| {
            let h = hermite_scaled(order, x.sinh() * s, &hcfg).unwrap_or(f64::NAN);
            let erf = 1.0 - 2.0 / PI.sqrt() * h;
            x.cosh() * x.sinh() * (k * x).cos() * erf
        };
        let corr = expect_gaussian(f, t, 2.0, &inner_cfg(cfg, 0.5 * PI))?.scaled(-0.5 * PI);
        Ok(upper.plus(corr))
    } else {
        domain(format!("integration by parts is implemented for mu = -3/2 and -2 only, got {mu}"))
    }
}

/// Density of A_t^{(μ)} at v.
pub fn density_a_mu(v: f64, law: ExpFunctionalLaw, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let law = ExpFunctionalLaw::new(law.mu, law.t, law.method)?;
    match law.method {
        DensityMethod::DoubleIntegral => {
            let memo = ThetaMemo::new(law.t)?;
            density_a_mu_memo(v, law.mu, &memo, cfg)
        }
        _ => {
            check_positive("v", v)?;
            let (mu, t) = (law.mu, law.t);
            let pref = v.powf(mu - 1.0) * (-0.5 / v - 0.5 * mu * mu * t).exp() * quarter_prefactor(t) / PI;
            if pref == 0.0 {
                return Ok(IntegralEstimate::exact(0.0));
            }
            let icfg = inner_cfg(cfg, pref);
            let moment = if law.method == DensityMethod::Hermite {
                g_moment_hermite(mu, v, t, &icfg)?
            } else {
                g_moment_ibp(mu, v, t, &icfg)?
            };
            Ok(moment.scaled(pref))
        }
    }
}

/// Double-integral density sharing Θ evaluations through `memo`.
pub fn density_a_mu_memo(v: f64, mu: f64, memo: &ThetaMemo, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_positive("v", v)?;
    if !mu.is_finite() {
        return domain("drift must be finite");
    }
    let t = memo.t();
    let pref = v.powf(mu - 1.0) * (-0.5 / v - 0.5 * mu * mu * t).exp();
    if pref == 0.0 {
        return Ok(IntegralEstimate::exact(0.0));
    }
    Ok(theta_moment(mu - 1.0, v, memo, &inner_cfg(cfg, pref))?.scaled(pref))
}

/// Density of A_t^{(μ)} from the joint law of (e^{B_t}, A_t):
/// e^{−μ²t/2}∫₀^∞ u^μ p(u, v) du.
pub fn density_a_mu_from_joint(v: f64, mu: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_positive("v", v)?;
    check_t(t)?;
    let (lo, hi) = r_window(mu - 1.0, v, t);
    let pref = (-0.5 * mu * mu * t).exp();
    let kcfg = cfg.tightened(1e-3);
    let f = |u: f64| {
        joint_density_expb_a(u, v, t, &kcfg.with_abs_tol(kcfg.abs_tol * u.powf(-mu).min(1e300)))
            .map(|p| u.powf(mu) * p.value)
            .unwrap_or(f64::NAN)
    };
    Ok(integrate_log(f, lo * v, hi * v, &inner_cfg(cfg, pref))?.scaled(pref))
}

/// The μ = 0 density in closed single-expectation form,
/// c_t E[cosh B_t/√(2πv³) e^{−cosh²B_t/2v} cos(πB_t/2t)].
pub fn density_a0_explicit(v: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_positive("v", v)?;
    check_t(t)?;
    let pref = quarter_prefactor(t) / (2.0 * PI * v * v * v).sqrt();
    let k = PI / (2.0 * t);
    let f = |x: f64| {
        let c = x.cosh();
        c * (-c * c / (2.0 * v)).exp() * (k * x).cos()
    };
    Ok(expect_gaussian(f, t, 1.0, &inner_cfg(cfg, pref))?.scaled(pref))
}

/// The μ = 1 density, e^{π²/8t − t/2}E[sinh 2B_t/√(8πv³) e^{−cosh²B_t/2v} sin(πB_t/2t)].
pub fn density_a1_explicit(v: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_positive("v", v)?;
    check_t(t)?;
    let pref = quarter_prefactor(t) * (-0.5 * t).exp() / (8.0 * PI * v * v * v).sqrt();
    let k = PI / (2.0 * t);
    let f = |x: f64| {
        let c = x.cosh();
        (2.0 * x).sinh() * (-c * c / (2.0 * v)).exp() * (k * x).sin()
    };
    Ok(expect_gaussian(f, t, 2.0, &inner_cfg(cfg, pref))?.scaled(pref))
}

/// Range [v_lo, v_hi] carrying all but a negligible part of the law of A_t^{(μ)}.
pub fn a_mu_support(mu: f64, t: f64) -> (f64, f64) {
    let lo = 1.0 / 120.0;
    let hi = t * (2.0 * mu.max(0.0) * t + 16.0 * t.sqrt()).exp();
    (lo, hi.max(10.0))
}

/// ∫ density_a_mu(v) dv over the support window.
pub fn density_a_mu_mass(law: ExpFunctionalLaw, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let law = ExpFunctionalLaw::new(law.mu, law.t, law.method)?;
    let (lo, hi) = a_mu_support(law.mu, law.t);
    let dcfg = cfg.tightened(1e-2);
    let memo = ThetaMemo::new(law.t)?;
    let f = |v: f64| {
        let d = if law.method == DensityMethod::DoubleIntegral {
            density_a_mu_memo(v, law.mu, &memo, &dcfg)
        } else {
            density_a_mu(v, law, &dcfg)
        };
        d.map(|e| e.value).unwrap_or(f64::NAN)
    };
    integrate_log(f, lo, hi, cfg)
}

/// Density of (e^{2B_t}/A_t, A_t) at (u, v).
pub fn joint_density_ratio_a(u: f64, v: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_positive("u", u)?;
    check_positive("v", v)?;
    check_t(t)?;
    let pref = quarter_prefactor(t) * (-0.5 * u - 0.5 / v).exp() / (2.0 * PI * (u * v * v * v).sqrt());
    if pref == 0.0 {
        return Ok(IntegralEstimate::exact(0.0));
    }
    Ok(theta_g((u / v).sqrt(), t, &inner_cfg(cfg, pref))?.scaled(pref))
}

/// Density of (e^{−2B_t}A_t, A_t) at (w, v); symmetric in (w, v).
pub fn time_reversed_density(w: f64, v: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_positive("w", w)?;
    let jac = 1.0 / (w * w);
    Ok(joint_density_ratio_a(1.0 / w, v, t, &cfg.with_abs_tol(cfg.abs_tol / jac))?.scaled(jac))
}

/// ∫₀^∞ joint_density_ratio_a(u, v) du, the density of A_t at v.
pub fn ratio_marginal(v: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_positive("v", v)?;
    check_t(t)?;
    let kcfg = cfg.tightened(1e-2);
    // u = s², so e^{−u/2}/√u du becomes 2e^{−s²/2} ds
    let f = |s: f64| {
        if s == 0.0 {
            return 0.0;
        }
        joint_density_ratio_a(s * s, v, t, &kcfg).map(|p| 2.0 * s * p.value).unwrap_or(f64::NAN)
    };
    let breaks: Vec<f64> = (0..=16).map(|i| 12.0 * i as f64 / 16.0).collect();
    integrate_breaks(f, &breaks, cfg)
}

/// Which side of the joint Laplace identity to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LaplaceForm {
    /// E[e^{−λ cosh B_t}cos(r sinh B_t)]
    Sinh,
    /// e^{π²/8t}E[e^{−r cosh B_t}cos(πB_t/2t + λ sinh B_t)]
    Shifted,
}

/// E[exp(−λe^{B_t} − (λ²+r²)A_t/2)] in closed expectation form.
pub fn laplace_joint_rhs(lambda: f64, r: f64, t: f64, form: LaplaceForm, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if !(lambda >= 0.0 && r >= 0.0 && lambda.is_finite() && r.is_finite()) {
        return domain(format!("lambda and r must be nonnegative, got {lambda}, {r}"));
    }
    check_t(t)?;
    match form {
        LaplaceForm::Sinh => fourier(r, |z| (-lambda * z.cosh()).exp(), 1.0, t, cfg),
        LaplaceForm::Shifted => {
            let c = quarter_prefactor(t);
            let k = PI / (2.0 * t);
            let amp = |z: Complex64| (-r * z.cosh()).exp() * (Complex64::new(0.0, k) * z).exp();
            Ok(fourier(lambda, amp, 0.0, t, &inner_cfg(cfg, c))?.scaled(c))
        }
    }
}

/// Below this A_t carries no mass at double precision.
pub const LAMBDA_V_MIN: f64 = 1e-4;

/// Interval Λ = (v_lo, v_hi); v_hi = ∞ runs to the end of [`a_mu_support`].
fn lambda_window(v_lo: f64, v_hi: f64, t: f64) -> Result<(f64, f64)> {
    if !(v_lo >= 0.0 && v_hi > v_lo) {
        return domain(format!("need 0 <= v_lo < v_hi, got ({v_lo}, {v_hi})"));
    }
    let (_, s_hi) = a_mu_support(0.0, t);
    Ok((v_lo.max(LAMBDA_V_MIN), if v_hi.is_finite() { v_hi } else { s_hi }))
}

/// c_t∫_Λ dv E[(cosh B_t/√(2πv³))e^{−cosh²B_t/2v}cos(πB_t/2t + πn/2)(√(2/v) sinh B_t)^n],
/// which equals E[H_n(−e^{B_t}/√(2A_t)); A_t ∈ Λ].
pub fn hermite_indicator_moment_rhs(n: usize, v_lo: f64, v_hi: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if n > 6 {
        return domain(format!("moment order must be at most 6, got {n}"));
    }
    check_t(t)?;
    let (lo, hi) = lambda_window(v_lo, v_hi, t)?;
    let c_t = quarter_prefactor(t);
    let k = PI / (2.0 * t);
    let phase = 0.5 * PI * n as f64;
    let icfg = cfg.tightened(1e-2);
    let inner = |v: f64| {
        let pref = c_t / (2.0 * PI * v * v * v).sqrt();
        let s = (2.0 / v).sqrt();
        let f = |x: f64| {
            let c = x.cosh();
            c * (-c * c / (2.0 * v)).exp() * (k * x + phase).cos() * (s * x.sinh()).powi(n as i32)
        };
        expect_gaussian(f, t, (n + 1) as f64, &inner_cfg(&icfg, pref)).map(|e| pref * e.value).unwrap_or(f64::NAN)
    };
    integrate_log(inner, lo, hi, cfg)
}

/// c_t∫_Λ (dv/√(2πv³))e^{−1/2v}E[cosh B_t cos(πB_t/2t)(1+α)^{−1/2}e^{−sinh²B_t/(2(1+α)v)}],
/// which equals E[exp(−αe^{2B_t}/2A_t); A_t ∈ Λ].
pub fn recip_exp_moment_rhs(alpha: f64, v_lo: f64, v_hi: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return domain(format!("alpha must be nonnegative, got {alpha}"));
    }
    check_t(t)?;
    let (lo, hi) = lambda_window(v_lo, v_hi, t)?;
    let c_t = quarter_prefactor(t);
    let k = PI / (2.0 * t);
    let icfg = cfg.tightened(1e-2);
    let inner = |v: f64| {
        let pref = c_t / (2.0 * PI * v * v * v).sqrt() * (-0.5 / v).exp() / (1.0 + alpha).sqrt();
        if pref == 0.0 {
            return 0.0;
        }
        let f = |x: f64| {
            let s = x.sinh();
            x.cosh() * (k * x).cos() * (-s * s / (2.0 * (1.0 + alpha) * v)).exp()
        };
        expect_gaussian(f, t, 1.0, &inner_cfg(&icfg, pref)).map(|e| pref * e.value).unwrap_or(f64::NAN)
    };
    integrate_log(inner, lo, hi, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::T_MIN;

    #[test]
    fn law_validation() {
        assert!(ExpFunctionalLaw::new(-1.0, 1.0, DensityMethod::Hermite).is_err());
        assert!(ExpFunctionalLaw::new(-1.0, 1.0, DensityMethod::NegIBP).is_err());
        assert!(ExpFunctionalLaw::new(-1.5, 1.0, DensityMethod::NegIBP).is_ok());
        assert!(ExpFunctionalLaw::new(-7.0, 1.0, DensityMethod::DoubleIntegral).is_ok());
        assert!(ExpFunctionalLaw::new(0.0, T_MIN / 2.0, DensityMethod::Hermite).is_err());
    }

    #[test]
    fn preferred_methods() {
        assert_eq!(DensityMethod::preferred(0.3), DensityMethod::Hermite);
        assert_eq!(DensityMethod::preferred(-2.0), DensityMethod::NegIBP);
        assert_eq!(DensityMethod::preferred(-1.0), DensityMethod::DoubleIntegral);
    }

    #[test]
    fn norm_constants_positive() {
        let c = NormConstant::new(-0.5, 2.0);
        assert!(c.c_mu_t > 0.0 && c.c_t > 0.0);
        assert!((NormConstant::new(0.0, 1.0).c_mu_t - quarter_prefactor(1.0) / (2.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn window_is_ordered() {
        for &(p, v, t) in &[(-3.0, 0.25, 2.0), (1.0, 4.0, 0.5), (-2.5, 1.0, 1.0)] {
            let (lo, hi) = r_window(p, v, t);
            assert!(0.0 < lo && lo < hi);
        }
    }
}
