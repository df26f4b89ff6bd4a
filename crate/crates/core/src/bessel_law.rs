//! Bessel processes of index ν: transition density, survival, and the law of
//! the clock ∫₀^t ds/R_s² on {t < τ₀}.

use crate::error::{domain, Result};
use crate::exp_law::{a_mu_support, density_a_mu, density_a_mu_memo, theta_moment, DensityMethod, ExpFunctionalLaw, ThetaMemo};
use crate::quad::{expect_gaussian, integrate, integrate_log, IntegralEstimate, QuadratureConfig, TabulatedCdf, T_MIN};
use crate::special::{bessel_i, gamma_lower_regularized, BESSEL_I_MAX_X};
use crate::theta::{check_t, inner_cfg, laplace_in_t, quarter_prefactor, theta, ThetaPoint, ThetaRep};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Index, starting point and horizon of a Bessel process.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesselParams {
    pub nu: f64,
    pub a: f64,
    pub t: f64,
    /// Dimension 2(ν+1).
    pub delta: f64,
}

impl BesselParams {
    pub fn new(nu: f64, a: f64, t: f64) -> Result<Self> {
        if !nu.is_finite() {
            return domain("index must be finite");
        }
        if !(a > 0.0 && a.is_finite()) {
            return domain(format!("starting point must be positive, got {a}"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return domain(format!("horizon must be positive, got {t}"));
        }
        Ok(Self { nu, a, t, delta: 2.0 * (nu + 1.0) })
    }

    /// t/a², the only combination of (a, t) the clock law depends on.
    pub fn scaled_horizon(&self) -> f64 {
        self.t / (self.a * self.a)
    }
}

/// D(μ, u, v): density of A_u^{(μ)} at v.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DFunction {
    pub mu: f64,
    pub u: f64,
    pub v: f64,
}

impl DFunction {
    pub fn new(mu: f64, u: f64, v: f64) -> Result<Self> {
        check_t(u)?;
        if !(v > 0.0) {
            return domain(format!("v must be positive, got {v}"));
        }
        Ok(Self { mu, u, v })
    }

    pub fn value(&self, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
        density_a_mu(self.v, ExpFunctionalLaw::preferred(self.mu, self.u)?, cfg)
    }
}

/// Transition density of R from a to r over time t (killed at 0 when ν < 0).
pub fn bessel_transition_density(p: BesselParams, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("r must be positive, got {r}"));
    }
    let x = p.a * r / p.t;
    if x > BESSEL_I_MAX_X {
        return domain(format!("a r / t = {x} exceeds the Bessel range {BESSEL_I_MAX_X}"));
    }
    let log_front = (r / p.t).ln() + p.nu * (r / p.a).ln() - (p.a * p.a + r * r) / (2.0 * p.t);
    Ok(log_front.exp() * bessel_i(p.nu.abs(), x)?)
}

/// P(t < τ₀): 1 for ν ≥ 0, else the regularized lower incomplete gamma P(|ν|, a²/2t).
pub fn survival_probability(p: BesselParams) -> Result<f64> {
    if p.nu >= 0.0 {
        return Ok(1.0);
    }
    gamma_lower_regularized(-p.nu, p.a * p.a / (2.0 * p.t))
}

/// ∫ bessel_transition_density dr over the range where it is representable.
pub fn transition_mass(p: BesselParams, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let r_hi = (BESSEL_I_MAX_X * p.t / p.a).min(p.a + 40.0 * p.t.sqrt());
    let f = |r: f64| if r <= 0.0 { 0.0 } else { bessel_transition_density(p, r).unwrap_or(f64::NAN) };
    integrate(f, 0.0, r_hi, cfg)
}

/// Joint density of (R_t, ∫₀^t ds/R_s²) at (r, u) on {t < τ₀}.
pub fn joint_density_r_clock(p: BesselParams, r: f64, u: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("r must be positive, got {r}"));
    }
    check_t(u)?;
    let log_w = (p.nu + 1.0) * r.ln() - p.t.ln() - p.nu * p.a.ln() - (p.a * p.a + r * r) / (2.0 * p.t) - 0.5 * p.nu * p.nu * u;
    let w = log_w.exp();
    if w == 0.0 {
        return Ok(IntegralEstimate::exact(0.0));
    }
    let th = theta(ThetaPoint::new(p.a * r / p.t, u)?, ThetaRep::default(), &cfg.with_abs_tol(cfg.abs_tol / w))?;
    Ok(th.scaled(w))
}

/// ∫ joint_density_r_clock(r, u) du, the clock integrated out through the
/// Laplace transform of Θ in its time argument. Mass below t_min is bounded, not added.
pub fn r_marginal_of_joint(p: BesselParams, r: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if !(r > 0.0 && r.is_finite()) {
        return domain(format!("r must be positive, got {r}"));
    }
    let w = ((p.nu + 1.0) * r.ln() - p.t.ln() - p.nu * p.a.ln() - (p.a * p.a + r * r) / (2.0 * p.t)).exp();
    let lt = laplace_in_t(p.a * r / p.t, p.nu.abs(), &cfg.with_abs_tol(cfg.abs_tol / w.max(f64::MIN_POSITIVE)))?;
    Ok(lt.value.with_extra_error(lt.small_t_bound).scaled(w))
}

/// Density of the clock at u on {t < τ₀}, from the r-integral of Θ.
pub fn density_clock(p: BesselParams, u: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let memo = ThetaMemo::new(u)?;
    density_clock_memo(p, &memo, cfg)
}

/// [`density_clock`] at u = `memo.t()`, reusing Θ evaluations.
pub fn density_clock_memo(p: BesselParams, memo: &ThetaMemo, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let u = memo.t();
    let s = p.scaled_horizon();
    // substituting ρ = a r/t leaves only s = t/a²
    let pref = ((p.nu + 1.0) * s.ln() - 0.5 / s - 0.5 * p.nu * p.nu * u).exp();
    if pref == 0.0 {
        return Ok(IntegralEstimate::exact(0.0));
    }
    Ok(theta_moment(p.nu + 1.0, s, memo, &inner_cfg(cfg, pref))?.scaled(pref))
}

/// e^{δu}D(ν+2, u, t/a²) with D from the exponential-functional module.
pub fn density_clock_via_d(p: BesselParams, u: f64, method: DensityMethod, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    let law = ExpFunctionalLaw::new(p.nu + 2.0, u, method)?;
    let g = (p.delta * u).exp();
    Ok(density_a_mu(p.scaled_horizon(), law, &cfg.with_abs_tol(cfg.abs_tol / g))?.scaled(g))
}

/// Single-expectation clock densities for ν = −2 and ν = −1.
pub fn density_clock_closed(p: BesselParams, u: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    check_t(u)?;
    let (a, t) = (p.a, p.t);
    let k = PI / (2.0 * u);
    let b = a * a / (2.0 * t);
    if p.nu == -2.0 {
        let pref = quarter_prefactor(u) * (-2.0 * u).exp() * a.powi(3) / (2.0 * PI * t.powi(3)).sqrt();
        let f = |x: f64| {
            let c = x.cosh();
            c * (-b * c * c).exp() * (k * x).cos()
        };
        Ok(expect_gaussian(f, u, 1.0, &inner_cfg(cfg, pref))?.scaled(pref))
    } else if p.nu == -1.0 {
        let pref = quarter_prefactor(u) * (-0.5 * u).exp() * a.powi(3) / (8.0 * PI * t.powi(3)).sqrt();
        let f = |x: f64| {
            let c = x.cosh();
            (2.0 * x).sinh() * (-b * c * c).exp() * (k * x).sin()
        };
        Ok(expect_gaussian(f, u, 2.0, &inner_cfg(cfg, pref))?.scaled(pref))
    } else {
        domain(format!("closed clock density exists here for nu = -2 and -1 only, got {}", p.nu))
    }
}

/// Both sides of ∫₀^u e^{δs}D(ν+2,s,t)ds = ∫_t^∞ D(ν,u,v)dv.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DRelation {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    /// Bound on the left-hand mass over (0, t_min), which is not integrated.
    pub clipped_mass: f64,
    pub abs_error: f64,
}

pub fn check_d_relation(nu: f64, u: f64, t: f64, cfg: &QuadratureConfig) -> Result<DRelation> {
    check_t(u)?;
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("t must be positive, got {t}"));
    }
    let delta = 2.0 * (nu + 1.0);
    let dcfg = cfg.tightened(1e-2);
    let upper = ExpFunctionalLaw::preferred(nu + 2.0, T_MIN)?.method;
    let left_density = |s: f64| {
        density_a_mu(t, ExpFunctionalLaw { mu: nu + 2.0, t: s, method: upper }, &dcfg).map(|d| (delta * s).exp() * d.value)
    };
    let lhs = if u > T_MIN {
        integrate(|s| left_density(s).unwrap_or(f64::NAN), T_MIN, u, cfg)?
    } else {
        IntegralEstimate::exact(0.0)
    };
    // D(·, s, t) increases in s near 0 for fixed t, so T_MIN·D at T_MIN bounds the clipped part
    let clipped_mass = T_MIN * left_density(T_MIN)?.abs();

    let law = ExpFunctionalLaw::preferred(nu, u)?;
    let (_, v_hi) = a_mu_support(nu, u);
    let memo = ThetaMemo::new(u)?;
    let right_density = |v: f64| {
        let d = if law.method == DensityMethod::DoubleIntegral {
            density_a_mu_memo(v, nu, &memo, &dcfg)
        } else {
            density_a_mu(v, law, &dcfg)
        };
        d.map(|e| e.value).unwrap_or(f64::NAN)
    };
    let rhs = if v_hi > t { integrate_log(right_density, t, v_hi, cfg)? } else { IntegralEstimate::exact(0.0) };
    Ok(DRelation {
        lhs: lhs.value,
        rhs: rhs.value,
        residual: (lhs.value - rhs.value).abs(),
        clipped_mass,
        abs_error: lhs.abs_error + rhs.abs_error + clipped_mass,
    })
}

/// Clock distribution function on {t < τ₀}, tabulated from e^{δu}D(ν+2, u, t/a²)
/// on [t_min, u_max].
pub fn clock_cdf(p: BesselParams, u_max: f64, panels: usize, cfg: &QuadratureConfig) -> Result<TabulatedCdf> {
    let method = DensityMethod::preferred(p.nu + 2.0);
    TabulatedCdf::from_density(|u| density_clock_via_d(p, u, method, cfg).map(|e| e.value), T_MIN, u_max, panels, false)
}
