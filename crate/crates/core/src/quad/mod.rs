//! Adaptive quadrature for Gaussian expectations, half-line and whole-line integrals.

mod kronrod;
mod sinh_fourier;
mod tabulated;

pub use sinh_fourier::{expect_sinh_fourier, FourierRoute, DIRECT_PHASE_LIMIT};
pub use tabulated::TabulatedCdf;

pub(crate) use kronrod::adaptive;

use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Smallest time accepted by the Θ evaluators.
pub const T_MIN: f64 = 0.05;

/// Tolerances and resolution knobs shared by every integrator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Minimum half-width of the Gaussian window, in standard deviations.
    pub truncation_sigma: f64,
    pub osc_nodes_per_period: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 4000,
            truncation_sigma: 8.0,
            osc_nodes_per_period: 16,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return bad("tolerances must be nonnegative");
        }
        if self.abs_tol + self.rel_tol <= 0.0 {
            return bad("abs_tol + rel_tol must be positive");
        }
        if !(self.truncation_sigma >= 6.0) {
            return bad("truncation_sigma must be at least 6");
        }
        if self.osc_nodes_per_period < 8 {
            return bad("osc_nodes_per_period must be at least 8");
        }
        if self.max_subdivisions == 0 {
            return bad("max_subdivisions must be positive");
        }
        Ok(())
    }

    /// Same knobs with both tolerances multiplied by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self { abs_tol: self.abs_tol * factor, rel_tol: self.rel_tol * factor, ..*self }
    }

    /// Same knobs with the absolute tolerance replaced.
    pub fn with_abs_tol(&self, abs_tol: f64) -> Self {
        Self { abs_tol, ..*self }
    }

    /// Absolute tail budget; falls back to a tiny floor when only a relative
    /// tolerance was requested.
    pub(crate) fn tail_budget(&self) -> f64 {
        if self.abs_tol > 0.0 {
            0.1 * self.abs_tol
        } else {
            1e-18
        }
    }
}

/// A quadrature value with its error bound and bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegralEstimate {
    pub fn exact(value: f64) -> Self {
        Self { value, abs_error: 0.0, evaluations: 0, converged: true }
    }

    /// Multiply value and error by a constant factor.
    pub fn scaled(self, c: f64) -> Self {
        Self { value: self.value * c, abs_error: self.abs_error * c.abs(), ..self }
    }

    /// Sum of two estimates; errors add and convergence requires both.
    pub fn plus(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub fn minus(self, other: Self) -> Self {
        self.plus(other.scaled(-1.0))
    }

    pub fn with_extra_error(self, extra: f64) -> Self {
        Self { abs_error: self.abs_error + extra.abs(), ..self }
    }

    /// Product of two estimates with first-order error propagation.
    pub fn times(self, other: Self) -> Self {
        Self {
            value: self.value * other.value,
            abs_error: self.abs_error * other.value.abs()
                + other.abs_error * self.value.abs()
                + self.abs_error * other.abs_error,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("time must be positive and finite, got {t}"));
    }
    Ok(())
}

/// Standard normal density at `x` for a Brownian motion observed at time `t`.
pub fn gaussian_density(x: f64, t: f64) -> f64 {
    (-x * x / (2.0 * t)).exp() / (2.0 * PI * t).sqrt()
}

/// Half-width of the Gaussian window so that ∫_{|x|>L} e^{k|x|}φ_t(x)dx stays below `tail`.
pub fn gaussian_half_width(t: f64, growth: f64, tail: f64, cfg: &QuadratureConfig) -> f64 {
    let kt = growth.max(0.0) * t;
    let log_term = (1.0 / tail.min(1.0)).ln().max(0.0);
    let l = kt + (kt * kt + 2.0 * t * log_term).sqrt() + 2.0 * t.sqrt();
    l.max(cfg.truncation_sigma * t.sqrt())
}

/// Breakpoints on [-L, L] with panel width capped at `width`.
pub(crate) fn uniform_breaks(l: f64, width: f64) -> Vec<f64> {
    let n = ((2.0 * l / width).ceil() as usize).clamp(2, 1 << 20);
    let n = n + n % 2;
    (0..=n).map(|i| -l + 2.0 * l * i as f64 / n as f64).collect()
}

/// Panel width so the oscillating factors sin(πx/t), cos(πx/2t) are resolved.
pub(crate) fn oscillation_width(t: f64, cfg: &QuadratureConfig) -> f64 {
    2.0 * t * kronrod::NODES_PER_PANEL as f64 / cfg.osc_nodes_per_period as f64
}

fn estimate(a: kronrod::Adaptive<f64>) -> IntegralEstimate {
    IntegralEstimate {
        value: a.value,
        abs_error: a.error,
        evaluations: a.evaluations,
        converged: a.converged,
    }
}

/// E[f(B_t)] for a Brownian motion started at 0.
///
/// `growth` is a bound k with |f(x)| ≤ C e^{k|x|}; it sets the truncation window.
pub fn expect_gaussian(
    f: impl Fn(f64) -> f64,
    t: f64,
    growth: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    cfg.validate()?;
    check_time(t)?;
    let tail = cfg.tail_budget();
    let l = gaussian_half_width(t, growth, tail, cfg);
    let breaks = uniform_breaks(l, oscillation_width(t, cfg));
    let norm = 1.0 / (2.0 * PI * t).sqrt();
    let g = |x: f64| f(x) * (-x * x / (2.0 * t)).exp() * norm;
    let est = estimate(adaptive(
        &g,
        &breaks,
        cfg.abs_tol - tail.min(cfg.abs_tol),
        cfg.rel_tol,
        cfg.max_subdivisions,
        f64::abs,
    ));
    Ok(est.with_extra_error(tail))
}

/// ∫_a^b f(x) dx on a finite interval.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    integrate_breaks(f, &[a, b], cfg)
}

/// ∫ f over consecutive panels given by sorted `breaks`.
pub fn integrate_breaks(f: impl Fn(f64) -> f64, breaks: &[f64], cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    cfg.validate()?;
    if breaks.len() < 2 || breaks.iter().any(|b| !b.is_finite()) {
        return domain("integration limits must be finite");
    }
    if breaks.len() == 2 && breaks[0] == breaks[1] {
        return Ok(IntegralEstimate::exact(0.0));
    }
    Ok(estimate(adaptive(&f, breaks, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions, f64::abs)))
}

/// ∫₀^∞ g(r) dr through r = u/(1−u).
///
/// `endpoint_exponent` p declares g(r) ~ r^p near 0; for p < 0 the substitution
/// u = w^{1/(1+p)} removes the singularity. p ≤ −1 is not integrable.
pub fn integrate_halfline(
    g: impl Fn(f64) -> f64,
    endpoint_exponent: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    cfg.validate()?;
    if !(endpoint_exponent > -1.0) {
        return domain(format!("endpoint exponent {endpoint_exponent} is not integrable"));
    }
    let q = if endpoint_exponent < 0.0 { 1.0 / (1.0 + endpoint_exponent) } else { 1.0 };
    let h = |w: f64| {
        let u = w.powf(q);
        let du = q * w.powf(q - 1.0);
        let one_minus = 1.0 - u;
        if one_minus <= 0.0 {
            return 0.0;
        }
        let r = u / one_minus;
        let v = g(r) * du / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let breaks = [0.0, 0.25, 0.5, 0.75, 0.9, 0.97, 1.0];
    Ok(estimate(adaptive(&h, &breaks, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions, f64::abs)))
}

/// ∫_ℝ h(x) dx through x = u/(1−u²).
pub fn integrate_line(h: impl Fn(f64) -> f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    cfg.validate()?;
    let f = |u: f64| {
        let d = 1.0 - u * u;
        if d <= 0.0 {
            return 0.0;
        }
        let v = h(u / d) * (1.0 + u * u) / (d * d);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let breaks = [-1.0, -0.97, -0.9, -0.75, -0.5, 0.0, 0.5, 0.75, 0.9, 0.97, 1.0];
    Ok(estimate(adaptive(&f, &breaks, cfg.abs_tol, cfg.rel_tol, cfg.max_subdivisions, f64::abs)))
}

/// ∫_lo^hi g(r) dr through r = e^s, for positive limits spanning many decades.
pub fn integrate_log(g: impl Fn(f64) -> f64, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return domain(format!("log-scale limits must satisfy 0 < lo < hi, got [{lo}, {hi}]"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let n = ((b - a) / 1.0).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    integrate_breaks(
        |s| {
            let r = s.exp();
            g(r) * r
        },
        &breaks,
        cfg,
    )
}
