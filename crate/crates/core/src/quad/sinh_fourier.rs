//! Gaussian expectations of e^{iω sinh x}·A(x), the kernel shared by every
//! Θ representation and most identities.
//!
//! For small phase budgets the real-axis integral is used directly. Otherwise
//! y = sinh x is substituted and the two half-lines of y are rotated into the
//! upper half plane, y = s·e^{iα} and y = −s·e^{−iα}, where e^{iωy} decays like
//! e^{−ωs·sin α}. The amplitude must be analytic for |Im x| < π/2; poles at
//! Im x = ±π/2 map to the imaginary y axis, which the rotated rays avoid.

use super::kronrod::adaptive;
use super::{check_time, gaussian_half_width, oscillation_width, IntegralEstimate, QuadratureConfig};
use crate::error::{domain, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest total phase ω·sinh(L) integrated directly on the real axis.
pub const DIRECT_PHASE_LIMIT: f64 = 600.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourierRoute {
    Auto,
    Direct,
    Rotated,
}

/// E[Re(e^{iω sinh B_t}·A(B_t))].
///
/// `growth` bounds |A(x)| ≤ C e^{k|x|} on the real axis.
pub fn expect_sinh_fourier(
    omega: f64,
    amplitude: impl Fn(Complex64) -> Complex64,
    growth: f64,
    t: f64,
    route: FourierRoute,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    cfg.validate()?;
    check_time(t)?;
    if !omega.is_finite() {
        return domain("frequency must be finite");
    }
    if omega < 0.0 {
        let mirrored = |z: Complex64| amplitude(z.conj()).conj();
        return dispatch(-omega, &mirrored, growth, t, route, cfg);
    }
    dispatch(omega, &amplitude, growth, t, route, cfg)
}

fn dispatch(
    omega: f64,
    amplitude: &dyn Fn(Complex64) -> Complex64,
    growth: f64,
    t: f64,
    route: FourierRoute,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    let tail = cfg.tail_budget();
    let l = gaussian_half_width(t, growth, tail, cfg);
    let direct = match route {
        FourierRoute::Direct => true,
        FourierRoute::Rotated => omega == 0.0,
        FourierRoute::Auto => omega == 0.0 || omega * l.sinh() <= DIRECT_PHASE_LIMIT,
    };
    if direct {
        direct_route(omega, amplitude, l, t, tail, cfg)
    } else {
        rotated_route(omega, amplitude, t, tail, cfg)
    }
}

fn direct_route(
    omega: f64,
    amplitude: &dyn Fn(Complex64) -> Complex64,
    l: f64,
    t: f64,
    tail: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    let wt = oscillation_width(t, cfg);
    let per_panel = 2.0 * PI * 21.0 / cfg.osc_nodes_per_period as f64;
    let mut half = vec![0.0];
    let mut x = 0.0f64;
    while x < l {
        let mut w = wt;
        if omega > 0.0 {
            w = w.min(per_panel / (omega * x.cosh()));
            while omega * ((x + w).sinh() - x.sinh()) > per_panel && w > 1e-12 {
                w *= 0.5;
            }
        }
        x = (x + w).min(l);
        half.push(x);
        if half.len() > 1 << 18 {
            return domain("oscillation too fast for direct quadrature");
        }
    }
    let mut breaks: Vec<f64> = half.iter().rev().map(|v| -v).collect();
    breaks.extend_from_slice(&half[1..]);
    let norm = 1.0 / (2.0 * PI * t).sqrt();
    let f = |x: f64| {
        let phase = Complex64::from_polar(1.0, omega * x.sinh());
        (phase * amplitude(Complex64::new(x, 0.0))).re * (-x * x / (2.0 * t)).exp() * norm
    };
    let a = adaptive(&f, &breaks, cfg.abs_tol - tail.min(cfg.abs_tol), cfg.rel_tol, cfg.max_subdivisions, f64::abs);
    Ok(IntegralEstimate {
        value: a.value,
        abs_error: a.error + tail,
        evaluations: a.evaluations,
        converged: a.converged,
    })
}

/// asinh with the principal branch, accurate for large |y| in the left half plane.
pub(crate) fn asinh_c(y: Complex64) -> Complex64 {
    if y.re < 0.0 {
        return -asinh_c(-y);
    }
    if y.norm() > 1e150 {
        return (y * 2.0).ln();
    }
    (y + (Complex64::new(1.0, 0.0) + y * y).sqrt()).ln()
}

fn rotated_route(
    omega: f64,
    amplitude: &dyn Fn(Complex64) -> Complex64,
    t: f64,
    tail: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralEstimate> {
    let alpha = (PI / 4.0).min(0.5 * t);
    let up = Complex64::from_polar(1.0, alpha);
    let down = Complex64::from_polar(1.0, -alpha);
    let norm = 1.0 / (2.0 * PI * t).sqrt();
    let kernel = |y: Complex64| -> Complex64 {
        let z = asinh_c(y);
        let jac = (Complex64::new(1.0, 0.0) + y * y).sqrt();
        let gauss = (-(z * z) / (2.0 * t)).exp() * norm;
        let v = (Complex64::new(0.0, omega) * y).exp() * amplitude(z) * gauss / jac;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };
    let f = |s: f64| up * kernel(up * s) + down * kernel(-down * s);

    let s1 = (1.0 / omega).min(1.0);
    let decay_start = 4.0 / (omega * alpha.sin());
    let mut breaks = vec![0.0, 0.25 * s1, 0.5 * s1, s1];
    let mut s = s1;
    let mut quiet = 0;
    let mut reached = false;
    for _ in 0..600 {
        let next = 2.0 * s;
        let mass = next * f(next).norm().max(f(1.5 * s).norm());
        breaks.push(next);
        s = next;
        if s >= decay_start && mass < tail {
            quiet += 1;
            if quiet >= 2 {
                reached = true;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    let a = adaptive(
        &f,
        &breaks,
        cfg.abs_tol - tail.min(cfg.abs_tol),
        cfg.rel_tol,
        cfg.max_subdivisions.max(breaks.len() * 4),
        |z: Complex64| z.re.abs(),
    );
    Ok(IntegralEstimate {
        value: a.value.re,
        abs_error: a.error + tail,
        evaluations: a.evaluations + 2 * breaks.len(),
        converged: a.converged && reached,
    })
}
