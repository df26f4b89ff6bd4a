//! Numerical checks of the (F, G) equivalences, the residue identities built
//! on them, the unified Laplace relation and the elementary integrals they use.

use crate::error::{domain, Result};
use crate::quad::{expect_gaussian, gaussian_density, integrate_breaks, integrate_halfline, IntegralEstimate, QuadratureConfig};
use crate::theta::{check_t, fourier, inner_cfg, quarter_prefactor};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type ComplexFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Even functions (F, G) whose three Gaussian relations are to be compared.
#[derive(Clone)]
pub struct FGPair {
    pub label: String,
    pub f: RealFn,
    pub g: RealFn,
    /// Continuation of G to |Im z| < π/2, needed by relation II.
    pub g_complex: ComplexFn,
    /// Exponential growth rates of |F| and |G| in |x|.
    pub growth_f: f64,
    pub growth_g: f64,
}

impl std::fmt::Debug for FGPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FGPair").field("label", &self.label).finish_non_exhaustive()
    }
}

impl FGPair {
    pub fn new(
        label: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g_complex: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
        growth_f: f64,
        growth_g: f64,
    ) -> Self {
        Self { label: label.into(), f: Arc::new(f), g: Arc::new(g), g_complex: Arc::new(g_complex), growth_f, growth_g }
    }

    /// Largest |F(x) − F(−x)| + |G(x) − G(−x)| over `points`, relative to the values.
    pub fn evenness_defect(&self, points: &[f64]) -> f64 {
        points
            .iter()
            .map(|&x| {
                let df = ((self.f)(x) - (self.f)(-x)).abs() / (self.f)(x).abs().max(1.0);
                let dg = ((self.g)(x) - (self.g)(-x)).abs() / (self.g)(x).abs().max(1.0);
                df + dg
            })
            .fold(0.0, f64::max)
    }

    /// F = ½ sinh x sin(πx/t), G = e^{−3π²/8t}cos(πx/2t).
    pub fn liden_1(t: f64) -> Self {
        let c = (-3.0 * PI * PI / (8.0 * t)).exp();
        let k = PI / (2.0 * t);
        Self::new(
            "liden-1",
            move |x| 0.5 * x.sinh() * (2.0 * k * x).sin(),
            move |x| c * (k * x).cos(),
            move |z| c * (z * k).cos(),
            1.0,
            0.0,
        )
    }

    /// F = ½ tanh x sin(πx/t), G = e^{−3π²/8t}S(x).
    pub fn liden_2(t: f64) -> Self {
        let c = (-3.0 * PI * PI / (8.0 * t)).exp();
        let s = SFunction::new(t);
        let k = PI / (2.0 * t);
        Self::new(
            "liden-2",
            move |x| 0.5 * x.tanh() * (2.0 * k * x).sin(),
            move |x| c * s.eval(x),
            move |z| s.eval_complex(z) * c,
            0.0,
            0.0,
        )
    }

    /// F = ½c_t sinh x(Σ(x,γ) + Σ(x,−γ)), G = e^{−λ cosh x}cos γx.
    pub fn lrc_1(lambda: f64, gamma: f64, t: f64) -> Self {
        let sig = SigmaFunction::new(lambda, t);
        let c = quarter_prefactor(t);
        Self::new(
            format!("lrc-1(lambda={lambda},gamma={gamma})"),
            move |x| 0.5 * c * x.sinh() * (sig.eval(x, gamma) + sig.eval(x, -gamma)),
            move |x| (-lambda * x.cosh()).exp() * (gamma * x).cos(),
            move |z| (-lambda * z.cosh()).exp() * (z * gamma).cos(),
            1.0,
            0.0,
        )
    }

    /// F = −½c_t sinh x cosh x(Σ(x,γ) − Σ(x,−γ)), G = e^{−λ cosh x}sin(γx)sinh x.
    pub fn lrc_2(lambda: f64, gamma: f64, t: f64) -> Self {
        let sig = SigmaFunction::new(lambda, t);
        let c = quarter_prefactor(t);
        Self::new(
            format!("lrc-2(lambda={lambda},gamma={gamma})"),
            move |x| -0.5 * c * x.sinh() * x.cosh() * (sig.eval(x, gamma) - sig.eval(x, -gamma)),
            move |x| (-lambda * x.cosh()).exp() * (gamma * x).sin() * x.sinh(),
            move |z| (-lambda * z.cosh()).exp() * (z * gamma).sin() * z.sinh(),
            2.0,
            1.0,
        )
    }

    /// The registered catalogue at fixed (λ, γ) for the Σ families.
    pub fn catalogue(t: f64, lambda: f64, gamma: f64) -> Vec<Self> {
        vec![Self::liden_1(t), Self::liden_2(t), Self::lrc_1(lambda, gamma, t), Self::lrc_2(lambda, gamma, t)]
    }
}

/// S(x) = sin(πx/2t)/sinh x, with S(0) = π/2t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SFunction {
    pub t: f64,
}

impl SFunction {
    const SERIES_RADIUS: f64 = 1e-3;

    pub fn new(t: f64) -> Self {
        Self { t }
    }

    fn series(&self, z: Complex64) -> Complex64 {
        let k = PI / (2.0 * self.t);
        let k2 = k * k;
        let z2 = z * z;
        let c2 = -(k2 + 1.0) / 6.0;
        let c4 = k2 * k2 / 120.0 + k2 / 36.0 + 7.0 / 360.0;
        (z2 * (z2 * c4 + c2) + 1.0) * k
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_complex(Complex64::new(x, 0.0)).re
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        if z.norm() < Self::SERIES_RADIUS {
            return self.series(z);
        }
        (z * (PI / (2.0 * self.t))).sin() / z.sinh()
    }
}

/// Σ(x,γ) = e^{πγ/2}sin(πx/2t + λ sinh x + γx) and its cosine companion Σ̃.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaFunction {
    pub lambda: f64,
    pub t: f64,
}

impl SigmaFunction {
    pub fn new(lambda: f64, t: f64) -> Self {
        Self { lambda, t }
    }

    fn phase(&self, x: f64, gamma: f64) -> f64 {
        PI * x / (2.0 * self.t) + self.lambda * x.sinh() + gamma * x
    }

    pub fn eval(&self, x: f64, gamma: f64) -> f64 {
        (0.5 * PI * gamma).exp() * self.phase(x, gamma).sin()
    }

    pub fn eval_tilde(&self, x: f64, gamma: f64) -> f64 {
        (0.5 * PI * gamma).exp() * self.phase(x, gamma).cos()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// (2/π)E[F(B)cosh B/(cosh 2B + cosh 2x)] = φ_t(x)G(x)
    I,
    /// E[e^{−r cosh B}F(B)] = E[G(B)cosh B cos(r sinh B)]
    II,
    /// E[F(B)/(cosh B + cosh x)] = E[G(B)/cosh(x + B)]
    III,
}

/// Values of both sides and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub abs_error: f64,
}

impl Residual {
    fn new(lhs: IntegralEstimate, rhs: IntegralEstimate) -> Self {
        Self { lhs: lhs.value, rhs: rhs.value, residual: (lhs.value - rhs.value).abs(), abs_error: lhs.abs_error + rhs.abs_error }
    }
}

/// One relation of the (F, G) equivalence at parameter x (I, III) or r (II).
pub fn check_lequiv(pair: &FGPair, t: f64, relation: Relation, param: f64, cfg: &QuadratureConfig) -> Result<Residual> {
    check_t(t)?;
    if !param.is_finite() {
        return domain("parameter must be finite");
    }
    let (f, g) = (pair.f.clone(), pair.g.clone());
    match relation {
        Relation::I => {
            let c2x = (2.0 * param).cosh();
            let lhs = expect_gaussian(|b| f(b) * b.cosh() / ((2.0 * b).cosh() + c2x), t, (pair.growth_f - 1.0).max(0.0), cfg)?
                .scaled(2.0 / PI);
            let rhs = IntegralEstimate::exact(gaussian_density(param, t) * g(param));
            Ok(Residual::new(lhs, rhs))
        }
        Relation::II => {
            if param < 0.0 {
                return domain(format!("relation II needs r >= 0, got {param}"));
            }
            let lhs = expect_gaussian(|b| (-param * b.cosh()).exp() * f(b), t, pair.growth_f, cfg)?;
            let gc = pair.g_complex.clone();
            let rhs = fourier(param, move |z| gc(z) * z.cosh(), pair.growth_g + 1.0, t, cfg)?;
            Ok(Residual::new(lhs, rhs))
        }
        Relation::III => {
            let cx = param.cosh();
            let lhs = expect_gaussian(|b| f(b) / (b.cosh() + cx), t, (pair.growth_f - 1.0).max(0.0), cfg)?;
            let rhs = expect_gaussian(|b| g(b) / (param + b).cosh(), t, pair.growth_g, cfg)?;
            Ok(Residual::new(lhs, rhs))
        }
    }
}

/// The two residue identities, relation I for the pairs `liden_1`, `liden_2`.
pub fn check_liden(x: f64, t: f64, which: u8, cfg: &QuadratureConfig) -> Result<Residual> {
    let pair = match which {
        1 => FGPair::liden_1(t),
        2 => FGPair::liden_2(t),
        _ => return domain(format!("identity index must be 1 or 2, got {which}")),
    };
    check_lequiv(&pair, t, Relation::I, x, cfg)
}

/// E[e^{−r cosh B}cos(πB/2t + λ sinh B − γB)] against
/// e^{πγ/2 − π²/8t}E[e^{−λ cosh B}cos(r sinh B + γB)].
pub fn check_punif(r: f64, lambda: f64, gamma: f64, t: f64, cfg: &QuadratureConfig) -> Result<Residual> {
    let lhs = punif_lhs(r, lambda, gamma, t, cfg)?;
    let c = (0.5 * PI * gamma).exp() / quarter_prefactor(t);
    let rhs = fourier(r, |z| (-lambda * z.cosh()).exp() * (Complex64::new(0.0, gamma) * z).exp(), 0.0, t, &inner_cfg(cfg, c))?.scaled(c);
    Ok(Residual::new(lhs, rhs))
}

/// Left side of the unified relation; symmetric in (r, λ) at γ = π/4t.
pub fn punif_lhs(r: f64, lambda: f64, gamma: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if !(r >= 0.0 && lambda >= 0.0) {
        return domain(format!("r and lambda must be nonnegative, got {r}, {lambda}"));
    }
    check_t(t)?;
    let w = PI / (2.0 * t) - gamma;
    fourier(lambda, |z| (-r * z.cosh()).exp() * (Complex64::new(0.0, w) * z).exp(), 0.0, t, cfg)
}

/// E[e^{−r cosh B}sinh B sin((π/2t − γ)B)] against
/// e^{πγ/2 − π²/8t}E[cosh B cos(r sinh B + γB)].
pub fn check_equnifd(r: f64, gamma: f64, t: f64, cfg: &QuadratureConfig) -> Result<Residual> {
    if !(r >= 0.0) {
        return domain(format!("r must be nonnegative, got {r}"));
    }
    check_t(t)?;
    let w = PI / (2.0 * t) - gamma;
    let lhs = expect_gaussian(|b| (-r * b.cosh()).exp() * b.sinh() * (w * b).sin(), t, 1.0, cfg)?;
    let c = (0.5 * PI * gamma).exp() / quarter_prefactor(t);
    let rhs = fourier(r, |z| z.cosh() * (Complex64::new(0.0, gamma) * z).exp(), 1.0, t, &inner_cfg(cfg, c))?.scaled(c);
    Ok(Residual::new(lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SigmaPair {
    I,
    II,
}

/// Relation I for the Σ-built pairs at x.
pub fn check_lrc(lambda: f64, gamma: f64, x: f64, t: f64, pair: SigmaPair, cfg: &QuadratureConfig) -> Result<Residual> {
    if !(lambda >= 0.0) {
        return domain(format!("lambda must be nonnegative, got {lambda}"));
    }
    check_t(t)?;
    let p = match pair {
        SigmaPair::I => FGPair::lrc_1(lambda, gamma, t),
        SigmaPair::II => FGPair::lrc_2(lambda, gamma, t),
    };
    check_lequiv(&p, t, Relation::I, x, cfg)
}

/// E[cosh B sin(r sinh B + πB/2t − 2ν)], which vanishes for every r and ν.
pub fn odd_annihilation(r: f64, nu: f64, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    crate::theta::odd_shift_expectation(r, nu, t, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Elementary {
    /// ∫cosh x cos(r sinh x)/(cosh 2b + cosh 2x)dx = πe^{−r cosh b}/(2cosh b)
    Fact1 { r: f64, b: f64 },
    /// ∫cos(ξx)/cosh x dx = π/cosh(πξ/2)
    Fact2 { xi: f64 },
    /// ∫dy/(cosh(x+y)(cosh 2b + cosh 2y)) = π/(2cosh b(cosh b + cosh x))
    Lelem { x: f64, b: f64 },
    /// cosh(x+y)cosh(x−y) = (cosh 2x + cosh 2y)/2 = cosh²x + sinh²y
    CoshProduct { x: f64, y: f64 },
}

/// Whole-line breakpoints on [−l, l] with panels no wider than `w`.
fn symmetric_breaks(l: f64, w: f64) -> Vec<f64> {
    let n = ((2.0 * l / w).ceil() as usize).max(2);
    (0..=n).map(|i| -l + 2.0 * l * i as f64 / n as f64).collect()
}

pub fn check_elementary(which: Elementary, cfg: &QuadratureConfig) -> Result<Residual> {
    match which {
        Elementary::Fact1 { r, b } => {
            if !(r >= 0.0) {
                return domain(format!("r must be nonnegative, got {r}"));
            }
            let cb = b.cosh();
            let exact = PI * (-r * cb).exp() / (2.0 * cb);
            let value = if r == 0.0 {
                let c2b = (2.0 * b).cosh();
                integrate_breaks(|x| x.cosh() / (c2b + (2.0 * x).cosh()), &symmetric_breaks(40.0, 2.0), cfg)?
            } else {
                // in y = sinh x the integrand is cos(ry)/(2(cosh²b + y²)); rotate e^{iry} onto arg y = π/4
                let rot = Complex64::from_polar(1.0, PI / 4.0);
                let h = |s: f64| {
                    let y = rot * s;
                    (rot * (Complex64::new(0.0, r) * y).exp() / (y * y + cb * cb)).re
                };
                integrate_halfline(h, 0.0, cfg)?
            };
            Ok(Residual::new(value, IntegralEstimate::exact(exact)))
        }
        Elementary::Fact2 { xi } => {
            let w = if xi == 0.0 { 2.0 } else { (PI / xi.abs()).min(2.0) };
            let value = integrate_breaks(|x| (xi * x).cos() / x.cosh(), &symmetric_breaks(45.0, w), cfg)?;
            Ok(Residual::new(value, IntegralEstimate::exact(PI / (0.5 * PI * xi).cosh())))
        }
        Elementary::Lelem { x, b } => {
            let c2b = (2.0 * b).cosh();
            let l = 20.0 + x.abs();
            let value = integrate_breaks(|y| 1.0 / ((x + y).cosh() * (c2b + (2.0 * y).cosh())), &symmetric_breaks(l, 1.0), cfg)?;
            let cb = b.cosh();
            Ok(Residual::new(value, IntegralEstimate::exact(PI / (2.0 * cb * (cb + x.cosh())))))
        }
        Elementary::CoshProduct { x, y } => {
            let p = (x + y).cosh() * (x - y).cosh();
            let half = 0.5 * ((2.0 * x).cosh() + (2.0 * y).cosh());
            let sq = x.cosh().powi(2) + y.sinh().powi(2);
            let scale = p.abs().max(1.0);
            let residual = (p - half).abs().max((p - sq).abs()) / scale;
            Ok(Residual { lhs: p, rhs: half, residual, abs_error: 0.0 })
        }
    }
}

/// One line of the machine-readable verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityRecord {
    pub fn new(name: impl Into<String>, params: &[(&str, f64)], residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }

    /// Record for a computation that failed outright.
    pub fn failed(name: impl Into<String>, params: &[(&str, f64)], tolerance: f64) -> Self {
        Self::new(name, params, f64::NAN, tolerance)
    }
}

/// Grid of random draws per identity family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub draws: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { draws: 20, seed: 20240601, tolerance: 1e-7 }
    }
}

const SUITE_TIMES: [f64; 3] = [0.5, 1.0, 2.0];

fn record(name: &str, params: &[(&str, f64)], tol: f64, r: Result<Residual>) -> IdentityRecord {
    match r {
        Ok(res) => IdentityRecord::new(name, params, res.residual, tol),
        Err(_) => IdentityRecord::failed(name, params, tol),
    }
}

/// Random-draw verification of every registered identity, plus the odd
/// annihilation and the Stieltjes integrals. Draws are reproducible from the seed.
pub fn run_suite(sc: &SuiteConfig, cfg: &QuadratureConfig) -> Vec<IdentityRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(sc.seed);
    let tol = sc.tolerance;
    let mut out = Vec::new();
    for _ in 0..sc.draws {
        let t = SUITE_TIMES[rng.gen_range(0..3)];
        let (lambda, gamma) = (rng.gen_range(0.0..2.0), rng.gen_range(-1.5..1.5));
        let x = rng.gen_range(0.0..2.0);
        let r = rng.gen_range(0.0..3.0);
        for pair in FGPair::catalogue(t, lambda, gamma) {
            for (rel, param) in [(Relation::I, x), (Relation::II, r), (Relation::III, x)] {
                let name = format!("lequiv-{:?}:{}", rel, pair.label);
                let res = check_lequiv(&pair, t, rel, param, cfg);
                out.push(record(&name, &[("t", t), ("param", param)], tol, res));
            }
        }
        let xs = rng.gen_range(-2.0..2.0);
        for which in [1u8, 2] {
            out.push(record(&format!("liden-{which}"), &[("x", xs), ("t", t)], tol, check_liden(xs, t, which, cfg)));
        }
        let (r2, l2, g2) = (rng.gen_range(0.0..2.0), rng.gen_range(0.0..2.0), rng.gen_range(-1.5..1.5));
        out.push(record("punif", &[("r", r2), ("lambda", l2), ("gamma", g2), ("t", t)], tol, check_punif(r2, l2, g2, t, cfg)));
        let g3 = PI / (4.0 * t);
        let sym = punif_lhs(r2, l2, g3, t, cfg).and_then(|a| punif_lhs(l2, r2, g3, t, cfg).map(|b| Residual::new(a, b)));
        out.push(record("punif-symmetry", &[("r", r2), ("lambda", l2), ("t", t)], tol, sym));
        out.push(record("equnifd", &[("r", r), ("gamma", gamma), ("t", t)], tol, check_equnifd(r, gamma, t, cfg)));
        for (p, name) in [(SigmaPair::I, "lrc-I"), (SigmaPair::II, "lrc-II")] {
            out.push(record(name, &[("lambda", lambda), ("gamma", gamma), ("x", x), ("t", t)], tol, check_lrc(lambda, gamma, x, t, p, cfg)));
        }
        let nu = rng.gen_range(-PI..PI);
        let odd = odd_annihilation(r, nu, t, cfg).map(|e| Residual::new(e, IntegralEstimate::exact(0.0)));
        out.push(record("odd-annihilation", &[("r", r), ("nu", nu), ("t", t)], tol, odd));
        let (b, xi, y) = (rng.gen_range(-1.5..1.5), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let elems = [
            ("fact1", Elementary::Fact1 { r, b }, vec![("r", r), ("b", b)]),
            ("fact2", Elementary::Fact2 { xi }, vec![("xi", xi)]),
            ("lelem", Elementary::Lelem { x: xs, b }, vec![("x", xs), ("b", b)]),
            ("cosh-product", Elementary::CoshProduct { x: xs, y }, vec![("x", xs), ("y", y)]),
        ];
        for (name, e, params) in elems {
            out.push(record(name, &params, tol, check_elementary(e, cfg)));
        }
    }
    for n in -3..=3 {
        for &t in &SUITE_TIMES {
            let res = crate::mc::stieltjes_check(n, t, cfg).map(|e| Residual::new(e, IntegralEstimate::exact(0.0)));
            out.push(record("stieltjes", &[("n", n as f64), ("t", t)], 1e-8, res));
        }
    }
    out
}

/// Laplace-in-r residuals on x ∈ {0,1,2} × t ∈ {0.5,1,2}, the value at
/// (0, 1) against 1/√(2π), and Laplace-in-t residuals on r ∈ {0.5,1} × λ ∈ {0,1,2}.
pub fn laplace_records(tol_r: f64, tol_t: f64, cfg: &QuadratureConfig) -> Vec<IdentityRecord> {
    let mut out = Vec::new();
    for &x in &[0.0, 1.0, 2.0] {
        for &t in &SUITE_TIMES {
            let params = [("x", x), ("t", t)];
            let check = crate::theta::check_laplace_r(x, t, cfg);
            out.push(match &check {
                Ok(c) => IdentityRecord::new("laplace-r", &params, c.residual, tol_r),
                Err(_) => IdentityRecord::failed("laplace-r", &params, tol_r),
            });
            if x == 0.0 && t == 1.0 {
                let target = 1.0 / (2.0 * PI).sqrt();
                out.push(match &check {
                    Ok(c) => IdentityRecord::new("laplace-r-gaussian", &params, (c.lhs - target).abs(), tol_r),
                    Err(_) => IdentityRecord::failed("laplace-r-gaussian", &params, tol_r),
                });
            }
        }
    }
    for &r in &[0.5, 1.0] {
        for &lambda in &[0.0, 1.0, 2.0] {
            let params = [("r", r), ("lambda", lambda)];
            out.push(match crate::theta::check_laplace_t(r, lambda, cfg) {
                Ok((c, _)) => IdentityRecord::new("laplace-t", &params, c.residual, tol_t),
                Err(_) => IdentityRecord::failed("laplace-t", &params, tol_t),
            });
        }
    }
    out
}

/// Radii and horizon of the flatness report.
pub const FLATNESS_R: (f64, f64) = (1e-2, 1e-3);
pub const FLATNESS_T: f64 = 1.0;
pub const FLATNESS_MAX_ORDER: usize = 4;

/// |g^{(n)}(1e−3)| against `bound`, and the growth of |g^{(n)}| from r = 1e−2
/// down to 1e−3 (must be ≤ 0), for n ≤ 4 at t = 1.
pub fn flatness_records(bound: f64, cfg: &QuadratureConfig) -> Vec<IdentityRecord> {
    let mut out = Vec::new();
    let (r_far, r_near) = FLATNESS_R;
    for n in 0..=FLATNESS_MAX_ORDER {
        let far = crate::theta::g_derivative(n, r_far, FLATNESS_T, cfg);
        let near = crate::theta::g_derivative(n, r_near, FLATNESS_T, cfg);
        let pn = [("n", n as f64), ("r", r_near), ("t", FLATNESS_T)];
        match (far, near) {
            (Ok(f), Ok(m)) => {
                out.push(IdentityRecord::new("flatness-bound", &pn, m.value.abs(), bound));
                let growth = (m.value.abs() - f.value.abs()).max(0.0);
                out.push(IdentityRecord::new("flatness-decrease", &[("n", n as f64), ("r_far", r_far), ("r_near", r_near)], growth, 0.0));
            }
            _ => out.push(IdentityRecord::failed("flatness-bound", &pn, bound)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s_function_is_continuous_at_zero() {
        let s = SFunction::new(1.0);
        assert_eq!(s.eval(0.0), PI / 2.0);
        for &h in &[1e-2, 2e-3, 9.99e-4, 1e-6] {
            let direct = (PI * h / 2.0).sin() / h.sinh();
            assert!((s.eval(h) - direct).abs() < 1e-13, "h={h}");
        }
    }

    #[test]
    fn sigma_tilde_is_quarter_phase_shift() {
        let sig = SigmaFunction::new(0.7, 1.3);
        for &x in &[-1.0, 0.2, 2.5] {
            let shifted = (0.5 * PI * 0.4f64).exp() * (sig.phase(x, 0.4) + PI / 2.0).sin();
            assert!((sig.eval_tilde(x, 0.4) - shifted).abs() < 1e-14);
        }
    }

    #[test]
    fn catalogue_pairs_are_even() {
        let pts = [0.1, 0.7, 1.9, 3.0];
        for p in FGPair::catalogue(1.0, 0.8, -0.6) {
            assert!(p.evenness_defect(&pts) < 1e-14, "{}", p.label);
        }
    }

    #[test]
    fn cosh_product_exact() {
        let r = check_elementary(Elementary::CoshProduct { x: 1.2, y: -0.4 }, &QuadratureConfig::default()).unwrap();
        assert!(r.residual < 1e-15);
    }
}
