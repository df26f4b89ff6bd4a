//! Monte Carlo ground truth: Brownian exponential functionals, Bessel clocks
//! through Lamperti's time change, and distributional statistics.
//!
//! Every path draws from its own ChaCha8 stream selected by the path index, so
//! output does not depend on how rayon schedules the work.

use crate::bessel_law::BesselParams;
use crate::error::{domain, Error, Result};
use crate::quad::{integrate_breaks, IntegralEstimate, QuadratureConfig};
use crate::special::{gamma_lower_regularized, hermite_polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "HW_NUM_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    pub t: f64,
    pub n_steps: usize,
    pub n_paths: usize,
    pub seed: u64,
}

impl PathConfig {
    pub fn new(t: f64, n_steps: usize, n_paths: usize, seed: u64) -> Result<Self> {
        let c = Self { t, n_steps, n_paths, seed };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return domain(format!("t must be positive, got {}", self.t));
        }
        if self.n_steps < 100 {
            return domain(format!("n_steps must be at least 100, got {}", self.n_steps));
        }
        if self.n_paths < 1000 {
            return domain(format!("n_paths must be at least 1000, got {}", self.n_paths));
        }
        Ok(())
    }

    /// Same sizes, independent randomness.
    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }

    pub fn with_t(&self, t: f64) -> Self {
        Self { t, ..*self }
    }
}

/// Seed for an independent population derived from `seed` and a tag.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Thread pool sized by `HW_NUM_THREADS` when set, else by rayon's default.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Error::Config(format!("{THREADS_ENV} must be positive")));
        }
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Config(e.to_string()))
}

fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
    Ok(thread_pool()?.install(|| (0..n).into_par_iter().map(f).collect()))
}

/// Pairwise summation; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n < 2 {
            return domain("need at least two samples");
        }
        let mean = pairwise_sum(xs) / n as f64;
        let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
        let var = pairwise_sum(&dev) / (n - 1) as f64;
        Ok(Self { mean, std_error: (var / n as f64).sqrt(), n })
    }

    /// |mean − target| ≤ k·std_error, with a 1e−12 floor for degenerate samples.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + 1e-12
    }

    /// |mean − target| in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target).abs() / self.std_error
    }
}

/// Samples of (B_t^{(μ)}, A_t^{(μ)}).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathEnsemble {
    pub terminal_b: Vec<f64>,
    pub functional_a: Vec<f64>,
    pub mu: f64,
    pub config: PathConfig,
}

impl PathEnsemble {
    pub fn len(&self) -> usize {
        self.terminal_b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terminal_b.is_empty()
    }

    /// Mean of f(B_t, A_t) over the ensemble.
    pub fn expectation(&self, f: impl Fn(f64, f64) -> f64) -> Result<MeanEstimate> {
        let xs: Vec<f64> = self.terminal_b.iter().zip(&self.functional_a).map(|(&b, &a)| f(b, a)).collect();
        MeanEstimate::from_samples(&xs)
    }

    /// CSV with header path_id,terminal_b,functional_a and 17 significant digits.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Config(format!("csv write failed: {e}"));
        out.write_record(["path_id", "terminal_b", "functional_a"]).map_err(io)?;
        for (i, (b, a)) in self.terminal_b.iter().zip(&self.functional_a).enumerate() {
            out.write_record([i.to_string(), fmt17(*b), fmt17(*a)]).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Config(format!("csv write failed: {e}")))
    }
}

/// Shortest-safe text for a double: 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Exact Gaussian increments for B^{(μ)}, trapezoid for A.
pub fn sample_bm_exp_functional(mu: f64, cfg: PathConfig) -> Result<PathEnsemble> {
    cfg.validate()?;
    if !mu.is_finite() {
        return domain("drift must be finite");
    }
    let dt = cfg.t / cfg.n_steps as f64;
    let sd = dt.sqrt();
    let pairs = par_map(cfg.n_paths, |i| {
        let mut rng = path_rng(cfg.seed, i as u64);
        let mut b = 0.0f64;
        let mut e_prev = 1.0f64;
        let mut acc = 0.0f64;
        for _ in 0..cfg.n_steps {
            let z: f64 = rng.sample(StandardNormal);
            b += mu * dt + sd * z;
            let e = (2.0 * b).exp();
            acc += e_prev + e;
            e_prev = e;
        }
        (b, 0.5 * dt * acc)
    })?;
    let (terminal_b, functional_a) = pairs.into_iter().unzip();
    Ok(PathEnsemble { terminal_b, functional_a, mu, config: cfg })
}

/// What happened to a Lamperti path before its horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClockOutcome {
    /// a²A reached t: the clock is the crossing time.
    Survived,
    /// a²A_∞ < t with residual probability below the cutoff: absorbed before t.
    Absorbed,
    /// ν ≥ 0 and the horizon came first: the clock exceeds the horizon.
    Censored,
    /// ν < 0 and the horizon came first with survival still undecided.
    Undecided,
}

/// Samples of ∫₀^t ds/R_s² on {t < τ₀}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClockEnsemble {
    /// Crossing time; +∞ when censored, NaN when absorbed or undecided.
    pub clock: Vec<f64>,
    pub survived: Vec<bool>,
    /// R at time t; NaN unless the crossing was observed.
    pub terminal_r: Vec<f64>,
    pub outcome: Vec<ClockOutcome>,
    /// Conditional survival probability given the simulated path: 0 or 1 once
    /// decided, P(G < x) at the horizon for undecided paths.
    pub survival_weight: Vec<f64>,
    pub params: BesselParams,
    pub config: PathConfig,
    /// Lamperti-time horizon.
    pub horizon: f64,
}

impl ClockEnsemble {
    pub fn count(&self, o: ClockOutcome) -> usize {
        self.outcome.iter().filter(|&&x| x == o).count()
    }

    /// Estimate of P(t < τ₀): the mean conditional survival probability.
    pub fn survival_fraction(&self) -> Result<MeanEstimate> {
        MeanEstimate::from_samples(&self.survival_weight)
    }

    /// Clocks of surviving paths, censored ones as +∞.
    pub fn surviving_clocks(&self) -> Vec<f64> {
        self.clock.iter().zip(&self.survived).filter(|(_, &s)| s).map(|(&c, _)| c).collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Config(format!("csv write failed: {e}"));
        out.write_record(["path_id", "clock", "survived", "terminal_r", "outcome", "survival_weight"]).map_err(io)?;
        for i in 0..self.clock.len() {
            out.write_record([
                i.to_string(),
                fmt17(self.clock[i]),
                self.survived[i].to_string(),
                fmt17(self.terminal_r[i]),
                format!("{:?}", self.outcome[i]),
                fmt17(self.survival_weight[i]),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::Config(format!("csv write failed: {e}")))
    }
}

/// Residual-mass probability below which a ν < 0 path is declared absorbed.
pub const ABSORPTION_CUTOFF: f64 = 1e-4;

/// Lamperti-time horizon in units of t/a².
pub const CLOCK_HORIZON: f64 = 20.0;

/// Clock α = inf{s : a²A_s^{(ν)} ≥ t} along simulated B^{(ν)}, which equals
/// ∫₀^t ds/R_s² in law on {t < τ₀}.
///
/// For ν < 0 the remaining functional after s is a²e^{2B_s}/(2G) with
/// G ~ Gamma(|ν|), so a path is declared absorbed once
/// P(G < a²e^{2B_s}/(2(t − a²A_s))) drops below [`ABSORPTION_CUTOFF`].
pub fn sample_bessel_clock(p: BesselParams, cfg: PathConfig) -> Result<ClockEnsemble> {
    cfg.validate()?;
    let a2 = p.a * p.a;
    let scale = p.t / a2;
    let dt = scale / cfg.n_steps as f64;
    let sd = dt.sqrt();
    let horizon = CLOCK_HORIZON * scale.max(1.0);
    let max_steps = (horizon / dt).ceil() as usize;
    let nu = p.nu;
    let target = scale; // compare A directly with t/a²
    let rows = par_map(cfg.n_paths, |i| {
        let mut rng = path_rng(cfg.seed, i as u64);
        let mut b = 0.0f64;
        let mut e_prev = 1.0f64;
        let mut acc = 0.0f64;
        for k in 0..max_steps {
            let z: f64 = rng.sample(StandardNormal);
            let b_next = b + nu * dt + sd * z;
            let e = (2.0 * b_next).exp();
            let next = acc + 0.5 * dt * (e_prev + e);
            if next >= target {
                let w = (target - acc) / (next - acc);
                let s = dt * (k as f64 + w);
                let r = p.a * (b + w * (b_next - b)).exp();
                return (s, true, r, ClockOutcome::Survived, 1.0);
            }
            b = b_next;
            e_prev = e;
            acc = next;
            if nu < 0.0 && k % 64 == 63 {
                let x = e / (2.0 * (target - acc));
                if gamma_lower_regularized(-nu, x).unwrap_or(1.0) < ABSORPTION_CUTOFF {
                    return (f64::NAN, false, f64::NAN, ClockOutcome::Absorbed, 0.0);
                }
            }
        }
        if nu >= 0.0 {
            (f64::INFINITY, true, f64::NAN, ClockOutcome::Censored, 1.0)
        } else {
            let x = e_prev / (2.0 * (target - acc));
            let w = gamma_lower_regularized(-nu, x).unwrap_or(f64::NAN);
            (f64::NAN, false, f64::NAN, ClockOutcome::Undecided, w)
        }
    })?;
    let mut clock = Vec::with_capacity(rows.len());
    let mut survived = Vec::with_capacity(rows.len());
    let mut terminal_r = Vec::with_capacity(rows.len());
    let mut outcome = Vec::with_capacity(rows.len());
    let mut survival_weight = Vec::with_capacity(rows.len());
    for (c, s, r, o, w) in rows {
        survival_weight.push(w);
        clock.push(c);
        survived.push(s);
        terminal_r.push(r);
        outcome.push(o);
    }
    Ok(ClockEnsemble { clock, survived, terminal_r, outcome, survival_weight, params: p, config: cfg, horizon })
}

/// sup |F_n − F| over the finite samples. Non-finite samples count in n
/// (right-censored observations) but are not visited.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return domain("KS statistic needs at least one sample");
    }
    let n = samples.len() as f64;
    let mut xs: Vec<f64> = samples.iter().copied().filter(|x| x.is_finite()).collect();
    xs.sort_by(|a, b| a.total_cmp(b));
    let mut d = 0.0f64;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// sup |F_n − G_m| between two samples.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return domain("two-sample KS needs nonempty samples");
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(|p, q| p.total_cmp(q));
    y.sort_by(|p, q| p.total_cmp(q));
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// One-sample threshold 1.95/√n.
pub fn ks_threshold(n: usize) -> f64 {
    1.95 / (n as f64).sqrt()
}

/// Two-sample 99% threshold 1.628·√((n+m)/(nm)).
pub fn ks_two_sample_threshold(n: usize, m: usize) -> f64 {
    let (n, m) = (n as f64, m as f64);
    1.628 * ((n + m) / (n * m)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BougerolVariant {
    /// β(A_t) against sinh B_t.
    Plain,
    /// β(A_t^{(1)}) against sinh(B_t + εt), ε = ±1 with probability ½.
    Drifted,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BougerolResult {
    pub ks: f64,
    pub threshold: f64,
    pub n: usize,
}

impl BougerolResult {
    pub fn pass(&self) -> bool {
        self.ks < self.threshold
    }
}

/// Two-sample KS between β(A) and the sinh side. `sinh_t` replaces the
/// horizon on the sinh side (power check with mismatched laws).
pub fn bougerol_check(t: f64, variant: BougerolVariant, cfg: PathConfig, sinh_t: Option<f64>) -> Result<BougerolResult> {
    let cfg = cfg.with_t(t);
    cfg.validate()?;
    let mu = match variant {
        BougerolVariant::Plain => 0.0,
        BougerolVariant::Drifted => 1.0,
    };
    let ens = sample_bm_exp_functional(mu, cfg.with_seed(derive_seed(cfg.seed, 1)))?;
    let beta_seed = derive_seed(cfg.seed, 2);
    let left = par_map(cfg.n_paths, |i| {
        let z: f64 = path_rng(beta_seed, i as u64).sample(StandardNormal);
        ens.functional_a[i].sqrt() * z
    })?;
    let t2 = sinh_t.unwrap_or(t);
    let (b_seed, eps_seed) = (derive_seed(cfg.seed, 3), derive_seed(cfg.seed, 4));
    let right = par_map(cfg.n_paths, |i| {
        let z: f64 = path_rng(b_seed, i as u64).sample(StandardNormal);
        let b = t2.sqrt() * z;
        match variant {
            BougerolVariant::Plain => b.sinh(),
            BougerolVariant::Drifted => {
                let eps = if path_rng(eps_seed, i as u64).gen::<bool>() { 1.0 } else { -1.0 };
                (b + eps * t2).sinh()
            }
        }
    })?;
    Ok(BougerolResult { ks: ks_two_sample(&left, &right)?, threshold: ks_two_sample_threshold(left.len(), right.len()), n: left.len() })
}

/// ∫e^{−x²/2t}e^{nx}sin(πx/t)dx, which vanishes for integer n.
pub fn stieltjes_check(n: i32, t: f64, cfg: &QuadratureConfig) -> Result<IntegralEstimate> {
    if n.abs() > 10 {
        return domain(format!("|n| must be at most 10, got {n}"));
    }
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("t must be positive, got {t}"));
    }
    let nf = n as f64;
    let centre = nf * t;
    let half = cfg.truncation_sigma.max(12.0) * t.sqrt() + 2.0 * t.sqrt();
    // panels of a quarter period, laid out from 0 so the integrand is not symmetrized
    let w = 0.25 * t;
    let k_lo = ((centre - half) / w).floor() as i64;
    let k_hi = ((centre + half) / w).ceil() as i64;
    let breaks: Vec<f64> = (k_lo..=k_hi).map(|k| k as f64 * w).collect();
    let f = |x: f64| (-x * x / (2.0 * t) + nf * x).exp() * (PI * x / t).sin();
    integrate_breaks(f, &breaks, cfg)
}

/// Monte Carlo side of the joint Laplace identity, E[exp(−λe^{B_t} − (λ²+r²)A_t/2)].
pub fn laplace_joint_mc(ens: &PathEnsemble, lambda: f64, r: f64) -> Result<MeanEstimate> {
    let k = 0.5 * (lambda * lambda + r * r);
    ens.expectation(|b, a| (-lambda * b.exp() - k * a).exp())
}

/// E[H_n(−e^{B_t}/√(2A_t)); A_t ∈ (v_lo, v_hi)].
pub fn hermite_indicator_mc(ens: &PathEnsemble, n: usize, v_lo: f64, v_hi: f64) -> Result<MeanEstimate> {
    ens.expectation(|b, a| if a > v_lo && a < v_hi { hermite_polynomial(n, -b.exp() / (2.0 * a).sqrt()) } else { 0.0 })
}

/// E[exp(−αe^{2B_t}/2A_t); A_t ∈ (v_lo, v_hi)].
pub fn recip_exp_mc(ens: &PathEnsemble, alpha: f64, v_lo: f64, v_hi: f64) -> Result<MeanEstimate> {
    ens.expectation(|b, a| if a > v_lo && a < v_hi { (-alpha * (2.0 * b).exp() / (2.0 * a)).exp() } else { 0.0 })
}

/// E[exp(θe^{2B_t}/A_t)], finite for θ < 1/2.
pub fn recip_moment_mc(ens: &PathEnsemble, theta: f64) -> Result<MeanEstimate> {
    ens.expectation(|b, a| (theta * (2.0 * b).exp() / a).exp())
}
