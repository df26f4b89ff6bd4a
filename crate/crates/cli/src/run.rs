use crate::args::*;
use crate::error::CliError;
use crate::output::{num, Outputs, Table};
use hwlaw::bessel_law::{clock_cdf, density_clock, density_clock_via_d, survival_probability};
use hwlaw::exp_law::{
    a_mu_support, density_a_mu, density_a_mu_mass, joint_density_b_a, joint_density_ratio_a, DensityMethod,
};
use hwlaw::identities::{flatness_records, laplace_records, run_suite, SuiteConfig};
use hwlaw::mc::{
    bougerol_check, ks_statistic, ks_threshold, sample_bessel_clock, sample_bm_exp_functional, thread_pool,
    BougerolVariant, ClockOutcome,
};
use hwlaw::theta::{theta, YOR_T_MIN};
use hwlaw::{
    BesselParams, ExpFunctionalLaw, IdentityRecord, IntegralEstimate, PathConfig, QuadratureConfig, TabulatedCdf,
    ThetaPoint, ThetaRep,
};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Pass tolerances of the verification suites.
pub const IDENTITY_TOL: f64 = 1e-7;
pub const LAPLACE_R_TOL: f64 = 1e-6;
pub const LAPLACE_T_TOL: f64 = 1e-4;
pub const FLATNESS_BOUND: f64 = 1e-4;

pub struct Ctx<'a> {
    pub cfg: QuadratureConfig,
    pub out: &'a mut Outputs,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: Option<u64>,
}

/// Stem shared by a command's output files.
pub fn stem(cmd: &Command) -> String {
    match cmd {
        Command::Theta(_) => "theta".into(),
        Command::Density(a) => format!("density-{}", value_name(&a.kind)),
        Command::Verify(a) => format!("verify-{}", value_name(&a.suite)),
        Command::Mc(a) => format!("mc-{}", value_name(&a.task)),
        Command::Replay(_) => "replay".into(),
    }
}

fn value_name<T: clap::ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

pub fn execute(cmd: &Command, ctx: &mut Ctx) -> Result<(), CliError> {
    let stem = stem(cmd);
    match cmd {
        Command::Theta(a) => cmd_theta(a, &stem, ctx),
        Command::Density(a) => cmd_density(a, &stem, ctx),
        Command::Verify(a) => cmd_verify(a, &stem, ctx),
        Command::Mc(a) => cmd_mc(a, &stem, ctx),
        Command::Replay(_) => Err(CliError::Usage("replay cannot be nested".into())),
    }
}

fn par_eval<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Result<Vec<R>, CliError> {
    Ok(thread_pool()?.install(|| items.par_iter().map(f).collect()))
}

fn require_nonempty(name: &str, xs: &[f64]) -> Result<(), CliError> {
    if xs.is_empty() {
        return Err(CliError::Usage(format!("--{name} grid is empty")));
    }
    Ok(())
}

fn count_unconverged<'a>(xs: impl IntoIterator<Item = &'a IntegralEstimate>) -> usize {
    xs.into_iter().filter(|e| !e.converged).count()
}

fn finish(unconverged: usize) -> Result<(), CliError> {
    if unconverged > 0 {
        Err(CliError::NonConvergence(unconverged))
    } else {
        Ok(())
    }
}

fn cmd_theta(a: &ThetaArgs, stem: &str, ctx: &mut Ctx) -> Result<(), CliError> {
    require_nonempty("r", &a.r)?;
    require_nonempty("t", &a.t)?;
    let reps: Vec<ThetaRep> = if a.rep == "all" {
        let mut v = ThetaRep::FIXED.to_vec();
        v.push(ThetaRep::Shifted(a.shift));
        v
    } else {
        vec![ThetaRep::parse(&a.rep).ok_or_else(|| CliError::Usage(format!("unknown representation {:?}", a.rep)))?]
    };
    let mut jobs = Vec::new();
    for &t in &a.t {
        for &r in &a.r {
            let p = ThetaPoint::new(r, t)?;
            for &rep in &reps {
                // the Yor form is only offered above its time floor when all forms are requested
                if a.rep == "all" && rep == ThetaRep::YorSinhSin && t < YOR_T_MIN {
                    continue;
                }
                jobs.push((p, rep));
            }
        }
    }
    let cfg = ctx.cfg;
    let results = par_eval(&jobs, |&(p, rep)| theta(p, rep, &cfg))?;
    let mut table = Table::new(&["r", "t", "rep", "value", "abs_error"]);
    let mut ests = Vec::new();
    for ((p, rep), res) in jobs.iter().zip(results) {
        let e = res?;
        table.push(vec![num(p.r), num(p.t), rep.label(), num(e.value), num(e.abs_error)]);
        ests.push(e);
    }
    ctx.out.csv(&format!("{stem}.csv"), &table)?;
    finish(count_unconverged(&ests))
}

fn default_v_grid() -> Vec<f64> {
    let (lo, hi, n) = (0.02f64, 50.0f64, 48);
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn or_default(xs: &[f64], d: impl FnOnce() -> Vec<f64>) -> Vec<f64> {
    if xs.is_empty() {
        d()
    } else {
        xs.to_vec()
    }
}

fn method_of(m: MethodArg, mu: f64) -> DensityMethod {
    match m {
        MethodArg::Hermite => DensityMethod::Hermite,
        MethodArg::Double => DensityMethod::DoubleIntegral,
        MethodArg::Ibp => DensityMethod::NegIBP,
        MethodArg::Auto | MethodArg::Both => DensityMethod::preferred(mu),
    }
}

fn cmd_density(a: &DensityArgs, stem: &str, ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let mut ests: Vec<IntegralEstimate> = Vec::new();
    let mut table;
    match a.kind {
        DensityKind::Amu => {
            let v = or_default(&a.v, default_v_grid);
            let law = ExpFunctionalLaw::new(a.mu, a.t, method_of(a.method, a.mu))?;
            let both = a.method == MethodArg::Both;
            let second = if both { Some(ExpFunctionalLaw::new(a.mu, a.t, DensityMethod::DoubleIntegral)?) } else { None };
            let rows = par_eval(&v, |&x| {
                let d1 = density_a_mu(x, law, &cfg)?;
                let d2 = second.map(|l| density_a_mu(x, l, &cfg)).transpose()?;
                Ok::<_, hwlaw::Error>((d1, d2))
            })?;
            table = if both {
                Table::new(&["v", format!("{:?}", law.method).to_lowercase().as_str(), "doubleintegral", "rel_diff"])
            } else {
                Table::new(&["v", "density", "abs_error"])
            };
            for (x, r) in v.iter().zip(rows) {
                let (d1, d2) = r?;
                match d2 {
                    Some(d2) => {
                        let rel = (d1.value - d2.value).abs() / d1.value.abs().max(f64::MIN_POSITIVE);
                        table.push(vec![num(*x), num(d1.value), num(d2.value), num(rel)]);
                        ests.push(d2);
                    }
                    None => table.push(vec![num(*x), num(d1.value), num(d1.abs_error)]),
                }
                ests.push(d1);
            }
            let mass = density_a_mu_mass(law, &cfg)?;
            table.push(vec!["normalization".into(), num(mass.value), num(mass.abs_error)]);
            ests.push(mass);
        }
        DensityKind::Joint => {
            let v = or_default(&a.v, default_v_grid);
            let x = or_default(&a.x, || (0..=8).map(|i| -2.0 + 0.5 * i as f64).collect());
            let jobs: Vec<(f64, f64)> = x.iter().flat_map(|&xi| v.iter().map(move |&vi| (xi, vi))).collect();
            let rows = par_eval(&jobs, |&(xi, vi)| joint_density_b_a(xi, vi, a.t, &cfg))?;
            table = Table::new(&["x", "v", "density", "abs_error"]);
            for ((xi, vi), r) in jobs.iter().zip(rows) {
                let e = r?;
                table.push(vec![num(*xi), num(*vi), num(e.value), num(e.abs_error)]);
                ests.push(e);
            }
        }
        DensityKind::Ratio => {
            let v = or_default(&a.v, default_v_grid);
            let u = or_default(&a.u, default_v_grid);
            let jobs: Vec<(f64, f64)> = u.iter().flat_map(|&ui| v.iter().map(move |&vi| (ui, vi))).collect();
            let rows = par_eval(&jobs, |&(ui, vi)| joint_density_ratio_a(ui, vi, a.t, &cfg))?;
            table = Table::new(&["u", "v", "density", "abs_error"]);
            for ((ui, vi), r) in jobs.iter().zip(rows) {
                let e = r?;
                table.push(vec![num(*ui), num(*vi), num(e.value), num(e.abs_error)]);
                ests.push(e);
            }
        }
        DensityKind::BesselClock => {
            let p = BesselParams::new(a.nu, a.a, a.t)?;
            let u = or_default(&a.u, || (1..=40).map(|i| 0.1 * i as f64).collect());
            let method = DensityMethod::preferred(a.nu + 2.0);
            let rows = par_eval(&u, |&ui| {
                let c = density_clock(p, ui, &cfg)?;
                let d = density_clock_via_d(p, ui, method, &cfg)?;
                Ok::<_, hwlaw::Error>((c, d))
            })?;
            table = Table::new(&["u", "density", "exp_delta_u_d", "abs_error"]);
            for (ui, r) in u.iter().zip(rows) {
                let (c, d) = r?;
                table.push(vec![num(*ui), num(c.value), num(d.value), num(c.abs_error)]);
                ests.push(c);
                ests.push(d);
            }
            // mass on [t_min, 20·max(1, t/a²)] next to P(t < τ₀)
            let u_max = hwlaw::mc::CLOCK_HORIZON * p.scaled_horizon().max(1.0);
            let tab: TabulatedCdf = clock_cdf(p, u_max, 1000, &cfg)?;
            table.push(vec!["normalization".into(), num(tab.mass()), num(survival_probability(p)?)]);
        }
    }
    ctx.out.csv(&format!("{stem}.csv"), &table)?;
    finish(count_unconverged(&ests))
}

fn cmd_verify(a: &VerifyArgs, stem: &str, ctx: &mut Ctx) -> Result<(), CliError> {
    let cfg = ctx.cfg;
    let tol = |d: f64| a.tol.unwrap_or(d);
    let mut records: Vec<IdentityRecord> = Vec::new();
    let all = a.suite == Suite::All;
    if all || a.suite == Suite::Identities {
        let sc = SuiteConfig { draws: a.draws, seed: a.seed, tolerance: tol(IDENTITY_TOL) };
        let mut recs = run_suite(&sc, &cfg);
        if let Some(t) = a.tol {
            for r in &mut recs {
                *r = IdentityRecord { tolerance: t, pass: r.residual.is_finite() && r.residual <= t, ..r.clone() };
            }
        }
        records.extend(recs);
    }
    if all || a.suite == Suite::Laplace {
        records.extend(laplace_records(tol(LAPLACE_R_TOL), tol(LAPLACE_T_TOL), &cfg));
    }
    if all || a.suite == Suite::Flatness {
        let mut recs = flatness_records(tol(FLATNESS_BOUND), &cfg);
        if let Some(t) = a.tol {
            for r in &mut recs {
                *r = IdentityRecord { tolerance: t, pass: r.residual.is_finite() && r.residual <= t, ..r.clone() };
            }
        }
        records.extend(recs);
    }
    ctx.tolerances.insert("identities".into(), tol(IDENTITY_TOL));
    ctx.tolerances.insert("laplace_r".into(), tol(LAPLACE_R_TOL));
    ctx.tolerances.insert("laplace_t".into(), tol(LAPLACE_T_TOL));
    ctx.tolerances.insert("flatness_bound".into(), tol(FLATNESS_BOUND));
    ctx.out.json(&format!("{stem}.json"), &records)?;
    let failed = records.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        Err(CliError::Verification(failed))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct ExpfunStats {
    mu: f64,
    t: f64,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
    mean_a: f64,
    std_error_a: f64,
    exact_mean_a: f64,
    mean_exp_b: f64,
    std_error_exp_b: f64,
    exact_mean_exp_b: f64,
}

#[derive(Serialize)]
struct BesselStats {
    nu: f64,
    a: f64,
    t: f64,
    n_paths: usize,
    n_steps: usize,
    seed: u64,
    survival_fraction: f64,
    survival_std_error: f64,
    survival_probability: f64,
    survived: usize,
    absorbed: usize,
    censored: usize,
    undecided: usize,
    horizon: f64,
}

#[derive(Serialize)]
struct KsStats {
    task: String,
    t: f64,
    n: usize,
    seed: u64,
    ks: f64,
    threshold: f64,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    tabulated_mass: Option<f64>,
}

fn cmd_mc(a: &McArgs, stem: &str, ctx: &mut Ctx) -> Result<(), CliError> {
    let pc = PathConfig::new(a.t, a.steps, a.paths, a.seed)?;
    ctx.seed = Some(a.seed);
    let cfg = ctx.cfg;
    match a.task {
        McTask::Expfun => {
            let ens = sample_bm_exp_functional(a.mu, pc)?;
            let mut buf = Vec::new();
            ens.write_csv(&mut buf)?;
            ctx.out.write(&format!("{stem}.csv"), &buf)?;
            let ma = ens.expectation(|_, x| x)?;
            let mb = ens.expectation(|b, _| b.exp())?;
            let k = 2.0 * a.mu + 2.0;
            let exact_a = if k == 0.0 { a.t } else { ((k * a.t).exp() - 1.0) / k };
            let stats = ExpfunStats {
                mu: a.mu,
                t: a.t,
                n_paths: a.paths,
                n_steps: a.steps,
                seed: a.seed,
                mean_a: ma.mean,
                std_error_a: ma.std_error,
                exact_mean_a: exact_a,
                mean_exp_b: mb.mean,
                std_error_exp_b: mb.std_error,
                exact_mean_exp_b: ((a.mu + 0.5) * a.t).exp(),
            };
            ctx.out.json(&format!("{stem}.json"), &[stats])?;
        }
        McTask::Bessel => {
            let p = BesselParams::new(a.nu, a.a, a.t)?;
            let ens = sample_bessel_clock(p, pc)?;
            let mut buf = Vec::new();
            ens.write_csv(&mut buf)?;
            ctx.out.write(&format!("{stem}.csv"), &buf)?;
            let sf = ens.survival_fraction()?;
            let stats = BesselStats {
                nu: a.nu,
                a: a.a,
                t: a.t,
                n_paths: a.paths,
                n_steps: a.steps,
                seed: a.seed,
                survival_fraction: sf.mean,
                survival_std_error: sf.std_error,
                survival_probability: survival_probability(p)?,
                survived: ens.count(ClockOutcome::Survived),
                absorbed: ens.count(ClockOutcome::Absorbed),
                censored: ens.count(ClockOutcome::Censored),
                undecided: ens.count(ClockOutcome::Undecided),
                horizon: ens.horizon,
            };
            ctx.out.json(&format!("{stem}.json"), &[stats])?;
        }
        McTask::Bougerol => {
            let variant = match a.variant {
                VariantArg::Plain => BougerolVariant::Plain,
                VariantArg::Drifted => BougerolVariant::Drifted,
            };
            let res = bougerol_check(a.t, variant, pc, a.sinh_t)?;
            let stats = KsStats {
                task: format!("bougerol-{}", value_name(&a.variant)),
                t: a.t,
                n: res.n,
                seed: a.seed,
                ks: res.ks,
                threshold: res.threshold,
                pass: res.pass(),
                tabulated_mass: None,
            };
            let mut table = Table::new(&["variant", "t", "sinh_t", "n", "ks", "threshold", "pass"]);
            table.push(vec![
                value_name(&a.variant),
                num(a.t),
                num(a.sinh_t.unwrap_or(a.t)),
                res.n.to_string(),
                num(res.ks),
                num(res.threshold),
                res.pass().to_string(),
            ]);
            ctx.out.csv(&format!("{stem}.csv"), &table)?;
            ctx.out.json(&format!("{stem}.json"), &[stats])?;
        }
        McTask::Ks => {
            let ens = sample_bm_exp_functional(a.mu, pc)?;
            let mut buf = Vec::new();
            ens.write_csv(&mut buf)?;
            ctx.out.write(&format!("{stem}.csv"), &buf)?;
            let law = ExpFunctionalLaw::preferred(a.mu, a.t)?;
            let (lo, hi) = a_mu_support(a.mu, a.t);
            let tab = TabulatedCdf::from_density(|v| density_a_mu(v, law, &cfg).map(|e| e.value), lo, hi, 6000, true)?;
            let ks = ks_statistic(&ens.functional_a, |x| tab.cdf(x))?;
            let thr = ks_threshold(ens.len());
            let stats = KsStats {
                task: "ks-functional".into(),
                t: a.t,
                n: ens.len(),
                seed: a.seed,
                ks,
                threshold: thr,
                pass: ks < thr,
                tabulated_mass: Some(tab.mass()),
            };
            ctx.out.json(&format!("{stem}.json"), &[stats])?;
        }
    }
    Ok(())
}
