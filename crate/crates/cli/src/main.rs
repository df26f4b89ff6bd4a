mod args;
mod config;
mod error;
mod output;
mod run;

use args::{Cli, Command, INTERFACE_VERSION};
use clap::Parser;
use error::CliError;
use hwlaw::QuadratureConfig;
use output::{Outputs, RunManifest};
use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hwlaw: {e}");
            e.exit_code()
        }
    }
}

fn quadrature(cli: &Cli) -> Result<QuadratureConfig, CliError> {
    let mut cfg = QuadratureConfig::default();
    if let Some(p) = &cli.config {
        cfg = config::load(p, cfg)?;
    }
    if let Some(a) = cli.abs_tol {
        cfg.abs_tol = a;
    }
    if let Some(r) = cli.rel_tol {
        cfg.rel_tol = r;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Replay(r) => {
            let text = std::fs::read_to_string(&r.manifest)?;
            let m: RunManifest = serde_json::from_str(&text)?;
            if m.interface_version != INTERFACE_VERSION {
                return Err(CliError::Usage(format!(
                    "manifest interface v{} does not match this binary (v{INTERFACE_VERSION})",
                    m.interface_version
                )));
            }
            let cmd: Command = serde_json::from_value(m.invocation)?;
            run_recorded(&cmd, m.quadrature, &cli.out_dir)
        }
        cmd => run_recorded(cmd, quadrature(cli)?, &cli.out_dir),
    }
}

/// Run `cmd` and write its manifest whether or not the run itself succeeded.
fn run_recorded(cmd: &Command, cfg: QuadratureConfig, out_dir: &Path) -> Result<(), CliError> {
    let start = Instant::now();
    let mut out = Outputs::new(out_dir);
    let mut ctx = run::Ctx { cfg, out: &mut out, tolerances: BTreeMap::new(), seed: None };
    let result = run::execute(cmd, &mut ctx);
    if matches!(result, Err(CliError::Usage(_) | CliError::Domain(_) | CliError::Io(_))) {
        return result;
    }
    let mut tolerances = std::mem::take(&mut ctx.tolerances);
    tolerances.insert("abs_tol".into(), cfg.abs_tol);
    tolerances.insert("rel_tol".into(), cfg.rel_tol);
    let seed = ctx.seed;
    let invocation = serde_json::to_value(cmd)?;
    let params = flatten(&invocation);
    let stem = run::stem(cmd);
    let manifest_path = out_dir.join(format!("{stem}.manifest.json"));
    let mut outputs = out.files.clone();
    outputs.push(manifest_path.clone());
    let manifest = RunManifest {
        interface_version: INTERFACE_VERSION,
        command: cmd.name().into(),
        invocation,
        params,
        tolerances,
        quadrature: cfg,
        seed,
        outputs,
        wall_time: start.elapsed().as_secs_f64(),
    };
    let mut s = serde_json::to_string_pretty(&manifest)?;
    s.push('\n');
    output::write_atomic(&manifest_path, s.as_bytes())?;
    result
}

fn flatten(v: &serde_json::Value) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    if let serde_json::Value::Object(outer) = v {
        for (variant, inner) in outer {
            out.insert("subcommand".into(), variant.to_lowercase());
            if let serde_json::Value::Object(fields) = inner {
                for (k, x) in fields {
                    out.insert(k.clone(), x.to_string());
                }
            }
        }
    }
    out
}
