use crate::error::CliError;
use hwlaw::QuadratureConfig;
use std::path::Path;

/// Apply `key=value` lines from a config file; `#` starts a comment.
pub fn load(path: &Path, mut cfg: QuadratureConfig) -> Result<QuadratureConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        let bad = || CliError::Usage(format!("{}:{}: bad value for {k}: {v:?}", path.display(), i + 1));
        match k {
            "abs_tol" => cfg.abs_tol = v.parse().map_err(|_| bad())?,
            "rel_tol" => cfg.rel_tol = v.parse().map_err(|_| bad())?,
            "truncation_sigma" => cfg.truncation_sigma = v.parse().map_err(|_| bad())?,
            "max_subdivisions" => cfg.max_subdivisions = v.parse().map_err(|_| bad())?,
            "osc_nodes_per_period" => cfg.osc_nodes_per_period = v.parse().map_err(|_| bad())?,
            _ => return Err(CliError::Usage(format!("{}:{}: unknown key {k}", path.display(), i + 1))),
        }
    }
    Ok(cfg)
}
