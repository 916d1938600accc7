//! Merge of the JSON config file and command-line flags (flags win).

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use vortex_core::grid::PolarGrid;
use vortex_core::kw::SolverConfig;
use vortex_core::poly::NPair;

use crate::{CliError, GridArgs};

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub grid: GridSection,
    pub solver: SolverConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub r_max: Option<f64>,
    pub n_r: Option<usize>,
    pub n_theta: Option<usize>,
    pub gamma: Option<f64>,
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::input(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::input(format!("config JSON: {e}")))
        }
    }
}

/// Grid for a pair: spec defaults, then config file, then flags.
pub fn resolve_grid(
    pair: &NPair,
    file: &FileConfig,
    flags: &GridArgs,
) -> Result<Arc<PolarGrid>, CliError> {
    let default_r = 8.0 * (1.0 + pair.max_root_radius()?);
    build_grid(default_r, file, flags)
}

pub fn build_grid(
    default_r: f64,
    file: &FileConfig,
    flags: &GridArgs,
) -> Result<Arc<PolarGrid>, CliError> {
    let r_max = flags.r_max.or(file.grid.r_max).unwrap_or(default_r);
    let n_r = flags.n_r.or(file.grid.n_r).unwrap_or(256);
    let n_theta = flags.n_theta.or(file.grid.n_theta).unwrap_or(128);
    let gamma = flags.gamma.or(file.grid.gamma).unwrap_or(1.5);
    Ok(Arc::new(PolarGrid::new(r_max, n_r, n_theta, gamma)?))
}

pub fn resolve_solver(file: &FileConfig, flags: &GridArgs) -> Result<SolverConfig, CliError> {
    let mut cfg = file.solver.clone();
    if let Some(tol) = flags.tol_residual {
        cfg.tol_residual = tol;
    }
    cfg.validate()?;
    Ok(cfg)
}
