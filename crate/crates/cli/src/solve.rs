use std::path::Path;
use std::time::Instant;

use vortex_core::poly::NPair;
use vortex_core::vortex::{observables, VortexSolution};

use crate::{config, report, Cli, CliError, GridArgs};

pub fn run(cli: &Cli, pair_file: &Path, grid_args: &GridArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let text = std::fs::read_to_string(pair_file)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", pair_file.display())))?;
    let pair = NPair::from_json(&text)?;
    let file_cfg = config::load(cli.config.as_deref())?;
    let grid = config::resolve_grid(&pair, &file_cfg, grid_args)?;
    let solver_cfg = config::resolve_solver(&file_cfg, grid_args)?;

    let sol = VortexSolution::solve(&pair, &grid, &solver_cfg)?;
    let obs = observables(&sol)?;

    let mut csv = Vec::new();
    sol.h()
        .write_csv(&mut csv)
        .map_err(|e| CliError::input(format!("csv: {e}")))?;
    report::write_atomic(&cli.out.join("h_field.csv"), &csv)?;

    let json = report::to_json(&obs);
    report::write_atomic(&cli.out.join("observables.json"), json.as_bytes())?;
    report::write_meta(
        &cli.out.join("observables.meta.json"),
        "solve",
        started.elapsed().as_millis(),
    )?;
    println!("{json}");
    Ok(())
}
