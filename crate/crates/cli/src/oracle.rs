use std::fmt::Write as _;
use std::time::Instant;

use vortex_core::radial::radial_oracle;

use crate::{config, report, Cli, CliError, GridArgs};

pub fn run(cli: &Cli, d: i64, grid_args: &GridArgs) -> Result<(), CliError> {
    let started = Instant::now();
    if !(0..=30).contains(&d) {
        return Err(CliError::input(format!(
            "degree must lie in 0..=30, got {d}"
        )));
    }
    let file_cfg = config::load(cli.config.as_deref())?;
    let r_max = grid_args
        .r_max
        .or(file_cfg.grid.r_max)
        .unwrap_or(8.0);
    let n = grid_args.n_r.or(file_cfg.grid.n_r).unwrap_or(4096);

    let profile = radial_oracle(d as usize, r_max, n)?;
    let mut csv = String::from("r,h,dh_dr\n");
    for i in 0..profile.r.len() {
        writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e}",
            profile.r[i], profile.h[i], profile.dh[i]
        )
        .expect("string write");
    }
    report::write_atomic(&cli.out.join("radial_profile.csv"), csv.as_bytes())?;
    report::write_meta(
        &cli.out.join("radial_profile.meta.json"),
        "oracle",
        started.elapsed().as_millis(),
    )?;
    println!(
        "{}",
        serde_json::json!({
            "d": d,
            "r_max": r_max,
            "h_center": profile.center_value(),
            "energy": profile.total_energy(),
        })
    );
    Ok(())
}
