//! Browser bindings for the vortex solver.
//!
//! Three interactive operations, each returning a JSON string so the page
//! stays a plain static file with no framework:
//!
//! - [`solve_pair`]: solve the Kazdan-Warner equation for a pair and
//!   rasterize `h`, `log10` energy density and `|u|²` onto a square lattice
//!   for canvas heatmaps, together with the observables report.
//! - [`radial_profile`]: the rotationally symmetric oracle for `ψ = z^d`,
//!   as plot-ready curves.
//! - [`kirwan_map`]: quantum Kirwan image of an expression in `u` and `q`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use vortex_core::grid::{PolarGrid, ScalarField};
use vortex_core::kw::SolverConfig;
use vortex_core::poly::NPair;
use vortex_core::qh::{kirwan_q_lambda, EquivariantElement};
use vortex_core::radial::radial_oracle;
use vortex_core::vortex::{energy_field, observables, VortexSolution};
use vortex_core::VortexError;

#[derive(Serialize)]
struct ErrorPayload {
    error: String,
}

fn error_json(message: impl ToString) -> String {
    serde_json::to_string(&ErrorPayload {
        error: message.to_string(),
    })
    .expect("error payload")
}

#[derive(Serialize)]
struct SolveResponse {
    d: usize,
    energy: f64,
    energy_tail: f64,
    decay_slope: f64,
    ev_inf: Vec<[f64; 2]>,
    max_moment_boundary: f64,
    r_max: f64,
    raster: usize,
    /// Row-major rasters over `[-R, R]²`; `null` outside the disk.
    h: Vec<Option<f64>>,
    log_energy: Vec<Option<f64>>,
    higgs_norm_sq: Vec<Option<f64>>,
}

fn rasterize(field: &ScalarField, raster: usize, map: impl Fn(f64) -> f64) -> Vec<Option<f64>> {
    let r_max = field.grid().r_max();
    let mut out = Vec::with_capacity(raster * raster);
    for row in 0..raster {
        // Canvas rows grow downward; flip so positive t points up.
        let t = r_max * (1.0 - 2.0 * (row as f64 + 0.5) / raster as f64);
        for col in 0..raster {
            let s = r_max * (2.0 * (col as f64 + 0.5) / raster as f64 - 1.0);
            out.push(field.sample(Complex64::new(s, t)).map(&map));
        }
    }
    out
}

fn solve_pair_inner(
    pair_json: &str,
    n_r: usize,
    n_theta: usize,
    raster: usize,
) -> Result<String, VortexError> {
    let pair = NPair::from_json(pair_json)?;
    if !(16..=512).contains(&raster) {
        return Err(VortexError::InvalidInput(
            "raster size must lie in 16..=512".into(),
        ));
    }
    let r_max = 8.0 * (1.0 + pair.max_root_radius()?);
    let grid = Arc::new(PolarGrid::new(r_max, n_r, n_theta, 1.5)?);
    let sol = VortexSolution::solve(&pair, &grid, &SolverConfig::default())?;
    let obs = observables(&sol)?;
    let energy = energy_field(&sol)?;
    let moment_sq = ScalarField::from_fn(grid.clone(), |_, _, _| 0.0);
    let mut higgs_sq = moment_sq;
    for i in 0..=grid.n_r() {
        let sectors = if i == 0 { 1 } else { grid.n_theta() };
        for j in 0..sectors {
            let u = sol.higgs(i, j);
            higgs_sq.set(i, j, u.iter().map(|c| c.norm_sqr()).sum());
        }
    }
    let response = SolveResponse {
        d: obs.d,
        energy: obs.energy,
        energy_tail: obs.energy_tail,
        decay_slope: obs.decay_slope,
        ev_inf: obs.ev_inf,
        max_moment_boundary: obs.max_moment_boundary,
        r_max,
        raster,
        h: rasterize(sol.h(), raster, |v| v),
        log_energy: rasterize(&energy, raster, |v| v.max(1e-12).log10()),
        higgs_norm_sq: rasterize(&higgs_sq, raster, |v| v),
    };
    Ok(serde_json::to_string(&response).expect("response serializes"))
}

/// Solve a pair (NPair JSON) and return observables plus canvas rasters.
#[wasm_bindgen]
pub fn solve_pair(pair_json: &str, n_r: usize, n_theta: usize, raster: usize) -> String {
    solve_pair_inner(pair_json, n_r, n_theta, raster).unwrap_or_else(error_json)
}

#[derive(Serialize)]
struct ProfileResponse {
    d: usize,
    r_max: f64,
    energy: f64,
    h_center: f64,
    r: Vec<f64>,
    h: Vec<f64>,
    energy_density: Vec<f64>,
}

fn radial_profile_inner(d: usize, r_max: f64, points: usize) -> Result<String, VortexError> {
    let profile = radial_oracle(d, r_max, points.clamp(16, 16384))?;
    let energy_density = (0..profile.r.len()).map(|i| profile.energy_density(i)).collect();
    let response = ProfileResponse {
        d,
        r_max,
        energy: profile.total_energy(),
        h_center: profile.center_value(),
        r: profile.r.clone(),
        h: profile.h.clone(),
        energy_density,
    };
    Ok(serde_json::to_string(&response).expect("response serializes"))
}

/// Radial oracle profile for `ψ = z^d` as plot-ready arrays.
#[wasm_bindgen]
pub fn radial_profile(d: usize, r_max: f64, points: usize) -> String {
    radial_profile_inner(d, r_max, points).unwrap_or_else(error_json)
}

#[derive(Serialize)]
struct KirwanResponse {
    input: String,
    n: usize,
    image: String,
}

/// Quantum Kirwan image of an expression in `u` and `q`, rendered in the
/// canonical `c`, `q` form.
#[wasm_bindgen]
pub fn kirwan_map(expression: &str, n: usize) -> String {
    let run = || -> Result<String, VortexError> {
        if n < 2 {
            return Err(VortexError::InvalidInput("need N ≥ 2".into()));
        }
        let element = EquivariantElement::parse(expression)?;
        let image = kirwan_q_lambda(&element, n);
        Ok(serde_json::to_string(&KirwanResponse {
            input: expression.to_string(),
            n,
            image: image.to_string(),
        })
        .expect("response serializes"))
    };
    run().unwrap_or_else(error_json)
}
