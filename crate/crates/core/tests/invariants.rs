//! Cross-module invariants that need real solves: mesh convergence of the
//! solver, monotone damping, the truncation-radius trend behind the
//! Dirichlet boundary model, and smoothness of h across the base locus.

use std::sync::Arc;

use vortex_core::grid::PolarGrid;
use vortex_core::kw::{solve_kw, SolverConfig};
use vortex_core::poly::{base_locus, CPoly, NPair};
use vortex_core::vortex::{total_energy, VortexSolution};
use vortex_core::{Complex64, VortexError};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn test_pair() -> NPair {
    NPair::new(vec![
        CPoly::new(vec![c(-0.5, 0.2), c(1.0, 0.0)]),
        CPoly::new(vec![c(0.3, -0.1), c(0.0, 0.4), c(1.0, 0.0)]),
    ])
    .unwrap()
}

#[test]
fn mesh_convergence_order_of_h() {
    let pair = test_pair();
    let cfg = SolverConfig::default();
    let mut fields = Vec::new();
    for level in 0..3 {
        let grid = Arc::new(PolarGrid::new(12.0, 48 << level, 32 << level, 1.5).unwrap());
        fields.push(solve_kw(&pair, &grid, &cfg).unwrap());
    }
    // The grading makes coarse nodes an exact subset of fine nodes, so the
    // sup-differences at shared nodes measure the discretization error.
    let mut diffs = Vec::new();
    for level in 0..2 {
        let coarse = &fields[level];
        let fine = &fields[level + 1];
        let grid = coarse.grid();
        let mut sup: f64 = 0.0;
        for i in 0..=grid.n_r() {
            let sectors = if i == 0 { 1 } else { grid.n_theta() };
            for j in 0..sectors {
                sup = sup.max((coarse.get(i, j) - fine.get(2 * i, 2 * j)).abs());
            }
        }
        diffs.push(sup);
    }
    let order = (diffs[0] / diffs[1]).log2();
    assert!(order >= 1.8, "order {order:.2} from diffs {diffs:?}");
}

#[test]
fn accepted_newton_steps_never_increase_residual() {
    // Truncate the iteration at every budget; the reported stall residuals
    // trace the accepted path and must be non-increasing.
    let pair = test_pair();
    let grid = Arc::new(PolarGrid::new(12.0, 48, 32, 1.5).unwrap());
    let mut residuals = Vec::new();
    for budget in 1..=8 {
        let cfg = SolverConfig {
            max_newton: budget,
            tol_residual: 1e-30_f64.max(f64::MIN_POSITIVE),
            ..SolverConfig::default()
        };
        match solve_kw(&pair, &grid, &cfg) {
            Err(VortexError::NewtonStalled { residual, .. }) => residuals.push(residual),
            Ok(_) => break,
            Err(other) => panic!("unexpected error {other}"),
        }
    }
    assert!(residuals.len() >= 3, "expected several truncated runs");
    for pair in residuals.windows(2) {
        assert!(pair[1] <= pair[0], "residual increased: {residuals:?}");
    }
}

#[test]
fn truncation_model_decay_rate() {
    // The Dirichlet value h = (1/2) log W forces e^{-2h} W = 1 on the rim;
    // its justification is that the true solution satisfies this with an
    // O(r^{-2}) defect. Solve on a large disk and check the defect decays
    // at least quadratically between r = 8 and r = 16 (so a boundary at
    // R = 8 sits in the decay regime).
    let pair = NPair::new(vec![
        CPoly::new(vec![c(0.0, 0.0), c(1.0, 0.0)]),
        CPoly::new(vec![c(1.0, 0.0)]),
    ])
    .unwrap();
    let grid = Arc::new(PolarGrid::new(32.0, 256, 128, 1.5).unwrap());
    let h = solve_kw(&pair, &grid, &SolverConfig::default()).unwrap();
    let defect_at = |target: f64| -> f64 {
        let i = (0..=grid.n_r())
            .min_by_key(|&i| ((grid.radius(i) - target).abs() * 1e9) as u64)
            .unwrap();
        (0..grid.n_theta())
            .map(|j| {
                let w = pair.weight(grid.point(i, j));
                ((-2.0 * h.get(i, j)).exp() * w - 1.0).abs()
            })
            .sum::<f64>()
            / grid.n_theta() as f64
    };
    let d8 = defect_at(8.0);
    let d16 = defect_at(16.0);
    assert!(d8 < 0.05, "defect at r = 8: {d8}");
    assert!(
        d16 <= d8 / 2.5,
        "defect not decaying quadratically: {d8} -> {d16}"
    );
}

#[test]
fn h_is_smooth_across_the_base_locus() {
    // (z², z) has a base point at the origin; only W vanishes there, h does
    // not blow up and the energy still counts the full degree.
    let pair = NPair::new(vec![
        CPoly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
        CPoly::new(vec![c(0.0, 0.0), c(1.0, 0.0)]),
    ])
    .unwrap();
    let locus = base_locus(&pair).unwrap();
    assert_eq!(locus.points.len(), 1);
    let grid = Arc::new(PolarGrid::new(8.0, 192, 96, 1.5).unwrap());
    let sol = VortexSolution::solve(&pair, &grid, &SolverConfig::default()).unwrap();
    assert!(sol.h().sup_norm().is_finite());
    // Smoothness proxy: h at the center stays comparable to the first ring.
    let gap = (sol.h().get(0, 0) - sol.h().get(1, 5)).abs();
    assert!(gap < 0.01, "center gap {gap}");
    let report = total_energy(&sol).unwrap();
    let expected = 4.0 * std::f64::consts::PI;
    assert!(
        (report.total() - expected).abs() < 0.01 * expected,
        "E = {} vs {expected}",
        report.total()
    );
}
