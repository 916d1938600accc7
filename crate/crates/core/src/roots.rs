//! Simultaneous root iteration (Aberth-Ehrlich scheme).
//!
//! Robust for the supported degree range (d ≤ 30). Exact zero roots are
//! deflated first; the remaining roots start on a circle sized by the
//! geometric-mean estimate and are refined simultaneously, each root
//! repelling the others. A root counts as converged when its update is
//! below `1e-12 * (1 + |z|)` or its backward error is at noise level.

use num_complex::Complex64;

use crate::error::VortexError;
use crate::poly::{CPoly, Degree};

pub const MAX_ITERATIONS: usize = 200;
pub const UPDATE_TOL: f64 = 1e-12;

/// All complex roots of `poly`, multiple roots repeated. Polynomials of
/// degree ≤ 0 have no roots.
pub fn all_roots(poly: &CPoly) -> Result<Vec<Complex64>, VortexError> {
    let degree = match poly.degree() {
        Degree::NegInfinity | Degree::Finite(0) => return Ok(Vec::new()),
        Degree::Finite(d) => d,
    };

    // Deflate exact roots at the origin.
    let zeros_at_origin = poly
        .coeffs()
        .iter()
        .take_while(|c| c.re == 0.0 && c.im == 0.0)
        .count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let coeffs = &poly.coeffs()[zeros_at_origin..];
    if coeffs.len() <= 1 {
        return Ok(roots);
    }
    let reduced = CPoly::new(coeffs.to_vec());
    roots.extend(aberth(&reduced, degree)?);
    Ok(roots)
}

fn aberth(poly: &CPoly, full_degree: usize) -> Result<Vec<Complex64>, VortexError> {
    let coeffs = poly.coeffs();
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let deriv = poly.derivative();

    if n == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }

    // Cauchy bound on root moduli and geometric-mean starting radius.
    let cauchy = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let mut radius = (coeffs[0] / lead).norm().powf(1.0 / n as f64);
    radius = radius.clamp(1e-6 * cauchy, cauchy);

    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            radius * (1.0 + 0.05 * k as f64 / n as f64) * Complex64::new(angle.cos(), angle.sin())
        })
        .collect();
    let mut done = vec![false; n];

    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let p = poly.eval(z[i]);
            let bound = poly.eval_magnitude(z[i]);
            if p.norm() <= 1e-14 * bound {
                done[i] = true;
                continue;
            }
            let dp = deriv.eval(z[i]);
            if dp.norm() == 0.0 {
                // Stationary point: nudge off it and retry next sweep.
                let nudge = 1e-8 * (1.0 + z[i].norm());
                z[i] += Complex64::new(nudge, 0.0);
                all_done = false;
                continue;
            }
            let newton = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            let mut collided = false;
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        collided = true;
                        break;
                    }
                    repulsion += diff.inv();
                }
            }
            if collided {
                let nudge = 1e-8 * (1.0 + z[i].norm());
                z[i] += Complex64::new(0.0, nudge);
                all_done = false;
                continue;
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[i] -= step;
            if !z[i].re.is_finite() || !z[i].im.is_finite() {
                return Err(VortexError::RootFindingFailed {
                    degree: full_degree,
                    iterations: MAX_ITERATIONS,
                });
            }
            if step.norm() <= UPDATE_TOL * (1.0 + z[i].norm()) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return Ok(z);
        }
    }
    Err(VortexError::RootFindingFailed {
        degree: full_degree,
        iterations: MAX_ITERATIONS,
    })
}
