//! Rotationally symmetric oracle for the Kazdan-Warner equation.
//!
//! For `ψ = z^d` the equation reduces to the ODE
//!
//! ```text
//!     h'' + h'/r + (1/2)(e^{-2h} r^{2d} - 1) = 0
//! ```
//!
//! with regularity `h'(0) = 0` and boundary value `h(R) = d log R`. This is
//! solved here by shooting on `h(0)` with fixed-step RK4 and bisection —
//! a method entirely independent of the 2-D Newton-Krylov solver it checks.

use crate::error::VortexError;

/// Largest supported vortex degree.
pub const MAX_D: usize = 30;

/// Radial profile `h(r)` on a uniform grid over `[0, R]`.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub d: usize,
    pub r_max: f64,
    pub r: Vec<f64>,
    pub h: Vec<f64>,
    pub dh: Vec<f64>,
}

impl RadialProfile {
    pub fn center_value(&self) -> f64 {
        self.h[0]
    }

    /// Linear interpolation of `h` at radius `r` (the stored grid is fine
    /// enough that this is far below solver tolerances).
    pub fn sample(&self, r: f64) -> f64 {
        let n = self.r.len() - 1;
        let x = (r / self.r_max * n as f64).clamp(0.0, n as f64);
        let i = (x.floor() as usize).min(n - 1);
        let t = x - i as f64;
        self.h[i] * (1.0 - t) + self.h[i + 1] * t
    }

    /// Energy density of the radial vortex at radius `r`:
    /// `2 e^{-2h} r^{2d-2} (d - r h')² + (1/2)(e^{-2h} r^{2d} - 1)²`.
    pub fn energy_density(&self, idx: usize) -> f64 {
        let r = self.r[idx];
        let h = self.h[idx];
        let p = self.dh[idx];
        let e2h = (-2.0 * h).clamp(-700.0, 700.0).exp();
        let radial_pow = if self.d >= 1 {
            if r == 0.0 && self.d == 1 {
                1.0
            } else {
                r.powi(2 * self.d as i32 - 2)
            }
        } else {
            // d = 0: the kinetic term vanishes identically (ψ' = 0, h ≡ 0).
            0.0
        };
        let kinetic = 2.0 * e2h * radial_pow * (self.d as f64 - r * p).powi(2);
        let w = r.powi(2 * self.d as i32);
        let potential = 0.5 * (e2h * w - 1.0).powi(2);
        kinetic + potential
    }

    /// Total energy by trapezoidal quadrature of `e(r) · 2πr dr`.
    pub fn total_energy(&self) -> f64 {
        let mut total = 0.0;
        for i in 0..self.r.len() - 1 {
            let f0 = self.energy_density(i) * self.r[i];
            let f1 = self.energy_density(i + 1) * self.r[i + 1];
            total += 0.5 * (f0 + f1) * (self.r[i + 1] - self.r[i]);
        }
        2.0 * std::f64::consts::PI * total
    }
}

/// Solve the radial equation for degree `d` on `[0, r_max]`, sampled at
/// `n + 1` uniform nodes.
pub fn radial_oracle(d: usize, r_max: f64, n: usize) -> Result<RadialProfile, VortexError> {
    if d > MAX_D {
        return Err(VortexError::InvalidInput(format!(
            "degree {d} exceeds the supported maximum {MAX_D}"
        )));
    }
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(VortexError::InvalidInput("radius must be positive".into()));
    }
    if n < 16 {
        return Err(VortexError::InvalidInput("need at least 16 output nodes".into()));
    }

    let r: Vec<f64> = (0..=n).map(|i| r_max * i as f64 / n as f64).collect();
    if d == 0 {
        // W ≡ 1 makes h ≡ 0 the exact solution.
        return Ok(RadialProfile {
            d,
            r_max,
            r,
            h: vec![0.0; n + 1],
            dh: vec![0.0; n + 1],
        });
    }

    let steps_per_cell = (8192usize).div_ceil(n).max(2);
    let target = d as f64 * r_max.ln();

    let overshoot = |s: f64| -> f64 {
        match integrate(d, r_max, n, steps_per_cell, s) {
            Some((h_end, _)) => h_end - target,
            // Downward blow-up: the guess was far too low.
            None => -1e30,
        }
    };

    // Bracket the shooting parameter; h(R) is monotone increasing in h(0).
    let mut lo = -1.0 - 2.0 * d as f64;
    let mut hi = 1.0;
    let mut expand = 1.0;
    for _ in 0..64 {
        if overshoot(lo) < 0.0 {
            break;
        }
        lo -= expand;
        expand *= 2.0;
    }
    expand = 1.0;
    for _ in 0..64 {
        if overshoot(hi) > 0.0 {
            break;
        }
        hi += expand;
        expand *= 2.0;
    }
    if !(overshoot(lo) < 0.0 && overshoot(hi) > 0.0) {
        return Err(VortexError::OracleDiverged { d });
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if overshoot(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
    }
    let s = 0.5 * (lo + hi);

    let (_, profile) = integrate(d, r_max, n, steps_per_cell, s)
        .ok_or(VortexError::OracleDiverged { d })?;
    let (h, dh) = profile;
    Ok(RadialProfile { d, r_max, r, h, dh })
}

type Profile = (Vec<f64>, Vec<f64>);

/// RK4 integration outward from a series start near the origin. Returns
/// `h(R)` and the profile at the output nodes, or `None` on downward
/// blow-up (guess too low).
fn integrate(d: usize, r_max: f64, n: usize, steps_per_cell: usize, s: f64) -> Option<(f64, Profile)> {
    let mut h_out = vec![0.0; n + 1];
    let mut dh_out = vec![0.0; n + 1];
    h_out[0] = s;

    // Series start: h ≈ s + r²/8 + c r^{2d+2} with c = -e^{-2s}/(2(2d+2)²).
    let r0 = r_max * 1e-6;
    let m = (2 * d + 2) as f64;
    let c = -(-2.0 * s).clamp(-700.0, 700.0).exp() / (2.0 * m * m);
    let mut h = s + r0 * r0 / 8.0 + c * r0.powf(m);
    let mut p = r0 / 4.0 + c * m * r0.powf(m - 1.0);
    let mut r = r0;

    let rhs = |r: f64, h: f64, p: f64| -> (f64, f64) {
        let w = (-2.0 * h).clamp(-700.0, 700.0).exp() * r.powi(2 * d as i32);
        (p, -p / r - 0.5 * (w - 1.0))
    };

    let total_steps = n * steps_per_cell;
    let dr = (r_max - r0) / total_steps as f64;
    for step in 0..total_steps {
        let (k1h, k1p) = rhs(r, h, p);
        let (k2h, k2p) = rhs(r + 0.5 * dr, h + 0.5 * dr * k1h, p + 0.5 * dr * k1p);
        let (k3h, k3p) = rhs(r + 0.5 * dr, h + 0.5 * dr * k2h, p + 0.5 * dr * k2p);
        let (k4h, k4p) = rhs(r + dr, h + dr * k3h, p + dr * k3p);
        h += dr / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
        p += dr / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        r += dr;
        if !h.is_finite() || h < -1e8 {
            return None;
        }
        if (step + 1) % steps_per_cell == 0 {
            let node = (step + 1) / steps_per_cell;
            h_out[node] = h;
            dh_out[node] = p;
        }
    }
    Some((h, (h_out, dh_out)))
}
