//! Stratification and degeneration combinatorics.
//!
//! Three classifiers over sampled data, plus dimension arithmetic:
//! the Uhlenbeck stratum of a point of `P^{N(d+1)-1}` under the filtration
//! by top-degree blocks, the three-way limit classifier for degenerating
//! degree-1 families, and the nontrivial-bubble criterion comparing the
//! concentration scales `t_k` against the non-concentrating scales `T_k`.
//!
//! All limsup/liminf decisions are finite-sample trend fits over the final
//! three samples with a 10x-median boundedness heuristic; every verdict
//! carries its evidence series so callers can audit the call.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::VortexError;
use crate::poly::{ModuliPoint, ProjPoint};

/// Relative norm below which a coordinate block counts as zero.
pub const BLOCK_ZERO_TOL: f64 = 1e-10;

/// Fubini-Study separation above which two classes count as distinct.
pub const PROJ_DISTINCT_TOL: f64 = 1e-8;

/// Growth factor over the last three samples above which a monotone series
/// counts as diverging.
const DIVERGENCE_GROWTH: f64 = 1.2;

/// Boundedness margin relative to the series median.
const MEDIAN_FACTOR: f64 = 10.0;

/// Finite-sample reading of a limsup: bounded, diverging, or no usable
/// trend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Bounded,
    Diverging,
    Ambiguous,
}

/// Classify a positive series from its final three samples.
pub fn series_trend(series: &[f64]) -> Trend {
    assert!(series.len() >= 3, "trend fit needs at least 3 samples");
    let tail = &series[series.len() - 3..];
    let increasing = tail[0] < tail[1] && tail[1] < tail[2];
    let growth = tail[2] / tail[0].max(f64::MIN_POSITIVE);
    if increasing && growth >= DIVERGENCE_GROWTH {
        return Trend::Diverging;
    }
    let non_increasing = tail[0] >= tail[1] && tail[1] >= tail[2];
    if non_increasing {
        return Trend::Bounded;
    }
    let mut sorted = series.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite series"));
    let median = sorted[sorted.len() / 2];
    if tail[2] <= MEDIAN_FACTOR * median.max(f64::MIN_POSITIVE) {
        Trend::Bounded
    } else {
        Trend::Ambiguous
    }
}

// ---------------------------------------------------------------------------
// Uhlenbeck stratification
// ---------------------------------------------------------------------------

/// A point of the quotient compactification `P^{N(d+1)-1}` with its stratum.
///
/// Coordinates are stored in blocks of descending exponent (the layout of
/// [`ModuliPoint`]); the stratum index k is the largest exponent whose block
/// survives, and `primary` is the `N_k` representative obtained by dropping
/// the vanished top blocks.
#[derive(Debug, Clone)]
pub struct UhlenbeckPoint {
    pub n: usize,
    pub d: usize,
    pub coords: Vec<Complex64>,
    pub stratum_k: usize,
    pub primary: ModuliPoint,
}

pub fn classify_stratum(
    n: usize,
    d: usize,
    coords: &[Complex64],
) -> Result<UhlenbeckPoint, VortexError> {
    if n < 1 {
        return Err(VortexError::InvalidInput("need at least one component".into()));
    }
    if coords.len() != n * (d + 1) {
        return Err(VortexError::InvalidInput(format!(
            "expected {} coordinates for N = {n}, d = {d}, got {}",
            n * (d + 1),
            coords.len()
        )));
    }
    let total: f64 = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if total == 0.0 {
        return Err(VortexError::InvalidInput(
            "all homogeneous coordinates vanish".into(),
        ));
    }
    let block_norm = |l: usize| -> f64 {
        let start = (d - l) * n;
        coords[start..start + n]
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let mut stratum_k = 0;
    for l in (0..=d).rev() {
        if block_norm(l) > BLOCK_ZERO_TOL * total {
            stratum_k = l;
            break;
        }
    }
    let primary_raw = &coords[(d - stratum_k) * n..];
    let primary = ModuliPoint::canonicalize(n, stratum_k, primary_raw)?;
    Ok(UhlenbeckPoint {
        n,
        d,
        coords: coords.to_vec(),
        stratum_k,
        primary,
    })
}

/// Embed an `N_k` coordinate vector into the degree-d compactification by
/// zero-padding the higher-degree blocks (the filtration inclusion).
pub fn embed_stratum(point: &ModuliPoint, d: usize) -> Result<Vec<Complex64>, VortexError> {
    if point.d > d {
        return Err(VortexError::InvalidInput(format!(
            "cannot embed a degree-{} point into degree {d}",
            point.d
        )));
    }
    let mut coords = vec![Complex64::new(0.0, 0.0); (d - point.d) * point.n];
    coords.extend_from_slice(&point.coords);
    Ok(coords)
}

// ---------------------------------------------------------------------------
// Degree-1 limit classifier
// ---------------------------------------------------------------------------

/// Extended real for a sampled limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

/// One sample of a degenerating family `(a_i, b_i, w_i)`.
#[derive(Debug, Clone)]
pub struct D1Sample {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub w: Complex64,
}

/// Input for the three-way boundary classification of degenerating
/// degree-1 data: unit vectors `a`, `b`, and either the limit of
/// `|w_i|^{-1} d(a_i, b_i)` or samples it can be estimated from.
#[derive(Debug, Clone)]
pub struct D1LimitInput {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    pub ratio_limit: Option<ExtReal>,
    pub samples: Vec<D1Sample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum D1Class {
    T1,
    T2,
    S,
}

/// Verdict with the evidence series behind it.
#[derive(Debug, Clone)]
pub struct D1Verdict {
    pub class: D1Class,
    /// Fibre coordinate `v = lim w_i^{-1} y_i` for T2 (from the last
    /// sample), where `b_i = c_i a_i + y_i` with `y_i ⊥ a_i`.
    pub tangent: Option<Vec<Complex64>>,
    pub ratio_series: Vec<f64>,
}

fn unit_norm_check(v: &[Complex64], name: &str) -> Result<(), VortexError> {
    let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(VortexError::InvalidInput(format!(
            "{name} must be a unit vector (|{name}| = {norm})"
        )));
    }
    Ok(())
}

fn fs_distance_vec(a: &[Complex64], b: &[Complex64]) -> Result<f64, VortexError> {
    let pa = ProjPoint::new(a.to_vec())?;
    let pb = ProjPoint::new(b.to_vec())?;
    Ok(pa.fs_distance(&pb))
}

/// Orthogonal decomposition `b = <a,b> a + y`.
fn orthogonal_part(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let inner: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    a.iter().zip(b).map(|(x, y)| y - inner * x).collect()
}

pub fn classify_limit_d1(input: &D1LimitInput) -> Result<D1Verdict, VortexError> {
    unit_norm_check(&input.a, "a")?;
    unit_norm_check(&input.b, "b")?;
    if input.a.len() != input.b.len() {
        return Err(VortexError::InvalidInput("a and b must share N".into()));
    }

    if fs_distance_vec(&input.a, &input.b)? > PROJ_DISTINCT_TOL {
        return Ok(D1Verdict {
            class: D1Class::T1,
            tangent: None,
            ratio_series: Vec::new(),
        });
    }

    let ratio_series: Vec<f64> = input
        .samples
        .iter()
        .map(|s| {
            let d = fs_distance_vec(&s.a, &s.b)?;
            Ok(d / s.w.norm())
        })
        .collect::<Result<_, VortexError>>()?;

    let tangent_from_last = || -> Option<Vec<Complex64>> {
        input.samples.last().map(|s| {
            let y = orthogonal_part(&s.a, &s.b);
            y.iter().map(|c| c / s.w).collect()
        })
    };

    let ext = match input.ratio_limit {
        Some(limit) => limit,
        None => {
            if ratio_series.len() < 3 {
                return Err(VortexError::InvalidInput(
                    "need ratio_limit or at least 3 samples".into(),
                ));
            }
            match series_trend(&ratio_series) {
                Trend::Bounded => ExtReal::Finite(*ratio_series.last().expect("nonempty")),
                Trend::Diverging => ExtReal::Infinite,
                Trend::Ambiguous => return Err(VortexError::InconclusiveTrend),
            }
        }
    };

    Ok(match ext {
        ExtReal::Finite(_) => D1Verdict {
            class: D1Class::T2,
            tangent: tangent_from_last(),
            ratio_series,
        },
        ExtReal::Infinite => D1Verdict {
            class: D1Class::S,
            tangent: None,
            ratio_series,
        },
    })
}

// ---------------------------------------------------------------------------
// Bubbling criterion
// ---------------------------------------------------------------------------

/// A zero of one component with its multiplicity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BubbleZero {
    /// Location, as `[re, im]` in the wire format.
    #[serde(with = "complex_pair")]
    pub rho: Complex64,
    pub m: usize,
}

/// One sample of the degenerating sequence: the scale `λ_k`, the
/// recentering point `z_k`, and per component the zero list and the modulus
/// of the nonvanishing factor at `z_k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BubbleSample {
    pub lambda: f64,
    #[serde(with = "complex_pair")]
    pub z: Complex64,
    /// Outer index j (component), inner list the zeros of `Z_j`; the inner
    /// position is the abstract zero identity across samples.
    pub zeros: Vec<Vec<BubbleZero>>,
    pub f_abs: Vec<f64>,
}

/// Wire format `{ "samples": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BubbleSequence {
    pub samples: Vec<BubbleSample>,
}

mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [c.re, c.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

impl BubbleSequence {
    pub fn from_json(text: &str) -> Result<Self, VortexError> {
        serde_json::from_str(text)
            .map_err(|e| VortexError::InvalidInput(format!("bubble sequence JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }

    fn validate(&self) -> Result<(), VortexError> {
        if self.samples.len() < 4 {
            return Err(VortexError::InvalidInput(
                "bubble criterion needs at least 4 samples".into(),
            ));
        }
        let first = &self.samples[0];
        let n = first.zeros.len();
        if n == 0 {
            return Err(VortexError::EmptyW);
        }
        let shape: Vec<Vec<usize>> = first
            .zeros
            .iter()
            .map(|zj| zj.iter().map(|z| z.m).collect())
            .collect();
        let mut prev_lambda = 0.0;
        for sample in &self.samples {
            if !sample.lambda.is_finite() || sample.lambda <= prev_lambda {
                return Err(VortexError::InvalidInput(
                    "λ_k must be strictly increasing and positive".into(),
                ));
            }
            prev_lambda = sample.lambda;
            if sample.zeros.len() != n || sample.f_abs.len() != n {
                return Err(VortexError::InvalidInput(
                    "component count must be constant across samples".into(),
                ));
            }
            if sample.f_abs.iter().any(|&f| !f.is_finite() || f <= 0.0) {
                return Err(VortexError::InvalidInput(
                    "the nonvanishing factor must have positive modulus".into(),
                ));
            }
            for (j, zj) in sample.zeros.iter().enumerate() {
                let ms: Vec<usize> = zj.iter().map(|z| z.m).collect();
                if ms != shape[j] {
                    return Err(VortexError::InvalidInput(format!(
                        "zero multiset of component {j} changes across samples"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BubbleVerdict {
    Nontrivial,
    Trivial,
    Inconclusive,
}

/// Verdict plus the full evidence behind it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BubbleReport {
    pub verdict: BubbleVerdict,
    /// Set when every `W_j` is empty: no zeros concentrate at rate λ_k, so
    /// `Trivial` is returned by convention rather than by the ratio test.
    pub trivial_by_convention: bool,
    /// Per component, per abstract zero: does `λ_k |z_k - ρ_k|` stay
    /// bounded (membership in `W_j`).
    pub w_partition: Vec<Vec<bool>>,
    pub t_series: Vec<f64>,
    pub big_t_series: Vec<f64>,
    pub ratio_series: Vec<f64>,
}

pub fn bubble_criterion(seq: &BubbleSequence) -> Result<BubbleReport, VortexError> {
    seq.validate()?;
    let n = seq.samples[0].zeros.len();
    let k_count = seq.samples.len();

    // Partition each Z_j into concentrating (W_j) and escaping zeros by the
    // boundedness of λ_k |z_k - ρ_k|.
    let mut w_partition: Vec<Vec<bool>> = Vec::with_capacity(n);
    for j in 0..n {
        let zero_count = seq.samples[0].zeros[j].len();
        let mut flags = Vec::with_capacity(zero_count);
        for t in 0..zero_count {
            let series: Vec<f64> = seq
                .samples
                .iter()
                .map(|s| s.lambda * (s.z - s.zeros[j][t].rho).norm())
                .collect();
            flags.push(series_trend(&series) == Trend::Bounded);
        }
        w_partition.push(flags);
    }

    let degree_w: Vec<usize> = (0..n)
        .map(|j| {
            seq.samples[0].zeros[j]
                .iter()
                .zip(&w_partition[j])
                .filter(|(_, &in_w)| in_w)
                .map(|(z, _)| z.m)
                .sum()
        })
        .collect();
    let has_w: Vec<bool> = w_partition
        .iter()
        .map(|flags| flags.iter().any(|&b| b))
        .collect();

    let mut t_series = Vec::with_capacity(k_count);
    let mut big_t_series = Vec::with_capacity(k_count);
    for sample in &seq.samples {
        let mut t_k: f64 = 0.0;
        let mut big_t_k: f64 = 0.0;
        for j in 0..n {
            if has_w[j] {
                let mut value = sample.lambda.powi(-(degree_w[j] as i32)) * sample.f_abs[j];
                for (zero, &in_w) in sample.zeros[j].iter().zip(&w_partition[j]) {
                    if !in_w {
                        value *= (sample.z - zero.rho).norm().powi(zero.m as i32);
                    }
                }
                t_k = t_k.max(value);
            } else {
                let mut value = sample.f_abs[j];
                for zero in &sample.zeros[j] {
                    value *= (sample.z - zero.rho).norm().powi(zero.m as i32);
                }
                big_t_k = big_t_k.max(value);
            }
        }
        t_series.push(t_k);
        big_t_series.push(big_t_k);
    }

    if has_w.iter().all(|&b| !b) {
        // No component concentrates at rate λ_k. The criterion's max over
        // the t-side is empty; Trivial by convention, flagged as such.
        return Ok(BubbleReport {
            verdict: BubbleVerdict::Trivial,
            trivial_by_convention: true,
            w_partition,
            t_series,
            big_t_series,
            ratio_series: Vec::new(),
        });
    }

    let ratio_series: Vec<f64> = t_series
        .iter()
        .zip(&big_t_series)
        .map(|(&t, &big)| big / t.max(f64::MIN_POSITIVE))
        .collect();
    let verdict = match series_trend(&ratio_series) {
        Trend::Bounded => BubbleVerdict::Nontrivial,
        Trend::Diverging => BubbleVerdict::Trivial,
        Trend::Ambiguous => BubbleVerdict::Inconclusive,
    };
    Ok(BubbleReport {
        verdict,
        trivial_by_convention: false,
        w_partition,
        t_series,
        big_t_series,
        ratio_series,
    })
}

// ---------------------------------------------------------------------------
// Dimension and index arithmetic
// ---------------------------------------------------------------------------

/// Real dimension of the degree-d moduli: `2 (N (d+1) - 1)`.
pub fn dim_moduli(n: usize, d: usize) -> usize {
    2 * (n * (d + 1) - 1)
}

/// Maslov-index convention entering the Fredholm index formula
/// `index = 2 ind_μ + dim M - 2 dim G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexConvention {
    /// `ind_μ = d`, the maximal polynomial degree.
    LoopDegree,
    /// `ind_μ = N d`, the degree of the determinant loop; matches
    /// `dim_moduli`.
    DetLoop,
}

pub fn index_formula(n: usize, d: usize, convention: IndexConvention) -> usize {
    let ind_mu = match convention {
        IndexConvention::LoopDegree => d,
        IndexConvention::DetLoop => n * d,
    };
    2 * ind_mu + 2 * n - 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reals(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| c(x, 0.0)).collect()
    }

    #[test]
    fn stratum_open_and_boundary() {
        // coords of (z+1, 1) in descending-l blocks: [1, 0, 1, 1]
        let open = classify_stratum(2, 1, &reals(&[1.0, 0.0, 1.0, 1.0])).unwrap();
        assert_eq!(open.stratum_k, 1);
        assert!(open.primary.in_open_stratum());

        let boundary = classify_stratum(2, 1, &reals(&[0.0, 0.0, 3.0, 4.0])).unwrap();
        assert_eq!(boundary.stratum_k, 0);
        let prim = &boundary.primary;
        // primary = [3 : 4] canonicalized to unit norm, first coord positive
        assert!((prim.coords[0] - c(0.6, 0.0)).norm() < 1e-12);
        assert!((prim.coords[1] - c(0.8, 0.0)).norm() < 1e-12);

        let deep = classify_stratum(2, 2, &reals(&[0.0, 0.0, 0.0, 0.0, 1.0, 0.0])).unwrap();
        assert_eq!(deep.stratum_k, 0);
    }

    #[test]
    fn stratum_scale_invariance() {
        let coords = vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 2.0), c(-0.5, 0.3)];
        let base = classify_stratum(2, 1, &coords).unwrap();
        let scaled: Vec<Complex64> = coords.iter().map(|&v| v * c(-3.0, 4.0)).collect();
        let other = classify_stratum(2, 1, &scaled).unwrap();
        assert_eq!(base.stratum_k, other.stratum_k);
        assert!(base.primary.max_coord_distance(&other.primary) < 1e-12);
    }

    #[test]
    fn stratum_filtration_round_trip() {
        let point = ModuliPoint::canonicalize(3, 1, &reals(&[0.2, 0.0, 0.4, 1.0, 0.0, -0.7]))
            .unwrap();
        let embedded = embed_stratum(&point, 4).unwrap();
        let back = classify_stratum(3, 4, &embedded).unwrap();
        assert_eq!(back.stratum_k, 1);
        assert!(back.primary.max_coord_distance(&point) < 1e-12);
    }

    #[test]
    fn all_zero_coords_rejected() {
        assert!(classify_stratum(2, 1, &reals(&[0.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn d1_limit_t1() {
        let input = D1LimitInput {
            a: reals(&[1.0, 0.0]),
            b: reals(&[0.0, 1.0]),
            ratio_limit: None,
            samples: Vec::new(),
        };
        assert_eq!(classify_limit_d1(&input).unwrap().class, D1Class::T1);
    }

    fn shrinking_family(power: i32) -> D1LimitInput {
        // b_i = (a + (0, 1/i)) / norm, w_i = i^{-power}, sampled
        // geometrically in i as a trend fit expects.
        let a = reals(&[1.0, 0.0]);
        let samples: Vec<D1Sample> = [2.0f64, 4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|&i| {
                let eps = 1.0 / i;
                let norm = (1.0 + eps * eps).sqrt();
                D1Sample {
                    a: a.clone(),
                    b: vec![c(1.0 / norm, 0.0), c(eps / norm, 0.0)],
                    w: c(i.powi(-power), 0.0),
                }
            })
            .collect();
        D1LimitInput {
            a: a.clone(),
            b: a,
            ratio_limit: None,
            samples,
        }
    }

    #[test]
    fn d1_limit_t2_with_tangent() {
        let verdict = classify_limit_d1(&shrinking_family(1)).unwrap();
        assert_eq!(verdict.class, D1Class::T2);
        let v = verdict.tangent.unwrap();
        assert!(v[0].norm() < 1e-2);
        assert!((v[1] - c(1.0, 0.0)).norm() < 1e-2, "tangent {v:?}");
    }

    #[test]
    fn d1_limit_s_when_ratio_diverges() {
        let verdict = classify_limit_d1(&shrinking_family(2)).unwrap();
        assert_eq!(verdict.class, D1Class::S);
    }

    #[test]
    fn d1_limit_phase_invariance() {
        // Rotating a and b by phases must not change the class.
        let mut input = shrinking_family(1);
        let phase_a = Complex64::from_polar(1.0, 0.8);
        let phase_b = Complex64::from_polar(1.0, -2.3);
        input.a.iter_mut().for_each(|v| *v *= phase_a);
        input.b.iter_mut().for_each(|v| *v *= phase_b);
        for s in &mut input.samples {
            s.a.iter_mut().for_each(|v| *v *= phase_a);
            s.b.iter_mut().for_each(|v| *v *= phase_b);
        }
        assert_eq!(classify_limit_d1(&input).unwrap().class, D1Class::T2);
    }

    /// The construction family: component j has `deg_j` roots moving to the
    /// origin like `root/k` plus `d - deg_j` fixed zeros at 1, with leading
    /// factor modulus `k^{deg_j - d} |a_j|`.
    fn construction_family(
        amps: &[f64],
        roots: &[Vec<Complex64>],
        d: usize,
        ks: &[f64],
        concentrate: bool,
    ) -> BubbleSequence {
        let samples = ks
            .iter()
            .map(|&k| {
                let mut zeros = Vec::new();
                let mut f_abs = Vec::new();
                for (j, rs) in roots.iter().enumerate() {
                    let mut zj: Vec<BubbleZero> = rs
                        .iter()
                        .map(|&r| BubbleZero {
                            rho: if concentrate { r / k } else { r },
                            m: 1,
                        })
                        .collect();
                    for _ in rs.len()..d {
                        zj.push(BubbleZero {
                            rho: c(1.0, 0.0),
                            m: 1,
                        });
                    }
                    zeros.push(zj);
                    f_abs.push(k.powi(rs.len() as i32 - d as i32) * amps[j]);
                }
                BubbleSample {
                    lambda: k,
                    z: c(0.0, 0.0),
                    zeros,
                    f_abs,
                }
            })
            .collect();
        BubbleSequence { samples }
    }

    #[test]
    fn construction_family_is_nontrivial() {
        let seq = construction_family(
            &[1.0, 2.0],
            &[vec![c(0.5, 0.0), c(-0.3, 0.2)], vec![c(0.2, -0.1)]],
            2,
            &[8.0, 16.0, 32.0, 64.0],
            true,
        );
        let report = bubble_criterion(&seq).unwrap();
        assert_eq!(report.verdict, BubbleVerdict::Nontrivial);
        assert!(!report.trivial_by_convention);
        // both components concentrate at rate λ_k
        assert_eq!(report.w_partition[0], vec![true, true]);
        assert_eq!(report.w_partition[1], vec![true, false]);
    }

    #[test]
    fn fixed_roots_flip_the_verdict() {
        let seq = construction_family(
            &[1.0, 2.0],
            &[vec![c(0.5, 0.0), c(-0.3, 0.2)], vec![c(0.2, -0.1)]],
            2,
            &[8.0, 16.0, 32.0, 64.0],
            false,
        );
        let report = bubble_criterion(&seq).unwrap();
        assert_eq!(report.verdict, BubbleVerdict::Trivial);
        assert!(report.trivial_by_convention);
        assert!(report.w_partition.iter().flatten().all(|&b| !b));
    }

    #[test]
    fn slow_concentration_leaves_w_empty() {
        // ψ_1 = z - 1, ψ_2 = z - 1/√k: λ_k |ρ| = √k escapes, both W empty.
        let samples = [8.0f64, 16.0, 32.0, 64.0]
            .iter()
            .map(|&k| BubbleSample {
                lambda: k,
                z: c(0.0, 0.0),
                zeros: vec![
                    vec![BubbleZero { rho: c(1.0, 0.0), m: 1 }],
                    vec![BubbleZero {
                        rho: c(1.0 / k.sqrt(), 0.0),
                        m: 1,
                    }],
                ],
                f_abs: vec![1.0, 1.0],
            })
            .collect();
        let report = bubble_criterion(&BubbleSequence { samples }).unwrap();
        assert_eq!(report.verdict, BubbleVerdict::Trivial);
        assert!(report.trivial_by_convention);
    }

    #[test]
    fn single_concentrating_zero_no_t_side() {
        // ψ = z - 1/k: W = {zero}, T-side empty, ratio ≡ 0, Nontrivial.
        let samples = [8.0f64, 16.0, 32.0, 64.0]
            .iter()
            .map(|&k| BubbleSample {
                lambda: k,
                z: c(0.0, 0.0),
                zeros: vec![vec![BubbleZero {
                    rho: c(1.0 / k, 0.0),
                    m: 1,
                }]],
                f_abs: vec![1.0],
            })
            .collect();
        let report = bubble_criterion(&BubbleSequence { samples }).unwrap();
        assert_eq!(report.verdict, BubbleVerdict::Nontrivial);
        assert!(report.big_t_series.iter().all(|&t| t == 0.0));
        // t_k = λ_k^{-1}
        assert!((report.t_series[0] - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn bubble_json_round_trip() {
        let seq = construction_family(
            &[1.0],
            &[vec![c(0.5, -0.5)]],
            1,
            &[2.0, 4.0, 8.0, 16.0],
            true,
        );
        let back = BubbleSequence::from_json(&seq.to_json()).unwrap();
        assert_eq!(back.samples.len(), 4);
        assert_eq!(back.samples[2].zeros[0][0].m, 1);
        let report = bubble_criterion(&back).unwrap();
        assert_eq!(report.verdict, BubbleVerdict::Nontrivial);
    }

    #[test]
    fn trend_classification() {
        assert_eq!(series_trend(&[5.0, 4.0, 4.0, 3.5]), Trend::Bounded);
        // noisy but within the median margin
        assert_eq!(series_trend(&[1.0, 3.0, 2.0, 4.0]), Trend::Bounded);
        assert_eq!(series_trend(&[2.0, 4.0, 8.0, 16.0]), Trend::Diverging);
        // non-monotone tail far above the median
        assert_eq!(series_trend(&[1.0, 1.0, 1.0, 200.0, 100.0]), Trend::Ambiguous);
    }

    #[test]
    fn empty_component_list_is_rejected() {
        let samples = (1..=4)
            .map(|k| BubbleSample {
                lambda: k as f64,
                z: c(0.0, 0.0),
                zeros: Vec::new(),
                f_abs: Vec::new(),
            })
            .collect();
        assert!(matches!(
            bubble_criterion(&BubbleSequence { samples }),
            Err(VortexError::EmptyW)
        ));
    }

    #[test]
    fn dimension_and_index_examples() {
        assert_eq!(dim_moduli(2, 0), 2);
        assert_eq!(dim_moduli(2, 1), 6);
        assert_eq!(dim_moduli(3, 2), 16);
        assert_eq!(index_formula(1, 2, IndexConvention::LoopDegree), 4);
        assert_eq!(index_formula(1, 2, IndexConvention::DetLoop), 4);
        assert_eq!(index_formula(2, 1, IndexConvention::DetLoop), 6);
        assert_eq!(index_formula(2, 1, IndexConvention::LoopDegree), 4);
    }

    #[test]
    fn det_loop_matches_moduli_dimension() {
        for n in 1..=8 {
            for d in 0..=30 {
                assert_eq!(dim_moduli(n, d), index_formula(n, d, IndexConvention::DetLoop));
            }
        }
    }
}
