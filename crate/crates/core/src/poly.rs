//! Complex polynomial arithmetic and the N-pair data model.
//!
//! An [`NPair`] is the algebraic side of an affine vortex: `N` complex
//! polynomials, at least one nonzero (stability). Everything downstream —
//! base locus, projectivized map, Maslov index, the moduli coordinates —
//! is computed from this data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::VortexError;
use crate::roots;

/// Relative synthetic-division residual below which a point counts as a root.
pub const MULTIPLICITY_TOL: f64 = 1e-8;

/// Roots of distinct components match if within `1e-8 * (1 + |root|)`.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Largest supported polynomial degree.
pub const MAX_DEGREE: usize = 30;

/// Largest supported number of pair components.
pub const MAX_COMPONENTS: usize = 8;

/// Degree of a polynomial; the zero polynomial carries a distinct sentinel
/// rather than any numeric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Polynomial over ℂ, coefficients ascending: `coeffs[l]` multiplies `z^l`.
///
/// Invariant: the last stored coefficient is nonzero; the zero polynomial
/// stores no coefficients at all.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    coeffs: Vec<Complex64>,
}

impl CPoly {
    /// Build from ascending coefficients, trimming exactly-zero leading terms.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        CPoly { coeffs }
    }

    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        CPoly::new(vec![c])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (l, &c) in coeffs.iter().enumerate() {
                next[l + 1] += c;
                next[l] -= r * c;
            }
            coeffs = next;
        }
        CPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^l` (zero beyond the stored degree).
    pub fn coeff(&self, l: usize) -> Complex64 {
        self.coeffs.get(l).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInfinity
        } else {
            Degree::Finite(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Running magnitude bound `Σ |c_l| |z|^l`, the scale against which a
    /// Horner remainder should be judged.
    pub fn eval_magnitude(&self, z: Complex64) -> f64 {
        let az = z.norm();
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * az + c.norm();
        }
        acc
    }

    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() <= 1 {
            return CPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(l, &c)| c * l as f64)
            .collect();
        CPoly::new(coeffs)
    }

    /// Synthetic division by `(z - p)`: returns the quotient and the
    /// remainder `self(p)`.
    pub fn deflate(&self, p: Complex64) -> (CPoly, Complex64) {
        if self.coeffs.is_empty() {
            return (CPoly::zero(), Complex64::new(0.0, 0.0));
        }
        let n = self.coeffs.len();
        let mut quotient = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut acc = self.coeffs[n - 1];
        for l in (0..n - 1).rev() {
            quotient[l] = acc;
            acc = acc * p + self.coeffs[l];
        }
        (CPoly::new(quotient), acc)
    }

    /// Multiplicity of `p` as a root, by repeated synthetic division with a
    /// scale-aware residual threshold.
    pub fn root_multiplicity(&self, p: Complex64) -> usize {
        let mut m = 0;
        let mut q = self.clone();
        while !q.is_zero() {
            let bound = q.eval_magnitude(p).max(f64::MIN_POSITIVE);
            let (quot, rem) = q.deflate(p);
            if rem.norm() > MULTIPLICITY_TOL * bound {
                break;
            }
            m += 1;
            q = quot;
        }
        m
    }

    /// `m`-th Taylor coefficient at `p`, i.e. `self^{(m)}(p) / m!`.
    pub fn taylor_coeff(&self, p: Complex64, m: usize) -> Complex64 {
        let mut q = self.clone();
        for _ in 0..m {
            q = q.deflate(p).0;
        }
        q.eval(p)
    }

    /// Scalar multiple `c * self`.
    pub fn scaled(&self, c: Complex64) -> CPoly {
        CPoly::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Composition with a translation: returns `q(w) = self(w + a)`.
    pub fn shifted(&self, a: Complex64) -> CPoly {
        // Repeated synthetic division at -(-a): the Taylor expansion at a.
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut q = self.clone();
        while !q.is_zero() {
            let (quot, rem) = q.deflate(a);
            coeffs.push(rem);
            q = quot;
        }
        CPoly::new(coeffs)
    }

    /// Composition with a dilation: returns `q(w) = self(s * w)`.
    pub fn arg_scaled(&self, s: Complex64) -> CPoly {
        let mut pow = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * pow;
                pow *= s;
                out
            })
            .collect();
        CPoly::new(coeffs)
    }

    /// All complex roots (with multiplicity, as repeated entries).
    pub fn roots(&self) -> Result<Vec<Complex64>, VortexError> {
        roots::all_roots(self)
    }
}

/// A stable N-pair: `N` polynomials with at least one nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct NPair {
    polys: Vec<CPoly>,
}

impl NPair {
    pub fn new(polys: Vec<CPoly>) -> Result<Self, VortexError> {
        if polys.is_empty() {
            return Err(VortexError::InvalidInput(
                "an N-pair needs at least one component".into(),
            ));
        }
        if polys.len() > MAX_COMPONENTS {
            return Err(VortexError::InvalidInput(format!(
                "N = {} exceeds the supported maximum {MAX_COMPONENTS}",
                polys.len()
            )));
        }
        if polys.iter().all(CPoly::is_zero) {
            return Err(VortexError::InvalidInput(
                "unstable pair: every component is the zero polynomial".into(),
            ));
        }
        for p in &polys {
            if let Degree::Finite(d) = p.degree() {
                if d > MAX_DEGREE {
                    return Err(VortexError::InvalidInput(format!(
                        "degree {d} exceeds the supported maximum {MAX_DEGREE}"
                    )));
                }
            }
            if p.coeffs().iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(VortexError::InvalidInput(
                    "non-finite coefficient in pair".into(),
                ));
            }
        }
        Ok(NPair { polys })
    }

    pub fn n(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[CPoly] {
        &self.polys
    }

    /// Maximal degree over the (nonzero) components.
    pub fn degree(&self) -> usize {
        self.polys
            .iter()
            .filter_map(|p| p.degree().finite())
            .max()
            .expect("stable pair has a nonzero component")
    }

    /// Componentwise evaluation `(ψ_1(z), …, ψ_N(z))`.
    pub fn eval(&self, z: Complex64) -> Vec<Complex64> {
        self.polys.iter().map(|p| p.eval(z)).collect()
    }

    /// `Σ_j |ψ_j(z)|²`.
    pub fn weight(&self, z: Complex64) -> f64 {
        self.polys.iter().map(|p| p.eval(z).norm_sqr()).sum()
    }

    /// The pair `c · (ψ_1, …, ψ_N)`.
    pub fn scaled(&self, c: Complex64) -> Result<NPair, VortexError> {
        NPair::new(self.polys.iter().map(|p| p.scaled(c)).collect())
    }

    /// The translated pair `z ↦ (ψ_1(z - a), …, ψ_N(z - a))`.
    pub fn translated(&self, a: Complex64) -> NPair {
        NPair {
            polys: self.polys.iter().map(|p| p.shifted(-a)).collect(),
        }
    }

    /// The rescaled-recentred pair `w ↦ ψ_j(z_0 + w / λ)`.
    pub fn zoomed(&self, z0: Complex64, lambda: f64) -> NPair {
        let s = Complex64::new(1.0 / lambda, 0.0);
        NPair {
            polys: self
                .polys
                .iter()
                .map(|p| p.shifted(z0).arg_scaled(s))
                .collect(),
        }
    }

    /// Largest root modulus over all nonzero non-constant components.
    pub fn max_root_radius(&self) -> Result<f64, VortexError> {
        let mut radius: f64 = 0.0;
        for p in &self.polys {
            if matches!(p.degree(), Degree::Finite(d) if d >= 1) {
                for r in p.roots()? {
                    radius = radius.max(r.norm());
                }
            }
        }
        Ok(radius)
    }

    pub fn from_json(text: &str) -> Result<Self, VortexError> {
        let dto: NPairJson = serde_json::from_str(text)
            .map_err(|e| VortexError::InvalidInput(format!("pair JSON: {e}")))?;
        dto.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&NPairJson::from(self)).expect("pair serializes")
    }
}

/// Wire format: `{ "n": int, "polys": [ [ [re, im], ... ] ] }`, coefficients
/// ascending in the exponent.
#[derive(Debug, Serialize, Deserialize)]
pub struct NPairJson {
    pub n: usize,
    pub polys: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<NPairJson> for NPair {
    type Error = VortexError;

    fn try_from(dto: NPairJson) -> Result<Self, Self::Error> {
        if dto.polys.len() != dto.n {
            return Err(VortexError::InvalidInput(format!(
                "field 'polys' lists {} components but 'n' = {}",
                dto.polys.len(),
                dto.n
            )));
        }
        let polys = dto
            .polys
            .into_iter()
            .map(|cs| CPoly::new(cs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()))
            .collect();
        NPair::new(polys)
    }
}

impl From<&NPair> for NPairJson {
    fn from(pair: &NPair) -> Self {
        NPairJson {
            n: pair.n(),
            polys: pair
                .polys
                .iter()
                .map(|p| p.coeffs().iter().map(|c| [c.re, c.im]).collect())
                .collect(),
        }
    }
}

/// Common zeros of the pair with their minimal multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseLocus {
    pub points: Vec<(Complex64, usize)>,
}

impl BaseLocus {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|&(_, m)| m).sum()
    }

    /// The locus point within matching tolerance of `z`, if any.
    pub fn containing(&self, z: Complex64) -> Option<(Complex64, usize)> {
        self.points
            .iter()
            .copied()
            .find(|&(p, _)| (z - p).norm() <= CLUSTER_TOL * (1.0 + p.norm()))
    }
}

/// Common roots of all nonzero components; multiplicity is the minimum over
/// components. Components that are nonzero constants force an empty locus.
pub fn base_locus(pair: &NPair) -> Result<BaseLocus, VortexError> {
    let nonzero: Vec<&CPoly> = pair.polys().iter().filter(|p| !p.is_zero()).collect();
    if nonzero
        .iter()
        .any(|p| matches!(p.degree(), Degree::Finite(0)))
    {
        return Ok(BaseLocus { points: Vec::new() });
    }
    // Candidates come from the lowest-degree component; a base point must be
    // one of its roots.
    let seed = nonzero
        .iter()
        .min_by_key(|p| p.degree().finite().unwrap_or(0))
        .expect("stable pair");
    let seed_roots = seed.roots()?;

    // Cluster numerically coincident copies of a multiple root; the cluster
    // centroid is far more accurate than any single member.
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for r in seed_roots {
        match clusters
            .iter_mut()
            .find(|(c, k)| (*c / *k as f64 - r).norm() <= 1e-5 * (1.0 + r.norm()))
        {
            Some((c, k)) => {
                *c += r;
                *k += 1;
            }
            None => clusters.push((r, 1)),
        }
    }

    let mut points = Vec::new();
    for (sum, k) in clusters {
        let p = sum / k as f64;
        let mut min_mult = usize::MAX;
        for poly in &nonzero {
            let m = poly.root_multiplicity(p);
            if m == 0 {
                min_mult = 0;
                break;
            }
            min_mult = min_mult.min(m);
        }
        if min_mult > 0 {
            points.push((p, min_mult));
        }
    }
    points.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .expect("finite roots")
    });
    Ok(BaseLocus { points })
}

/// A point of ℙ^{N-1} by homogeneous coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    pub coords: Vec<Complex64>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, VortexError> {
        if coords.iter().all(|c| c.norm() == 0.0) {
            return Err(VortexError::InvalidInput(
                "projective point needs a nonzero coordinate".into(),
            ));
        }
        Ok(ProjPoint { coords })
    }

    /// Fubini-Study distance `arccos(|<a,b>| / (|a||b|))`.
    ///
    /// Computed through the orthogonal complement when the classes are
    /// close, where the arccosine form loses half the significant digits.
    pub fn fs_distance(&self, other: &ProjPoint) -> f64 {
        let na: f64 = self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let nb: f64 = other.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let inner: Complex64 = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a / na).conj() * (b / nb))
            .sum();
        let cos = inner.norm().clamp(0.0, 1.0);
        if cos < 0.7 {
            return cos.acos();
        }
        let sin_sq: f64 = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (b / nb - (a / na) * inner).norm_sqr())
            .sum();
        sin_sq.sqrt().clamp(0.0, 1.0).asin()
    }
}

/// The projectivized map `[ψ_1(z) : … : ψ_N(z)]`, extended over base points
/// by the vector of `m_p`-th Taylor coefficients (removal of singularity).
pub fn proj_map(pair: &NPair, z: Complex64, locus: &BaseLocus) -> ProjPoint {
    if let Some((p, m)) = locus.containing(z) {
        let coords = pair
            .polys()
            .iter()
            .map(|poly| poly.taylor_coeff(p, m))
            .collect();
        return ProjPoint::new(coords).expect("minimal multiplicity is attained somewhere");
    }
    ProjPoint::new(pair.eval(z)).expect("z is off the base locus")
}

/// Degree of the projectivized map: `d - Σ_p m_p`.
pub fn map_degree(pair: &NPair, locus: &BaseLocus) -> usize {
    let d = pair.degree();
    let drop = locus.total_multiplicity();
    debug_assert!(drop <= d, "base multiplicity cannot exceed the degree");
    d.saturating_sub(drop)
}

/// Maslov index of the vortex carried by `pair`: the maximal degree.
pub fn maslov_index(pair: &NPair) -> usize {
    pair.degree()
}

/// Canonical representative of a ℂ*-orbit of coefficient vectors.
///
/// Coordinates are stored in blocks of descending exponent, components
/// ascending inside a block; the representative has unit norm and its first
/// nonzero coordinate real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuliPoint {
    pub n: usize,
    pub d: usize,
    pub coords: Vec<Complex64>,
}

impl ModuliPoint {
    /// Canonicalize a raw coefficient vector laid out as described above.
    pub fn canonicalize(n: usize, d: usize, raw: &[Complex64]) -> Result<Self, VortexError> {
        if raw.len() != n * (d + 1) {
            return Err(VortexError::InvalidInput(format!(
                "expected {} coordinates, got {}",
                n * (d + 1),
                raw.len()
            )));
        }
        let norm: f64 = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(VortexError::InvalidInput(
                "all moduli coordinates vanish".into(),
            ));
        }
        let lead = raw
            .iter()
            .find(|c| c.norm() > 1e-12 * norm)
            .expect("norm is positive");
        let phase = lead / lead.norm();
        let scale = phase.conj() / norm;
        Ok(ModuliPoint {
            n,
            d,
            coords: raw.iter().map(|&c| c * scale).collect(),
        })
    }

    /// Whether the point lies in the open stratum `N_d`, i.e. the top-degree
    /// block is nonzero.
    pub fn in_open_stratum(&self) -> bool {
        let norm: f64 = self.coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        self.coords[..self.n].iter().any(|c| c.norm() > 1e-12 * norm)
    }

    pub fn max_coord_distance(&self, other: &ModuliPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Rebuild the pair carried by these coordinates.
    pub fn to_pair(&self) -> Result<NPair, VortexError> {
        let polys = (0..self.n)
            .map(|j| {
                let coeffs = (0..=self.d)
                    .map(|l| self.coords[(self.d - l) * self.n + j])
                    .collect();
                CPoly::new(coeffs)
            })
            .collect();
        NPair::new(polys)
    }
}

/// Canonical representative of the ℂ*-orbit of the coefficient vector of a
/// stable pair.
pub fn normalize_cstar(pair: &NPair) -> ModuliPoint {
    let n = pair.n();
    let d = pair.degree();
    let mut raw = Vec::with_capacity(n * (d + 1));
    for l in (0..=d).rev() {
        for poly in pair.polys() {
            raw.push(poly.coeff(l));
        }
    }
    ModuliPoint::canonicalize(n, d, &raw).expect("stable pair has a nonzero coefficient")
}
