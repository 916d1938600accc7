//! Quantum cohomology of projective space and the quantum Kirwan map.
//!
//! `QH*(P^{N-1}; Λ) = R[c, q] / (c^N - q)` with `deg c = 2`, `deg q = 2N`.
//! Elements are kept in canonical reduced form (no c-exponent ≥ N) with
//! exact rational coefficients, so every ring identity here is exact, not
//! approximate. The quantum Kirwan map sends the equivariant generator
//! power `u^m` to `c^r q^{d}` where `m = d N + r`, `0 ≤ r < N`; extended
//! Λ-linearly its kernel is generated by `q - u^N`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::VortexError;

/// Element of `R[c, q]/(c^N - q)` in canonical form: coefficients keyed by
/// `(s, r)` = (q-exponent, c-exponent) with `r < N`, zeros pruned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QHElement {
    n: usize,
    coeffs: BTreeMap<(usize, usize), BigRational>,
}

impl QHElement {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 2, "the quotient ring needs N ≥ 2");
        QHElement {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, BigRational::one(), 0, 0)
    }

    /// `coeff · c^r q^s`, reduced via `c^N = q`.
    pub fn monomial(n: usize, coeff: BigRational, r: usize, s: usize) -> Self {
        let mut el = Self::zero(n);
        el.accumulate(coeff, r, s);
        el
    }

    pub fn c_generator(n: usize) -> Self {
        Self::monomial(n, BigRational::one(), 1, 0)
    }

    pub fn q_generator(n: usize) -> Self {
        Self::monomial(n, BigRational::one(), 0, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, r: usize, s: usize) -> BigRational {
        self.coeffs
            .get(&(s, r))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.coeffs.iter().map(|(&(s, r), c)| (r, s, c))
    }

    fn accumulate(&mut self, coeff: BigRational, r: usize, s: usize) {
        if coeff.is_zero() {
            return;
        }
        // Reduce c^r with r ≥ N into powers of q.
        let (extra_q, r) = (r / self.n, r % self.n);
        let key = (s + extra_q, r);
        let entry = self.coeffs.entry(key).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    fn check_n(&self, other: &QHElement) -> Result<(), VortexError> {
        if self.n != other.n {
            Err(VortexError::MixedN {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &QHElement) -> Result<QHElement, VortexError> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (&(s, r), coeff) in &other.coeffs {
            out.accumulate(coeff.clone(), r, s);
        }
        Ok(out)
    }

    pub fn neg(&self) -> QHElement {
        let mut out = Self::zero(self.n);
        for (&(s, r), coeff) in &self.coeffs {
            out.accumulate(-coeff.clone(), r, s);
        }
        out
    }

    pub fn sub(&self, other: &QHElement) -> Result<QHElement, VortexError> {
        self.add(&other.neg())
    }

    /// Product in the quotient ring, reduced to canonical form.
    pub fn mul(&self, other: &QHElement) -> Result<QHElement, VortexError> {
        self.check_n(other)?;
        let mut out = Self::zero(self.n);
        for (&(s1, r1), c1) in &self.coeffs {
            for (&(s2, r2), c2) in &other.coeffs {
                out.accumulate(c1 * c2, r1 + r2, s1 + s2);
            }
        }
        Ok(out)
    }

    /// Cohomological degree `2r + 2Ns` when all monomials share it.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degree = None;
        for &(s, r) in self.coeffs.keys() {
            let this = 2 * r + 2 * self.n * s;
            match degree {
                None => degree = Some(this),
                Some(d) if d == this => {}
                Some(_) => return None,
            }
        }
        degree
    }

    /// Parse the textual grammar produced by `Display` (sums of monomials
    /// in `c` and `q` with rational coefficients).
    pub fn parse(text: &str, n: usize) -> Result<QHElement, VortexError> {
        let mut out = Self::zero(n);
        for term in split_terms(text)? {
            let mono = parse_monomial(&term.body, 'c')?;
            let coeff = if term.negative { -mono.coeff } else { mono.coeff };
            out.accumulate(coeff, mono.var_exp, mono.q_exp);
        }
        Ok(out)
    }
}

impl fmt::Display for QHElement {
    /// Monomials sorted by `(s, r)`, e.g. `1 + 2*c*q + q^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (index, (&(s, r), coeff)) in self.coeffs.iter().enumerate() {
            let mag = coeff.abs();
            if index == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", render_monomial(&mag, &[('c', r), ('q', s)]))?;
        }
        Ok(())
    }
}

/// Polynomial in the equivariant generator `u` over `Λ = R[q]`: coefficients
/// keyed by `(s, m)` for `u^m q^s`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquivariantElement {
    coeffs: BTreeMap<(usize, usize), BigRational>,
}

impl EquivariantElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0, 0)
    }

    /// `coeff · u^m q^s`.
    pub fn monomial(coeff: BigRational, m: usize, s: usize) -> Self {
        let mut el = Self::zero();
        el.accumulate(coeff, m, s);
        el
    }

    pub fn u_power(m: usize) -> Self {
        Self::monomial(BigRational::one(), m, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.coeffs.iter().map(|(&(s, m), c)| (m, s, c))
    }

    fn accumulate(&mut self, coeff: BigRational, m: usize, s: usize) {
        if coeff.is_zero() {
            return;
        }
        let entry = self
            .coeffs
            .entry((s, m))
            .or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&(s, m));
        }
    }

    pub fn add(&self, other: &EquivariantElement) -> EquivariantElement {
        let mut out = self.clone();
        for (&(s, m), c) in &other.coeffs {
            out.accumulate(c.clone(), m, s);
        }
        out
    }

    pub fn neg(&self) -> EquivariantElement {
        let mut out = Self::zero();
        for (&(s, m), c) in &self.coeffs {
            out.accumulate(-c.clone(), m, s);
        }
        out
    }

    pub fn sub(&self, other: &EquivariantElement) -> EquivariantElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &EquivariantElement) -> EquivariantElement {
        let mut out = Self::zero();
        for (&(s1, m1), c1) in &self.coeffs {
            for (&(s2, m2), c2) in &other.coeffs {
                out.accumulate(c1 * c2, m1 + m2, s1 + s2);
            }
        }
        out
    }

    /// Parse sums of monomials in `u` and `q`.
    pub fn parse(text: &str) -> Result<EquivariantElement, VortexError> {
        let mut out = Self::zero();
        for term in split_terms(text)? {
            let mono = parse_monomial(&term.body, 'u')?;
            let coeff = if term.negative { -mono.coeff } else { mono.coeff };
            out.accumulate(coeff, mono.var_exp, mono.q_exp);
        }
        Ok(out)
    }
}

impl fmt::Display for EquivariantElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (index, (&(s, m), coeff)) in self.coeffs.iter().enumerate() {
            let mag = coeff.abs();
            if index == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", render_monomial(&mag, &[('u', m), ('q', s)]))?;
        }
        Ok(())
    }
}

/// Quantum Kirwan image of `u^m`: `c^r q^d` with `m = d N + r`, `0 ≤ r < N`.
pub fn kirwan_q(m: usize, n: usize) -> QHElement {
    QHElement::monomial(n, BigRational::one(), m % n, m / n)
}

/// Λ-linear extension: `coeff u^m q^s ↦ coeff · kirwan_q(m) · q^s`.
pub fn kirwan_q_lambda(x: &EquivariantElement, n: usize) -> QHElement {
    let mut out = QHElement::zero(n);
    for (m, s, coeff) in x.terms() {
        out.accumulate(coeff.clone(), m % n, m / n + s);
    }
    out
}

/// Classical Kirwan map: the `q → 0` specialization, `u^m ↦ c^m` for
/// `m ≤ N-1` and zero beyond.
pub fn kirwan_classical(m: usize, n: usize) -> QHElement {
    if m < n {
        QHElement::monomial(n, BigRational::one(), m, 0)
    } else {
        QHElement::zero(n)
    }
}

/// `q → 0` truncation of an element.
pub fn specialize_q_zero(x: &QHElement) -> QHElement {
    let mut out = QHElement::zero(x.n());
    for (r, s, coeff) in x.terms() {
        if s == 0 {
            out.accumulate(coeff.clone(), r, 0);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Shared rendering / parsing helpers
// ---------------------------------------------------------------------------

fn render_monomial(coeff: &BigRational, vars: &[(char, usize)]) -> String {
    let mut factors: Vec<String> = Vec::new();
    if !coeff.is_one() || vars.iter().all(|&(_, e)| e == 0) {
        factors.push(render_rational(coeff));
    }
    for &(name, exp) in vars {
        match exp {
            0 => {}
            1 => factors.push(name.to_string()),
            _ => factors.push(format!("{name}^{exp}")),
        }
    }
    factors.join("*")
}

fn render_rational(x: &BigRational) -> String {
    if x.denom() == &BigInt::one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

struct Term {
    negative: bool,
    body: String,
}

fn split_terms(text: &str) -> Result<Vec<Term>, VortexError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(VortexError::InvalidInput("empty expression".into()));
    }
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut seen_any = false;
    for ch in text.chars() {
        match ch {
            '+' | '-' if seen_any && !current.trim().is_empty() => {
                terms.push(Term {
                    negative,
                    body: std::mem::take(&mut current),
                });
                negative = ch == '-';
            }
            '-' if current.trim().is_empty() => {
                negative = !negative;
                seen_any = true;
            }
            '+' if current.trim().is_empty() => {
                seen_any = true;
            }
            _ => {
                if !ch.is_whitespace() {
                    seen_any = true;
                }
                current.push(ch);
            }
        }
    }
    if !current.trim().is_empty() {
        terms.push(Term {
            negative,
            body: current,
        });
    }
    if terms.is_empty() {
        return Err(VortexError::InvalidInput("expression has no terms".into()));
    }
    Ok(terms)
}

struct Monomial {
    coeff: BigRational,
    var_exp: usize,
    q_exp: usize,
}

fn parse_monomial(body: &str, var: char) -> Result<Monomial, VortexError> {
    let mut coeff = BigRational::one();
    let mut var_exp = 0usize;
    let mut q_exp = 0usize;
    for factor in body.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(VortexError::InvalidInput(format!(
                "empty factor in term '{body}'"
            )));
        }
        let (head, exp) = match factor.split_once('^') {
            Some((h, e)) => {
                let exp: usize = e.trim().parse().map_err(|_| {
                    VortexError::InvalidInput(format!("bad exponent in '{factor}'"))
                })?;
                (h.trim(), exp)
            }
            None => (factor, 1),
        };
        if head.len() == 1 && head.starts_with(var) {
            var_exp += exp;
        } else if head == "q" {
            q_exp += exp;
        } else {
            let rational = parse_rational(head)?;
            let mut power = BigRational::one();
            for _ in 0..exp {
                power *= &rational;
            }
            coeff *= power;
        }
    }
    Ok(Monomial {
        coeff,
        var_exp,
        q_exp,
    })
}

fn parse_rational(text: &str) -> Result<BigRational, VortexError> {
    let bad = |t: &str| VortexError::InvalidInput(format!("cannot parse coefficient '{t}'"));
    match text.split_once('/') {
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().map_err(|_| bad(text))?;
            let d: BigInt = den.trim().parse().map_err(|_| bad(text))?;
            if d.is_zero() {
                return Err(bad(text));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = text.trim().parse().map_err(|_| bad(text))?;
            Ok(BigRational::from_integer(n))
        }
    }
}
