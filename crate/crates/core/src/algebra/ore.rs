//! The localized Ore extension B[t, t⁻¹; δ] with `bt − tb = δ(b)`.
//!
//! Elements are kept in the normal form Σ b_k t^k (algebra coefficients to
//! the left). Moving a power of t past a coefficient uses
//! `t^k b = Σ_i C(k, i) (−1)^i δ^i(b) t^(k−i)`, valid for every integer k
//! with generalized binomials; for k < 0 the sum is finite because δ is
//! locally nilpotent.

use super::derivation::{Derivation, DEFAULT_NILPOTENCY_CAP};
use super::element::{AlgebraElement, Shape};
use super::rational::{binomial, sign, Rational};
use crate::error::{domain, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreElement {
    shape: Arc<Shape>,
    terms: BTreeMap<i64, AlgebraElement>,
}

impl OreElement {
    pub fn zero(shape: &Arc<Shape>) -> Self {
        Self {
            shape: shape.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// b·t^k
    pub fn monomial(b: AlgebraElement, k: i64) -> Self {
        let mut out = Self::zero(b.shape());
        out.add_term(k, &b, &Rational::one());
        out
    }

    /// t^k
    pub fn t_power(shape: &Arc<Shape>, k: i64) -> Self {
        Self::monomial(AlgebraElement::one(shape), k)
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn terms(&self) -> &BTreeMap<i64, AlgebraElement> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> AlgebraElement {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| AlgebraElement::zero(&self.shape))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// self += c·b·t^k
    pub fn add_term(&mut self, k: i64, b: &AlgebraElement, c: &Rational) {
        if b.is_zero() || c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(k)
            .or_insert_with(|| AlgebraElement::zero(&self.shape));
        entry.add_scaled(b, c);
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_scaled(&mut self, other: &OreElement, c: &Rational) {
        for (k, b) in &other.terms {
            self.add_term(*k, b, c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.shape);
        out.add_scaled(self, c);
        out
    }
}

impl fmt::Display for OreElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, b)| {
                let t = match k {
                    0 => String::new(),
                    1 => "t".to_string(),
                    _ => format!("t^{k}"),
                };
                match (b.terms().len(), t.is_empty()) {
                    (_, true) => b.to_string(),
                    (1, false) => format!("{b}*{t}"),
                    _ => format!("({b})*{t}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Multiplication of coefficients, the only structure the distribution
/// layer needs. Implemented by [`OreRing`]; test fixtures may substitute
/// a broken table.
pub trait CoefficientRing {
    fn shape(&self) -> &Arc<Shape>;
    fn mul(&self, x: &OreElement, y: &OreElement) -> Result<OreElement>;
}

/// B[t, t⁻¹; δ] for a fixed derivation.
#[derive(Clone, Debug)]
pub struct OreRing {
    derivation: Derivation,
    cap: u32,
}

impl OreRing {
    pub fn new(derivation: Derivation) -> Self {
        Self {
            derivation,
            cap: DEFAULT_NILPOTENCY_CAP,
        }
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    /// t^k · b in normal form.
    pub fn commute(&self, k: i64, b: &AlgebraElement) -> Result<OreElement> {
        let orbit = self.derivation.orbit(b, self.cap)?;
        let mut out = OreElement::zero(b.shape());
        for (i, di) in orbit.iter().enumerate() {
            let i = i as u32;
            let c = binomial(k, i) * sign(i);
            if c.is_zero() {
                if k >= 0 {
                    break;
                }
                continue;
            }
            out.add_term(k - i as i64, di, &c);
        }
        Ok(out)
    }
}

impl CoefficientRing for OreRing {
    fn shape(&self) -> &Arc<Shape> {
        self.derivation.shape()
    }

    fn mul(&self, x: &OreElement, y: &OreElement) -> Result<OreElement> {
        if x.shape() != y.shape() || x.shape() != self.shape() {
            return Err(domain("Ore elements over different algebras"));
        }
        let mut out = OreElement::zero(x.shape());
        for (q, b) in y.terms() {
            let orbit = self.derivation.orbit(b, self.cap)?;
            for (p, a) in x.terms() {
                for (i, di) in orbit.iter().enumerate() {
                    let i = i as u32;
                    let c = binomial(*p, i) * sign(i);
                    if c.is_zero() {
                        if *p >= 0 {
                            break;
                        }
                        continue;
                    }
                    out.add_term(p + q - i as i64, &a.mul_unchecked(di), &c);
                }
            }
        }
        Ok(out)
    }
}
