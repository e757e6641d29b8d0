//! Realization of conformal elements as formal distributions
//! `f(z) = Σ f(n) z^{-n-1}` over `B[t, t⁻¹; δ]`, and cross-checks of the
//! conformal products against residue products of distributions.

use crate::algebra::ore::CoefficientRing;
use crate::algebra::rational::{binomial, falling, int, sign};
use crate::algebra::{Derivation, OreElement, OreRing, Rational, Shape};
use crate::conformal::{ConformalAlgebra, ConformalElement, NProduct};
use crate::error::{domain, Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const DEFAULT_WINDOW: i64 = 8;

/// Coefficients `f(n)` known exactly for `n ∈ [lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    shape: Arc<Shape>,
    lo: i64,
    hi: i64,
    coeffs: BTreeMap<i64, OreElement>,
}

impl Distribution {
    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    /// `f(n)`; zero inside the range when nothing is stored.
    pub fn coeff(&self, n: i64) -> Result<OreElement> {
        if n < self.lo || n > self.hi {
            return Err(Error::WindowExceeded {
                window: self.hi,
                order: n.unsigned_abs() as u32,
            });
        }
        Ok(self
            .coeffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| OreElement::zero(&self.shape)))
    }

    fn with_range(shape: &Arc<Shape>, lo: i64, hi: i64) -> Self {
        Self {
            shape: shape.clone(),
            lo,
            hi,
            coeffs: BTreeMap::new(),
        }
    }

    fn set(&mut self, n: i64, v: OreElement) {
        if v.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Narrows the known range.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        let (lo, hi) = (lo.max(self.lo), hi.min(self.hi));
        Self {
            shape: self.shape.clone(),
            lo,
            hi,
            coeffs: self.coeffs.range(lo..=hi).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// `d/dz`: `(∂f)(n) = −n·f(n−1)`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::with_range(&self.shape, self.lo + 1, self.hi);
        for (n, v) in &self.coeffs {
            out.set(n + 1, v.scale(&-int(n + 1)));
        }
        out.restrict(self.lo + 1, self.hi)
    }

    pub fn add(&self, other: &Distribution) -> Self {
        let (lo, hi) = (self.lo.max(other.lo), self.hi.min(other.hi));
        let mut out = Self::with_range(&self.shape, lo, hi);
        for n in lo..=hi {
            let mut v = self.coeffs.get(&n).cloned().unwrap_or_else(|| OreElement::zero(&self.shape));
            if let Some(w) = other.coeffs.get(&n) {
                v.add_scaled(w, &int(1));
            }
            out.set(n, v);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::with_range(&self.shape, self.lo, self.hi);
        for (n, v) in &self.coeffs {
            out.set(*n, v.scale(c));
        }
        out
    }
}

/// `Σ ∂^k ã_k ↦ Σ_k (−1)^k n^(k) a_k t^{n−k}` on `[−W, W]`.
pub fn to_distribution(a: &ConformalElement, window: i64) -> Result<Distribution> {
    if window < 1 {
        return Err(domain("window must be at least 1"));
    }
    let mut out = Distribution::with_range(a.shape(), -window, window);
    let comps = a.components();
    for n in -window..=window {
        let mut v = OreElement::zero(a.shape());
        for (k, ak) in comps.iter().enumerate() {
            let k = k as u32;
            let c = sign(k) * falling(n, k);
            if !ak.is_zero() {
                v.add_term(n - k as i64, ak, &c);
            }
        }
        out.set(n, v);
    }
    Ok(out)
}

/// The residue product `(f ⓜ g)(n) = Σ_j C(m,j)(−1)^j f(m−j)·g(n+j)`,
/// exact wherever every factor is known.
pub fn dist_nprod<R: CoefficientRing + ?Sized>(
    ring: &R,
    f: &Distribution,
    m: u32,
    g: &Distribution,
) -> Result<Distribution> {
    let mi = m as i64;
    if f.lo > 0 || f.hi < mi || g.hi - mi < g.lo {
        return Err(Error::WindowExceeded {
            window: f.hi.min(g.hi),
            order: m,
        });
    }
    let (lo, hi) = (g.lo, g.hi - mi);
    let mut out = Distribution::with_range(&f.shape, lo, hi);
    let fs: Vec<OreElement> = (0..=mi).map(|i| f.coeff(i)).collect::<Result<_>>()?;
    for n in lo..=hi {
        let mut v = OreElement::zero(&f.shape);
        for j in 0..=m {
            let fj = &fs[(m - j) as usize];
            let Some(gj) = g.coeffs.get(&(n + j as i64)) else { continue };
            if fj.is_zero() {
                continue;
            }
            let c = binomial(mi, j) * sign(j);
            v.add_scaled(&ring.mul(fj, gj)?, &c);
        }
        out.set(n, v);
    }
    Ok(out)
}

/// Where the oracle and the conformal product disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub n: i64,
    pub conformal: OreElement,
    pub residue: OreElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub matches: bool,
    /// Compared index range `[lo, hi]`.
    pub compared: (i64, i64),
    pub mismatches: Vec<Mismatch>,
}

fn compare(lhs: &Distribution, rhs: &Distribution) -> OracleReport {
    let (lo, hi) = (lhs.lo.max(rhs.lo), lhs.hi.min(rhs.hi));
    let mut mismatches = Vec::new();
    for n in lo..=hi {
        let (l, r) = (lhs.coeff(n).expect("in range"), rhs.coeff(n).expect("in range"));
        if l != r {
            mismatches.push(Mismatch {
                n,
                conformal: l,
                residue: r,
            });
        }
    }
    OracleReport {
        matches: mismatches.is_empty(),
        compared: (lo, hi),
        mismatches,
    }
}

/// The canonical coefficient ring of a conformal algebra.
pub fn coefficient_ring(c: &ConformalAlgebra) -> OreRing {
    let d = if c.is_current() {
        Derivation::zero(c.shape())
    } else {
        c.derivation().clone()
    };
    OreRing::new(d)
}

/// Compares `to_distribution(a ⓜ b)` with the residue product of the
/// realizations of `a` and `b` on the exact sub-window `[−W, W−m]`.
pub fn oracle_check<P: NProduct + ?Sized, R: CoefficientRing + ?Sized>(
    p: &P,
    ring: &R,
    a: &ConformalElement,
    m: u32,
    b: &ConformalElement,
    window: i64,
) -> Result<OracleReport> {
    if m as i64 > window {
        return Err(Error::WindowExceeded { window, order: m });
    }
    let product = p.nprod(a, m, b)?;
    let lhs = to_distribution(&product, window)?;
    let rhs = dist_nprod(ring, &to_distribution(a, window)?, m, &to_distribution(b, window)?)?;
    Ok(compare(&lhs, &rhs))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocReport {
    pub passed: bool,
    /// Raw coefficient triples `(i, j, k)` with `(f(i)g(j))h(k) ≠ f(i)(g(j)h(k))`.
    pub triple_failures: Vec<(i64, i64, i64)>,
    pub triples: usize,
    /// Per order pair `(m₁, m₂)`: `(f ⓜ₁ g) ⓜ₂ h` against
    /// `Σ_s (−1)^s C(m₁,s) f ⓜ₁₋ₛ (g ⓜ₂₊ₛ h)`.
    pub iterated: Vec<((u32, u32), OracleReport)>,
}

/// Associativity of the realized coefficients: every coefficient triple of
/// `a, b, c` on the window, plus the iterated residue identity for each
/// order pair (which holds exactly because the Ore ring is associative).
pub fn coeff_assoc_check<R: CoefficientRing + ?Sized>(
    ring: &R,
    a: &ConformalElement,
    b: &ConformalElement,
    c: &ConformalElement,
    orders: &[(u32, u32)],
    window: i64,
) -> Result<AssocReport> {
    if let Some(&(m1, m2)) = orders.iter().find(|(m1, m2)| (m1 + m2) as i64 > window) {
        return Err(Error::WindowExceeded {
            window,
            order: m1 + m2,
        });
    }
    let (f, g, h) = (
        to_distribution(a, window)?,
        to_distribution(b, window)?,
        to_distribution(c, window)?,
    );
    let mut triple_failures = Vec::new();
    let mut triples = 0;
    for (i, fi) in &f.coeffs {
        for (j, gj) in &g.coeffs {
            let fg = ring.mul(fi, gj)?;
            for (k, hk) in &h.coeffs {
                triples += 1;
                let left = ring.mul(&fg, hk)?;
                let right = ring.mul(fi, &ring.mul(gj, hk)?)?;
                if left != right {
                    triple_failures.push((*i, *j, *k));
                }
            }
        }
    }
    let mut iterated = Vec::with_capacity(orders.len());
    for &(m1, m2) in orders {
        let left = dist_nprod(ring, &dist_nprod(ring, &f, m1, &g)?, m2, &h)?;
        let mut right: Option<Distribution> = None;
        for s in 0..=m1 {
            let inner = dist_nprod(ring, &g, m2 + s, &h)?;
            let term = dist_nprod(ring, &f, m1 - s, &inner)?.scale(&(sign(s) * binomial(m1 as i64, s)));
            right = Some(match right {
                None => term,
                Some(acc) => acc.add(&term),
            });
        }
        iterated.push(((m1, m2), compare(&left, &right.expect("at least one term"))));
    }
    Ok(AssocReport {
        passed: triple_failures.is_empty() && iterated.iter().all(|(_, r)| r.matches),
        triple_failures,
        triples,
        iterated,
    })
}
