//! Conformal algebras over `B[∂]`: elements, n-products, locality and the
//! sesquilinearity axioms.

use crate::algebra::element::write_terms;
use crate::algebra::rational::{binomial, falling, int, sign};
use crate::algebra::{
    AlgebraElement, BaseAlgebra, Basis, Derivation, Polynomial, Rational, Shape,
    DEFAULT_NILPOTENCY_CAP,
};
use crate::error::{domain, Error, Result};
use crate::sample::Sampler;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

/// An element `Σ_b p_b(∂)·b̃` of the free `ℚ[∂]`-module on a basis of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalElement {
    shape: Arc<Shape>,
    terms: BTreeMap<Basis, Polynomial>,
}

impl ConformalElement {
    pub fn zero(shape: &Arc<Shape>) -> Self {
        Self {
            shape: shape.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// `b̃`.
    pub fn tilde(b: &AlgebraElement) -> Self {
        Self::from_components(b.shape(), std::slice::from_ref(b))
    }

    /// `Σ_k ∂^k (a_k)~`.
    pub fn from_components(shape: &Arc<Shape>, components: &[AlgebraElement]) -> Self {
        let mut out = Self::zero(shape);
        for (k, a) in components.iter().enumerate() {
            for (b, c) in a.terms() {
                out.add_poly(*b, &Polynomial::monomial(c.clone(), k));
            }
        }
        out
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn terms(&self) -> &BTreeMap<Basis, Polynomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of ∂ present; `None` for zero.
    pub fn partial_degree(&self) -> Option<usize> {
        self.terms.values().filter_map(Polynomial::degree).max()
    }

    /// The base-algebra coefficients `a_k` of `Σ ∂^k ã_k`.
    pub fn components(&self) -> Vec<AlgebraElement> {
        let len = self.partial_degree().map_or(0, |d| d + 1);
        let mut out = vec![AlgebraElement::zero(&self.shape); len];
        for (b, p) in &self.terms {
            for (k, c) in p.coeffs().iter().enumerate() {
                out[k].add_term(*b, c.clone());
            }
        }
        out
    }

    /// The `∂^k` component.
    pub fn component(&self, k: usize) -> AlgebraElement {
        let mut out = AlgebraElement::zero(&self.shape);
        for (b, p) in &self.terms {
            out.add_term(*b, p.coeff(k));
        }
        out
    }

    pub(crate) fn add_poly(&mut self, b: Basis, p: &Polynomial) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.get(&b) {
            Some(q) => q + p,
            None => p.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&b);
        } else {
            self.terms.insert(b, sum);
        }
    }

    pub fn add_scaled(&mut self, other: &ConformalElement, c: &Rational) {
        debug_assert_eq!(self.shape, other.shape);
        for (b, p) in &other.terms {
            self.add_poly(*b, &p.scale(c));
        }
    }

    /// Multiply by a polynomial in ∂.
    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        let mut out = Self::zero(&self.shape);
        for (b, q) in &self.terms {
            out.add_poly(*b, &(q * p));
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.mul_poly(&Polynomial::constant(c.clone()))
    }

    /// `∂^k·self`.
    pub fn partial(&self, k: usize) -> Self {
        Self {
            shape: self.shape.clone(),
            terms: self.terms.iter().map(|(b, p)| (*b, p.shift(k))).collect(),
        }
    }

    pub fn same_shape(&self, other: &ConformalElement) -> Result<()> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(domain(
                "conformal elements belong to different algebras",
            ))
        }
    }

    /// Base-algebra support across every ∂-component.
    pub fn support(&self) -> impl Iterator<Item = &Basis> {
        self.terms.keys()
    }
}

impl Add for &ConformalElement {
    type Output = ConformalElement;
    fn add(self, rhs: Self) -> ConformalElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &int(1));
        out
    }
}

impl Sub for &ConformalElement {
    type Output = ConformalElement;
    fn sub(self, rhs: Self) -> ConformalElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &int(-1));
        out
    }
}

impl Neg for &ConformalElement {
    type Output = ConformalElement;
    fn neg(self) -> ConformalElement {
        self.scale(&int(-1))
    }
}

fn partial_label(k: usize, base: &str) -> String {
    let d = match k {
        0 => return base.to_string(),
        1 => "d".to_string(),
        _ => format!("d^{k}"),
    };
    if base == "1" {
        d
    } else {
        format!("{d}*{base}")
    }
}

impl fmt::Display for ConformalElement {
    /// `x + 2*d*e12 - 1/2*d^2*1`, lowest ∂-power first; the tilde is implicit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut flat: BTreeMap<(usize, Basis), &Rational> = BTreeMap::new();
        for (b, p) in &self.terms {
            for (k, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    flat.insert((k, *b), c);
                }
            }
        }
        write_terms(
            f,
            flat.into_iter()
                .map(|((k, b), c)| (partial_label(k, &b.label(&self.shape)), c)),
        )
    }
}

/// Which construction a conformal algebra came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `Cur B`: `ã ⓝ b̃ = δ_{n,0}(ab)~`.
    Current,
    /// `Dif(B, δ)`: `ã ⓝ b̃ = (−1)ⁿ (a·δⁿ(b))~`.
    Differential,
    /// `Cend_n = Dif(M_n(ℚ[x]), d/dx)`.
    Cend(u16),
}

/// A conformal algebra `B[∂]` with the n-products of `Cur B` or `Dif(B, δ)`.
#[derive(Clone, Debug)]
pub struct ConformalAlgebra {
    base: BaseAlgebra,
    derivation: Derivation,
    construction: Construction,
    cap: u32,
}

impl ConformalAlgebra {
    /// No validation; use the constructors in [`crate::constructions`].
    pub(crate) fn from_parts(
        base: BaseAlgebra,
        derivation: Derivation,
        construction: Construction,
    ) -> Self {
        Self {
            base,
            derivation,
            construction,
            cap: DEFAULT_NILPOTENCY_CAP,
        }
    }

    /// Cap on δ-nilpotency searches used by products and locality bounds.
    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    pub fn base(&self) -> &BaseAlgebra {
        &self.base
    }

    pub fn derivation(&self) -> &Derivation {
        &self.derivation
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn shape(&self) -> &Arc<Shape> {
        self.base.shape()
    }

    pub fn is_current(&self) -> bool {
        self.construction == Construction::Current
    }

    /// Check that an element lies in this algebra (shape and, for
    /// subalgebra bases, every component in the span).
    pub fn check_member(&self, a: &ConformalElement) -> Result<()> {
        if a.shape() != self.shape() {
            return Err(domain("element does not belong to this conformal algebra"));
        }
        if self.base.is_subalgebra() {
            for c in a.components() {
                if !self.base.contains(&c) {
                    return Err(domain(format!(
                        "component {c} is not in the base subalgebra"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Max δ-nilpotency index over the support of `b`; zero for currents.
    pub fn support_nilpotency(&self, b: &ConformalElement) -> Result<u32> {
        if self.is_current() {
            return Ok(0);
        }
        let mut best = 0;
        for basis in b.support() {
            let e = AlgebraElement::basis(self.shape(), *basis);
            best = best.max(self.derivation.nilpotency_index(&e, self.cap)?);
        }
        Ok(best)
    }

    /// Every n-product of `a` and `b` vanishes for `n` above this bound.
    pub fn structural_bound(&self, a: &ConformalElement, b: &ConformalElement) -> Result<u32> {
        if a.is_zero() || b.is_zero() {
            return Ok(0);
        }
        let da = a.partial_degree().unwrap_or(0) as u32;
        let db = b.partial_degree().unwrap_or(0) as u32;
        Ok(self.support_nilpotency(b)? + da + db)
    }

    /// `a ⓜ b` on base coefficients, with `orbit = [b, δb, δ²b, …]`.
    fn base_product(&self, a: &AlgebraElement, m: u32, orbit: &[AlgebraElement]) -> AlgebraElement {
        let m = m as usize;
        if self.is_current() {
            return if m == 0 {
                a.mul_unchecked(&orbit[0])
            } else {
                AlgebraElement::zero(self.shape())
            };
        }
        match orbit.get(m) {
            Some(dm) => a.mul_unchecked(dm).scale(&sign(m as u32)),
            None => AlgebraElement::zero(self.shape()),
        }
    }

    /// The n-product, extended from basis elements by sesquilinearity:
    /// `(∂^i X) ⓝ (∂^j Y) = (−1)^i n^(i) Σ_l C(j,l) (n−i)^(l) ∂^(j−l) (X ⓝ₋ᵢ₋ₗ Y)`.
    pub fn nprod(&self, a: &ConformalElement, n: u32, b: &ConformalElement) -> Result<ConformalElement> {
        a.same_shape(b)?;
        if a.shape() != self.shape() {
            return Err(domain("elements do not belong to this conformal algebra"));
        }
        let mut out = ConformalElement::zero(self.shape());
        if a.is_zero() || b.is_zero() || n > self.structural_bound(a, b)? {
            return Ok(out);
        }
        let ac = a.components();
        for (j, bj) in b.components().iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let orbit = if self.is_current() {
                vec![bj.clone()]
            } else {
                self.derivation.orbit(bj, self.cap)?
            };
            for (i, ai) in ac.iter().enumerate() {
                let i = i as u32;
                if ai.is_zero() || i > n {
                    continue;
                }
                let ci = sign(i) * falling(n as i64, i);
                for l in 0..=(j as u32).min(n - i) {
                    let m = n - i - l;
                    let prod = self.base_product(ai, m, &orbit);
                    if prod.is_zero() {
                        continue;
                    }
                    let c = &ci * binomial(j as i64, l) * falling((n - i) as i64, l);
                    let k = j - l as usize;
                    for (basis, q) in prod.terms() {
                        out.add_poly(*basis, &Polynomial::monomial(&c * q, k));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Validates a user-supplied order; negative orders are a domain error.
pub fn checked_order(n: i64) -> Result<u32> {
    u32::try_from(n).map_err(|_| domain(format!("n-product order must be a nonnegative integer, got {n}")))
}

/// A product law on a conformal algebra. The canonical implementation is
/// [`ConformalAlgebra`] itself; alternative laws plug into the same checks.
pub trait NProduct {
    fn algebra(&self) -> &ConformalAlgebra;
    fn nprod(&self, a: &ConformalElement, n: u32, b: &ConformalElement) -> Result<ConformalElement>;
}

impl NProduct for ConformalAlgebra {
    fn algebra(&self) -> &ConformalAlgebra {
        self
    }

    fn nprod(&self, a: &ConformalElement, n: u32, b: &ConformalElement) -> Result<ConformalElement> {
        ConformalAlgebra::nprod(self, a, n, b)
    }
}

/// Locality degree of a pair: the largest `n` with `a ⓝ b ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityCap {
    /// `None` when every product vanishes.
    pub degree: Option<u32>,
    /// The a-priori bound that was scanned.
    pub bound: u32,
}

/// Computes `N(a, b)`. If the structural bound exceeds `cap`, the answer is
/// reported as indeterminate rather than guessed.
pub fn locality_degree<P: NProduct + ?Sized>(
    p: &P,
    a: &ConformalElement,
    b: &ConformalElement,
    cap: u32,
) -> Result<LocalityCap> {
    let bound = p.algebra().structural_bound(a, b)?;
    if bound > cap {
        return Err(Error::IndeterminateLocality { cap, bound });
    }
    let mut degree = None;
    for n in (0..=bound).rev() {
        if !p.nprod(a, n, b)?.is_zero() {
            degree = Some(n);
            break;
        }
    }
    Ok(LocalityCap { degree, bound })
}

/// Which sesquilinearity identity failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    /// `∂(a ⓝ b) = ∂a ⓝ b + a ⓝ ∂b`.
    Leibniz,
    /// `∂a ⓝ b = −n·(a ⓝ₋₁ b)`.
    LeftPartial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub a: ConformalElement,
    pub b: ConformalElement,
    pub n: u32,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub samples: usize,
    pub checks: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both sesquilinearity axioms on seeded random pairs, for every
/// order up to one past the structural bound of `(∂a, ∂b)`.
pub fn check_axioms<P: NProduct + ?Sized>(
    p: &P,
    samples: usize,
    seed: u64,
    degree: u32,
) -> Result<AxiomReport> {
    let alg = p.algebra();
    let span = alg.base.spanning_up_to(degree);
    if span.is_empty() {
        return Err(domain("base algebra has no spanning elements in the sampled degree"));
    }
    let mut rng = Sampler::new(seed);
    let mut report = AxiomReport {
        samples,
        ..AxiomReport::default()
    };
    for _ in 0..samples {
        let a = rng.conformal_element(&span);
        let b = rng.conformal_element(&span);
        let da = a.partial(1);
        let db = b.partial(1);
        let top = alg.structural_bound(&da, &db)? + 1;
        for n in 0..=top {
            let ab = p.nprod(&a, n, &b)?;
            let lhs = ab.partial(1);
            let rhs = &p.nprod(&da, n, &b)? + &p.nprod(&a, n, &db)?;
            report.checks += 1;
            if lhs != rhs {
                report.violations.push(AxiomViolation {
                    axiom: Axiom::Leibniz,
                    a: a.clone(),
                    b: b.clone(),
                    n,
                });
            }
            let lhs = p.nprod(&da, n, &b)?;
            let rhs = if n == 0 {
                ConformalElement::zero(alg.shape())
            } else {
                p.nprod(&a, n - 1, &b)?.scale(&int(-(n as i64)))
            };
            report.checks += 1;
            if lhs != rhs {
                report.violations.push(AxiomViolation {
                    axiom: Axiom::LeftPartial,
                    a: a.clone(),
                    b: b.clone(),
                    n,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::constructions::{cend_generator, make_cend, make_current};

    fn cend1() -> ConformalAlgebra {
        make_cend(1).unwrap()
    }

    fn l(c: &ConformalAlgebra, name: &str) -> ConformalElement {
        cend_generator(c, name).unwrap()
    }

    fn unit(c: &ConformalAlgebra, i: u16, j: u16) -> ConformalElement {
        let b = Basis { block: 0, deg: 0, row: i - 1, col: j - 1 };
        ConformalElement::tilde(&AlgebraElement::basis(c.shape(), b))
    }

    #[test]
    fn cend1_products() {
        let c = cend1();
        let (l0, l1, l2) = (l(&c, "L0"), l(&c, "L1"), l(&c, "L2"));
        assert_eq!(c.nprod(&l1, 1, &l1).unwrap(), -&l1);
        assert_eq!(c.nprod(&l0, 1, &l1).unwrap(), -&l0);
        assert_eq!(c.nprod(&l1, 0, &l1).unwrap(), l2);
        assert_eq!(c.nprod(&l1, 2, &l2).unwrap(), l1.scale(&int(2)));
        assert!(c.nprod(&l1, 1, &l0).unwrap().is_zero());
    }

    #[test]
    fn left_partial_example() {
        let c = cend1();
        let x = l(&c, "L1");
        assert_eq!(c.nprod(&x.partial(1), 1, &x).unwrap(), -&l(&c, "L2"));
    }

    #[test]
    fn current_products() {
        let c = make_current(&BaseAlgebra::matrix(2).unwrap());
        let (e11, e12) = (unit(&c, 1, 1), unit(&c, 1, 2));
        assert!(c.nprod(&e11, 1, &e12).unwrap().is_zero());
        assert_eq!(c.nprod(&e11, 0, &e12).unwrap(), e12);
    }

    #[test]
    fn locality_examples() {
        let c = cend1();
        let x = l(&c, "L1");
        assert_eq!(locality_degree(&c, &x, &x, 10).unwrap().degree, Some(1));
        let cur = make_current(&BaseAlgebra::matrix(2).unwrap());
        let (e12, e21) = (unit(&cur, 1, 2), unit(&cur, 2, 1));
        assert_eq!(locality_degree(&cur, &e12, &e21, 10).unwrap().degree, Some(0));
        assert_eq!(locality_degree(&cur, &e12, &e12, 10).unwrap().degree, None);
        let big = l(&c, "L5");
        assert!(matches!(
            locality_degree(&c, &big, &big, 3),
            Err(Error::IndeterminateLocality { cap: 3, bound: 6 })
        ));
    }

    #[test]
    fn apply_partial_and_normalize() {
        let c = cend1();
        let a = l(&c, "L0");
        let b = l(&c, "L1");
        let p = &a.partial(2) + &a;
        assert_eq!(p.partial(1), &a.partial(3) + &a.partial(1));
        assert!((&a - &a).is_zero());
        assert_eq!(&b + &a, &a + &b);
        assert_eq!(&a + &b.scale(&int(0)), a);
        assert_eq!(ConformalElement::zero(c.shape()).partial(1), ConformalElement::zero(c.shape()));
        assert_eq!(p.to_string(), "1 + d^2");
        assert_eq!((&b.partial(1).scale(&int(-2)) + &a).to_string(), "1 - 2*d*x");
    }

    #[test]
    fn negative_order_rejected() {
        assert!(checked_order(-1).is_err());
        assert_eq!(checked_order(3).unwrap(), 3);
    }

    #[test]
    fn axioms_hold_on_builtins() {
        let report = check_axioms(&cend1(), 20, 7, 4).unwrap();
        assert!(report.passed());
        assert!(report.checks > 0);
        let cur = make_current(&BaseAlgebra::matrix(2).unwrap());
        assert!(check_axioms(&cur, 20, 7, 4).unwrap().passed());
    }

    /// Negates every product whose left argument carries a ∂.
    struct FlippedLeft(ConformalAlgebra);

    impl NProduct for FlippedLeft {
        fn algebra(&self) -> &ConformalAlgebra {
            &self.0
        }
        fn nprod(&self, a: &ConformalElement, n: u32, b: &ConformalElement) -> Result<ConformalElement> {
            let p = self.0.nprod(a, n, b)?;
            Ok(if a.partial_degree().unwrap_or(0) > 0 { -&p } else { p })
        }
    }

    #[test]
    fn sabotage_is_detected() {
        let report = check_axioms(&FlippedLeft(cend1()), 20, 7, 4).unwrap();
        assert!(!report.passed());
    }
}
