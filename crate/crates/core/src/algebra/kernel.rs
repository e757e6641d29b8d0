//! Decomposition over the kernel of d/dx, and restriction of derivations to
//! direct summands.

use super::base::BaseAlgebra;
use super::derivation::{Derivation, DerivationKind};
use super::element::{AlgebraElement, Basis};
use super::element::Shape;
use super::rational::{factorial, Rational};
use crate::error::{Error, Result};
use num_traits::One;
use std::sync::Arc;

/// Writes `a = Σ (x^i / i!) a_i` with every `a_i` killed by d/dx.
///
/// Follows the induction on the nilpotency index of `a`: decompose δ(a) as
/// Σ (x^i/i!) b_i, then `a_0 = a − Σ (x^(i+1)/(i+1)!) b_i` lies in the kernel
/// and `a_(i+1) = b_i`. Returns the nonzero components, highest `i` first.
pub fn kernel_decompose(a: &AlgebraElement, d: &Derivation) -> Result<Vec<(u32, AlgebraElement)>> {
    if !matches!(d.kind(), DerivationKind::Ddx) {
        return Err(Error::Unsupported(format!(
            "kernel decomposition needs the derivation d/dx, got {d}"
        )));
    }
    if a.shape() != d.shape() {
        return Err(crate::error::domain("derivation and element belong to different algebras"));
    }
    let mut components = decompose(a, d)?;
    components.retain(|(_, c)| !c.is_zero());
    components.reverse();
    Ok(components)
}

fn decompose(a: &AlgebraElement, d: &Derivation) -> Result<Vec<(u32, AlgebraElement)>> {
    if a.is_zero() {
        return Ok(Vec::new());
    }
    let da = d.apply(a)?;
    if da.is_zero() {
        return Ok(vec![(0, a.clone())]);
    }
    let lower = decompose(&da, d)?;
    let mut a0 = a.clone();
    for (i, b) in &lower {
        let lifted = b.times_x_power(i + 1);
        a0.add_scaled(&lifted, &-(Rational::one() / factorial(i + 1)));
    }
    debug_assert!(d.apply(&a0)?.is_zero());
    let mut out = vec![(0, a0)];
    out.extend(lower.into_iter().map(|(i, b)| (i + 1, b)));
    Ok(out)
}

/// Σ (x^i / i!) a_i
pub fn kernel_reconstruct(shape: &Arc<Shape>, parts: &[(u32, AlgebraElement)]) -> AlgebraElement {
    let mut out = AlgebraElement::zero(shape);
    for (i, c) in parts {
        out.add_scaled(&c.times_x_power(*i), &(Rational::one() / factorial(*i)));
    }
    out
}

/// Outcome of checking that a derivation of a direct sum restricts to
/// each summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionReport {
    pub restricts: bool,
    pub killed_identities: bool,
    pub violations: Vec<String>,
}

/// Checks δ(e_i) = 0 for each summand identity and δ(A_i) ⊆ A_i on basis
/// elements up to `degree`.
pub fn derivation_restricts(
    algebra: &BaseAlgebra,
    d: &Derivation,
    degree: u32,
) -> Result<RestrictionReport> {
    if algebra.is_subalgebra() {
        return Err(Error::Precondition(
            "summands of a subalgebra are not known to be unital".into(),
        ));
    }
    let shape = algebra.shape();
    let mut violations = Vec::new();
    let mut killed = true;
    for (s, blk) in shape.blocks().iter().enumerate() {
        let mut unit = AlgebraElement::zero(shape);
        for i in 0..blk.size {
            unit.add_term(Basis { block: s as u16, deg: 0, row: i, col: i }, Rational::one());
        }
        let du = d.apply(&unit)?;
        if !du.is_zero() {
            killed = false;
            violations.push(format!("δ(e_{s}) = {du}"));
        }
    }
    for b in shape.basis_up_to(degree) {
        let img = d.apply(&algebra.element(b))?;
        if img.terms().keys().any(|k| k.block != b.block) {
            violations.push(format!("δ({}) = {img} leaves summand {}", b.label(shape), b.block));
        }
    }
    Ok(RestrictionReport {
        restricts: violations.is_empty(),
        killed_identities: killed,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    fn mp2() -> BaseAlgebra {
        BaseAlgebra::matrix_poly(2).unwrap()
    }

    fn b(a: &BaseAlgebra, deg: u32, i: u16, j: u16) -> AlgebraElement {
        a.element(Basis { block: 0, deg, row: i - 1, col: j - 1 })
    }

    #[test]
    fn square_of_x() {
        let a = BaseAlgebra::poly();
        let d = Derivation::ddx(a.shape());
        let x2 = a.element(Basis { block: 0, deg: 2, row: 0, col: 0 });
        let parts = kernel_decompose(&x2, &d).unwrap();
        assert_eq!(parts, vec![(2, AlgebraElement::one(a.shape()).scale(&int(2)))]);
    }

    #[test]
    fn one_induction_step() {
        let a = mp2();
        let d = Derivation::ddx(a.shape());
        let el = &b(&a, 1, 1, 1) + &b(&a, 0, 2, 2);
        let parts = kernel_decompose(&el, &d).unwrap();
        assert_eq!(parts, vec![(1, b(&a, 0, 1, 1)), (0, b(&a, 0, 2, 2))]);
    }

    #[test]
    fn kernel_elements_are_their_own_decomposition() {
        let a = mp2();
        let d = Derivation::ddx(a.shape());
        let k = &b(&a, 0, 1, 2) - &b(&a, 0, 2, 1);
        assert_eq!(kernel_decompose(&k, &d).unwrap(), vec![(0, k)]);
        assert!(kernel_decompose(&AlgebraElement::zero(a.shape()), &d).unwrap().is_empty());
    }

    #[test]
    fn other_derivations_are_unsupported() {
        let a = mp2();
        let d = Derivation::inner(b(&a, 0, 1, 2));
        assert!(matches!(kernel_decompose(&b(&a, 1, 1, 1), &d), Err(Error::Unsupported(_))));
    }

    #[test]
    fn inner_derivation_restricts_to_summands() {
        let a = BaseAlgebra::direct_sum(vec![BaseAlgebra::matrix(2).unwrap(), BaseAlgebra::scalar()]).unwrap();
        let r = a.element(Basis { block: 0, deg: 0, row: 0, col: 1 });
        let rep = derivation_restricts(&a, &Derivation::inner(r), 0).unwrap();
        assert!(rep.restricts && rep.killed_identities, "{rep:?}");

        let single = BaseAlgebra::matrix_poly(2).unwrap();
        let rep = derivation_restricts(&single, &Derivation::ddx(single.shape()), 3).unwrap();
        assert!(rep.restricts && rep.killed_identities);

        let two = BaseAlgebra::direct_sum(vec![BaseAlgebra::matrix(2).unwrap(), BaseAlgebra::matrix(2).unwrap()]).unwrap();
        let rep = derivation_restricts(&two, &Derivation::zero(two.shape()), 0).unwrap();
        assert!(rep.restricts);
    }

    #[test]
    fn non_derivation_map_is_reported() {
        // A table map moving e11@0 into the other summand is not a derivation,
        // but the report must still name the violation.
        let a = BaseAlgebra::direct_sum(vec![BaseAlgebra::scalar(), BaseAlgebra::scalar()]).unwrap();
        let mut t = std::collections::BTreeMap::new();
        t.insert(Basis { block: 0, deg: 0, row: 0, col: 0 }, a.element(Basis { block: 1, deg: 0, row: 0, col: 0 }));
        t.insert(Basis { block: 1, deg: 0, row: 0, col: 0 }, AlgebraElement::zero(a.shape()));
        let d = Derivation::table(a.shape(), t).unwrap();
        let rep = derivation_restricts(&a, &d, 0).unwrap();
        assert!(!rep.restricts && !rep.killed_identities);
    }
}
