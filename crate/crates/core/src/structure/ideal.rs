use crate::algebra::base::to_vec;
use crate::algebra::{AlgebraElement, Basis};
use crate::conformal::{ConformalAlgebra, ConformalElement};
use crate::constructions::flatten;
use crate::error::{domain, Result};
use crate::linalg::Echelon;
use std::cmp::Reverse;

/// A δ-stable ideal `I` of `B` and the conformal ideal `Ĩ` of `Dif B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPair {
    /// ℚ-basis of the degree-≤`degree` part of `I`.
    pub i: Vec<AlgebraElement>,
    /// `{b̃ : b ∈ I}`, a ℚ[∂]-spanning set of the truncation of `Ĩ`.
    pub j: Vec<ConformalElement>,
    pub degree: u32,
}

fn basis_of(elems: impl IntoIterator<Item = AlgebraElement>) -> Vec<AlgebraElement> {
    let mut ech = Echelon::new();
    elems
        .into_iter()
        .filter(|e| !e.is_zero() && ech.insert(&to_vec(e)))
        .collect()
}

fn span_has(span: &[AlgebraElement], x: &AlgebraElement) -> bool {
    let mut ech = Echelon::new();
    for s in span {
        ech.insert(&to_vec(s));
    }
    ech.contains(&to_vec(x))
}

/// ℚ-basis of the two-sided ideal generated by `gens`, truncated to
/// products `u·g·v` with `deg u + deg g + deg v ≤ degree`.
fn ideal_truncation(c: &ConformalAlgebra, gens: &[AlgebraElement], degree: u32) -> Vec<AlgebraElement> {
    let mut found = Vec::new();
    for g in gens {
        let dg = g.degree();
        if dg > degree {
            continue;
        }
        let mut left: Vec<AlgebraElement> = c.base().spanning_up_to(degree - dg);
        if let Some(one) = c.base().one() {
            left.push(one);
        }
        for u in &left {
            let ug = u.mul_unchecked(g);
            found.push(ug.clone());
            for v in c.base().spanning_up_to(degree.saturating_sub(dg + u.degree())) {
                found.push(ug.mul_unchecked(&v));
            }
        }
        found.push(g.clone());
        for v in c.base().spanning_up_to(degree - dg) {
            found.push(g.mul_unchecked(&v));
        }
    }
    basis_of(found)
}

/// Closes `gens` into a two-sided ideal of `B` up to `degree`, checks that it
/// is δ-stable, and builds `Ĩ`.
pub fn ideal_lift(c: &ConformalAlgebra, gens: &[AlgebraElement], degree: u32) -> Result<IdealPair> {
    for g in gens {
        if g.shape() != c.shape() || !c.base().contains(g) {
            return Err(domain(format!("ideal generator {g} is not in the base algebra")));
        }
    }
    let i = ideal_truncation(c, gens, degree);
    if !c.is_current() {
        let mut wider: Option<Vec<AlgebraElement>> = None;
        for s in &i {
            let ds = c.derivation().apply(s)?;
            let inside = if ds.degree() <= degree {
                span_has(&i, &ds)
            } else {
                let w = wider.get_or_insert_with(|| ideal_truncation(c, gens, ds.degree()));
                span_has(w, &ds)
            };
            if !inside {
                return Err(domain(format!("ideal is not δ-stable: δ({s}) = {ds}")));
            }
        }
    }
    let j = i.iter().map(ConformalElement::tilde).collect();
    Ok(IdealPair { i, j, degree })
}

/// `J̄ = {b : b̃ ∈ ℚ[∂]·J}`, as a ℚ-basis of its degree-≤`degree` part.
pub fn ideal_restrict(
    c: &ConformalAlgebra,
    j: &[ConformalElement],
    degree: u32,
) -> Result<Vec<AlgebraElement>> {
    for x in j {
        c.check_member(x)?;
    }
    let top = j.iter().filter_map(ConformalElement::partial_degree).max().unwrap_or(0);
    // Higher ∂-powers sort first, so rows pivoting on a ∂⁰ key are ∂-free.
    let mut ech: Echelon<(Reverse<usize>, Basis)> = Echelon::new();
    for x in j {
        for s in 0..=top {
            let v = flatten(&x.partial(s)).into_iter().map(|((b, k), q)| ((Reverse(k), b), q)).collect();
            ech.insert(&v);
        }
    }
    let free = ech
        .rows()
        .filter(|((Reverse(k), _), _)| *k == 0)
        .map(|(_, row)| {
            let mut e = AlgebraElement::zero(c.shape());
            for ((_, b), q) in row {
                e.add_scaled(&AlgebraElement::basis(c.shape(), *b), q);
            }
            e
        })
        .filter(|e| e.degree() <= degree);
    Ok(basis_of(free))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    /// Least `k ≤ cap` with `I^k = 0`.
    pub b_side: Option<u32>,
    /// Least `k ≤ cap` with every `k`-fold product of `Ĩ`, any orders, zero.
    pub conformal_side: Option<u32>,
    /// The same with order-0 products only.
    pub conformal_order0: Option<u32>,
}

impl NilpotencyReport {
    pub fn agree(&self) -> bool {
        self.b_side.is_some() == self.conformal_side.is_some()
            && self.conformal_side.is_some() == self.conformal_order0.is_some()
    }
}

fn first_zero(mut layer: Vec<ConformalElement>, cap: u32, step: impl Fn(&[ConformalElement]) -> Result<Vec<ConformalElement>>) -> Result<Option<u32>> {
    for k in 1..=cap {
        if layer.is_empty() {
            return Ok(Some(k));
        }
        if k == cap {
            break;
        }
        layer = step(&layer)?;
    }
    Ok(None)
}

fn conformal_basis(elems: Vec<ConformalElement>) -> Vec<ConformalElement> {
    let mut ech = Echelon::new();
    elems
        .into_iter()
        .filter(|e| !e.is_zero() && ech.insert(&flatten(e)))
        .collect()
}

pub fn nilpotency_check(c: &ConformalAlgebra, pair: &IdealPair, cap: u32) -> Result<NilpotencyReport> {
    if cap < 1 {
        return Err(domain("nilpotency cap must be at least 1"));
    }
    let tilde = |v: &[AlgebraElement]| v.iter().map(ConformalElement::tilde).collect::<Vec<_>>();
    let b_side = first_zero(tilde(&pair.i), cap, |layer| {
        let mut out = Vec::new();
        for p in layer {
            let p0 = p.component(0);
            for g in &pair.i {
                out.push(p0.mul_unchecked(g));
            }
        }
        Ok(tilde(&basis_of(out)))
    })?;
    let products = |all_orders: bool| {
        move |layer: &[ConformalElement]| -> Result<Vec<ConformalElement>> {
            let mut out = Vec::new();
            for p in layer {
                for g in &pair.j {
                    let top = if all_orders { c.structural_bound(p, g)? } else { 0 };
                    for n in 0..=top {
                        out.push(c.nprod(p, n, g)?);
                    }
                }
            }
            Ok(conformal_basis(out))
        }
    };
    let conformal_side = first_zero(pair.j.clone(), cap, products(true))?;
    let conformal_order0 = first_zero(pair.j.clone(), cap, products(false))?;
    Ok(NilpotencyReport {
        b_side,
        conformal_side,
        conformal_order0,
    })
}
