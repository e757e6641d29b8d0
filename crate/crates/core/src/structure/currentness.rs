use super::identity::is_conformal_identity;
use crate::algebra::base::to_vec;
use crate::algebra::rational::factorial;
use crate::algebra::{AlgebraElement, BaseAlgebra, Basis};
use crate::conformal::{ConformalAlgebra, ConformalElement};
use crate::error::{domain, Error, Result};
use crate::linalg::{Echelon, SparseVec};
use crate::sample::Sampler;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurrentnessVerdict {
    /// `ad a′ = ad a` on the tested part of `A′`, with `a′ ∈ A′`.
    Current { witness: AlgebraElement },
    /// No `a′` of degree at most `degree` works.
    NonCurrentUpTo { degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentnessReport {
    pub verdict: CurrentnessVerdict,
    pub degree: u32,
    /// Number of spanning elements of `A′` on which the operators are compared.
    /// The operator equality is tested on `A′`, not on an ambient algebra.
    pub tested_on: usize,
}

impl CurrentnessReport {
    pub fn is_current(&self) -> bool {
        matches!(self.verdict, CurrentnessVerdict::Current { .. })
    }
}

/// Semi-decides whether `Dif(A′, ad a)` is current: solves
/// `[a′, s] = [a, s]` for all spanning `s` of `A′` of degree ≤ `degree`,
/// with `a′` ranging over the same slice of `A′`.
pub fn is_current(
    aprime: &BaseAlgebra,
    a: &AlgebraElement,
    degree: u32,
    cap: u32,
) -> Result<CurrentnessReport> {
    if a.shape() != aprime.shape() {
        return Err(domain("element and subalgebra live in different algebras"));
    }
    if a.nilpotency_degree(cap).is_none() {
        return Err(domain(format!("{a} is not nilpotent within cap {cap}")));
    }
    let span = aprime.spanning_up_to(degree);
    let report = |verdict| CurrentnessReport {
        verdict,
        degree,
        tested_on: span.len(),
    };
    let mut images = Vec::with_capacity(span.len());
    for s in &span {
        let img = a.commutator(s)?;
        if !aprime.contains(&img) {
            return Err(domain(format!(
                "subalgebra is not ad({a})-stable: [{a}, {s}] = {img}"
            )));
        }
        images.push(img);
    }
    if aprime.contains(a) {
        return Ok(report(CurrentnessVerdict::Current { witness: a.clone() }));
    }
    let stack = |f: &dyn Fn(&AlgebraElement) -> AlgebraElement| -> SparseVec<(usize, Basis)> {
        let mut v = SparseVec::new();
        for (i, s) in span.iter().enumerate() {
            for (b, c) in to_vec(&f(s)) {
                v.insert((i, b), c);
            }
        }
        v
    };
    let mut ech = Echelon::new();
    for u in &span {
        ech.insert(&stack(&|s| &u.mul_unchecked(s) - &s.mul_unchecked(u)));
    }
    let target = stack(&|s| &a.mul_unchecked(s) - &s.mul_unchecked(a));
    Ok(report(match ech.solve(&target) {
        Some(coeffs) => {
            let mut w = AlgebraElement::zero(a.shape());
            for (i, c) in coeffs {
                w.add_scaled(&span[i], &c);
            }
            CurrentnessVerdict::Current { witness: w }
        }
        None => CurrentnessVerdict::NonCurrentUpTo { degree },
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualReport {
    /// Components `e_j` of `ē = Σ ∂^j ẽ_j`.
    pub components: Vec<AlgebraElement>,
    /// Orders `j ≥ 1` where `j!·e_j ≠ e₁^j`.
    pub power_failures: Vec<u32>,
    /// Elements `b₀` where the `∂⁰` part of `ē ⓵ b̄` is not `−[e₁, b₀]`.
    pub bracket_failures: Vec<AlgebraElement>,
    pub bracket_checks: usize,
}

impl DualReport {
    pub fn passed(&self) -> bool {
        self.power_failures.is_empty() && self.bracket_failures.is_empty()
    }
}

/// Consistency of an alternative identity `ē` of a current algebra with the
/// canonical one: `j!·e_j = e₁^j`, and for `b̄ = b̃₀ ⓪ ē` the `∂⁰`-coefficient
/// of `ē ⓵ b̄` is `−[e₁, b₀]`.
pub fn dual_identity_consistency(
    c: &ConformalAlgebra,
    ebar: &ConformalElement,
    degree: u32,
    samples: usize,
    seed: u64,
) -> Result<DualReport> {
    if !c.is_current() {
        return Err(Error::Precondition("dual identity check needs a current algebra".into()));
    }
    let span = c.base().spanning_up_to(degree);
    let tildes: Vec<_> = span.iter().map(ConformalElement::tilde).collect();
    let cand = is_conformal_identity(c, ebar, &tildes)?;
    if !cand.certified {
        return Err(Error::Precondition(format!(
            "{ebar} is not a conformal identity: {}",
            cand.failures.join("; ")
        )));
    }
    let components = ebar.components();
    let zero = AlgebraElement::zero(c.shape());
    let e1 = components.get(1).cloned().unwrap_or_else(|| zero.clone());
    let mut power_failures = Vec::new();
    for j in 1..=components.len() as u32 {
        let ej = components.get(j as usize).unwrap_or(&zero);
        if ej.scale(&factorial(j)) != e1.pow(j) {
            power_failures.push(j);
        }
    }
    let mut probes = span.clone();
    let mut rng = Sampler::new(seed);
    probes.extend((0..samples).map(|_| rng.algebra_element(&span)));
    let mut bracket_failures = Vec::new();
    for b0 in &probes {
        let bbar = c.nprod(&ConformalElement::tilde(b0), 0, ebar)?;
        let got = c.nprod(ebar, 1, &bbar)?.component(0);
        let want = &b0.mul_unchecked(&e1) - &e1.mul_unchecked(b0);
        if got != want {
            bracket_failures.push(b0.clone());
        }
    }
    Ok(DualReport {
        components,
        power_failures,
        bracket_failures,
        bracket_checks: probes.len(),
    })
}
