use crate::algebra::rational::{factorial, int, sign};
use crate::conformal::{ConformalElement, NProduct};
use crate::error::{domain, Error, Result};
use crate::growth::{in_rational_span, span_rank};

/// A candidate conformal identity together with the outcome of checking it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCandidate {
    pub e: ConformalElement,
    pub certified: bool,
    /// Human-readable descriptions of every failed condition.
    pub failures: Vec<String>,
}

/// Checks `e ⓪ e = e`, `e ⓝ e = 0` for `1 ≤ n` up to the structural bound,
/// and `e ⓪ a = a` for every `a` in `span`.
pub fn is_conformal_identity<P: NProduct + ?Sized>(
    p: &P,
    e: &ConformalElement,
    span: &[ConformalElement],
) -> Result<IdentityCandidate> {
    if span.is_empty() {
        return Err(domain("identity check needs a nonempty span"));
    }
    let mut failures = Vec::new();
    if e.is_zero() {
        failures.push("candidate is zero (a torsion element)".to_string());
        return Ok(IdentityCandidate {
            e: e.clone(),
            certified: false,
            failures,
        });
    }
    let ee = p.nprod(e, 0, e)?;
    if ee != *e {
        failures.push(format!("e (0) e = {ee}"));
    }
    for n in 1..=p.algebra().structural_bound(e, e)? {
        let v = p.nprod(e, n, e)?;
        if !v.is_zero() {
            failures.push(format!("e ({n}) e = {v}"));
        }
    }
    for a in span {
        let v = p.nprod(e, 0, a)?;
        if v != *a {
            failures.push(format!("e (0) {a} = {v}"));
        }
    }
    Ok(IdentityCandidate {
        e: e.clone(),
        certified: failures.is_empty(),
        failures,
    })
}

/// `M = M₀ ⊕ M₁` for the operator `e ⓪ ·` on the ℚ(∂)-span of `span`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitalSplit {
    /// Spanning set of the kernel, `{a − e ⓪ a}`.
    pub m0: Vec<ConformalElement>,
    /// Spanning set of the fixed space, `{e ⓪ a}`.
    pub m1: Vec<ConformalElement>,
    pub rank: usize,
    pub rank_m0: usize,
    pub rank_m1: usize,
    pub idempotent: bool,
}

pub fn unital_split<P: NProduct + ?Sized>(
    p: &P,
    span: &[ConformalElement],
    e: &ConformalElement,
) -> Result<UnitalSplit> {
    let mut m0 = Vec::new();
    let mut m1 = Vec::new();
    let mut idempotent = true;
    for a in span {
        let ea = p.nprod(e, 0, a)?;
        if !in_rational_span(span, &ea) {
            return Err(Error::Precondition(format!(
                "span is not stable under e (0): e (0) {a} = {ea}"
            )));
        }
        if p.nprod(e, 0, &ea)? != ea {
            idempotent = false;
        }
        let rest = a - &ea;
        if !ea.is_zero() {
            m1.push(ea);
        }
        if !rest.is_zero() {
            m0.push(rest);
        }
    }
    let (rank_m0, rank_m1) = (span_rank(&m0), span_rank(&m1));
    Ok(UnitalSplit {
        rank: span_rank(span),
        rank_m0,
        rank_m1,
        m0,
        m1,
        idempotent,
    })
}

/// Components `(k, ã_k)` of `a = Σ ∂^k ã_k` relative to the identity `e`,
/// from `(−1)ⁿ n! ã_n = a ⓝ e`, highest `k` first.
pub fn extract_current_components<P: NProduct + ?Sized>(
    p: &P,
    a: &ConformalElement,
    e: &IdentityCandidate,
) -> Result<Vec<(u32, ConformalElement)>> {
    if !e.certified {
        return Err(Error::Precondition("identity candidate is not certified".into()));
    }
    let top = p.algebra().structural_bound(a, &e.e)?;
    let mut out = Vec::new();
    let mut rebuilt = ConformalElement::zero(a.shape());
    for n in (0..=top).rev() {
        let c = p.nprod(a, n, &e.e)?.scale(&(sign(n) / factorial(n)));
        if c.is_zero() {
            continue;
        }
        rebuilt.add_scaled(&c.partial(n as usize), &int(1));
        out.push((n, c));
    }
    if rebuilt != *a {
        return Err(Error::Precondition(format!(
            "algebra is not current with respect to {}: components rebuild {rebuilt}",
            e.e
        )));
    }
    Ok(out)
}
