use super::identity::{is_conformal_identity, IdentityCandidate};
use crate::algebra::rational::{factorial, int};
use crate::algebra::{AlgebraElement, DerivationKind, Polynomial};
use crate::conformal::{ConformalAlgebra, ConformalElement};
use crate::error::{domain, Error, Result};
use crate::linalg::bareiss_determinant;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UntwistReport {
    pub r: AlgebraElement,
    /// Least `m` with `r^m = 0`.
    pub m: u32,
    /// `Σ_{k<m} (1/k!) ∂^k ((−r)^k)~`, realizing `Σ (t + r)ⁿ z^{−n−1}`;
    /// `t + r` is central because `bt − tb = δ(b) = rb − br`.
    pub e_prime: ConformalElement,
    /// Whether the basis built from `Σ (1/k!) ∂^k (r^k)~` (the sign of
    /// `t − r`) also has pure current products; it does only for `r = 0`.
    pub opposite_sign_current: bool,
    /// Pairs `(b, b̃′ = b̃ ⓪ e′)` for the spanning elements of `B`.
    pub basis: Vec<(AlgebraElement, ConformalElement)>,
    pub identity: IdentityCandidate,
    /// Whether `b̃₁′ ⓝ b̃₂′ = δ_{n,0} (b₁b₂)~′` for every basis pair and order.
    pub pure_current: bool,
    pub product_failures: Vec<String>,
    /// Whether `b̃ = Σ_k (1/k!) ∂^k (b r^k)~′` for every spanning `b`.
    pub inverse_ok: bool,
    /// Determinant of the transition matrix when `B` is finite-dimensional.
    pub determinant: Option<Polynomial>,
    /// Whether `(r̃ ⓪ e′) ⓪ e′ = r̃`; this holds exactly when `r² = 0`.
    pub r_double_product: bool,
}

impl UntwistReport {
    pub fn invertible(&self) -> bool {
        self.inverse_ok
            && self
                .determinant
                .as_ref()
                .is_none_or(|d| d.is_constant() && !d.is_zero())
    }

    pub fn passed(&self) -> bool {
        self.identity.certified && self.pure_current && self.invertible()
    }
}

/// `x ↦ Σ_{k<m} (1/k!) ∂^k (x s^k)~`.
fn prime(x: &AlgebraElement, s: &AlgebraElement, m: u32) -> ConformalElement {
    let mut out = ConformalElement::zero(x.shape());
    let mut xr = x.clone();
    for k in 0..m {
        let term = ConformalElement::tilde(&xr).partial(k as usize);
        out.add_scaled(&term, &(int(1) / factorial(k)));
        xr = xr.mul_unchecked(s);
    }
    out
}

/// Products `b̃₁′ ⓝ b̃₂′` that differ from `δ_{n,0} (b₁b₂)~′`.
fn current_failures(
    c: &ConformalAlgebra,
    basis: &[(AlgebraElement, ConformalElement)],
    s: &AlgebraElement,
    m: u32,
) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    for (b1, p1) in basis {
        for (b2, p2) in basis {
            let target = prime(&b1.mul_unchecked(b2), s, m);
            for n in 0..=c.structural_bound(p1, p2)? {
                let got = c.nprod(p1, n, p2)?;
                let ok = if n == 0 { got == target } else { got.is_zero() };
                if !ok {
                    failures.push(format!("({b1})' ({n}) ({b2})' = {got}"));
                }
            }
        }
    }
    Ok(failures)
}

/// Exhibits `Dif(A, ad r)` with `r` nilpotent as a current algebra:
/// builds `e′`, certifies it, and checks the new basis on the spanning
/// elements of degree at most `degree`.
pub fn untwist(c: &ConformalAlgebra, degree: u32) -> Result<UntwistReport> {
    let shape = c.shape();
    let r = match c.derivation().kind() {
        DerivationKind::Inner(r) => r.clone(),
        DerivationKind::Zero => AlgebraElement::zero(shape),
        _ => return Err(Error::Unsupported("untwisting needs an inner derivation".into())),
    };
    if c.is_current() && !r.is_zero() {
        return Err(domain("current algebra carries no derivation to untwist"));
    }
    if !c.base().is_unital() {
        return Err(Error::Precondition("untwisting needs a unital base algebra".into()));
    }
    let m = r
        .nilpotency_degree(c.cap())
        .ok_or_else(|| domain(format!("r = {r} is not nilpotent within cap {}", c.cap())))?;
    let one = AlgebraElement::one(shape);
    let neg = -&r;
    let e_prime = prime(&one, &neg, m);

    let span = c.base().spanning_up_to(degree);
    let tildes: Vec<ConformalElement> = span.iter().map(ConformalElement::tilde).collect();
    let identity = is_conformal_identity(c, &e_prime, &tildes)?;

    let mut basis = Vec::new();
    for (b, bt) in span.iter().zip(&tildes) {
        basis.push((b.clone(), c.nprod(bt, 0, &e_prime)?));
    }

    let product_failures = current_failures(c, &basis, &neg, m)?;
    let opposite = prime(&one, &r, m);
    let mut opposite_basis = Vec::new();
    for (b, bt) in span.iter().zip(&tildes) {
        opposite_basis.push((b.clone(), c.nprod(bt, 0, &opposite)?));
    }
    let opposite_sign_current = current_failures(c, &opposite_basis, &r, m)?.is_empty();

    let mut inverse_ok = true;
    for (b, bt) in span.iter().zip(&tildes) {
        let mut back = ConformalElement::zero(shape);
        let mut br = b.clone();
        for k in 0..m {
            let term = prime(&br, &neg, m).partial(k as usize);
            back.add_scaled(&term, &(int(1) / factorial(k)));
            br = br.mul_unchecked(&r);
        }
        inverse_ok &= back == *bt;
    }

    let monomial_basis = c.base().is_finite_dimensional() && !c.base().is_subalgebra();
    let determinant = monomial_basis.then(|| {
        let cols = c.base().spanning_up_to(degree);
        let rows = basis
            .iter()
            .map(|(_, p)| {
                cols.iter()
                    .map(|col| {
                        let key = *col.terms().keys().next().expect("basis monomial");
                        p.terms().get(&key).cloned().unwrap_or_else(Polynomial::zero)
                    })
                    .collect()
            })
            .collect();
        bareiss_determinant(rows)
    });

    let rt = ConformalElement::tilde(&r);
    let once = c.nprod(&rt, 0, &e_prime)?;
    let r_double_product = c.nprod(&once, 0, &e_prime)? == rt;

    Ok(UntwistReport {
        r,
        m,
        e_prime,
        basis,
        pure_current: product_failures.is_empty(),
        product_failures,
        identity,
        opposite_sign_current,
        inverse_ok,
        determinant,
        r_double_product,
    })
}
