//! Locally nilpotent derivations of base algebras.

use super::base::BaseAlgebra;
use super::element::{AlgebraElement, Basis, Shape};
use super::rational::int;
use crate::error::{domain, Error, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Default degree up to which derivation specs are validated.
pub const DEFAULT_CHECK_DEGREE: u32 = 8;
/// Default cap for nilpotency witnesses.
pub const DEFAULT_NILPOTENCY_CAP: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationKind {
    Zero,
    /// Formal d/dx, entrywise on polynomial blocks, zero on constant blocks.
    Ddx,
    /// Inner derivation `b ↦ rb − br`.
    Inner(AlgebraElement),
    /// Images of basis elements; polynomial basis elements missing from the
    /// table are reached through `e_ij x^k = (e_ij x^(k-1))·(e_jj x)`.
    Table(BTreeMap<Basis, AlgebraElement>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    kind: DerivationKind,
    shape: Arc<Shape>,
}

impl Derivation {
    pub fn zero(shape: &Arc<Shape>) -> Self {
        Self {
            kind: DerivationKind::Zero,
            shape: shape.clone(),
        }
    }

    pub fn ddx(shape: &Arc<Shape>) -> Self {
        Self {
            kind: DerivationKind::Ddx,
            shape: shape.clone(),
        }
    }

    /// `ad(r)`.
    pub fn inner(r: AlgebraElement) -> Self {
        Self {
            shape: r.shape().clone(),
            kind: DerivationKind::Inner(r),
        }
    }

    pub fn table(shape: &Arc<Shape>, images: BTreeMap<Basis, AlgebraElement>) -> Result<Self> {
        for (b, img) in &images {
            if !shape.is_valid(b) || img.shape() != shape {
                return Err(domain("derivation table entry does not belong to the algebra"));
            }
        }
        Ok(Self {
            kind: DerivationKind::Table(images),
            shape: shape.clone(),
        })
    }

    pub fn kind(&self) -> &DerivationKind {
        &self.kind
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn is_zero(&self) -> bool {
        match &self.kind {
            DerivationKind::Zero => true,
            DerivationKind::Inner(r) => r.is_zero(),
            DerivationKind::Table(t) => t.values().all(AlgebraElement::is_zero),
            DerivationKind::Ddx => self.shape.is_finite_dimensional(),
        }
    }

    /// The element `r` of an inner derivation.
    pub fn inner_element(&self) -> Option<&AlgebraElement> {
        match &self.kind {
            DerivationKind::Inner(r) => Some(r),
            _ => None,
        }
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        if x.shape() != &self.shape {
            return Err(domain("derivation and element belong to different algebras"));
        }
        match &self.kind {
            DerivationKind::Zero => Ok(AlgebraElement::zero(&self.shape)),
            DerivationKind::Inner(r) => r.commutator(x),
            DerivationKind::Ddx => {
                let mut out = AlgebraElement::zero(&self.shape);
                for (b, c) in x.terms() {
                    if b.deg > 0 {
                        out.add_term(Basis { deg: b.deg - 1, ..*b }, c * int(b.deg as i64));
                    }
                }
                Ok(out)
            }
            DerivationKind::Table(table) => {
                let mut out = AlgebraElement::zero(&self.shape);
                for (b, c) in x.terms() {
                    out.add_scaled(&self.table_basis(table, b)?, c);
                }
                Ok(out)
            }
        }
    }

    fn table_basis(&self, table: &BTreeMap<Basis, AlgebraElement>, b: &Basis) -> Result<AlgebraElement> {
        if let Some(img) = table.get(b) {
            return Ok(img.clone());
        }
        let poly_block = self.shape.blocks()[b.block as usize].polynomial;
        if poly_block && b.deg > 0 {
            let head = Basis { deg: b.deg - 1, ..*b };
            let gen = Basis {
                block: b.block,
                deg: 1,
                row: b.col,
                col: b.col,
            };
            if let Some(dgen) = table.get(&gen) {
                let head_el = AlgebraElement::basis(&self.shape, head);
                let gen_el = AlgebraElement::basis(&self.shape, gen);
                let dhead = self.table_basis(table, &head)?;
                return Ok(&dhead.mul_unchecked(&gen_el) + &head_el.mul_unchecked(dgen));
            }
        }
        Err(domain(format!(
            "table derivation is not defined on {}",
            b.label(&self.shape)
        )))
    }

    /// δ^k(x).
    pub fn power(&self, x: &AlgebraElement, k: u32) -> Result<AlgebraElement> {
        let mut acc = x.clone();
        for _ in 0..k {
            if acc.is_zero() {
                break;
            }
            acc = self.apply(&acc)?;
        }
        Ok(acc)
    }

    /// The iterates x, δ(x), δ²(x), … up to and excluding the first zero.
    pub fn orbit(&self, x: &AlgebraElement, cap: u32) -> Result<Vec<AlgebraElement>> {
        let mut out = Vec::new();
        let mut acc = x.clone();
        while !acc.is_zero() {
            if out.len() as u32 >= cap {
                return Err(Error::NotLocallyNilpotent {
                    witness: x.to_string(),
                    cap,
                });
            }
            let next = self.apply(&acc)?;
            out.push(acc);
            acc = next;
        }
        Ok(out)
    }

    /// Least `m ≤ cap` with δ^m(x) = 0.
    pub fn nilpotency_index(&self, x: &AlgebraElement, cap: u32) -> Result<u32> {
        if cap < 1 {
            return Err(domain("nilpotency cap must be at least 1"));
        }
        Ok(self.orbit(x, cap)?.len() as u32)
    }

    /// Load-time validation: δ maps `algebra` into itself, satisfies the
    /// Leibniz rule on spanning pairs, and is locally nilpotent, all
    /// checked up to `degree`.
    pub fn validate(&self, algebra: &BaseAlgebra, degree: u32, cap: u32) -> Result<()> {
        if algebra.shape() != &self.shape {
            return Err(domain("derivation and algebra have different shapes"));
        }
        let span = algebra.spanning_up_to(degree);
        let images = span
            .iter()
            .map(|s| self.apply(s))
            .collect::<Result<Vec<_>>>()?;
        for (s, img) in span.iter().zip(&images) {
            if !algebra.contains(img) {
                return Err(Error::Validation(format!(
                    "derivation does not preserve the algebra: δ({s}) = {img}"
                )));
            }
        }
        for (i, u) in span.iter().enumerate() {
            for (j, v) in span.iter().enumerate() {
                let lhs = self.apply(&u.mul_unchecked(v))?;
                let rhs = &images[i].mul_unchecked(v) + &u.mul_unchecked(&images[j]);
                if lhs != rhs {
                    return Err(Error::Validation(format!(
                        "Leibniz rule fails on ({u}, {v}): δ(uv) = {lhs}, δ(u)v + uδ(v) = {rhs}"
                    )));
                }
            }
        }
        for s in &span {
            self.nilpotency_index(s, cap)?;
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            DerivationKind::Zero => write!(f, "zero"),
            DerivationKind::Ddx => write!(f, "d/dx"),
            DerivationKind::Inner(r) => write!(f, "ad({r})"),
            DerivationKind::Table(t) => {
                let parts: Vec<String> = t
                    .iter()
                    .map(|(b, img)| format!("{} -> {img}", b.label(&self.shape)))
                    .collect();
                write!(f, "table{{{}}}", parts.join(", "))
            }
        }
    }
}
