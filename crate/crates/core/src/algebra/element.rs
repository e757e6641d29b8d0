//! Canonical bases and elements of the base associative algebras.
//!
//! Every base algebra handled here is (a subalgebra of) a finite direct sum
//! of blocks `End_n(ℚ)` or `End_n(ℚ[x])`. The canonical basis of a block is
//! `e_ij x^k`, and products of basis elements are either zero or again a
//! basis element, with degree additive in `k`.

use super::rational::{format_rational, is_negative, Rational};
use crate::error::{domain, Result};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

/// One block `End_size(ℚ)` (or `End_size(ℚ[x])` when `polynomial`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub size: u16,
    pub polynomial: bool,
}

/// The ambient algebra an element lives in: the list of its blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    blocks: Vec<Block>,
}

impl Shape {
    pub fn new(blocks: Vec<Block>) -> Arc<Self> {
        Arc::new(Self { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_finite_dimensional(&self) -> bool {
        self.blocks.iter().all(|b| !b.polynomial)
    }

    /// All basis indices of degree at most `degree`, in canonical order.
    pub fn basis_up_to(&self, degree: u32) -> Vec<Basis> {
        let mut out = Vec::new();
        for (s, b) in self.blocks.iter().enumerate() {
            let top = if b.polynomial { degree } else { 0 };
            for deg in 0..=top {
                for row in 0..b.size {
                    for col in 0..b.size {
                        out.push(Basis {
                            block: s as u16,
                            deg,
                            row,
                            col,
                        });
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_valid(&self, b: &Basis) -> bool {
        self.blocks.get(b.block as usize).is_some_and(|blk| {
            b.row < blk.size && b.col < blk.size && (blk.polynomial || b.deg == 0)
        })
    }
}

/// Basis index `e_{row,col} x^deg` of block `block` (0-based internally).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis {
    pub block: u16,
    pub deg: u32,
    pub row: u16,
    pub col: u16,
}

impl Basis {
    pub fn mul(&self, other: &Basis) -> Option<Basis> {
        (self.block == other.block && self.col == other.row).then(|| Basis {
            block: self.block,
            deg: self.deg + other.deg,
            row: self.row,
            col: other.col,
        })
    }

    /// Human-readable name relative to `shape`, e.g. `x^2*e12@1`.
    pub fn label(&self, shape: &Shape) -> String {
        let blk = shape.blocks[self.block as usize];
        let mut parts = Vec::new();
        match self.deg {
            0 => {}
            1 => parts.push("x".to_string()),
            d => parts.push(format!("x^{d}")),
        }
        if blk.size > 1 {
            parts.push(format!("e{}{}", self.row + 1, self.col + 1));
        }
        let mut s = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        };
        if shape.blocks.len() > 1 {
            s.push_str(&format!("@{}", self.block));
        }
        s
    }
}

/// A finite ℚ-combination of basis elements of a fixed ambient shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    shape: Arc<Shape>,
    terms: BTreeMap<Basis, Rational>,
}

impl AlgebraElement {
    pub fn zero(shape: &Arc<Shape>) -> Self {
        Self {
            shape: shape.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(shape: &Arc<Shape>, b: Basis) -> Self {
        Self::monomial(shape, b, Rational::one())
    }

    pub fn monomial(shape: &Arc<Shape>, b: Basis, c: Rational) -> Self {
        debug_assert!(shape.is_valid(&b));
        let mut e = Self::zero(shape);
        if !c.is_zero() {
            e.terms.insert(b, c);
        }
        e
    }

    /// Identity: the sum of `e_ii` over all blocks.
    pub fn one(shape: &Arc<Shape>) -> Self {
        let mut e = Self::zero(shape);
        for (s, blk) in shape.blocks.iter().enumerate() {
            for i in 0..blk.size {
                e.terms.insert(
                    Basis {
                        block: s as u16,
                        deg: 0,
                        row: i,
                        col: i,
                    },
                    Rational::one(),
                );
            }
        }
        e
    }

    /// `x` times the identity of every polynomial block.
    pub fn variable(shape: &Arc<Shape>) -> Self {
        let mut e = Self::zero(shape);
        for (s, blk) in shape.blocks.iter().enumerate() {
            if !blk.polynomial {
                continue;
            }
            for i in 0..blk.size {
                e.terms.insert(
                    Basis {
                        block: s as u16,
                        deg: 1,
                        row: i,
                        col: i,
                    },
                    Rational::one(),
                );
            }
        }
        e
    }

    pub fn from_terms(
        shape: &Arc<Shape>,
        terms: impl IntoIterator<Item = (Basis, Rational)>,
    ) -> Result<Self> {
        let mut e = Self::zero(shape);
        for (b, c) in terms {
            if !shape.is_valid(&b) {
                return Err(domain(format!("basis index {b:?} is not valid for this algebra")));
            }
            e.add_term(b, c);
        }
        Ok(e)
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn terms(&self) -> &BTreeMap<Basis, Rational> {
        &self.terms
    }

    pub fn coeff(&self, b: &Basis) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest basis degree in the support (0 for the zero element).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|b| b.deg).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, b: Basis, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// self += c·other
    pub fn add_scaled(&mut self, other: &AlgebraElement, c: &Rational) {
        debug_assert_eq!(self.shape, other.shape);
        if c.is_zero() {
            return;
        }
        for (b, v) in &other.terms {
            self.add_term(*b, v * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut e = Self::zero(&self.shape);
        e.add_scaled(self, c);
        e
    }

    pub fn same_shape(&self, other: &AlgebraElement) -> Result<()> {
        if Arc::ptr_eq(&self.shape, &other.shape) || self.shape == other.shape {
            Ok(())
        } else {
            Err(domain("elements belong to different algebras"))
        }
    }

    /// Structure-constant multiplication (`alg_mul`).
    pub fn mul(&self, other: &AlgebraElement) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &AlgebraElement) -> Self {
        let mut out = Self::zero(&self.shape);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(ab) = a.mul(b) {
                    out.add_term(ab, x * y);
                }
            }
        }
        out
    }

    /// Commutator `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &AlgebraElement) -> Result<Self> {
        Ok(&self.mul(other)? - &other.mul_unchecked(self))
    }

    /// `self^k`, with `self^0 = 1`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.shape);
        for _ in 0..k {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// Least `m ≤ cap` with `self^m = 0`.
    pub fn nilpotency_degree(&self, cap: u32) -> Option<u32> {
        if self.is_zero() {
            return Some(1);
        }
        let mut acc = self.clone();
        for m in 2..=cap {
            acc = acc.mul_unchecked(self);
            if acc.is_zero() {
                return Some(m);
            }
        }
        None
    }

    /// The part of the support of degree exactly `deg`, as a constant
    /// matrix element (degree 0).
    pub fn degree_slice(&self, deg: u32) -> Self {
        let mut out = Self::zero(&self.shape);
        for (b, c) in &self.terms {
            if b.deg == deg {
                out.terms.insert(Basis { deg: 0, ..*b }, c.clone());
            }
        }
        out
    }

    /// Multiplication by `x^k` on every polynomial block (zero elsewhere).
    pub fn times_x_power(&self, k: u32) -> Self {
        let mut out = Self::zero(&self.shape);
        for (b, c) in &self.terms {
            if self.shape.blocks[b.block as usize].polynomial {
                out.terms.insert(Basis { deg: b.deg + k, ..*b }, c.clone());
            } else if k == 0 {
                out.terms.insert(*b, c.clone());
            }
        }
        out
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&-Rational::one())
    }
}

/// Writes `Σ c·label` with signs folded, e.g. `x*e11 - 1/2*e22`.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a Rational)>,
) -> fmt::Result {
    let mut first = true;
    for (label, c) in terms {
        let neg = is_negative(c);
        let abs = if neg { -c } else { c.clone() };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        if abs.is_one() {
            write!(f, "{label}")?;
        } else if label == "1" {
            write!(f, "{}", format_rational(&abs))?;
        } else {
            write!(f, "{}*{label}", format_rational(&abs))?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(b, c)| (b.label(&self.shape), c)))
    }
}
