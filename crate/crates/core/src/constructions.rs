//! Builders for `Cur B`, `Dif(B, δ)` and `Cend_n`, product tables, and the
//! generated closure `C_r` used by the growth profiler.

use crate::algebra::{AlgebraElement, BaseAlgebra, Basis, Derivation, Shape, DEFAULT_NILPOTENCY_CAP};
use crate::conformal::{locality_degree, ConformalAlgebra, ConformalElement, Construction, NProduct};
use crate::error::{domain, Error, Result};
use crate::linalg::{Echelon, SparseVec};
use std::collections::BTreeMap;
use std::sync::Arc;

pub fn make_current(base: &BaseAlgebra) -> ConformalAlgebra {
    let zero = Derivation::zero(base.shape());
    ConformalAlgebra::from_parts(base.clone(), zero, Construction::Current)
}

/// `Dif(B, δ)`, after checking that `δ` is a locally nilpotent derivation of
/// `B` up to `check_degree`.
pub fn make_differential(
    base: &BaseAlgebra,
    d: &Derivation,
    check_degree: u32,
) -> Result<ConformalAlgebra> {
    if d.shape() != base.shape() {
        return Err(domain("derivation does not act on this base algebra"));
    }
    d.validate(base, check_degree, DEFAULT_NILPOTENCY_CAP)?;
    Ok(ConformalAlgebra::from_parts(
        base.clone(),
        d.clone(),
        Construction::Differential,
    ))
}

/// `Cend_n = Dif(M_n(ℚ[x]), d/dx)`.
pub fn make_cend(n: u16) -> Result<ConformalAlgebra> {
    if n < 1 {
        return Err(domain("Cend_n needs n >= 1"));
    }
    let base = BaseAlgebra::matrix_poly(n)?;
    let d = Derivation::ddx(base.shape());
    Ok(ConformalAlgebra::from_parts(base, d, Construction::Cend(n)))
}

/// The named generators of `Cend_n`: `L{k}` is `(x^k·1)~` and, for `n > 1`,
/// `L{k}_{ij}` is `(x^k e_ij)~` with 1-based `i, j`.
pub fn cend_generator(c: &ConformalAlgebra, name: &str) -> Result<ConformalElement> {
    let Construction::Cend(n) = c.construction() else {
        return Err(domain("named L generators exist only in Cend_n"));
    };
    cend_base(n, c.shape(), name)
        .map(|b| ConformalElement::tilde(&b))
        .ok_or_else(|| domain(format!("not a Cend_{n} generator name: {name}")))
}

/// The base element behind a Cend_n generator name, if `name` is one.
pub(crate) fn cend_base(n: u16, shape: &Arc<Shape>, name: &str) -> Option<AlgebraElement> {
    let rest = name.strip_prefix('L')?;
    let (deg, unit) = match rest.split_once('_') {
        Some((k, ij)) => (k, Some(ij)),
        None => (rest, None),
    };
    if deg.is_empty() || !deg.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let k: u32 = deg.parse().ok()?;
    match unit {
        None => Some(AlgebraElement::one(shape).times_x_power(k)),
        Some(ij) => {
            let digits: Vec<u16> = ij
                .chars()
                .map(|ch| ch.to_digit(10).map(|v| v as u16))
                .collect::<Option<_>>()?;
            let [i, j] = digits[..] else { return None };
            if i < 1 || j < 1 || i > n || j > n {
                return None;
            }
            let b = Basis {
                block: 0,
                deg: k,
                row: i - 1,
                col: j - 1,
            };
            Some(AlgebraElement::basis(shape, b))
        }
    }
}

/// Named conformal elements of one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    names: Vec<String>,
    elements: Vec<ConformalElement>,
}

impl GeneratorSet {
    pub fn new(named: Vec<(String, ConformalElement)>) -> Result<Self> {
        if named.is_empty() {
            return Err(domain("generator set must be nonempty"));
        }
        let shape = named[0].1.shape().clone();
        if named.iter().any(|(_, e)| *e.shape() != shape) {
            return Err(domain("generators belong to different algebras"));
        }
        let (names, elements) = named.into_iter().unzip();
        Ok(Self { names, elements })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elements(&self) -> &[ConformalElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Nonzero products `g_i ⓝ g_j`, keyed by `(i, n, j)` generator indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTable {
    pub names: Vec<String>,
    pub entries: BTreeMap<(usize, u32, usize), ConformalElement>,
}

impl ProductTable {
    pub fn get(&self, left: &str, n: u32, right: &str) -> Option<&ConformalElement> {
        let i = self.names.iter().position(|s| s == left)?;
        let j = self.names.iter().position(|s| s == right)?;
        self.entries.get(&(i, n, j))
    }
}

fn pair_error(e: Error, left: &str, right: &str) -> Error {
    match e {
        Error::IndeterminateLocality { cap, bound } => Error::IndeterminatePair {
            left: left.to_string(),
            right: right.to_string(),
            cap,
            bound,
        },
        other => other,
    }
}

pub fn product_table<P: NProduct + ?Sized>(
    p: &P,
    gens: &GeneratorSet,
    cap: u32,
) -> Result<ProductTable> {
    let mut entries = BTreeMap::new();
    for (i, a) in gens.elements.iter().enumerate() {
        for (j, b) in gens.elements.iter().enumerate() {
            let loc = locality_degree(p, a, b, cap)
                .map_err(|e| pair_error(e, &gens.names[i], &gens.names[j]))?;
            let Some(top) = loc.degree else { continue };
            for n in 0..=top {
                let c = p.nprod(a, n, b)?;
                if !c.is_zero() {
                    entries.insert((i, n, j), c);
                }
            }
        }
    }
    Ok(ProductTable {
        names: gens.names.clone(),
        entries,
    })
}

pub(crate) fn flatten(e: &ConformalElement) -> SparseVec<(Basis, usize)> {
    let mut v = SparseVec::new();
    for (b, p) in e.terms() {
        for (k, c) in p.coeffs().iter().enumerate() {
            if !num_traits::Zero::is_zero(c) {
                v.insert((*b, k), c.clone());
            }
        }
    }
    v
}

/// Left-normed closure: `layers[0]` are the generators and `layers[r]` holds
/// the products `p ⓝ g` of elements `p` of `layers[r-1]` with generators `g`
/// over all orders, keeping only those ℚ-independent of everything found so
/// far. The ℚ[∂]-span of `layers[..r]` is `C_r`.
pub fn closure_layers<P: NProduct + ?Sized>(
    p: &P,
    gens: &GeneratorSet,
    rounds: u32,
    cap: u32,
) -> Result<Vec<Vec<ConformalElement>>> {
    if rounds < 1 {
        return Err(domain("closure needs at least one round"));
    }
    let mut seen: Echelon<(Basis, usize)> = Echelon::new();
    let mut first = Vec::new();
    for g in &gens.elements {
        if seen.insert(&flatten(g)) {
            first.push(g.clone());
        }
    }
    let mut layers = vec![first];
    for _ in 1..rounds {
        let mut next = Vec::new();
        for a in layers.last().expect("at least one layer") {
            for (j, g) in gens.elements.iter().enumerate() {
                let loc = locality_degree(p, a, g, cap)
                    .map_err(|e| pair_error(e, &a.to_string(), &gens.names[j]))?;
                let Some(top) = loc.degree else { continue };
                for n in 0..=top {
                    let c = p.nprod(a, n, g)?;
                    if !c.is_zero() && seen.insert(&flatten(&c)) {
                        next.push(c);
                    }
                }
            }
        }
        layers.push(next);
    }
    let all: Vec<&ConformalElement> = layers.iter().flatten().collect();
    let alg = p.algebra();
    for a in &all {
        for b in &all {
            let bound = alg.structural_bound(a, b)?;
            if bound > cap {
                return Err(Error::IndeterminatePair {
                    left: a.to_string(),
                    right: b.to_string(),
                    cap,
                    bound,
                });
            }
        }
    }
    Ok(layers)
}

/// A spanning set of `C_rounds` over ℚ[∂].
pub fn generate_closure<P: NProduct + ?Sized>(
    p: &P,
    gens: &GeneratorSet,
    rounds: u32,
    cap: u32,
) -> Result<Vec<ConformalElement>> {
    Ok(closure_layers(p, gens, rounds, cap)?.into_iter().flatten().collect())
}
