//! Base associative algebras: matrix/polynomial blocks, direct sums, and
//! subalgebras given by spanning data.

use super::element::{AlgebraElement, Basis, Block, Shape};
use crate::error::{domain, Error, Result};
use crate::linalg::{Echelon, SparseVec};
use std::fmt;
use std::sync::Arc;

/// Spanning data of a subalgebra, interpreted degree by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraSpan {
    /// Explicit spanning elements (in the parent's coordinates).
    pub elements: Vec<AlgebraElement>,
    /// When set, every parent spanning element of degree ≥ this is included.
    pub monomials_from_degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    Scalar,
    Poly,
    Matrix(u16),
    MatrixPoly(u16),
    DirectSum(Vec<BaseAlgebra>),
    Subalgebra {
        parent: BaseAlgebra,
        span: SubalgebraSpan,
        unital: bool,
    },
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    kind: AlgebraKind,
    shape: Arc<Shape>,
}

/// A base algebra with a degree-graded canonical spanning set.
///
/// Cheap to clone; the description is shared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseAlgebra(Arc<Inner>);

fn block_algebra(kind: AlgebraKind, block: Block) -> BaseAlgebra {
    BaseAlgebra(Arc::new(Inner {
        kind,
        shape: Shape::new(vec![block]),
    }))
}

impl BaseAlgebra {
    pub fn scalar() -> Self {
        block_algebra(
            AlgebraKind::Scalar,
            Block {
                size: 1,
                polynomial: false,
            },
        )
    }

    pub fn poly() -> Self {
        block_algebra(
            AlgebraKind::Poly,
            Block {
                size: 1,
                polynomial: true,
            },
        )
    }

    pub fn matrix(n: u16) -> Result<Self> {
        if n == 0 {
            return Err(domain("matrix size must be at least 1"));
        }
        Ok(block_algebra(
            AlgebraKind::Matrix(n),
            Block {
                size: n,
                polynomial: false,
            },
        ))
    }

    pub fn matrix_poly(n: u16) -> Result<Self> {
        if n == 0 {
            return Err(domain("matrix size must be at least 1"));
        }
        Ok(block_algebra(
            AlgebraKind::MatrixPoly(n),
            Block {
                size: n,
                polynomial: true,
            },
        ))
    }

    /// Direct sum; nested sums are flattened so that summands are blocks.
    pub fn direct_sum(summands: Vec<BaseAlgebra>) -> Result<Self> {
        if summands.is_empty() {
            return Err(domain("direct sum needs at least one summand"));
        }
        let mut flat = Vec::new();
        for s in summands {
            match &s.0.kind {
                AlgebraKind::DirectSum(inner) => flat.extend(inner.iter().cloned()),
                AlgebraKind::Subalgebra { .. } => {
                    return Err(domain("direct sums of subalgebras are not supported"))
                }
                _ => flat.push(s),
            }
        }
        let blocks = flat.iter().flat_map(|s| s.shape().blocks().to_vec()).collect();
        Ok(BaseAlgebra(Arc::new(Inner {
            kind: AlgebraKind::DirectSum(flat),
            shape: Shape::new(blocks),
        })))
    }

    /// Subalgebra of `parent` spanned by `span`; closure under
    /// multiplication is checked on spanning elements up to `check_degree`.
    pub fn subalgebra(
        parent: BaseAlgebra,
        span: SubalgebraSpan,
        unital: bool,
        check_degree: u32,
    ) -> Result<Self> {
        for e in &span.elements {
            if e.shape() != parent.shape() {
                return Err(domain("subalgebra spanning element has the wrong shape"));
            }
            if !parent.contains(e) {
                return Err(Error::Validation(format!(
                    "subalgebra spanning element {e} is not in the parent algebra"
                )));
            }
        }
        let sub = BaseAlgebra(Arc::new(Inner {
            shape: parent.shape().clone(),
            kind: AlgebraKind::Subalgebra {
                parent,
                span,
                unital,
            },
        }));
        if unital {
            let one = AlgebraElement::one(sub.shape());
            if !sub.contains(&one) {
                return Err(Error::Validation(
                    "subalgebra declared unital but does not contain the identity".into(),
                ));
            }
        }
        sub.check_closure(check_degree)?;
        Ok(sub)
    }

    fn check_closure(&self, degree: u32) -> Result<()> {
        let span = self.spanning_up_to(degree);
        for u in &span {
            for v in &span {
                let uv = u.mul_unchecked(v);
                if !self.contains(&uv) {
                    return Err(Error::Validation(format!(
                        "subalgebra not closed under multiplication: ({u})·({v}) = {uv}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.0.kind
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.0.shape
    }

    pub fn is_subalgebra(&self) -> bool {
        matches!(self.0.kind, AlgebraKind::Subalgebra { .. })
    }

    pub fn is_finite_dimensional(&self) -> bool {
        match &self.0.kind {
            AlgebraKind::Subalgebra { span, .. } => {
                span.monomials_from_degree.is_none() || self.shape().is_finite_dimensional()
            }
            _ => self.shape().is_finite_dimensional(),
        }
    }

    pub fn is_unital(&self) -> bool {
        match &self.0.kind {
            AlgebraKind::Subalgebra { unital, .. } => *unital,
            _ => true,
        }
    }

    pub fn one(&self) -> Option<AlgebraElement> {
        self.is_unital().then(|| AlgebraElement::one(self.shape()))
    }

    pub fn element(&self, b: Basis) -> AlgebraElement {
        AlgebraElement::basis(self.shape(), b)
    }

    /// A ℚ-basis of the degree-≤`degree` part, in canonical order.
    /// For block algebras and direct sums these are the basis monomials.
    pub fn spanning_up_to(&self, degree: u32) -> Vec<AlgebraElement> {
        match &self.0.kind {
            AlgebraKind::Subalgebra { parent, span, .. } => {
                let mut candidates: Vec<AlgebraElement> = span
                    .elements
                    .iter()
                    .filter(|e| e.degree() <= degree)
                    .cloned()
                    .collect();
                if let Some(from) = span.monomials_from_degree {
                    candidates.extend(
                        parent
                            .spanning_up_to(degree)
                            .into_iter()
                            .filter(|e| e.terms().keys().all(|b| b.deg >= from)),
                    );
                }
                let mut ech = Echelon::new();
                candidates
                    .into_iter()
                    .filter(|e| ech.insert(&to_vec(e)))
                    .collect()
            }
            _ => self
                .shape()
                .basis_up_to(degree)
                .into_iter()
                .map(|b| self.element(b))
                .collect(),
        }
    }

    /// Membership, decided by a linear solve against the spanning set.
    pub fn contains(&self, x: &AlgebraElement) -> bool {
        if x.shape() != self.shape() {
            return false;
        }
        match &self.0.kind {
            AlgebraKind::Subalgebra { .. } => span_contains(&self.spanning_up_to(x.degree()), x),
            _ => x.terms().keys().all(|b| self.shape().is_valid(b)),
        }
    }

    /// The ambient (non-subalgebra) algebra.
    pub fn ambient(&self) -> &BaseAlgebra {
        match &self.0.kind {
            AlgebraKind::Subalgebra { parent, .. } => parent.ambient(),
            _ => self,
        }
    }
}

pub(crate) fn to_vec(e: &AlgebraElement) -> SparseVec<Basis> {
    e.terms().clone()
}

pub(crate) fn span_contains(span: &[AlgebraElement], x: &AlgebraElement) -> bool {
    let mut ech = Echelon::new();
    for s in span {
        ech.insert(&to_vec(s));
    }
    ech.contains(&to_vec(x))
}

impl fmt::Display for BaseAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            AlgebraKind::Scalar => write!(f, "scalar"),
            AlgebraKind::Poly => write!(f, "poly"),
            AlgebraKind::Matrix(n) => write!(f, "matrix({n})"),
            AlgebraKind::MatrixPoly(n) => write!(f, "matrix_poly({n})"),
            AlgebraKind::DirectSum(s) => {
                let parts: Vec<String> = s.iter().map(ToString::to_string).collect();
                write!(f, "direct_sum({})", parts.join(", "))
            }
            AlgebraKind::Subalgebra { parent, .. } => write!(f, "subalgebra({parent})"),
        }
    }
}
