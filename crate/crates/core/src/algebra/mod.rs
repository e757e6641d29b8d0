//! Exact scalars, base algebras with derivations, and the Ore extension
//! used as the coefficient ring.

pub mod base;
pub mod derivation;
pub mod element;
pub mod kernel;
pub mod ore;
pub mod poly;
pub mod rational;

pub use base::{AlgebraKind, BaseAlgebra, SubalgebraSpan};
pub use derivation::{Derivation, DerivationKind, DEFAULT_CHECK_DEGREE, DEFAULT_NILPOTENCY_CAP};
pub use element::{AlgebraElement, Basis, Block, Shape};
pub use kernel::{derivation_restricts, kernel_decompose, kernel_reconstruct, RestrictionReport};
pub use ore::{CoefficientRing, OreElement, OreRing};
pub use poly::Polynomial;
pub use rational::Rational;
