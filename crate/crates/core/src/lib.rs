//! Exact computer algebra for associative conformal algebras.
//!
//! The crate builds current algebras `Cur B`, differential algebras
//! `Dif(B, δ)` and `Cend_n` over base algebras given by matrix and
//! polynomial blocks, computes their n-products exactly, and cross-checks
//! them against a realization by formal distributions over the localized
//! Ore extension `B[t, t⁻¹; δ]`.
//!
//! On top of that sit the structural procedures: conformal identities and
//! unital splitting, untwisting of inner derivations, the currentness test
//! for subalgebras, the ideal correspondence between `B` and `Dif B`, and
//! Gelfand–Kirillov growth profiles.
//!
//! All arithmetic is over ℚ; the only floating point value anywhere is the
//! fitted growth exponent.

pub mod algebra;
pub mod conformal;
pub mod constructions;
pub mod error;
pub mod growth;
pub mod linalg;
pub mod oracle;
pub mod sample;
pub mod structure;
pub mod text;

pub use algebra::{
    AlgebraElement, Basis, BaseAlgebra, Derivation, OreElement, OreRing, Polynomial, Rational, Shape,
};
pub use conformal::{
    check_axioms, locality_degree, AxiomReport, ConformalAlgebra, ConformalElement, Construction,
    LocalityCap, NProduct,
};
pub use constructions::{
    cend_generator, generate_closure, make_cend, make_current, make_differential, product_table,
    GeneratorSet, ProductTable,
};
pub use error::{Error, Result};
pub use text::{parse_algebra_element, parse_conformal_element, Scope};
