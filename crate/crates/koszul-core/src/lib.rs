//! Exact symbolic calculus for Z/2-graded commutative polynomial algebras on
//! supermanifold coordinate charts.
//!
//! The crate provides:
//!
//! * graded-commutative polynomial arithmetic with exact rational coefficients,
//!   Koszul sign normalization, left partial derivatives, and parity-checked
//!   substitution ([`Poly`], [`Monomial`]);
//! * coordinate charts for a base manifold and its derived total spaces
//!   (cotangent, parity-reversed cotangent and tangent, vector bundles) with
//!   conjugate-pair structure, bi-weights, and the fiber/momentum exchange
//!   relabeling between a bundle's cotangent and its dual's ([`Space`]);
//! * canonical even and odd brackets, vector fields, Hamiltonian lifts, the
//!   de Rham field, and interior products ([`bracket`], [`field`]);
//! * higher derived bracket families from master Hamiltonians and homological
//!   fields, structure-constant extraction and encoding, generalized Jacobi
//!   residuals, and algebroid anchors/brackets ([`homotopy`]);
//! * the odd anchor map into the cotangent of the parity-reversed tangent
//!   space, higher Koszul brackets on forms, the Lichnerowicz differential,
//!   and the raising-indices map ([`koszul`]);
//! * the gradient argument-shift construction of new master Hamiltonians and
//!   the quasi-triangular bialgebroid builder ([`shift`]).
//!
//! All values are immutable after construction and all operations are pure
//! functions; everything is safe to share across threads. Coefficients are
//! arbitrary-precision rationals; there is no floating point anywhere and all
//! identities are checked by exact equality.

pub mod bracket;
pub mod conventions;
pub mod error;
pub mod field;
pub mod homotopy;
pub mod koszul;
pub mod monomial;
pub mod parity;
pub mod poly;
pub mod scalar;
pub mod shift;
pub mod space;

pub use bracket::{hamiltonian_field, odd_master, poisson, schouten};
pub use conventions::SignConventions;
pub use error::{Error, Result};
pub use field::{
    commutator, de_rham, de_rham_with, interior, interior_with, linear_hamiltonian, VectorField,
};
pub use homotopy::{
    encode_structure, extract_structure, generalized_jacobi_residual, higher_derived,
    HomotopyStructure, Section,
};
pub use koszul::{alpha, higher_koszul, lichnerowicz, raise_indices};
pub use monomial::Monomial;
pub use parity::Parity;
pub use poly::{ParityReport, Poly, WeightReport};
pub use scalar::{q, qi, Coeff};
pub use shift::{build_coboundary, shift, CoboundaryBuild, RMatrixClass};
pub use space::{Pair, PairKind, Provenance, Role, Space, SpaceRef, VarId, Variable};
