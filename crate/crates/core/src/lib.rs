//! Operator classification in finite-dimensional C*-algebras.
//!
//! The ambient algebra is a finite direct sum of full matrix algebras
//! `M_{n_1} ⊕ … ⊕ M_{n_k}`. Its dual is modelled on the same block
//! structure through the trace pairing, with the dual norm given by the sum
//! of block trace norms. On top of that model the crate provides
//!
//! * dense complex kernels ([`linalg`]): Jacobi eigensolver, SVD, polar
//!   decomposition and Hermitian functional calculus;
//! * the algebra and its dual ([`algebra`]), including an exact description
//!   of the norming set `S_x = { f : f(x) = ‖f‖ = 1 }`;
//! * dual-route classifiers ([`classify`]) that decide partial isometries,
//!   unitaries, extreme points, invertibles, self-adjoint, positive and
//!   projection elements both algebraically and from norm/dual data alone,
//!   together with checkable witnesses and certificates;
//! * seeded generators and property suites ([`harness`]);
//! * JSON documents used by the command line tool ([`document`]).

pub mod algebra;
pub mod classify;
pub mod document;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod report;
pub mod tolerance;

pub use algebra::{AlgebraShape, Element, Functional, NormingSetDescription};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use tolerance::Tolerances;

pub use num_complex::Complex64;
