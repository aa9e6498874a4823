//! The algebra `⊕ M_{n_i}`, its dual under the trace pairing, and norming
//! sets of norm-one elements.
//!
//! In finite dimensions the dual and the predual coincide, so the norming
//! set `S_x ⊂ A*` of a C*-algebra element and `S^x ⊂ M_*` of a von Neumann
//! algebra element are the same object here; both are handled by
//! [`norming_set`]. Likewise the weak*-dense subalgebra picture for
//! invertibility reduces to the algebra itself.

mod element;
mod functional;
mod norming;
mod shape;

pub use element::{element_norm, Element};
pub(crate) use functional::trace_of_product;
pub use functional::{evaluate, numeric_span_rank, Functional};
pub use norming::{
    matrix_unit_states, min_real_over_norming, norming_set, sample_norming_functional, unitary_residual,
    BorderlineSpectrum, NormingBlock, NormingMinimum, NormingSetDescription,
};
pub use shape::AlgebraShape;
