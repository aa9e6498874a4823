use serde::{Deserialize, Serialize};

use super::{svd, ComplexMatrix};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolarSide {
    /// `A = |A|·U` with `|A| = (AA*)^{1/2}`.
    Left,
    /// `A = U·|A|` with `|A| = (A*A)^{1/2}`.
    Right,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarDecomposition {
    pub side: PolarSide,
    /// Positive semidefinite factor.
    pub absolute: ComplexMatrix,
    /// Unitary factor. On a singular input this is one fixed unitary
    /// completion of the partial isometry in the polar decomposition.
    pub isometry: ComplexMatrix,
}

impl PolarDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        match self.side {
            PolarSide::Left => &self.absolute * &self.isometry,
            PolarSide::Right => &self.isometry * &self.absolute,
        }
    }
}

/// Polar decomposition of a square matrix, read off from the SVD
/// `A = W Σ V*`: the unitary factor is `W V*` and the positive factor is
/// `W Σ W*` (left) or `V Σ V*` (right).
///
/// Left singular vectors for zero singular values come from the SVD's
/// Gram–Schmidt completion over the standard basis, so the completion is
/// deterministic.
pub fn polar(a: &ComplexMatrix, side: PolarSide) -> Result<PolarDecomposition> {
    a.require_square()?;
    let r = svd(a);
    let isometry = r.left.matmul(&r.right.adjoint());
    let frame = match side {
        PolarSide::Left => &r.left,
        PolarSide::Right => &r.right,
    };
    let n = frame.rows();
    let mut absolute = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for (k, &s) in r.singular_values.iter().enumerate() {
                acc += frame[(i, k)] * frame[(j, k)].conj() * s;
            }
            absolute[(i, j)] = acc;
            absolute[(j, i)] = acc.conj();
        }
        absolute[(i, i)].im = 0.0;
    }
    Ok(PolarDecomposition {
        side,
        absolute,
        isometry,
    })
}
