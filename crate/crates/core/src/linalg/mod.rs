//! Dense complex-matrix kernels.
//!
//! Everything here works on small dense matrices (the intended range is
//! `n ≤ 16`, comfortably usable up to `64`). The eigensolver is a cyclic
//! complex Jacobi method; the SVD is the one-sided (Hestenes) variant of the
//! same rotation, which keeps small singular values accurate relative to
//! their size. Polar decompositions and Hermitian functional calculus are
//! built on those two.

mod eig;
mod funcalc;
mod matrix;
mod polar;
mod solve;
mod svd;

pub use eig::{hermitian_eig, hermitian_eig_with, SpectralDecomposition};
pub use funcalc::apply_function_hermitian;
pub use matrix::ComplexMatrix;
pub use polar::{polar, PolarDecomposition, PolarSide};
pub use solve::solve;
pub use svd::{operator_norm, svd, svd_with, trace_norm, SVDResult};

/// Relative off-diagonal level at which Jacobi sweeps stop.
pub const JACOBI_TOL: f64 = 4.0 * f64::EPSILON;

/// Upper bound on Jacobi sweeps; convergence is quadratic so this is never
/// reached on finite input of the supported sizes.
pub(crate) const MAX_SWEEPS: usize = 80;

/// Smallest eigenvalue of the Hermitian part `(A + A*)/2`.
pub fn lambda_min_hermitian_part(a: &ComplexMatrix) -> crate::Result<f64> {
    let h = a.hermitian_part()?;
    let spec = hermitian_eig(&h)?;
    Ok(spec.eigenvalues[0])
}

/// Rotation that zeroes the off-diagonal entry of the 2×2 Hermitian matrix
/// `[[a, b], [conj(b), d]]`.
///
/// Returns `(c, s, phase)` describing `G = [[c, s], [-s·phase, c·phase]]`
/// with `phase = e^{-i arg b}`; `G* M G` is diagonal.
pub(crate) fn jacobi_rotation(a: f64, b: num_complex::Complex64, d: f64) -> (f64, f64, num_complex::Complex64) {
    let r = b.norm();
    let phase = if r > 0.0 {
        (b / r).conj()
    } else {
        num_complex::Complex64::new(1.0, 0.0)
    };
    let tau = (d - a) / (2.0 * r);
    let t = if tau.is_finite() {
        let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
        sign / (tau.abs() + (1.0 + tau * tau).sqrt())
    } else {
        0.0
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    (c, t * c, phase)
}
