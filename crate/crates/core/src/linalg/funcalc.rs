use super::{hermitian_eig, ComplexMatrix};
use crate::error::Result;

/// `φ(A) = U diag(φ(λ_i)) U*` for Hermitian `A`.
///
/// The result is exactly Hermitian because it is assembled symmetrically.
pub fn apply_function_hermitian(a: &ComplexMatrix, phi: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(a)?;
    Ok(spec.reconstruct_with(phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::linalg::operator_norm;
    use num_complex::Complex64;

    #[test]
    fn identity_function_returns_input() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(0.5, -0.5),
                Complex64::new(0.5, 0.5),
                Complex64::new(-1.0, 0.0),
            ],
        )
        .unwrap();
        let b = apply_function_hermitian(&a, |s| s).unwrap();
        assert!(operator_norm(&(&a - &b)) < 1e-10);
    }

    #[test]
    fn diagonal_arithmetic() {
        let a = ComplexMatrix::from_diag(&[1.0, 0.5]);
        let b = apply_function_hermitian(&a, |s| s * (1.0 - s)).unwrap();
        assert_eq!(b, ComplexMatrix::from_diag(&[0.0, 0.25]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            apply_function_hermitian(&a, |s| s),
            Err(Error::NotHermitian { .. })
        ));
    }
}
