use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{jacobi_rotation, ComplexMatrix, JACOBI_TOL, MAX_SWEEPS};
use crate::error::{Error, Result};

/// Hermitian eigendecomposition `A = U diag(λ) U*`, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in eigenvalue order.
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    /// `U diag(λ) U*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    /// `U diag(φ(λ)) U*`, symmetrised so the result is exactly Hermitian.
    pub fn reconstruct_with(&self, phi: impl Fn(f64) -> f64) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        let values: Vec<f64> = self.eigenvalues.iter().map(|&l| phi(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, &v) in values.iter().enumerate() {
                    acc += u[(i, k)] * u[(j, k)].conj() * v;
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
        }
        out
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// The input must satisfy `‖A − A*‖ ≤ 1e-9·max(1, ‖A‖)`; it is symmetrised
/// before the sweeps start.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<SpectralDecomposition> {
    hermitian_eig_with(a, JACOBI_TOL)
}

/// [`hermitian_eig`] with an explicit relative stopping level for the
/// off-diagonal mass.
pub fn hermitian_eig_with(a: &ComplexMatrix, tol: f64) -> Result<SpectralDecomposition> {
    let n = a.require_square()?;
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    check_hermitian(a)?;

    let mut m = a.hermitian_part()?;
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal(&m) <= tol * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let b = m[(p, q)];
                    if b.norm() <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let (c, s, phase) = jacobi_rotation(m[(p, p)].re, b, m[(q, q)].re);
                    rotate(&mut m, &mut v, p, q, c, s, phase);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    Ok(SpectralDecomposition {
        eigenvalues: order.iter().map(|&i| diag[i]).collect(),
        eigenvectors: v.select_columns(&order),
    })
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    let defect = a.hermitian_defect();
    if defect == 0.0 {
        return Ok(());
    }
    // Frobenius bounds the operator norm from above, so only borderline
    // cases need the exact norms.
    if defect <= 1e-9 * a.frobenius_norm().max(1.0) / (a.rows() as f64).sqrt() {
        return Ok(());
    }
    let residual = super::operator_norm(&(a - &a.adjoint()));
    let bound = 1e-9 * super::operator_norm(a).max(1.0);
    if residual <= bound {
        Ok(())
    } else {
        Err(Error::NotHermitian { residual })
    }
}

fn off_diagonal(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// `M ← G* M G`, `V ← V G` for the rotation acting on indices `p`, `q`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let n = m.rows();
    // columns: M G
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c - mkq * phase * s;
        m[(k, q)] = mkp * s + mkq * phase * c;
    }
    // rows: G* (M G)
    let phase_c = phase.conj();
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c - mqk * phase_c * s;
        m[(q, k)] = mpk * s + mqk * phase_c * c;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * phase * s;
        v[(k, q)] = vkp * s + vkq * phase * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::operator_norm;

    fn hermitian_from(seed: u64, n: usize) -> ComplexMatrix {
        // small LCG keeps this test independent of the harness generators
        let mut state = seed;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let g = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
        g.hermitian_part().unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let spec = hermitian_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(spec.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let spec = hermitian_eig(&ComplexMatrix::from_diag(&[2.0, -1.0])).unwrap();
        assert_eq!(spec.eigenvalues, vec![-1.0, 2.0]);
        assert_eq!(spec.eigenvectors[(1, 0)].norm(), 1.0);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        for seed in 0..20 {
            let a = hermitian_from(seed, 6);
            let spec = hermitian_eig(&a).unwrap();
            let scale = operator_norm(&a).max(1.0);
            let residual = operator_norm(&(&a - &spec.reconstruct()));
            assert!(residual <= 1e-10 * scale, "residual {residual}");
            let u = &spec.eigenvectors;
            let gram = &u.adjoint_mul(u) - &ComplexMatrix::identity(6);
            assert!(operator_norm(&gram) <= 1e-10);
            assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn complex_two_by_two_closed_form() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let a = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        let spec = hermitian_eig(&a).unwrap();
        assert!((spec.eigenvalues[0]).abs() < 1e-15);
        assert!((spec.eigenvalues[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect), Err(Error::NotSquare { .. })));
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn deterministic() {
        let a = hermitian_from(99, 5);
        assert_eq!(hermitian_eig(&a).unwrap(), hermitian_eig(&a).unwrap());
    }
}
