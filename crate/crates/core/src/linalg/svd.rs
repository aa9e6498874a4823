use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{jacobi_rotation, ComplexMatrix, JACOBI_TOL, MAX_SWEEPS};

/// Full singular value decomposition `A = W diag(σ) V*`.
///
/// For an `m×n` input, `left` is `m×m`, `right` is `n×n` and
/// `singular_values` holds `min(m, n)` values in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SVDResult {
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right: ComplexMatrix,
}

impl SVDResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let m = self.left.rows();
        let n = self.right.rows();
        let k = self.singular_values.len();
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..k)
                .map(|l| self.left[(i, l)] * self.singular_values[l] * self.right[(j, l)].conj())
                .sum()
        })
    }

    pub fn max(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn min(&self) -> f64 {
        *self.singular_values.last().expect("non-empty")
    }
}

/// Singular value decomposition by one-sided Jacobi rotations.
pub fn svd(a: &ComplexMatrix) -> SVDResult {
    svd_with(a, JACOBI_TOL)
}

/// [`svd`] with an explicit relative orthogonality level for the columns.
pub fn svd_with(a: &ComplexMatrix, tol: f64) -> SVDResult {
    if a.rows() < a.cols() {
        let t = svd_tall(&a.adjoint(), tol);
        return SVDResult {
            left: t.right,
            singular_values: t.singular_values,
            right: t.left,
        };
    }
    svd_tall(a, tol)
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    svd(a).max()
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    svd(a).singular_values.iter().sum()
}

fn svd_tall(a: &ComplexMatrix, tol: f64) -> SVDResult {
    let m = a.rows();
    let n = a.cols();
    debug_assert!(m >= n);

    // Column-major working copy: cols[j] is column j of A·V.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                if gamma.norm() <= tol * (alpha * beta).sqrt() || gamma.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, gamma, beta);
                let (head, tail) = cols.split_at_mut(q);
                for (a, b) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (xp, xq) = (*a, *b);
                    *a = xp * c - xq * phase * s;
                    *b = xp * s + xq * phase * c;
                }
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * c - vq * phase * s;
                    v[(k, q)] = vp * s + vq * phase * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let right = v.select_columns(&order);

    let mut left_cols: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    let mut pending = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        let s = norms[j];
        if s > ZERO_SINGULAR {
            left_cols.push(cols[j].iter().map(|z| z / s).collect());
        } else {
            left_cols.push(Vec::new());
            pending.push(slot);
        }
    }
    left_cols.resize(m, Vec::new());
    pending.extend(n..m);
    complete_orthonormal(&mut left_cols, &pending, m);

    SVDResult {
        left: ComplexMatrix::from_columns(m, &left_cols),
        singular_values,
        right,
    }
}

/// Singular values at or below this are treated as exact zeros when
/// recovering left singular vectors.
const ZERO_SINGULAR: f64 = 1e-280;

/// Fills the columns listed in `pending` with unit vectors orthogonal to all
/// filled columns, trying standard basis vectors in index order.
pub(crate) fn complete_orthonormal(cols: &mut [Vec<Complex64>], pending: &[usize], dim: usize) {
    let mut candidate = 0usize;
    for &slot in pending {
        loop {
            assert!(candidate < dim, "ran out of basis vectors during completion");
            let mut w = vec![Complex64::new(0.0, 0.0); dim];
            w[candidate] = Complex64::new(1.0, 0.0);
            candidate += 1;
            // two passes of classical Gram–Schmidt
            for _ in 0..2 {
                for (k, c) in cols.iter().enumerate() {
                    if c.is_empty() || k == slot {
                        continue;
                    }
                    let proj: Complex64 = c.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                    for (wi, ci) in w.iter_mut().zip(c) {
                        *wi -= proj * ci;
                    }
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.25 {
                cols[slot] = w.iter().map(|z| z / norm).collect();
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;

    fn lcg_matrix(seed: u64, m: usize, n: usize) -> ComplexMatrix {
        let mut state = seed.wrapping_add(17);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(m, n, |_, _| Complex64::new(next(), next()))
    }

    fn unitary_defect(u: &ComplexMatrix) -> f64 {
        let n = u.cols();
        operator_norm(&(&u.adjoint_mul(u) - &ComplexMatrix::identity(n)))
    }

    #[test]
    fn zero_matrix_has_zero_singular_values() {
        let r = svd(&ComplexMatrix::zeros(3, 3));
        assert_eq!(r.singular_values, vec![0.0; 3]);
        assert!(unitary_defect(&r.left) < 1e-15);
        assert!(unitary_defect(&r.right) < 1e-15);
    }

    #[test]
    fn diagonal_values() {
        let r = svd(&ComplexMatrix::from_diag(&[1.0, 0.5]));
        assert_eq!(r.singular_values, vec![1.0, 0.5]);
        let r = svd(&ComplexMatrix::from_diag(&[0.5, 1.0]));
        assert_eq!(r.singular_values, vec![1.0, 0.5]);
    }

    #[test]
    fn reconstruction_and_unitarity() {
        for (seed, (m, n)) in [(3, 3), (5, 5), (6, 4), (4, 6), (1, 3), (8, 8)].iter().enumerate() {
            let a = lcg_matrix(seed as u64, *m, *n);
            let r = svd(&a);
            let scale = r.max().max(1.0);
            assert!(operator_norm(&(&a - &r.reconstruct())) <= 1e-10 * scale);
            assert!(unitary_defect(&r.left) <= 1e-10);
            assert!(unitary_defect(&r.right) <= 1e-10);
            assert!(r.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn matches_eigenvalues_of_gram_matrix() {
        let a = lcg_matrix(11, 5, 5);
        let r = svd(&a);
        let gram = a.adjoint_mul(&a).hermitian_part().unwrap();
        let spec = hermitian_eig(&gram).unwrap();
        for (s, l) in r.singular_values.iter().zip(spec.eigenvalues.iter().rev()) {
            assert!((s - l.max(0.0).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn rank_deficient_completion_is_unitary() {
        let x = ComplexMatrix::outer(
            &[
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.0),
            ],
            &[
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let r = svd(&x);
        assert!((r.singular_values[0] - 1.0).abs() < 1e-15);
        assert_eq!(&r.singular_values[1..], &[0.0, 0.0]);
        assert!(unitary_defect(&r.left) < 1e-14);
        assert!(operator_norm(&(&x - &r.reconstruct())) < 1e-15);
    }

    #[test]
    fn tiny_singular_values_keep_relative_accuracy() {
        let a = ComplexMatrix::from_diag(&[1.0, 1e-9, 1e-13]);
        let w = lcg_matrix(5, 3, 3);
        let q = svd(&w).left;
        let x = &(&q * &a) * &q.adjoint();
        let r = svd(&x);
        assert!((r.singular_values[1] - 1e-9).abs() < 1e-15);
        assert!(unitary_defect(&r.left) < 1e-10);
    }

    #[test]
    fn norms() {
        assert_eq!(operator_norm(&ComplexMatrix::identity(4)), 1.0);
        assert_eq!(trace_norm(&ComplexMatrix::identity(4)), 4.0);
        assert_eq!(operator_norm(&ComplexMatrix::from_diag(&[1.0, 0.5])), 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let xi = [Complex64::new(s, 0.0), Complex64::new(0.0, s)];
        let eta = [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)];
        assert!((trace_norm(&ComplexMatrix::outer(&xi, &eta)) - 1.0).abs() < 1e-15);
    }
}
