use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Solves `A X = B` by Gaussian elimination with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    if b.rows() != n {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, expected {n}",
            b.rows()
        )));
    }
    let k = b.cols();
    let mut m = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs();
    if scale == 0.0 {
        return Err(Error::Singular);
    }

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm()))
            .expect("non-empty range");
        if m[(pivot, col)].norm() <= 1e-14 * scale {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                let t = m[(col, j)];
                m[(col, j)] = m[(pivot, j)];
                m[(pivot, j)] = t;
            }
            for j in 0..k {
                let t = x[(col, j)];
                x[(col, j)] = x[(pivot, j)];
                x[(pivot, j)] = t;
            }
        }
        let inv = Complex64::new(1.0, 0.0) / m[(col, col)];
        for row in (col + 1)..n {
            let factor = m[(row, col)] * inv;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(row, j)] -= factor * v;
            }
            for j in 0..k {
                let v = x[(col, j)];
                x[(row, j)] -= factor * v;
            }
        }
    }

    for col in (0..n).rev() {
        let inv = Complex64::new(1.0, 0.0) / m[(col, col)];
        for j in 0..k {
            let mut acc = x[(col, j)];
            for t in (col + 1)..n {
                acc -= m[(col, t)] * x[(t, j)];
            }
            x[(col, j)] = acc * inv;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(0.0, 1.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, -1.0),
            ],
        )
        .unwrap();
        let x_true = ComplexMatrix::new(2, 1, vec![Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0)]).unwrap();
        let b = &a * &x_true;
        let x = solve(&a, &b).unwrap();
        assert!((&x - &x_true).frobenius_norm() < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        let b = ComplexMatrix::identity(2);
        assert_eq!(solve(&a, &b), Err(Error::Singular));
    }
}
