//! Seeded generators for every operator class exercised by the suites.

use num_complex::Complex64;
use rand::Rng;

use crate::algebra::{AlgebraShape, Element};
use crate::linalg::{operator_norm, solve, svd, ComplexMatrix};

fn gaussian_block<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    Element::ginibre(&AlgebraShape::full(n), rng).into_blocks().remove(0)
}

fn assemble(shape: &AlgebraShape, blocks: Vec<ComplexMatrix>) -> Element {
    Element::new(shape.clone(), blocks).expect("generated blocks match the shape")
}

/// Blockwise i.i.d. standard complex Gaussian entries.
pub fn gen_ginibre<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Element {
    Element::ginibre(shape, rng)
}

/// Q factor of a Ginibre matrix, with the diagonal of R made positive.
fn unitary_block<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let g = gaussian_block(n, rng);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.column(j);
            // two passes of modified Gram–Schmidt
            for _ in 0..2 {
                for c in &cols {
                    let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, ci) in v.iter_mut().zip(c) {
                        *vi -= proj * ci;
                    }
                }
            }
            let r = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if r < 1e-8 {
                ok = false;
                break;
            }
            cols.push(v.iter().map(|z| z / r).collect());
        }
        if ok {
            return ComplexMatrix::from_columns(n, &cols);
        }
    }
}

pub fn gen_unitary<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Element {
    let blocks = shape.block_dims().iter().map(|&n| unitary_block(n, rng)).collect();
    assemble(shape, blocks)
}

/// `W diag(σ) V*` per block with Haar-distributed `W`, `V`.
pub fn gen_with_singular_values<R: Rng + ?Sized>(shape: &AlgebraShape, sigma: &[Vec<f64>], rng: &mut R) -> Element {
    let blocks = shape
        .block_dims()
        .iter()
        .zip(sigma)
        .map(|(&n, s)| {
            assert_eq!(s.len(), n, "one singular value per dimension");
            let w = unitary_block(n, rng);
            let v = unitary_block(n, rng);
            &(&w * &ComplexMatrix::from_diag(s)) * &v.adjoint()
        })
        .collect();
    assemble(shape, blocks)
}

fn rank_profile(n: usize, rank: usize) -> Vec<f64> {
    (0..n).map(|j| if j < rank { 1.0 } else { 0.0 }).collect()
}

/// Partial isometry `W diag(1_k, 0) V*` with block ranks `ranks`.
pub fn gen_partial_isometry<R: Rng + ?Sized>(shape: &AlgebraShape, ranks: &[usize], rng: &mut R) -> Element {
    assert_eq!(ranks.len(), shape.block_count(), "one rank per block");
    let sigma: Vec<Vec<f64>> = shape
        .block_dims()
        .iter()
        .zip(ranks)
        .map(|(&n, &k)| rank_profile(n, k.min(n)))
        .collect();
    gen_with_singular_values(shape, &sigma, rng)
}

/// Uniform block ranks, at least one nonzero, and (when `proper`) at least
/// one block of deficient rank so that `1 − x*x ≠ 0`.
pub fn random_ranks<R: Rng + ?Sized>(shape: &AlgebraShape, proper: bool, rng: &mut R) -> Vec<usize> {
    loop {
        let ranks: Vec<usize> = shape.block_dims().iter().map(|&n| rng.random_range(0..=n)).collect();
        let nonzero = ranks.iter().any(|&k| k > 0);
        let deficient = ranks.iter().zip(shape.block_dims()).any(|(&k, &n)| k < n);
        if nonzero && (!proper || deficient) {
            return ranks;
        }
    }
}

/// Norm-one element that is not a partial isometry: one singular value is
/// exactly 1, another is uniform on `[0.2, 0.8]` and every other singular
/// value is uniform on `[0, 1]`.
///
/// Panics on `M_1`, which has no such element.
pub fn gen_norm_one_non_pi<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Element {
    let dims = shape.block_dims();
    // the two prescribed values go into one block of size ≥ 2 if there is
    // one, else into the first two 1×1 blocks
    let slots = match dims.iter().position(|&n| n >= 2) {
        Some(b) => [(b, 0), (b, 1)],
        None if dims.len() >= 2 => [(0, 0), (1, 0)],
        None => panic!("M_1 has no norm-one element that fails to be a partial isometry"),
    };
    let sigma: Vec<Vec<f64>> = dims
        .iter()
        .enumerate()
        .map(|(bi, &n)| {
            (0..n)
                .map(|j| {
                    if (bi, j) == slots[0] {
                        1.0
                    } else if (bi, j) == slots[1] {
                        rng.random_range(0.2..=0.8)
                    } else {
                        rng.random::<f64>()
                    }
                })
                .collect()
        })
        .collect();
    gen_with_singular_values(shape, &sigma, rng)
}

/// `g*g / ‖g*g‖` for Ginibre `g`.
pub fn gen_positive<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Element {
    let g = gen_ginibre(shape, rng);
    let p = &g.adjoint() * &g;
    let p = p.map_blocks(|b| b.hermitian_part().expect("square"));
    p.scale_real(1.0 / p.norm())
}

/// `g + c·1` with `c = ‖g‖ + 0.1`, so `σ_min ≥ 0.1`; resampled when the
/// computed `σ_min` falls short.
pub fn gen_invertible<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Element {
    loop {
        let g = gen_ginibre(shape, rng);
        let c = g.norm() + 0.1;
        let x = &g + &Element::unit(shape).scale_real(c);
        if x.min_singular_value() >= 0.1 {
            return x;
        }
    }
}

/// `(g + g*)/2`.
pub fn gen_hermitian<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Element {
    let g = gen_ginibre(shape, rng);
    g.map_blocks(|b| b.hermitian_part().expect("square"))
}

/// Singular element: random singular values in `[0, 1]` with one exact zero.
pub fn gen_singular<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Element {
    let zero_block = rng.random_range(0..shape.block_count());
    let sigma: Vec<Vec<f64>> = shape
        .block_dims()
        .iter()
        .enumerate()
        .map(|(bi, &n)| {
            (0..n)
                .map(|j| {
                    if bi == zero_block && j + 1 == n {
                        0.0
                    } else {
                        rng.random_range(0.1..=1.0)
                    }
                })
                .collect()
        })
        .collect();
    gen_with_singular_values(shape, &sigma, rng)
}

/// Hermitian element with spectrum in `[−1, 1]` and `λ_min ≤ −0.05`.
pub fn gen_indefinite_hermitian<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Element {
    let neg_block = rng.random_range(0..shape.block_count());
    let blocks = shape
        .block_dims()
        .iter()
        .enumerate()
        .map(|(bi, &n)| {
            let lambda: Vec<f64> = (0..n)
                .map(|j| {
                    if bi == neg_block && j == 0 {
                        rng.random_range(-1.0..=-0.05)
                    } else {
                        rng.random_range(-1.0..=1.0)
                    }
                })
                .collect();
            let u = unitary_block(n, rng);
            (&(&u * &ComplexMatrix::from_diag(&lambda)) * &u.adjoint())
                .hermitian_part()
                .expect("square")
        })
        .collect();
    assemble(shape, blocks)
}

/// `h + iμk` with `h`, `k` Hermitian, `‖h‖ ≤ 1` and `‖k‖` uniform on
/// `[0.3, 1]`.
pub fn gen_skew_perturbed<R: Rng + ?Sized>(shape: &AlgebraShape, mu: f64, rng: &mut R) -> Element {
    let h = gen_hermitian(shape, rng);
    let h = h.scale_real(rng.random_range(0.1..=1.0) / h.norm());
    let k = gen_hermitian(shape, rng);
    let k = k.scale_real(rng.random_range(0.3..=1.0) / k.norm());
    &h + &k.scale(Complex64::new(0.0, mu))
}

/// Orthogonal projection `W diag(1_k, 0) W*` with block ranks `ranks`.
pub fn gen_projection<R: Rng + ?Sized>(shape: &AlgebraShape, ranks: &[usize], rng: &mut R) -> Element {
    let blocks = shape
        .block_dims()
        .iter()
        .zip(ranks)
        .map(|(&n, &k)| {
            let w = unitary_block(n, rng);
            (&(&w * &ComplexMatrix::from_diag(&rank_profile(n, k.min(n)))) * &w.adjoint())
                .hermitian_part()
                .expect("square")
        })
        .collect();
    assemble(shape, blocks)
}

/// Idempotent that is not self-adjoint: `S P S⁻¹` for a projection `P` of
/// rank strictly between 0 and `n` in some block and an invertible `S`.
pub fn gen_oblique_idempotent<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Element {
    let target = shape
        .block_dims()
        .iter()
        .position(|&n| n >= 2)
        .expect("oblique idempotents need a block of size at least 2");
    let blocks = shape
        .block_dims()
        .iter()
        .enumerate()
        .map(|(bi, &n)| {
            let k = if bi == target {
                rng.random_range(1..n)
            } else {
                rng.random_range(0..=n)
            };
            let p = ComplexMatrix::from_diag(&rank_profile(n, k));
            loop {
                let g = gaussian_block(n, rng);
                let s = &g + &ComplexMatrix::identity(n).scale_real(operator_norm(&g) + 0.5);
                let Ok(s_inv) = solve(&s, &ComplexMatrix::identity(n)) else {
                    continue;
                };
                let e = &(&s * &p) * &s_inv;
                // reject the rare nearly self-adjoint draw
                if bi != target || operator_norm(&(&e - &e.adjoint())) > 1e-2 {
                    return e;
                }
            }
        })
        .collect();
    assemble(shape, blocks)
}

/// Largest reconstruction residual of the block SVDs, relative to
/// `max(1, ‖x_i‖)`.
pub fn decomposition_residual(x: &Element) -> f64 {
    x.blocks()
        .iter()
        .map(|b| {
            let r = svd(b);
            operator_norm(&(b - &r.reconstruct())) / r.max().max(1.0)
        })
        .fold(0.0, f64::max)
}
