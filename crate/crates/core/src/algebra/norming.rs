//! Exact description of the norming set `S_x = { f : f(x) = ‖f‖ = 1 }`.
//!
//! For `x = ⊕ x_i` with `‖x‖ = 1` and block SVDs `x_i = W_i Σ_i V_i*`,
//! equality in `|Σ tr(a_i x_i)| ≤ Σ ‖a_i‖₁ ‖x_i‖` forces `a_i = 0` on every
//! block with `‖x_i‖ < 1`, and on the remaining blocks
//! `a_i = V_i c_i W_i*` with `c_i` positive semidefinite and supported on the
//! singular subspace where `σ = 1`. The traces of the `c_i` sum to one.
//! The complex span of `S_x` therefore has dimension `Σ |J_i|²`, where `J_i`
//! indexes the unit singular values of the active blocks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{Element, Functional};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, operator_norm, ComplexMatrix};
use crate::tolerance::Tolerances;

/// Width of the band below the unit-singular-value threshold that raises a
/// borderline warning: `span_dim` jumps when a value crosses the threshold.
const BORDERLINE_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormingBlock {
    /// `‖x_i‖` is 1 within the classification threshold.
    pub active: bool,
    pub singular_values: Vec<f64>,
    /// `W_i` from the block SVD.
    pub left: ComplexMatrix,
    /// `V_i` from the block SVD.
    pub right: ComplexMatrix,
    /// `J_i`: indices of singular values equal to one. Empty when inactive.
    pub unit_indices: Vec<usize>,
}

impl NormingBlock {
    /// `W_J`: left singular vectors for the unit singular values.
    pub fn left_frame(&self) -> ComplexMatrix {
        self.left.select_columns(&self.unit_indices)
    }

    /// `V_J`: right singular vectors for the unit singular values.
    pub fn right_frame(&self) -> ComplexMatrix {
        self.right.select_columns(&self.unit_indices)
    }

    /// Density `a = V_J c W_J*` for a coefficient matrix `c` on `J`.
    fn density(&self, c: &ComplexMatrix) -> ComplexMatrix {
        let v = self.right_frame();
        let w = self.left_frame();
        &(&v * c) * &w.adjoint()
    }
}

/// A singular value inside the band `[1 − 100·thr, 1 − thr)` just below the
/// unit threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BorderlineSpectrum {
    pub block: usize,
    pub index: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormingSetDescription {
    pub base: Element,
    pub blocks: Vec<NormingBlock>,
    /// Complex dimension of the span of `S_x`: `Σ |J_i|²` over active blocks.
    pub span_dim: usize,
    pub warnings: Vec<BorderlineSpectrum>,
    pub threshold: f64,
}

/// Computes the exact parameterisation of `S_x`.
///
/// Requires `|‖x‖ − 1| ≤ tol.classification`.
pub fn norming_set(x: &Element, tol: &Tolerances) -> Result<NormingSetDescription> {
    let thr = tol.classification;
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::ZeroElement);
    }
    if (norm - 1.0).abs() > thr {
        return Err(Error::NotNormalized { norm });
    }
    let mut blocks = Vec::with_capacity(x.shape().block_count());
    let mut warnings = Vec::new();
    for (bi, r) in x.svd_blocks().into_iter().enumerate() {
        let unit_indices: Vec<usize> = r
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s >= 1.0 - thr)
            .map(|(j, _)| j)
            .collect();
        for (j, &s) in r.singular_values.iter().enumerate() {
            if s < 1.0 - thr && s >= 1.0 - BORDERLINE_FACTOR * thr {
                warnings.push(BorderlineSpectrum {
                    block: bi,
                    index: j,
                    value: s,
                });
            }
        }
        blocks.push(NormingBlock {
            active: !unit_indices.is_empty(),
            singular_values: r.singular_values,
            left: r.left,
            right: r.right,
            unit_indices,
        });
    }
    let span_dim = blocks.iter().map(|b| b.unit_indices.len().pow(2)).sum();
    Ok(NormingSetDescription {
        base: x.clone(),
        blocks,
        span_dim,
        warnings,
        threshold: thr,
    })
}

impl NormingSetDescription {
    /// `Σ n_i²`, the dimension of the whole dual.
    pub fn full_dim(&self) -> usize {
        self.base.shape().dual_dimension()
    }

    /// `S_x` spans the dual.
    pub fn spans_dual(&self) -> bool {
        self.span_dim == self.full_dim()
    }

    pub fn active_blocks(&self) -> impl Iterator<Item = (usize, &NormingBlock)> {
        self.blocks.iter().enumerate().filter(|(_, b)| b.active)
    }

    /// Builds the member with coefficient matrices `c_i` (one entry per block,
    /// `None` for blocks left at zero). The coefficients must be positive
    /// semidefinite on `J_i`; they are rescaled so their traces sum to one.
    pub fn functional(&self, coefficients: &[Option<ComplexMatrix>]) -> Result<Functional> {
        if coefficients.len() != self.blocks.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} coefficient slots, got {}",
                self.blocks.len(),
                coefficients.len()
            )));
        }
        let mut total = 0.0;
        for (i, (block, c)) in self.blocks.iter().zip(coefficients).enumerate() {
            let Some(c) = c else { continue };
            let k = block.unit_indices.len();
            if k == 0 {
                return Err(Error::InvalidConfig(format!("block {i} is inactive")));
            }
            if c.rows() != k || c.cols() != k {
                return Err(Error::ShapeMismatch(format!(
                    "coefficient for block {i} must be {k}x{k}"
                )));
            }
            let spec = hermitian_eig(c)?;
            if spec.min() < -1e-12 * spec.max().abs().max(1.0) {
                return Err(Error::InvalidConfig(format!(
                    "coefficient for block {i} is not positive semidefinite"
                )));
            }
            total += c.trace().re;
        }
        if total <= 0.0 {
            return Err(Error::NoActiveBlock);
        }
        let densities = self
            .blocks
            .iter()
            .zip(coefficients)
            .map(|(block, c)| match c {
                Some(c) => block.density(&c.scale_real(1.0 / total)),
                None => ComplexMatrix::zeros(block.left.rows(), block.left.rows()),
            })
            .collect();
        Functional::new(self.base.shape().clone(), densities)
    }

    /// Random member: each active block receives `G G*` for a complex
    /// Gaussian `G` on `J_i`, then the family is normalised to total trace 1.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Functional> {
        if self.active_blocks().next().is_none() {
            return Err(Error::NoActiveBlock);
        }
        let coefficients: Vec<Option<ComplexMatrix>> = self
            .blocks
            .iter()
            .map(|b| {
                let k = b.unit_indices.len();
                (k > 0).then(|| {
                    let g = ComplexMatrix::from_fn(k, k, |_, _| {
                        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                    });
                    (&g * &g.adjoint()).hermitian_part().expect("square")
                })
            })
            .collect();
        self.functional(&coefficients)
    }

    /// A basis of the span of `S_x` made of members of `S_x`: for each active
    /// block, the images of the states `e_j e_j*`,
    /// `(e_j + e_k)(e_j + e_k)*/2` and `(e_j + i e_k)(e_j + i e_k)*/2`.
    pub fn basis(&self) -> Vec<Functional> {
        let mut out = Vec::with_capacity(self.span_dim);
        for (bi, block) in self.active_blocks() {
            let k = block.unit_indices.len();
            for c in matrix_unit_states(k) {
                let mut coeffs = vec![None; self.blocks.len()];
                coeffs[bi] = Some(c);
                out.push(self.functional(&coeffs).expect("states are valid coefficients"));
            }
        }
        out
    }

    /// Distance of `f` from the described set: the largest of the
    /// trace-norm mass on inactive blocks, the residual of `a_i` outside
    /// `V_J (·) W_J*`, the Hermitian defect and negative part of each `c_i`,
    /// and `|Σ tr c_i − 1|`.
    pub fn membership_defect(&self, f: &Functional) -> Result<f64> {
        if f.shape() != self.base.shape() {
            return Err(Error::ShapeMismatch("functional of a different shape".into()));
        }
        let mut worst: f64 = 0.0;
        let mut total = 0.0;
        for (block, a) in self.blocks.iter().zip(f.densities()) {
            if !block.active {
                worst = worst.max(crate::linalg::trace_norm(a));
                continue;
            }
            let v = block.right_frame();
            let w = block.left_frame();
            let c = &v.adjoint_mul(a) * &w;
            let back = &(&v * &c) * &w.adjoint();
            worst = worst.max(operator_norm(&(a - &back)));
            worst = worst.max(operator_norm(&(&c - &c.adjoint())));
            let spec = hermitian_eig(&c.hermitian_part()?)?;
            worst = worst.max((-spec.min()).max(0.0));
            total += c.trace().re;
        }
        Ok(worst.max((total - 1.0).abs()))
    }
}

/// Draws a random member of `S_x`.
pub fn sample_norming_functional<R: Rng + ?Sized>(desc: &NormingSetDescription, rng: &mut R) -> Result<Functional> {
    desc.sample(rng)
}

/// The `k²` states obtained from matrix units; their real span is the
/// Hermitian `k×k` matrices, so their complex span is all of `M_k`.
pub fn matrix_unit_states(k: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(k * k);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let e = |j: usize| -> Vec<Complex64> { (0..k).map(|t| if t == j { one } else { zero }).collect() };
    for j in 0..k {
        out.push(ComplexMatrix::outer(&e(j), &e(j)));
    }
    for j in 0..k {
        for l in (j + 1)..k {
            let mut plus = e(j);
            plus[l] = one;
            out.push(ComplexMatrix::outer(&plus, &plus).scale_real(0.5));
            let mut twist = e(j);
            twist[l] = Complex64::new(0.0, 1.0);
            out.push(ComplexMatrix::outer(&twist, &twist).scale_real(0.5));
        }
    }
    out
}

/// Result of [`min_real_over_norming`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormingMinimum {
    /// `inf { Re f(x) : f ∈ S_u } = min_i λ_min(Herm(x_i u_i*))`.
    pub min_real: f64,
    /// `max_i ‖x_i u_i* − (x_i u_i*)*‖`.
    pub hermitian_residual: f64,
}

/// Infimum of `Re f(x)` over the norming set of a unitary `u`.
///
/// With `u_i = W_i V_i*`, members of `S_u` are `f = tr(V c W* ·)`, so
/// `f(x) = tr(c · W*(x u*)W)`; ranging over densities `c` and convex
/// combinations across blocks gives the smallest eigenvalue of the
/// Hermitian part of `x u*`.
pub fn min_real_over_norming(u: &Element, x: &Element, tol: &Tolerances) -> Result<NormingMinimum> {
    u.require_same_shape(x)?;
    let residual = unitary_residual(u);
    if residual > tol.equality {
        return Err(Error::NotUnitary { residual });
    }
    let mut min_real = f64::INFINITY;
    let mut hermitian_residual: f64 = 0.0;
    for (xb, ub) in x.blocks().iter().zip(u.blocks()) {
        let h = xb * &ub.adjoint();
        hermitian_residual = hermitian_residual.max(operator_norm(&(&h - &h.adjoint())));
        let spec = hermitian_eig(&h.hermitian_part()?)?;
        min_real = min_real.min(spec.min());
    }
    Ok(NormingMinimum {
        min_real,
        hermitian_residual,
    })
}

/// `max_i max(‖u_i*u_i − 1‖, ‖u_i u_i* − 1‖)`.
pub fn unitary_residual(u: &Element) -> f64 {
    u.blocks()
        .iter()
        .map(|b| {
            let id = ComplexMatrix::identity(b.rows());
            let left = operator_norm(&(&b.adjoint_mul(b) - &id));
            let right = operator_norm(&(&(b * &b.adjoint()) - &id));
            left.max(right)
        })
        .fold(0.0, f64::max)
}
