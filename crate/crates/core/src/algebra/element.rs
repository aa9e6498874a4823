use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::AlgebraShape;
use crate::error::{Error, Result};
use crate::linalg::{operator_norm, svd, ComplexMatrix, SVDResult};

/// Block-diagonal element of `M_{n_1} ⊕ … ⊕ M_{n_k}`.
///
/// Serialises as `{"shape": [n_1, …], "blocks": [[[re, im], …], …]}` with
/// each block row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "ElementRepr", try_from = "ElementRepr")]
pub struct Element {
    shape: AlgebraShape,
    blocks: Vec<ComplexMatrix>,
}

impl Element {
    pub fn new(shape: AlgebraShape, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.len() != shape.block_count() {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape} has {} blocks, got {}",
                shape.block_count(),
                blocks.len()
            )));
        }
        for (i, (b, &n)) in blocks.iter().zip(shape.block_dims()).enumerate() {
            if b.rows() != n || b.cols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "block {i} must be {n}x{n}, got {}x{}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(Element { shape, blocks })
    }

    /// Builds an element from row-major block entries.
    pub fn from_entries(shape: AlgebraShape, entries: Vec<Vec<Complex64>>) -> Result<Self> {
        if entries.len() != shape.block_count() {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape} has {} blocks, got {}",
                shape.block_count(),
                entries.len()
            )));
        }
        let blocks = shape
            .block_dims()
            .iter()
            .zip(entries)
            .map(|(&n, e)| ComplexMatrix::new(n, n, e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(shape, blocks)
    }

    /// Infers the shape from square blocks.
    pub fn from_blocks(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        let dims = blocks.iter().map(|b| b.require_square()).collect::<Result<Vec<_>>>()?;
        Self::new(AlgebraShape::new(dims)?, blocks)
    }

    /// Element of the single-block algebra `M_n`.
    pub fn single(block: ComplexMatrix) -> Result<Self> {
        Self::from_blocks(vec![block])
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        let blocks = shape.block_dims().iter().map(|&n| ComplexMatrix::zeros(n, n)).collect();
        Element {
            shape: shape.clone(),
            blocks,
        }
    }

    /// The unit `1 = I_{n_1} ⊕ … ⊕ I_{n_k}`.
    pub fn unit(shape: &AlgebraShape) -> Self {
        let blocks = shape.block_dims().iter().map(|&n| ComplexMatrix::identity(n)).collect();
        Element {
            shape: shape.clone(),
            blocks,
        }
    }

    /// Blockwise i.i.d. standard complex Gaussian entries (real and
    /// imaginary parts each `N(0, 1)`).
    pub fn ginibre<R: rand::Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Self {
        use rand_distr::StandardNormal;
        let blocks = shape
            .block_dims()
            .iter()
            .map(|&n| {
                ComplexMatrix::from_fn(n, n, |_, _| {
                    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                })
            })
            .collect();
        Element {
            shape: shape.clone(),
            blocks,
        }
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &ComplexMatrix {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<ComplexMatrix> {
        self.blocks
    }

    pub fn map_blocks(&self, f: impl FnMut(&ComplexMatrix) -> ComplexMatrix) -> Self {
        Element {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    pub fn try_map_blocks(&self, f: impl FnMut(&ComplexMatrix) -> Result<ComplexMatrix>) -> Result<Self> {
        Ok(Element {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn zip_blocks(
        &self,
        other: &Element,
        mut f: impl FnMut(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Self> {
        self.require_same_shape(other)?;
        Ok(Element {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn require_same_shape(&self, other: &Element) -> Result<()> {
        if self.shape == other.shape {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("{} vs {}", self.shape, other.shape)))
        }
    }

    /// C*-norm: maximum of the block operator norms.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(operator_norm).fold(0.0, f64::max)
    }

    pub fn adjoint(&self) -> Self {
        self.map_blocks(ComplexMatrix::adjoint)
    }

    pub fn scale(&self, z: Complex64) -> Self {
        self.map_blocks(|b| b.scale(z))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.map_blocks(|b| b.scale_real(s))
    }

    pub fn svd_blocks(&self) -> Vec<SVDResult> {
        self.blocks.iter().map(svd).collect()
    }

    /// Smallest singular value over all blocks.
    pub fn min_singular_value(&self) -> f64 {
        self.blocks.iter().map(|b| svd(b).min()).fold(f64::INFINITY, f64::min)
    }

    /// `‖x − y‖`.
    pub fn distance(&self, other: &Element) -> Result<f64> {
        self.require_same_shape(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| operator_norm(&(a - b)))
            .fold(0.0, f64::max))
    }

    pub fn hermitian_part(&self) -> Self {
        self.map_blocks(|b| b.hermitian_part().expect("square block"))
    }

    /// `‖x − x*‖`.
    pub fn hermitian_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| operator_norm(&(b - &b.adjoint())))
            .fold(0.0, f64::max)
    }

    /// Assembles the block-diagonal matrix of size `Σ n_i`.
    pub fn to_block_diagonal(&self) -> ComplexMatrix {
        let total: usize = self.shape.block_dims().iter().sum();
        let mut out = ComplexMatrix::zeros(total, total);
        let mut offset = 0;
        for b in &self.blocks {
            let n = b.rows();
            for i in 0..n {
                for j in 0..n {
                    out[(offset + i, offset + j)] = b[(i, j)];
                }
            }
            offset += n;
        }
        out
    }

    /// Entries of all blocks, block by block in row-major order.
    pub fn vectorize(&self) -> Vec<Complex64> {
        self.blocks.iter().flat_map(|b| b.entries().iter().copied()).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    shape: AlgebraShape,
    blocks: Vec<Vec<Complex64>>,
}

impl From<Element> for ElementRepr {
    fn from(x: Element) -> Self {
        ElementRepr {
            shape: x.shape,
            blocks: x.blocks.into_iter().map(ComplexMatrix::into_entries).collect(),
        }
    }
}

impl TryFrom<ElementRepr> for Element {
    type Error = Error;

    fn try_from(r: ElementRepr) -> Result<Self> {
        Element::from_entries(r.shape, r.blocks)
    }
}

/// `‖x‖`, the maximum over blocks of the operator norm.
pub fn element_norm(x: &Element) -> f64 {
    x.norm()
}

impl<'a> Add<&'a Element> for &'a Element {
    type Output = Element;

    fn add(self, rhs: &'a Element) -> Element {
        self.zip_blocks(rhs, |a, b| a + b).expect("element shapes must match")
    }
}

impl<'a> Sub<&'a Element> for &'a Element {
    type Output = Element;

    fn sub(self, rhs: &'a Element) -> Element {
        self.zip_blocks(rhs, |a, b| a - b).expect("element shapes must match")
    }
}

impl<'a> Mul<&'a Element> for &'a Element {
    type Output = Element;

    fn mul(self, rhs: &'a Element) -> Element {
        self.zip_blocks(rhs, |a, b| a * b).expect("element shapes must match")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_is_block_maximum() {
        let shape = AlgebraShape::new(vec![1, 1]).unwrap();
        let x = Element::new(
            shape.clone(),
            vec![ComplexMatrix::from_diag(&[1.0]), ComplexMatrix::from_diag(&[0.5])],
        )
        .unwrap();
        assert_eq!(x.norm(), 1.0);
        assert_eq!(Element::unit(&shape).norm(), 1.0);
        assert_eq!(x.to_block_diagonal(), ComplexMatrix::from_diag(&[1.0, 0.5]));
    }

    #[test]
    fn rejects_wrong_block_sizes() {
        let shape = AlgebraShape::new(vec![2, 3]).unwrap();
        assert!(Element::new(shape.clone(), vec![ComplexMatrix::identity(2)]).is_err());
        assert!(Element::new(shape, vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2)]).is_err());
        assert!(Element::from_blocks(vec![ComplexMatrix::zeros(2, 3)]).is_err());
    }
}
