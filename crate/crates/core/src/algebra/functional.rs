use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AlgebraShape, Element};
use crate::error::{Error, Result};
use crate::linalg::{svd, trace_norm, ComplexMatrix};

/// Linear functional `f(x) = Σ_i tr(a_i x_i)` on the algebra.
///
/// The dual norm is `Σ_i ‖a_i‖₁`, the sum of block trace norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    shape: AlgebraShape,
    densities: Vec<ComplexMatrix>,
}

impl Functional {
    pub fn new(shape: AlgebraShape, densities: Vec<ComplexMatrix>) -> Result<Self> {
        // same block validation as elements
        let e = Element::new(shape, densities)?;
        let shape = e.shape().clone();
        Ok(Functional {
            shape,
            densities: e.into_blocks(),
        })
    }

    pub fn zero(shape: &AlgebraShape) -> Self {
        Functional {
            shape: shape.clone(),
            densities: Element::zero(shape).into_blocks(),
        }
    }

    /// The functional `x ↦ tr(a x_i)` supported on one block.
    pub fn on_block(shape: &AlgebraShape, block: usize, density: ComplexMatrix) -> Result<Self> {
        let mut densities = Element::zero(shape).into_blocks();
        if block >= densities.len() {
            return Err(Error::ShapeMismatch(format!("block {block} out of range for {shape}")));
        }
        densities[block] = density;
        Self::new(shape.clone(), densities)
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn densities(&self) -> &[ComplexMatrix] {
        &self.densities
    }

    pub fn evaluate(&self, x: &Element) -> Result<Complex64> {
        if &self.shape != x.shape() {
            return Err(Error::ShapeMismatch(format!(
                "functional on {} applied to element of {}",
                self.shape,
                x.shape()
            )));
        }
        Ok(self
            .densities
            .iter()
            .zip(x.blocks())
            .map(|(a, xb)| trace_of_product(a, xb))
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.densities.iter().map(trace_norm).sum()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Functional {
            shape: self.shape.clone(),
            densities: self.densities.iter().map(|a| a.scale(z)).collect(),
        }
    }

    /// The functional `y ↦ f(y·w)`.
    pub fn right_translate(&self, w: &Element) -> Result<Self> {
        if &self.shape != w.shape() {
            return Err(Error::ShapeMismatch("translation by element of another shape".into()));
        }
        Ok(Functional {
            shape: self.shape.clone(),
            densities: self.densities.iter().zip(w.blocks()).map(|(a, wb)| wb * a).collect(),
        })
    }

    /// Coordinates of the functional in `C^{Σ n_i²}`.
    pub fn vectorize(&self) -> Vec<Complex64> {
        self.densities
            .iter()
            .flat_map(|a| a.entries().iter().copied())
            .collect()
    }
}

impl std::ops::Add<&Functional> for &Functional {
    type Output = Functional;

    fn add(self, rhs: &Functional) -> Functional {
        assert_eq!(self.shape, rhs.shape, "functional shapes must match");
        Functional {
            shape: self.shape.clone(),
            densities: self.densities.iter().zip(&rhs.densities).map(|(a, b)| a + b).collect(),
        }
    }
}

/// `tr(A B)` without forming the product.
pub(crate) fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    let n = a.rows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.cols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `f(x)`.
pub fn evaluate(f: &Functional, x: &Element) -> Result<Complex64> {
    f.evaluate(x)
}

/// Complex rank of a family of functionals: the number of singular values of
/// the stacked coordinate matrix above `tol · σ_max`.
pub fn numeric_span_rank(fs: &[Functional], tol: f64) -> usize {
    let Some(first) = fs.first() else {
        return 0;
    };
    let dim = first.shape().dual_dimension();
    let rows: Vec<Vec<Complex64>> = fs.iter().map(Functional::vectorize).collect();
    let m = ComplexMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
    let sv = svd(&m).singular_values;
    let top = sv[0];
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}
