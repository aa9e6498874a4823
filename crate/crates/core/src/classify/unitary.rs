//! Unitaries: `x` is unitary exactly when `S_x` spans the dual.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{is_partial_isometry_algebraic, partial_isometry_residual, ClassifierConfig, Evidence, Predicate, Verdict};
use crate::algebra::{norming_set, numeric_span_rank, unitary_residual, BorderlineSpectrum, Element};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const SPAN_STREAM: u64 = 3;

/// `‖x*x − 1‖ ≤ thr` and `‖xx* − 1‖ ≤ thr`.
pub fn is_unitary_algebraic(x: &Element, cfg: &ClassifierConfig) -> bool {
    unitary_residual(x) <= cfg.tolerances.classification
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanReport {
    pub norm: f64,
    /// `false` when `‖x‖ ≠ 1`; then `S_x` is empty and nothing else is computed.
    pub normalized: bool,
    pub span_dim: usize,
    /// `Σ n_i²`.
    pub full_dim: usize,
    pub samples: usize,
    /// Numeric rank of the sampled members.
    pub numeric_rank: usize,
    pub warnings: Vec<BorderlineSpectrum>,
}

/// Unitary verdict; the geometric route compares `span_dim` with `Σ n_i²`.
///
/// An element of norm other than one has empty `S_x` and is reported as not
/// unitary geometrically. The zero element is rejected.
pub fn is_unitary_geometric(x: &Element, cfg: &ClassifierConfig) -> Result<Verdict> {
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::ZeroElement);
    }
    let algebraic = is_unitary_algebraic(x, cfg);
    let full_dim = x.shape().dual_dimension();
    let report = if (norm - 1.0).abs() > cfg.tolerances.classification {
        SpanReport {
            norm,
            normalized: false,
            span_dim: 0,
            full_dim,
            samples: 0,
            numeric_rank: 0,
            warnings: Vec::new(),
        }
    } else {
        let desc = norming_set(x, &cfg.tolerances)?;
        let samples = cfg.span_sample_factor * desc.span_dim;
        let mut rng = cfg.rng(SPAN_STREAM);
        let fs = (0..samples)
            .map(|_| desc.sample(&mut rng))
            .collect::<Result<Vec<_>>>()?;
        SpanReport {
            norm,
            normalized: true,
            span_dim: desc.span_dim,
            full_dim,
            samples,
            numeric_rank: numeric_span_rank(&fs, cfg.rank_tol),
            warnings: desc.warnings,
        }
    };
    let geometric = report.normalized && report.span_dim == full_dim;
    Ok(Verdict::new(
        Predicate::Unitary,
        algebraic,
        geometric,
        Some(Evidence::Span(report)),
        cfg.tolerances,
    ))
}

fn require_partial_isometry(x: &Element, cfg: &ClassifierConfig) -> Result<()> {
    if x.norm() == 0.0 {
        return Err(Error::ZeroElement);
    }
    if !is_partial_isometry_algebraic(x, cfg) {
        return Err(Error::NotPartialIsometry {
            residual: partial_isometry_residual(x),
        });
    }
    Ok(())
}

/// `p = 1 − x*x`.
fn defect_projection(x: &Element) -> Element {
    x.map_blocks(|b| &ComplexMatrix::identity(b.rows()) - &b.adjoint_mul(b))
}

/// `max |f(1 − x*x)|` over `samples` random members of `S_x`, for a
/// nonzero partial isometry `x`. Vanishes in exact arithmetic.
pub fn norming_annihilates_defect<R: Rng + ?Sized>(
    x: &Element,
    samples: usize,
    rng: &mut R,
    cfg: &ClassifierConfig,
) -> Result<f64> {
    require_partial_isometry(x, cfg)?;
    let desc = norming_set(x, &cfg.tolerances)?;
    let p = defect_projection(x);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        worst = worst.max(desc.sample(rng)?.evaluate(&p)?.norm());
    }
    Ok(worst)
}

/// Norm measurements of `x + a t p` for a partial isometry `x` with
/// `p = 1 − x*x ≠ 0`, over a `t`-grid and unit phases `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectNormReport {
    /// `max |‖x + atp‖² − ‖xx* + |t|²p‖|`. Exact identity, since `xp = 0`.
    pub identity_deviation: f64,
    /// `max (‖x + atp‖² − (1 + t²))⁺`. The bound used to show `f(p) = 0`.
    pub bound_excess: f64,
    /// `max |‖x + atp‖ − max(1, |t|)|`. Zero when `xx* ⊥ p`, but not in
    /// general: for `x = e₁e₂*` one has `‖x + tp‖ = (1 + t²)^{1/2}`.
    pub max_deviation: f64,
}

/// Measures `‖x + atp‖` against `‖xx* + |t|²p‖^{1/2}`, against the bound
/// `(1 + t²)^{1/2}` and against `max(1, |t|)`, with `p = 1 − x*x ≠ 0`.
pub fn defect_norm_identity(x: &Element, t_grid: &[f64], cfg: &ClassifierConfig) -> Result<DefectNormReport> {
    require_partial_isometry(x, cfg)?;
    let p = defect_projection(x);
    if p.norm() <= cfg.tolerances.classification {
        return Err(Error::NoDefect);
    }
    let q = x.map_blocks(|b| b * &b.adjoint());
    let phases = cfg.witness.phases;
    let mut report = DefectNormReport {
        identity_deviation: 0.0,
        bound_excess: 0.0,
        max_deviation: 0.0,
    };
    for &t in t_grid {
        let predicted = (&q + &p.scale_real(t * t)).norm();
        for k in 0..phases {
            let a = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / phases as f64);
            let lhs = (x + &p.scale(a * t)).norm();
            let sq = lhs * lhs;
            report.identity_deviation = report.identity_deviation.max((sq - predicted).abs());
            report.bound_excess = report.bound_excess.max(sq - (1.0 + t * t));
            report.max_deviation = report.max_deviation.max((lhs - t.abs().max(1.0)).abs());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraShape;

    fn diag(d: &[f64]) -> Element {
        Element::single(ComplexMatrix::from_diag(d)).unwrap()
    }

    #[test]
    fn algebraic_examples() {
        let cfg = ClassifierConfig::default();
        assert!(is_unitary_algebraic(&Element::unit(&AlgebraShape::full(3)), &cfg));
        assert!(!is_unitary_algebraic(&diag(&[1.0, 0.0]), &cfg));
    }

    #[test]
    fn span_examples() {
        let cfg = ClassifierConfig::default();
        let v = is_unitary_geometric(&Element::unit(&AlgebraShape::full(3)), &cfg).unwrap();
        assert!(v.geometric && v.algebraic);
        let Some(Evidence::Span(r)) = &v.evidence else { panic!() };
        assert_eq!((r.span_dim, r.full_dim, r.numeric_rank), (9, 9, 9));

        let v = is_unitary_geometric(&diag(&[1.0, 0.5]), &cfg).unwrap();
        assert!(!v.geometric && !v.algebraic);
        let Some(Evidence::Span(r)) = &v.evidence else { panic!() };
        assert_eq!((r.span_dim, r.numeric_rank), (1, 1));

        // rank-one partial isometry e1 e2*
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        let v = is_unitary_geometric(&Element::single(m).unwrap(), &cfg).unwrap();
        let Some(Evidence::Span(r)) = &v.evidence else { panic!() };
        assert_eq!(r.span_dim, 1);
        assert!(!v.geometric);
    }

    #[test]
    fn off_norm_and_zero() {
        let cfg = ClassifierConfig::default();
        let v = is_unitary_geometric(&diag(&[2.0, 2.0]), &cfg).unwrap();
        assert!(!v.geometric && !v.algebraic && v.agreement);
        assert_eq!(is_unitary_geometric(&diag(&[0.0, 0.0]), &cfg), Err(Error::ZeroElement));
    }

    #[test]
    fn defect_checks() {
        let cfg = ClassifierConfig::default();
        let x = diag(&[1.0, 0.0]);
        let mut rng = cfg.rng(0);
        assert_eq!(norming_annihilates_defect(&x, 10, &mut rng, &cfg).unwrap(), 0.0);
        let u = Element::unit(&AlgebraShape::full(2));
        assert_eq!(norming_annihilates_defect(&u, 10, &mut rng, &cfg).unwrap(), 0.0);

        let r = defect_norm_identity(&x, &[2.0], &cfg).unwrap();
        assert!(r.max_deviation < 1e-15 && r.identity_deviation < 1e-14);
        assert!(defect_norm_identity(&x, &[0.0], &cfg).unwrap().max_deviation < 1e-15);

        // x = e1 e2*: p = e1 e1* = xx*, so ‖x + tp‖² = 1 + t² exactly
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        let r = defect_norm_identity(&Element::single(m).unwrap(), &[1.0], &cfg).unwrap();
        assert!((r.max_deviation - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(r.identity_deviation < 1e-14);
        assert!(r.bound_excess.abs() < 1e-14);
        assert_eq!(defect_norm_identity(&u, &[1.0], &cfg), Err(Error::NoDefect));
        assert!(matches!(
            defect_norm_identity(&diag(&[1.0, 0.5]), &[1.0], &cfg),
            Err(Error::NotPartialIsometry { .. })
        ));
    }
}
