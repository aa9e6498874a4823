//! Partial isometries and extreme points of the unit ball.
//!
//! For `‖x‖ = 1` let
//! `X₁ = { y : ‖x + ay‖ = ‖x − ay‖ = 1 for some a > 0 }` and
//! `X₂ = { y : ‖x + by‖ = max(1, ‖by‖) for all b ∈ C }`.
//! `x` is a partial isometry exactly when the two sets coincide. When it is
//! not, `y = φ(|x|)·x` lies in `X₁` but fails the `X₂` identity at
//! `b = 1/‖y‖`; [`construct_witness`] builds and checks that `y`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{require_norm_one, ClassifierConfig, Evidence, Predicate, Verdict};
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::linalg::{apply_function_hermitian, operator_norm, polar, svd, ComplexMatrix, PolarSide};

const PROBE_STREAM: u64 = 1;
const EXTREME_STREAM: u64 = 2;

/// `‖x x* x − x‖`.
pub fn partial_isometry_residual(x: &Element) -> f64 {
    x.blocks()
        .iter()
        .map(|b| operator_norm(&(&(&(b * &b.adjoint()) * b) - b)))
        .fold(0.0, f64::max)
}

/// `x x* x = x` within the classification threshold.
pub fn is_partial_isometry_algebraic(x: &Element, cfg: &ClassifierConfig) -> bool {
    partial_isometry_residual(x) <= cfg.tolerances.classification
}

/// Evidence that a norm-one `x` is not a partial isometry: `y ∈ X₁ \ X₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialIsometryWitness {
    pub y: Element,
    /// `1/‖y‖`, the scalar at which the `X₂` identity fails.
    pub b: f64,
    pub norm_plus: f64,
    pub norm_minus: f64,
    /// `‖x + b·y‖`.
    pub norm_scaled: f64,
    /// `‖x + b·y‖ − 1 > 0`, while `max(1, ‖b·y‖) = 1`.
    pub margin: f64,
    /// Spectral point of `|x|` strictly between 0 and 1 that makes `y ≠ 0`.
    pub t: f64,
}

/// Builds `y = φ(|x|)·x` with `|x| = (x x*)^{1/2}` (left polar convention).
///
/// Returns `Ok(None)` when no singular value lies in `[gap, 1 − gap]`. The
/// returned witness has been checked: `|‖x ± y‖ − 1| ≤ equality` and
/// positive margin.
pub fn construct_witness(x: &Element, cfg: &ClassifierConfig) -> Result<Option<PartialIsometryWitness>> {
    require_norm_one(x, &cfg.tolerances)?;
    let wc = &cfg.witness;
    let phi = &wc.witness_function;

    // spectral point maximising s·φ(s), the quantity that sets ‖y‖
    let mut best: Option<f64> = None;
    for b in x.blocks() {
        for &s in &svd(b).singular_values {
            if s >= wc.gap && s <= 1.0 - wc.gap && phi.eval(s) > 0.0 {
                let better = match best {
                    Some(t) => s * phi.eval(s) > t * phi.eval(t),
                    None => true,
                };
                if better {
                    best = Some(s);
                }
            }
        }
    }
    let Some(t) = best else {
        return Ok(None);
    };

    let y = x.try_map_blocks(|b| {
        let modulus = polar(b, PolarSide::Left)?.absolute;
        let f_mod = apply_function_hermitian(&modulus, |s| phi.eval(s.clamp(0.0, 1.0)))?;
        Ok(&f_mod * b)
    })?;
    let y_norm = y.norm();
    if y_norm == 0.0 {
        return Err(Error::WitnessRejected("y vanished".into()));
    }
    let b = 1.0 / y_norm;
    let norm_plus = (x + &y).norm();
    let norm_minus = (x - &y).norm();
    let norm_scaled = (x + &y.scale_real(b)).norm();
    let margin = norm_scaled - 1.0;

    let eq = cfg.tolerances.equality;
    if (norm_plus - 1.0).abs() > eq || (norm_minus - 1.0).abs() > eq {
        return Err(Error::WitnessRejected(format!(
            "‖x ± y‖ = ({norm_plus}, {norm_minus}) differ from 1"
        )));
    }
    if margin <= 0.0 {
        return Err(Error::WitnessRejected(format!("non-positive margin {margin}")));
    }
    Ok(Some(PartialIsometryWitness {
        y,
        b,
        norm_plus,
        norm_minus,
        norm_scaled,
        margin,
        t,
    }))
}

/// Re-measured witness quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub accepted: bool,
    pub norm_plus: f64,
    pub norm_minus: f64,
    /// `‖x + b·y‖`.
    pub norm_scaled: f64,
    /// `max(1, ‖b·y‖)`, the value the `X₂` identity demands at `b`.
    pub required: f64,
    /// `‖x + b·y‖ − max(1, ‖b·y‖)`.
    pub margin: f64,
}

/// Checks a witness from its `y` and `b` alone: accepted when
/// `|‖x ± y‖ − 1| ≤ equality` and `‖x + b·y‖` exceeds `max(1, ‖b·y‖)` by more
/// than the equality tolerance. The stored norms and margin are ignored.
pub fn verify_witness(x: &Element, w: &PartialIsometryWitness, cfg: &ClassifierConfig) -> Result<WitnessCheck> {
    require_norm_one(x, &cfg.tolerances)?;
    x.require_same_shape(&w.y)?;
    if !w.b.is_finite() {
        return Err(Error::MalformedCertificate(format!("b must be finite, got {}", w.b)));
    }
    let eq = cfg.tolerances.equality;
    let norm_plus = (x + &w.y).norm();
    let norm_minus = (x - &w.y).norm();
    let by = w.y.scale_real(w.b);
    let norm_scaled = (x + &by).norm();
    let required = by.norm().max(1.0);
    let margin = norm_scaled - required;
    let accepted = (norm_plus - 1.0).abs() <= eq && (norm_minus - 1.0).abs() <= eq && margin > eq;
    Ok(WitnessCheck {
        accepted,
        norm_plus,
        norm_minus,
        norm_scaled,
        required,
        margin,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct X1Check {
    pub member: bool,
    /// Largest admissible `a` located when `member`, else the minimiser.
    pub a: Option<f64>,
    /// `min_a max(|‖x + ay‖ − 1|, |‖x − ay‖ − 1|)` over the bracket.
    pub deviation: f64,
}

/// Tester for `y ∈ X₁`.
///
/// Golden-section search over `log a` in
/// `[floor·upper/‖y‖, upper/‖y‖]` for the smallest
/// `max(|‖x + ay‖ − 1|, |‖x − ay‖ − 1|)`; membership when it is at most the
/// tester tolerance. `y = 0` is accepted. The lower end of the bracket is the
/// tester's resolution: directions whose admissible `a` are all below it
/// are reported as non-members.
pub fn x1_member(x: &Element, y: &Element, cfg: &ClassifierConfig) -> Result<X1Check> {
    x.require_same_shape(y)?;
    let y_norm = y.norm();
    if y_norm == 0.0 {
        return Ok(X1Check {
            member: true,
            a: None,
            deviation: 0.0,
        });
    }
    let wc = &cfg.witness;
    let g = |a: f64| -> f64 {
        let plus = (x + &y.scale_real(a)).norm();
        let minus = (x - &y.scale_real(a)).norm();
        (plus - 1.0).abs().max((minus - 1.0).abs())
    };
    let hi = wc.search_upper / y_norm;
    let lo = hi * wc.search_floor;

    let mut best = (g(lo), lo);
    let consider = |a: f64, v: f64, best: &mut (f64, f64)| {
        if v < best.0 || (v == best.0 && a > best.1) {
            *best = (v, a);
        }
    };
    let g_hi = g(hi);
    consider(hi, g_hi, &mut best);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut u0, mut u1) = (lo.ln(), hi.ln());
    let mut c = u1 - inv_phi * (u1 - u0);
    let mut d = u0 + inv_phi * (u1 - u0);
    let mut gc = g(c.exp());
    let mut gd = g(d.exp());
    for _ in 0..60 {
        consider(c.exp(), gc, &mut best);
        consider(d.exp(), gd, &mut best);
        if gc <= gd {
            u1 = d;
            d = c;
            gd = gc;
            c = u1 - inv_phi * (u1 - u0);
            gc = g(c.exp());
        } else {
            u0 = c;
            c = d;
            gc = gd;
            d = u0 + inv_phi * (u1 - u0);
            gd = g(d.exp());
        }
    }
    consider(c.exp(), gc, &mut best);
    consider(d.exp(), gd, &mut best);

    let (deviation, a_best) = best;
    let member = deviation <= wc.tester_tolerance;
    if !member {
        return Ok(X1Check {
            member,
            a: Some(a_best),
            deviation,
        });
    }
    // largest admissible a: the admissible set is an interval (0, a_max]
    let a = if g_hi <= wc.tester_tolerance {
        hi
    } else {
        let (mut ok, mut bad) = (a_best, hi);
        for _ in 0..80 {
            let mid = 0.5 * (ok + bad);
            if g(mid) <= wc.tester_tolerance {
                ok = mid;
            } else {
                bad = mid;
            }
        }
        ok
    };
    Ok(X1Check {
        member,
        a: Some(a),
        deviation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct X2Check {
    pub member: bool,
    /// `max_b |‖x + by‖ − max(1, ‖by‖)|` over the grid.
    pub max_deviation: f64,
    pub worst_b: Complex64,
}

/// Tester for `y ∈ X₂` on the `b`-grid (configured radii plus `1/‖y‖`,
/// times equally spaced phases).
pub fn x2_member(x: &Element, y: &Element, cfg: &ClassifierConfig) -> Result<X2Check> {
    x.require_same_shape(y)?;
    let y_norm = y.norm();
    if y_norm == 0.0 {
        return Ok(X2Check {
            member: true,
            max_deviation: 0.0,
            worst_b: Complex64::new(0.0, 0.0),
        });
    }
    let wc = &cfg.witness;
    let mut radii = wc.radii.clone();
    radii.push(1.0 / y_norm);
    let mut max_deviation: f64 = 0.0;
    let mut worst_b = Complex64::new(0.0, 0.0);
    for &r in &radii {
        for k in 0..wc.phases {
            let b = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / wc.phases as f64);
            let lhs = (x + &y.scale(b)).norm();
            let rhs = (r * y_norm).max(1.0);
            let dev = (lhs - rhs).abs();
            if dev > max_deviation {
                max_deviation = dev;
                worst_b = b;
            }
        }
    }
    Ok(X2Check {
        member: max_deviation <= wc.tester_tolerance,
        max_deviation,
        worst_b,
    })
}

/// Random direction in the corner `(1 − q)·A·(1 − p)`, where `p` and `q`
/// are the right and left support projections of `x` (for a partial
/// isometry, `p = x*x` and `q = xx*`). Zero when the corner is trivial.
pub fn defect_corner_direction<R: rand::Rng + ?Sized>(x: &Element, rng: &mut R, cfg: &ClassifierConfig) -> Element {
    let g = Element::ginibre(x.shape(), rng);
    let thr = cfg.tolerances.classification;
    let blocks = x
        .blocks()
        .iter()
        .zip(g.blocks())
        .map(|(xb, gb)| {
            let r = svd(xb);
            let n = xb.rows();
            let support: Vec<usize> = (0..n).filter(|&j| r.singular_values[j] > thr).collect();
            let complement = |frame: &ComplexMatrix| {
                if support.is_empty() {
                    return ComplexMatrix::identity(n);
                }
                let f = frame.select_columns(&support);
                &ComplexMatrix::identity(n) - &(&f * &f.adjoint())
            };
            let q_perp = complement(&r.left);
            let p_perp = complement(&r.right);
            &(&q_perp * gb) * &p_perp
        })
        .collect();
    Element::new(x.shape().clone(), blocks).expect("shape preserved")
}

/// Outcome of cross-checking the `X₁`/`X₂` testers on sampled directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub directions: usize,
    /// Nonzero directions drawn from the defect corner.
    pub defect_directions: usize,
    pub x1_members: usize,
    pub x2_members: usize,
    /// Every probed direction was in both sets or in neither.
    pub consistent: bool,
}

fn probe<R: rand::Rng + ?Sized>(x: &Element, rng: &mut R, cfg: &ClassifierConfig) -> Result<ProbeReport> {
    let mut report = ProbeReport {
        directions: 0,
        defect_directions: 0,
        x1_members: 0,
        x2_members: 0,
        consistent: true,
    };
    for _ in 0..cfg.probes {
        let corner = defect_corner_direction(x, rng, cfg);
        let random = Element::ginibre(x.shape(), rng);
        let mut dirs = vec![random];
        if corner.norm() > cfg.tolerances.classification {
            report.defect_directions += 1;
            dirs.push(corner);
        }
        for y in dirs {
            let in1 = x1_member(x, &y, cfg)?.member;
            let in2 = x2_member(x, &y, cfg)?.member;
            report.directions += 1;
            report.x1_members += in1 as usize;
            report.x2_members += in2 as usize;
            report.consistent &= in1 == in2;
        }
    }
    Ok(report)
}

/// Partial-isometry verdict. The geometric route is `X₁ = X₂`: no witness
/// exists, and the set testers agree on sampled directions from the defect
/// corner and from random directions.
pub fn is_partial_isometry_geometric(x: &Element, cfg: &ClassifierConfig) -> Result<Verdict> {
    require_norm_one(x, &cfg.tolerances)?;
    let algebraic = is_partial_isometry_algebraic(x, cfg);
    let (geometric, evidence) = match construct_witness(x, cfg)? {
        Some(w) => (false, Evidence::Witness(w)),
        None => {
            let report = probe(x, &mut cfg.rng(PROBE_STREAM), cfg)?;
            (report.consistent, Evidence::Probes(report))
        }
    };
    Ok(Verdict::new(
        Predicate::PartialIsometry,
        algebraic,
        geometric,
        Some(evidence),
        cfg.tolerances,
    ))
}

/// Extreme points of the unit ball.
///
/// Algebraic route: `x` is a partial isometry and in every block
/// `1 − x x* = 0` or `1 − x* x = 0`. Geometric route: `X₁ = {0}`, checked as
/// "no witness, and no sampled nonzero direction is in `X₁`".
pub fn is_extreme_point(x: &Element, cfg: &ClassifierConfig) -> Result<Verdict> {
    require_norm_one(x, &cfg.tolerances)?;
    let thr = cfg.tolerances.classification;
    let algebraic = is_partial_isometry_algebraic(x, cfg)
        && x.blocks().iter().all(|b| {
            let id = ComplexMatrix::identity(b.rows());
            operator_norm(&(&id - &(b * &b.adjoint()))) <= thr || operator_norm(&(&id - &b.adjoint_mul(b))) <= thr
        });
    let (geometric, evidence) = match construct_witness(x, cfg)? {
        Some(w) => (false, Evidence::Witness(w)),
        None => {
            let report = probe(x, &mut cfg.rng(EXTREME_STREAM), cfg)?;
            (report.x1_members == 0, Evidence::Probes(report))
        }
    };
    Ok(Verdict::new(
        Predicate::ExtremePoint,
        algebraic,
        geometric,
        Some(evidence),
        cfg.tolerances,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraShape;

    fn diag(d: &[f64]) -> Element {
        Element::single(ComplexMatrix::from_diag(d)).unwrap()
    }

    fn cfg() -> ClassifierConfig {
        ClassifierConfig::default()
    }

    #[test]
    fn algebraic_oracle_examples() {
        assert!(is_partial_isometry_algebraic(
            &Element::unit(&AlgebraShape::full(3)),
            &cfg()
        ));
        assert!(is_partial_isometry_algebraic(&diag(&[1.0, 0.0]), &cfg()));
        // x x* x − x = diag(0, 1/8 − 1/2)
        assert!(!is_partial_isometry_algebraic(&diag(&[1.0, 0.5]), &cfg()));
        assert!((partial_isometry_residual(&diag(&[1.0, 0.5])) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn witness_for_half_diagonal() {
        let x = diag(&[1.0, 0.5]);
        let w = construct_witness(&x, &cfg()).unwrap().unwrap();
        assert!(w.y.distance(&diag(&[0.0, 0.125])).unwrap() < 1e-15);
        assert!((w.b - 8.0).abs() < 1e-12);
        assert!((w.norm_plus - 1.0).abs() < 1e-15);
        assert!((w.norm_minus - 1.0).abs() < 1e-15);
        assert!((w.norm_scaled - 1.5).abs() < 1e-12);
        assert!((w.margin - 0.5).abs() < 1e-12);
        assert_eq!(w.t, 0.5);
    }

    #[test]
    fn witness_verification() {
        let x = diag(&[1.0, 0.5]);
        let mut w = construct_witness(&x, &cfg()).unwrap().unwrap();
        let c = verify_witness(&x, &w, &cfg()).unwrap();
        assert!(c.accepted && (c.margin - 0.5).abs() < 1e-12);
        // y in X2 for a partial isometry's defect corner: rejected
        w.y = diag(&[0.0, 0.5]);
        w.b = 2.0;
        assert!(!verify_witness(&diag(&[1.0, 0.0]), &w, &cfg()).unwrap().accepted);
        // ‖x ± y‖ ≠ 1
        w.y = diag(&[0.5, 0.0]);
        assert!(!verify_witness(&x, &w, &cfg()).unwrap().accepted);
    }

    #[test]
    fn no_witness_for_unitary() {
        let x = Element::unit(&AlgebraShape::new(vec![2, 1]).unwrap());
        assert!(construct_witness(&x, &cfg()).unwrap().is_none());
    }

    #[test]
    fn witness_requires_norm_one() {
        assert!(matches!(
            construct_witness(&diag(&[2.0, 0.5]), &cfg()),
            Err(Error::NotNormalized { .. })
        ));
        assert_eq!(construct_witness(&diag(&[0.0, 0.0]), &cfg()), Err(Error::ZeroElement));
    }

    #[test]
    fn x1_examples() {
        let x = diag(&[1.0, 0.0]);
        let zero = diag(&[0.0, 0.0]);
        assert!(x1_member(&x, &zero, &cfg()).unwrap().member);

        let y = diag(&[0.0, 0.5]);
        let c = x1_member(&x, &y, &cfg()).unwrap();
        assert!(c.member);
        assert!((c.a.unwrap() - 2.0).abs() < 1e-6, "a = {:?}", c.a);

        // ‖x + a e1e1*‖ = 1 + a on one side for every a > 0
        let e11 = diag(&[1.0, 0.0]);
        let c = x1_member(&x, &e11, &cfg()).unwrap();
        assert!(!c.member);
        assert!(c.deviation > 1e-3);
    }

    #[test]
    fn x2_examples() {
        let x = diag(&[1.0, 0.0]);
        assert!(x2_member(&x, &diag(&[0.0, 0.0]), &cfg()).unwrap().member);
        let c = x2_member(&x, &diag(&[0.0, 1.0]), &cfg()).unwrap();
        assert!(c.member);
        assert!(c.max_deviation < 1e-12);

        let x = diag(&[1.0, 0.5]);
        let w = construct_witness(&x, &cfg()).unwrap().unwrap();
        let c = x2_member(&x, &w.y, &cfg()).unwrap();
        assert!(!c.member);
        // at b = 8: ‖x + 8y‖ = 3/2 against max(1, ‖8y‖) = 1
        assert!(c.max_deviation >= 0.5 - 1e-12);
        assert!(x1_member(&x, &w.y, &cfg()).unwrap().member);
    }

    #[test]
    fn geometric_verdicts() {
        let u = Element::unit(&AlgebraShape::full(2));
        let v = is_partial_isometry_geometric(&u, &cfg()).unwrap();
        assert!(v.algebraic && v.geometric && v.agreement);

        let v = is_partial_isometry_geometric(&diag(&[1.0, 0.0]), &cfg()).unwrap();
        assert!(v.algebraic && v.geometric);
        let Some(Evidence::Probes(p)) = v.evidence else {
            panic!("expected probes")
        };
        assert!(p.defect_directions > 0 && p.x1_members > 0);

        let v = is_partial_isometry_geometric(&diag(&[1.0, 0.5]), &cfg()).unwrap();
        assert!(!v.algebraic && !v.geometric && v.agreement);
        assert!(matches!(v.evidence, Some(Evidence::Witness(_))));
    }

    #[test]
    fn extreme_point_examples() {
        let v = is_extreme_point(&Element::unit(&AlgebraShape::full(2)), &cfg()).unwrap();
        assert!(v.algebraic && v.geometric);
        let v = is_extreme_point(&diag(&[1.0, 0.0]), &cfg()).unwrap();
        assert!(!v.algebraic && !v.geometric);
        let v = is_extreme_point(&diag(&[1.0, 0.5]), &cfg()).unwrap();
        assert!(!v.algebraic && !v.geometric);
    }

    #[test]
    fn defect_corner_is_orthogonal_to_supports() {
        let x = diag(&[1.0, 0.0]);
        let mut rng = cfg().rng(9);
        let y = defect_corner_direction(&x, &mut rng, &cfg());
        let b = y.block(0);
        assert!(b[(0, 0)].norm() < 1e-15 && b[(0, 1)].norm() < 1e-15 && b[(1, 0)].norm() < 1e-15);
        assert!(b[(1, 1)].norm() > 0.0);
    }
}
