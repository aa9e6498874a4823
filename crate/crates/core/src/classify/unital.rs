//! Predicates that need the identified unit: self-adjoint, positive and
//! projection.
//!
//! The unit may be any unitary `w`. The algebra with product `x ∘ y = x w* y`,
//! unit `w` and involution `x ↦ w x* w` is carried onto the usual one by
//! `x ↦ x w*`, so every oracle below is evaluated on `x w*`; for `w = 1`
//! these are the ordinary notions. The states are the norming set `S_w`.

use serde::{Deserialize, Serialize};

use super::{
    is_partial_isometry_algebraic, ClassifierConfig, Condition, ConditionReport, Evidence, Predicate, Verdict,
};
use crate::algebra::{min_real_over_norming, norming_set, unitary_residual, AlgebraShape, Element, Functional};
use crate::error::{Error, Result};
use crate::linalg::{lambda_min_hermitian_part, solve, ComplexMatrix};

const STATE_STREAM: u64 = 4;
const LUMER_SCALES: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// `|d(α)| ≤ LUMER_FACTOR·|α|·max(1, ‖x‖²)` at every scale.
const LUMER_FACTOR: f64 = 10.0;

/// A unitary element designated as the unit. The library never infers it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentifiedUnit {
    unit: Element,
}

impl IdentifiedUnit {
    /// Rejects `unit` unless it is unitary within the equality tolerance.
    pub fn new(unit: Element, cfg: &ClassifierConfig) -> Result<Self> {
        let residual = unitary_residual(&unit);
        if residual > cfg.tolerances.equality {
            return Err(Error::InvalidUnit { residual });
        }
        Ok(IdentifiedUnit { unit })
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        IdentifiedUnit {
            unit: Element::unit(shape),
        }
    }

    pub fn element(&self) -> &Element {
        &self.unit
    }

    fn check(&self, x: &Element) -> Result<()> {
        self.unit.require_same_shape(x)
    }

    /// `x w*`.
    fn untwist(&self, x: &Element) -> Element {
        x.zip_blocks(&self.unit, |a, w| a * &w.adjoint())
            .expect("shape checked")
    }

    /// `w x* w`.
    fn involution(&self, x: &Element) -> Element {
        x.zip_blocks(&self.unit, |a, w| &(w * &a.adjoint()) * w)
            .expect("shape checked")
    }

    /// The `Σ n_i²` basis states of `S_w`.
    fn state_basis(&self, cfg: &ClassifierConfig) -> Result<Vec<Functional>> {
        Ok(norming_set(&self.unit, &cfg.tolerances)?.basis())
    }

    fn sampled_states(&self, cfg: &ClassifierConfig) -> Result<Vec<Functional>> {
        let desc = norming_set(&self.unit, &cfg.tolerances)?;
        let mut rng = cfg.rng(STATE_STREAM);
        (0..cfg.state_samples).map(|_| desc.sample(&mut rng)).collect()
    }
}

fn scaled(eq: f64, x: &Element) -> f64 {
    eq * x.norm().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LumerSlope {
    pub alpha: f64,
    /// `(‖1 + iαx‖ − 1)/α`.
    pub d: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LumerReport {
    pub slopes: Vec<LumerSlope>,
    pub holds: bool,
}

impl LumerReport {
    /// `max(|d(α)|, |d(−α)|)` at scale `α`, if that scale was evaluated.
    pub fn max_sign_slope(&self, alpha: f64) -> Option<f64> {
        let hits: Vec<f64> = self
            .slopes
            .iter()
            .filter(|s| s.alpha.abs() == alpha)
            .map(|s| s.d.abs())
            .collect();
        hits.into_iter().reduce(f64::max)
    }
}

/// Lumer test: the slope `d(α) = (‖1 + iαx‖ − 1)/α` must decay linearly
/// as `α → 0`, for `α = ±10⁻², ±10⁻³, ±10⁻⁴`.
pub fn is_self_adjoint_lumer(x: &Element, unit: &IdentifiedUnit) -> Result<LumerReport> {
    unit.check(x)?;
    let sq = x.norm().powi(2).max(1.0);
    let mut slopes = Vec::with_capacity(2 * LUMER_SCALES.len());
    for &s in &LUMER_SCALES {
        for alpha in [s, -s] {
            let shifted = unit.element() + &x.scale(num_complex::Complex64::new(0.0, alpha));
            let d = (shifted.norm() - 1.0) / alpha;
            slopes.push(LumerSlope {
                alpha,
                d,
                bound: LUMER_FACTOR * s * sq,
            });
        }
    }
    let holds = slopes.iter().all(|s| s.d.abs() <= s.bound);
    Ok(LumerReport { slopes, holds })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatesReport {
    pub states: usize,
    /// `max |Im f(x)|` over the checked states.
    pub max_imag: f64,
    /// `min Re f(x)` over the checked states.
    pub min_real: f64,
    /// `max |Im f(x)| ≤ equality·max(1, ‖x‖)`.
    pub holds: bool,
}

fn state_values(x: &Element, states: &[Functional], eq: f64) -> Result<StatesReport> {
    let mut max_imag: f64 = 0.0;
    let mut min_real = f64::INFINITY;
    for f in states {
        let v = f.evaluate(x)?;
        max_imag = max_imag.max(v.im.abs());
        min_real = min_real.min(v.re);
    }
    Ok(StatesReport {
        states: states.len(),
        max_imag,
        min_real,
        holds: max_imag <= scaled(eq, x),
    })
}

/// State test: `f(x)` is real for every state in a basis of the dual.
pub fn is_self_adjoint_states(x: &Element, unit: &IdentifiedUnit, cfg: &ClassifierConfig) -> Result<StatesReport> {
    unit.check(x)?;
    state_values(x, &unit.state_basis(cfg)?, cfg.tolerances.equality)
}

/// Recovers `x*` from state data: writes `x = h + ik` with `f(h)`, `f(k)`
/// real on the state basis and returns `h − ik`.
pub fn recover_adjoint(x: &Element, unit: &IdentifiedUnit, cfg: &ClassifierConfig) -> Result<Element> {
    unit.check(x)?;
    let basis = unit.state_basis(cfg)?;
    let mut offset = 0;
    let mut blocks = Vec::with_capacity(x.shape().block_count());
    for (bi, xb) in x.blocks().iter().enumerate() {
        let n = xb.rows();
        let m = n * n;
        let states = &basis[offset..offset + m];
        offset += m;
        // f(x) = Σ_{j,l} a[j][l]·x[l][j]
        let mut f = ComplexMatrix::zeros(m, m);
        let mut rhs = ComplexMatrix::zeros(m, 2);
        for (r, state) in states.iter().enumerate() {
            let a = &state.densities()[bi];
            for j in 0..n {
                for l in 0..n {
                    f[(r, l * n + j)] = a[(j, l)];
                }
            }
            let v = crate::algebra::trace_of_product(a, xb);
            rhs[(r, 0)] = v.re.into();
            rhs[(r, 1)] = v.im.into();
        }
        let sol = solve(&f, &rhs)?;
        let block = ComplexMatrix::from_fn(n, n, |i, j| {
            let h = sol[(i * n + j, 0)];
            let k = sol[(i * n + j, 1)];
            h - num_complex::Complex64::i() * k
        });
        blocks.push(block);
    }
    Element::new(x.shape().clone(), blocks)
}

/// Self-adjointness verdict. Algebraic: `x w* = (x w*)*`. Geometric: both the
/// Lumer and the state test pass.
pub fn is_self_adjoint(x: &Element, unit: &IdentifiedUnit, cfg: &ClassifierConfig) -> Result<Verdict> {
    unit.check(x)?;
    let residual = unit.untwist(x).hermitian_residual();
    let algebraic = residual <= scaled(cfg.tolerances.classification, x);
    let lumer = is_self_adjoint_lumer(x, unit)?;
    let states = is_self_adjoint_states(x, unit, cfg)?;
    let worst_slope = lumer.slopes.iter().map(|s| s.d.abs() / s.bound).fold(0.0, f64::max);
    let report = ConditionReport::new(vec![
        Condition {
            name: "adjoint".into(),
            holds: algebraic,
            measured: residual,
        },
        Condition {
            name: "lumer".into(),
            holds: lumer.holds,
            measured: worst_slope,
        },
        Condition {
            name: "states".into(),
            holds: states.holds,
            measured: states.max_imag,
        },
    ]);
    Ok(Verdict::new(
        Predicate::SelfAdjoint,
        algebraic,
        lumer.holds && states.holds,
        Some(Evidence::Conditions(report)),
        cfg.tolerances,
    ))
}

/// Positivity, three ways: (1) `x w*` Hermitian with `λ_min ≥ −eq`;
/// (2) `f(x) ≥ 0` for every state, using the exact infimum over `S_w` and
/// realness on the state basis; (3) state-detected self-adjointness and
/// `‖‖x‖·1 − x‖ ≤ ‖x‖`. Tolerances scale with `max(1, ‖x‖)`. `x = 0` is
/// positive.
pub fn is_positive(x: &Element, unit: &IdentifiedUnit, cfg: &ClassifierConfig) -> Result<Verdict> {
    let report = positivity_conditions(x, unit, cfg)?;
    let algebraic = report.conditions[0].holds;
    let geometric = report.conditions[1].holds && report.conditions[2].holds;
    Ok(Verdict::new(
        Predicate::Positive,
        algebraic,
        geometric,
        Some(Evidence::Conditions(report)),
        cfg.tolerances,
    ))
}

fn positivity_conditions(x: &Element, unit: &IdentifiedUnit, cfg: &ClassifierConfig) -> Result<ConditionReport> {
    unit.check(x)?;
    let eq = scaled(cfg.tolerances.equality, x);
    let z = unit.untwist(x);

    let mut lambda_min = f64::INFINITY;
    for b in z.blocks() {
        lambda_min = lambda_min.min(lambda_min_hermitian_part(b)?);
    }
    let oracle = z.hermitian_residual() <= eq && lambda_min >= -eq;

    let inf = min_real_over_norming(unit.element(), x, &cfg.tolerances)?;
    let mut states = unit.state_basis(cfg)?;
    states.extend(unit.sampled_states(cfg)?);
    let sampled = state_values(x, &states, cfg.tolerances.equality)?;
    let via_states = inf.min_real >= -eq && sampled.holds;

    let self_adjoint = is_self_adjoint_states(x, unit, cfg)?;
    let norm = x.norm();
    let gap = (&unit.element().scale_real(norm) - x).norm();
    let via_norm = self_adjoint.holds && gap <= norm + eq;

    Ok(ConditionReport::new(vec![
        Condition {
            name: "spectrum".into(),
            holds: oracle,
            measured: lambda_min,
        },
        Condition {
            name: "states".into(),
            holds: via_states,
            measured: inf.min_real,
        },
        Condition {
            name: "norm".into(),
            holds: via_norm,
            measured: gap - norm,
        },
    ]))
}

/// Projections, three ways: (1) `z² = z = z*` for `z = x w*`; (2) partial
/// isometry and positive, the positivity taken from the state routes; (3)
/// `v = 2x − 1` is a self-adjoint unitary.
pub fn is_projection(x: &Element, unit: &IdentifiedUnit, cfg: &ClassifierConfig) -> Result<Verdict> {
    unit.check(x)?;
    let thr = cfg.tolerances.classification;
    let z = unit.untwist(x);
    let idempotent = (&(&z * &z) - &z).norm();
    let hermitian = z.hermitian_residual();
    let oracle = idempotent <= thr && hermitian <= thr;

    let positive = positivity_conditions(x, unit, cfg)?;
    let pi = is_partial_isometry_algebraic(x, cfg);
    let via_pi = pi && positive.conditions[1].holds && positive.conditions[2].holds;

    let v = &x.scale_real(2.0) - unit.element();
    let v_self = (&v - &unit.involution(&v)).norm();
    let v_unitary = unitary_residual(&v);
    let via_symmetry = v_self <= thr && v_unitary <= thr;

    let report = ConditionReport::new(vec![
        Condition {
            name: "idempotent".into(),
            holds: oracle,
            measured: idempotent.max(hermitian),
        },
        Condition {
            name: "positive-partial-isometry".into(),
            holds: via_pi,
            measured: positive.conditions[1].measured,
        },
        Condition {
            name: "symmetry".into(),
            holds: via_symmetry,
            measured: v_self.max(v_unitary),
        },
    ]);
    Ok(Verdict::new(
        Predicate::Projection,
        oracle,
        via_pi && via_symmetry,
        Some(Evidence::Conditions(report)),
        cfg.tolerances,
    ))
}
