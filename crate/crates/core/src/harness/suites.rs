//! One trial of each property suite.
//!
//! A trial draws its subject from the generators, runs the classifier
//! contracts on it and reports pass/fail with the contract's measured
//! deviation. The subject's class alternates with the trial index so that
//! every suite sees members and non-members.

use rand_chacha::ChaCha8Rng;

use super::generators::*;
use super::Suite;
use crate::algebra::{min_real_over_norming, AlgebraShape, Element};
use crate::classify::{
    construct_witness, defect_corner_direction, defect_norm_identity, invertibility_certificate, is_extreme_point,
    is_invertible, is_partial_isometry_geometric, is_positive, is_projection, is_self_adjoint_lumer,
    is_self_adjoint_states, is_unitary_geometric, norming_annihilates_defect, partial_isometry_residual,
    recover_adjoint, verify_certificate, x1_member, x2_member, ClassifierConfig, Evidence, IdentifiedUnit,
};
use crate::error::Result;
use crate::linalg::{polar, PolarSide};

/// Defect-corner directions per T1F trial.
pub const T1F_DIRECTIONS: usize = 20;
/// Samples of `S_x` per T2P trial.
pub const T2P_SAMPLES: usize = 100;
/// `t`-grid of the T2P norm identity.
pub const T2P_T_GRID: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];
/// Lower bound on the witness margin when a singular value lies in `[0.2, 0.8]`.
pub const T1B_MIN_MARGIN: f64 = 0.05;
/// `μ` in the skew-perturbed non-members `h + iμk`.
pub const LUMER_MU: f64 = 0.5;
/// Required max-sign Lumer slope at `α = 10⁻³` for those non-members.
pub const LUMER_MIN_SLOPE: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub passed: bool,
    pub deviation: f64,
    /// Empty on success; otherwise the contracts that failed.
    pub detail: String,
    pub subject: Element,
}

struct Checks {
    failed: Vec<String>,
    deviation: f64,
}

impl Checks {
    fn new() -> Self {
        Checks {
            failed: Vec::new(),
            deviation: 0.0,
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failed.push(what.into());
        }
    }

    fn measure(&mut self, d: f64) {
        self.deviation = self.deviation.max(d);
    }

    fn finish(self, subject: Element) -> TrialOutcome {
        TrialOutcome {
            passed: self.failed.is_empty(),
            deviation: self.deviation,
            detail: self.failed.join("; "),
            subject,
        }
    }
}

/// Shapes on which a suite can draw all of its subject classes.
pub(crate) fn supports(suite: Suite, shape: &AlgebraShape) -> bool {
    match suite {
        // proper partial isometries and norm-one non-partial-isometries need
        // more than M_1
        Suite::T1B | Suite::T2P => shape.dual_dimension() >= 2,
        _ => true,
    }
}

pub(crate) fn run(
    suite: Suite,
    shape: &AlgebraShape,
    trial: usize,
    rng: &mut ChaCha8Rng,
    cfg: &ClassifierConfig,
) -> Result<TrialOutcome> {
    match suite {
        Suite::T1F => t1_forward(shape, rng, cfg),
        Suite::T1B => t1_backward(shape, rng, cfg),
        Suite::T1X => t1_extreme(shape, trial, rng, cfg),
        Suite::T2 => t2_span(shape, trial, rng, cfg),
        Suite::T2P => t2_internals(shape, rng, cfg),
        Suite::T4 => t4_certificates(shape, trial, rng, cfg),
        Suite::Lumer => lumer(shape, trial, rng, cfg),
        Suite::P6 => p6_positive(shape, trial, rng, cfg),
        Suite::P7 => p7_projection(shape, trial, rng, cfg),
        Suite::Adj => adjoint(shape, rng, cfg),
    }
}

/// Non-unitary norm-one subject: a proper partial isometry or a
/// non-partial-isometry, alternating.
fn non_unitary(shape: &AlgebraShape, pick: usize, rng: &mut ChaCha8Rng) -> Element {
    if pick.is_multiple_of(2) {
        let ranks = random_ranks(shape, true, rng);
        gen_partial_isometry(shape, &ranks, rng)
    } else {
        gen_norm_one_non_pi(shape, rng)
    }
}

fn t1_forward(shape: &AlgebraShape, rng: &mut ChaCha8Rng, cfg: &ClassifierConfig) -> Result<TrialOutcome> {
    let ranks = random_ranks(shape, false, rng);
    let x = gen_partial_isometry(shape, &ranks, rng);
    let mut c = Checks::new();
    for _ in 0..T1F_DIRECTIONS {
        let y = defect_corner_direction(&x, rng, cfg);
        let check = x2_member(&x, &y, cfg)?;
        c.measure(check.max_deviation);
    }
    c.require(
        c.deviation <= cfg.tolerances.equality,
        format!("X2 deviation {:e}", c.deviation),
    );
    let v = is_partial_isometry_geometric(&x, cfg)?;
    c.require(v.algebraic, "oracle rejects generated partial isometry");
    c.require(v.agreement, "routes disagree");
    Ok(c.finish(x))
}

fn t1_backward(shape: &AlgebraShape, rng: &mut ChaCha8Rng, cfg: &ClassifierConfig) -> Result<TrialOutcome> {
    let x = gen_norm_one_non_pi(shape, rng);
    let mut c = Checks::new();
    match construct_witness(&x, cfg)? {
        None => c.require(false, "no witness"),
        Some(w) => {
            c.measure((w.norm_plus - 1.0).abs().max((w.norm_minus - 1.0).abs()));
            c.require(c.deviation <= cfg.tolerances.equality, "‖x ± y‖ ≠ 1");
            c.require(w.margin >= T1B_MIN_MARGIN, format!("margin {}", w.margin));
            c.require(x1_member(&x, &w.y, cfg)?.member, "witness not in X1");
            c.require(!x2_member(&x, &w.y, cfg)?.member, "witness in X2");
        }
    }
    let v = is_partial_isometry_geometric(&x, cfg)?;
    c.require(!v.algebraic, "oracle accepts a non-partial-isometry");
    c.require(v.agreement, "routes disagree");
    Ok(c.finish(x))
}

fn t1_extreme(
    shape: &AlgebraShape,
    trial: usize,
    rng: &mut ChaCha8Rng,
    cfg: &ClassifierConfig,
) -> Result<TrialOutcome> {
    let extreme = trial.is_multiple_of(2) || shape.dual_dimension() == 1;
    let x = if extreme {
        gen_unitary(shape, rng)
    } else {
        non_unitary(shape, trial / 2, rng)
    };
    let mut c = Checks::new();
    if extreme {
        c.measure(partial_isometry_residual(&x));
    }
    let v = is_extreme_point(&x, cfg)?;
    c.require(v.algebraic == extreme, "oracle contradicts generator");
    c.require(v.agreement, "routes disagree");
    Ok(c.finish(x))
}

fn t2_span(shape: &AlgebraShape, trial: usize, rng: &mut ChaCha8Rng, cfg: &ClassifierConfig) -> Result<TrialOutcome> {
    let unitary = trial.is_multiple_of(2) || shape.dual_dimension() == 1;
    let x = if unitary {
        gen_unitary(shape, rng)
    } else {
        non_unitary(shape, trial / 2, rng)
    };
    let mut c = Checks::new();
    let v = is_unitary_geometric(&x, cfg)?;
    if let Some(Evidence::Span(r)) = &v.evidence {
        c.measure(r.numeric_rank.abs_diff(r.span_dim) as f64);
        c.require(
            r.numeric_rank == r.span_dim,
            format!("numeric rank {} vs span_dim {}", r.numeric_rank, r.span_dim),
        );
    }
    c.require(v.algebraic == unitary, "oracle contradicts generator");
    c.require(v.agreement, "span_dim = Σn² disagrees with the oracle");
    Ok(c.finish(x))
}

fn t2_internals(shape: &AlgebraShape, rng: &mut ChaCha8Rng, cfg: &ClassifierConfig) -> Result<TrialOutcome> {
    let ranks = random_ranks(shape, true, rng);
    let x = gen_partial_isometry(shape, &ranks, rng);
    let mut c = Checks::new();
    let annihilation = norming_annihilates_defect(&x, T2P_SAMPLES, rng, cfg)?;
    let norms = defect_norm_identity(&x, &T2P_T_GRID, cfg)?;
    c.measure(annihilation);
    c.measure(norms.identity_deviation);
    c.measure(norms.bound_excess);
    let tight = cfg.tolerances.equality / 10.0;
    c.require(
        annihilation <= cfg.tolerances.equality,
        format!("|f(p)| = {annihilation:e}"),
    );
    c.require(
        norms.identity_deviation <= tight,
        format!("‖x + atp‖² − ‖xx* + t²p‖ = {:e}", norms.identity_deviation),
    );
    c.require(
        norms.bound_excess <= tight,
        format!("‖x + atp‖² exceeds 1 + t² by {:e}", norms.bound_excess),
    );
    Ok(c.finish(x))
}

fn t4_certificates(
    shape: &AlgebraShape,
    trial: usize,
    rng: &mut ChaCha8Rng,
    cfg: &ClassifierConfig,
) -> Result<TrialOutcome> {
    let singular = trial % 5 == 4;
    let x = if singular {
        gen_singular(shape, rng)
    } else {
        gen_invertible(shape, rng)
    };
    let mut c = Checks::new();
    let thr = cfg.tolerances.classification;
    if singular {
        c.require(
            invertibility_certificate(&x, cfg).is_none(),
            "certificate for a singular element",
        );
        let u = x.map_blocks(|b| polar(b, PolarSide::Left).expect("square").isometry);
        let m = min_real_over_norming(&u, &x, &cfg.tolerances)?;
        c.measure(m.min_real.max(0.0));
        c.require(m.min_real <= thr, format!("λ_min(Herm(xu*)) = {:e}", m.min_real));
    } else {
        match invertibility_certificate(&x, cfg) {
            None => c.require(false, "no certificate"),
            Some(cert) => {
                let check = verify_certificate(&x, &cert, cfg)?;
                let sigma_min = x.min_singular_value();
                let gap = (check.lambda_min - sigma_min).abs();
                c.measure(check.hermitian_residual.max(gap));
                c.require(check.accepted, "certificate rejected");
                c.require(
                    check.hermitian_residual <= cfg.tolerances.equality / 10.0,
                    format!("‖xu* − (xu*)*‖ = {:e}", check.hermitian_residual),
                );
                c.require(
                    gap <= cfg.tolerances.equality / 10.0,
                    format!("|λ_min − σ_min| = {gap:e}"),
                );
            }
        }
    }
    let v = is_invertible(&x, cfg)?;
    c.require(v.algebraic != singular, "oracle contradicts generator");
    c.require(v.agreement, "routes disagree");
    Ok(c.finish(x))
}

fn lumer(shape: &AlgebraShape, trial: usize, rng: &mut ChaCha8Rng, cfg: &ClassifierConfig) -> Result<TrialOutcome> {
    let hermitian = trial.is_multiple_of(2);
    let x = if hermitian {
        gen_hermitian(shape, rng)
    } else {
        gen_skew_perturbed(shape, LUMER_MU, rng)
    };
    let unit = IdentifiedUnit::identity(shape);
    let mut c = Checks::new();
    let l = is_self_adjoint_lumer(&x, &unit)?;
    let s = is_self_adjoint_states(&x, &unit, cfg)?;
    if hermitian {
        c.measure(s.max_imag);
        c.require(l.holds, "Lumer test rejects a Hermitian element");
        c.require(s.holds, "state test rejects a Hermitian element");
    } else {
        let slope = l.max_sign_slope(1e-3).unwrap_or(0.0);
        c.require(!l.holds, "Lumer test accepts h + iμk");
        c.require(!s.holds, "state test accepts h + iμk");
        c.require(slope >= LUMER_MIN_SLOPE, format!("slope {slope}"));
    }
    Ok(c.finish(x))
}

fn adjoint(shape: &AlgebraShape, rng: &mut ChaCha8Rng, cfg: &ClassifierConfig) -> Result<TrialOutcome> {
    let x = gen_ginibre(shape, rng);
    let unit = IdentifiedUnit::identity(shape);
    let mut c = Checks::new();
    let r = recover_adjoint(&x, &unit, cfg)?;
    let rr = recover_adjoint(&r, &unit, cfg)?;
    let h = x.hermitian_part();
    let d_adj = r.distance(&x.adjoint())?;
    let d_inv = rr.distance(&x)?;
    let d_fix = recover_adjoint(&h, &unit, cfg)?.distance(&h)?;
    c.measure(d_adj.max(d_inv).max(d_fix));
    let eq = cfg.tolerances.equality;
    c.require(d_adj <= eq, format!("‖recovered − x*‖ = {d_adj:e}"));
    c.require(d_inv <= eq, format!("involution defect {d_inv:e}"));
    c.require(d_fix <= eq, format!("moves a self-adjoint element by {d_fix:e}"));
    Ok(c.finish(x))
}

fn p6_positive(
    shape: &AlgebraShape,
    trial: usize,
    rng: &mut ChaCha8Rng,
    cfg: &ClassifierConfig,
) -> Result<TrialOutcome> {
    let member = trial.is_multiple_of(2);
    let pick = trial / 2;
    let x = if member {
        match pick % 3 {
            0 | 1 => gen_positive(shape, rng),
            _ => {
                let ranks = random_ranks(shape, false, rng);
                gen_projection(shape, &ranks, rng)
            }
        }
    } else {
        match pick % 3 {
            0 => gen_indefinite_hermitian(shape, rng),
            1 => gen_ginibre(shape, rng),
            _ => gen_skew_perturbed(shape, LUMER_MU, rng),
        }
    };
    let unit = IdentifiedUnit::identity(shape);
    let mut c = Checks::new();
    let v = is_positive(&x, &unit, cfg)?;
    if let Some(Evidence::Conditions(r)) = &v.evidence {
        c.require(r.unanimous, "conditions disagree");
        if member {
            c.measure(r.conditions[2].measured.max(0.0));
        }
        c.require(
            r.holds("norm") == r.holds("spectrum"),
            "norm inequality disagrees with spectral positivity",
        );
    }
    c.require(v.algebraic == member, "oracle contradicts generator");
    Ok(c.finish(x))
}

fn p7_projection(
    shape: &AlgebraShape,
    trial: usize,
    rng: &mut ChaCha8Rng,
    cfg: &ClassifierConfig,
) -> Result<TrialOutcome> {
    let member = trial.is_multiple_of(2);
    let x = if member {
        let ranks: Vec<usize> = shape
            .block_dims()
            .iter()
            .map(|&n| rand::Rng::random_range(rng, 0..=n))
            .collect();
        gen_projection(shape, &ranks, rng)
    } else {
        let oblique_ok = shape.block_dims().iter().any(|&n| n >= 2);
        match (trial / 2) % 4 {
            0 => gen_positive(shape, rng),
            1 if oblique_ok => gen_oblique_idempotent(shape, rng),
            2 => gen_indefinite_hermitian(shape, rng),
            _ => gen_skew_perturbed(shape, LUMER_MU, rng),
        }
    };
    let unit = IdentifiedUnit::identity(shape);
    let mut c = Checks::new();
    let v = is_projection(&x, &unit, cfg)?;
    if let Some(Evidence::Conditions(r)) = &v.evidence {
        c.require(r.unanimous, "conditions disagree");
        if member {
            c.measure(r.conditions[0].measured);
        }
    }
    c.require(v.algebraic == member, "oracle contradicts generator");
    Ok(c.finish(x))
}
