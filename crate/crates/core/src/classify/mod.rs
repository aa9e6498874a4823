//! Dual-route classifiers.
//!
//! Every predicate is decided twice: once from the product and adjoint (the
//! algebraic oracle) and once from norm and dual-space data alone (the
//! geometric route). Geometric verdicts rest on exact constructions: a
//! witness `y ∈ X₁ \ X₂` for non-partial-isometries, the dimension of the
//! span of `S_x` for unitaries, and a unitary/ε certificate for invertibles.
//! The numeric testers for the sets `X₁` and `X₂` are only used to exhibit
//! and cross-check those constructions.

mod config;
mod invertible;
mod partial_isometry;
mod unital;
mod unitary;

pub use config::{log_spaced, ClassifierConfig, WitnessConfig, WitnessFunction, WitnessSettings};
pub use invertible::{
    invertibility_certificate, is_invertible, verify_certificate, CertificateCheck, InvertibilityCertificate,
};
pub use partial_isometry::{
    construct_witness, defect_corner_direction, is_extreme_point, is_partial_isometry_algebraic,
    is_partial_isometry_geometric, partial_isometry_residual, verify_witness, x1_member, x2_member,
    PartialIsometryWitness, ProbeReport, WitnessCheck, X1Check, X2Check,
};
pub use unital::{
    is_positive, is_projection, is_self_adjoint, is_self_adjoint_lumer, is_self_adjoint_states, recover_adjoint,
    IdentifiedUnit, LumerReport, LumerSlope, StatesReport,
};
pub use unitary::{
    defect_norm_identity, is_unitary_algebraic, is_unitary_geometric, norming_annihilates_defect, DefectNormReport,
    SpanReport,
};

use serde::{Deserialize, Serialize};

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predicate {
    PartialIsometry,
    Unitary,
    ExtremePoint,
    Invertible,
    SelfAdjoint,
    Positive,
    Projection,
}

impl Predicate {
    pub fn name(&self) -> &'static str {
        match self {
            Predicate::PartialIsometry => "partial-isometry",
            Predicate::Unitary => "unitary",
            Predicate::ExtremePoint => "extreme-point",
            Predicate::Invertible => "invertible",
            Predicate::SelfAdjoint => "self-adjoint",
            Predicate::Positive => "positive",
            Predicate::Projection => "projection",
        }
    }

    /// Predicates whose geometric route needs the identified unit.
    pub fn needs_unit(&self) -> bool {
        matches!(
            self,
            Predicate::SelfAdjoint | Predicate::Positive | Predicate::Projection
        )
    }
}

/// One named condition of a multi-route characterisation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    /// The number the decision was read from.
    pub measured: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub conditions: Vec<Condition>,
    pub unanimous: bool,
}

impl ConditionReport {
    fn new(conditions: Vec<Condition>) -> Self {
        let unanimous = conditions.windows(2).all(|w| w[0].holds == w[1].holds);
        ConditionReport { conditions, unanimous }
    }

    pub fn holds(&self, name: &str) -> Option<bool> {
        self.conditions.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    Witness(PartialIsometryWitness),
    Probes(ProbeReport),
    Span(SpanReport),
    Certificate {
        certificate: InvertibilityCertificate,
        check: CertificateCheck,
    },
    Conditions(ConditionReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub predicate: Predicate,
    pub algebraic: bool,
    pub geometric: bool,
    /// `algebraic == geometric`.
    pub agreement: bool,
    pub evidence: Option<Evidence>,
    pub tolerances: Tolerances,
}

impl Verdict {
    pub(crate) fn new(
        predicate: Predicate,
        algebraic: bool,
        geometric: bool,
        evidence: Option<Evidence>,
        tolerances: Tolerances,
    ) -> Self {
        Verdict {
            predicate,
            algebraic,
            geometric,
            agreement: algebraic == geometric,
            evidence,
            tolerances,
        }
    }
}

/// Checks the norm-one precondition shared by the geometric partial
/// isometry and extreme point classifiers.
pub(crate) fn require_norm_one(x: &Element, tol: &Tolerances) -> Result<f64> {
    let norm = x.norm();
    if norm == 0.0 {
        return Err(Error::ZeroElement);
    }
    if (norm - 1.0).abs() > tol.classification {
        return Err(Error::NotNormalized { norm });
    }
    Ok(norm)
}
