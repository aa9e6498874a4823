//! Classification reports and certificate documents.
//!
//! These are the payloads written by the command line tool and returned by
//! the Python bindings. Serialise them with [`crate::document::to_json_17`].

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{AlgebraShape, Element};
use crate::classify::{
    construct_witness, invertibility_certificate, is_extreme_point, is_invertible, is_partial_isometry_geometric,
    is_positive, is_projection, is_self_adjoint, is_unitary_geometric, verify_certificate, verify_witness,
    CertificateCheck, ClassifierConfig, Evidence, IdentifiedUnit, InvertibilityCertificate, PartialIsometryWitness,
    Predicate, Verdict, WitnessCheck, WitnessSettings,
};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub const TOOL_NAME: &str = "opgeo";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
        }
    }
}

/// `sha256:` followed by the hex digest of `bytes`.
pub fn input_digest(bytes: &[u8]) -> String {
    let mut hex = String::with_capacity(64);
    for byte in Sha256::digest(bytes) {
        hex.push_str(&format!("{byte:02x}"));
    }
    format!("sha256:{hex}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Decided,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredicateReport {
    pub predicate: Predicate,
    pub status: Status,
    /// The geometric verdict, or `None` when the predicate does not apply.
    pub holds: Option<bool>,
    pub algebraic: Option<bool>,
    pub geometric: Option<bool>,
    pub agreement: Option<bool>,
    pub evidence: Option<Evidence>,
    /// Why the predicate does not apply.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl PredicateReport {
    fn decided(v: Verdict) -> Self {
        PredicateReport {
            predicate: v.predicate,
            status: Status::Decided,
            holds: Some(v.geometric),
            algebraic: Some(v.algebraic),
            geometric: Some(v.geometric),
            agreement: Some(v.agreement),
            evidence: v.evidence,
            reason: None,
        }
    }

    fn not_applicable(predicate: Predicate, reason: String) -> Self {
        PredicateReport {
            predicate,
            status: Status::NotApplicable,
            holds: None,
            algebraic: None,
            geometric: None,
            agreement: None,
            evidence: None,
            reason: Some(reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: ToolInfo,
    pub input_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub shape: AlgebraShape,
    pub norm: f64,
    /// `"identity"`, `"explicit"` or absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    pub tolerances: Tolerances,
    pub witness: WitnessSettings,
    pub verdicts: Vec<PredicateReport>,
}

impl ReportDocument {
    pub fn verdict(&self, predicate: Predicate) -> Option<&PredicateReport> {
        self.verdicts.iter().find(|v| v.predicate == predicate)
    }
}

fn settle(predicate: Predicate, r: Result<Verdict>) -> Result<PredicateReport> {
    match r {
        Ok(v) => Ok(PredicateReport::decided(v)),
        Err(e @ (Error::NotNormalized { .. } | Error::ZeroElement)) => {
            Ok(PredicateReport::not_applicable(predicate, e.to_string()))
        }
        Err(e) => Err(e),
    }
}

/// Runs every classifier on `x`. Norm-one predicates on elements of other
/// norm, and unit-dependent predicates without a unit, are reported as not
/// applicable.
pub fn classify_all(
    x: &Element,
    unit: Option<&IdentifiedUnit>,
    cfg: &ClassifierConfig,
) -> Result<Vec<PredicateReport>> {
    let mut out = vec![
        settle(Predicate::PartialIsometry, is_partial_isometry_geometric(x, cfg))?,
        settle(Predicate::Unitary, is_unitary_geometric(x, cfg))?,
        settle(Predicate::ExtremePoint, is_extreme_point(x, cfg))?,
        settle(Predicate::Invertible, is_invertible(x, cfg))?,
    ];
    for p in [Predicate::SelfAdjoint, Predicate::Positive, Predicate::Projection] {
        out.push(match unit {
            None => PredicateReport::not_applicable(p, "no identified unit".into()),
            Some(u) => settle(
                p,
                match p {
                    Predicate::SelfAdjoint => is_self_adjoint(x, u, cfg),
                    Predicate::Positive => is_positive(x, u, cfg),
                    _ => is_projection(x, u, cfg),
                },
            )?,
        });
    }
    Ok(out)
}

/// Classifies `x` and wraps the verdicts with the settings they were made
/// under. `input` is the raw document the element was read from.
pub fn classify_report(
    x: &Element,
    unit: Option<(&IdentifiedUnit, &str)>,
    label: Option<String>,
    input: &[u8],
    cfg: &ClassifierConfig,
) -> Result<ReportDocument> {
    Ok(ReportDocument {
        tool: ToolInfo::default(),
        input_digest: input_digest(input),
        label,
        shape: x.shape().clone(),
        norm: x.norm(),
        unit: unit.map(|(_, kind)| kind.to_string()),
        tolerances: cfg.tolerances,
        witness: WitnessSettings::from(&cfg.witness),
        verdicts: classify_all(x, unit.map(|(u, _)| u), cfg)?,
    })
}

/// Evidence emitted by `certify`: a positive invertibility certificate or a
/// witness that `x` is not a partial isometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateDocument {
    Invertibility(InvertibilityCertificate),
    NonPartialIsometry(PartialIsometryWitness),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertifiedPredicate {
    Invertible,
    PartialIsometry,
}

/// `None` when no evidence exists: `x` is singular, or `x` is a partial
/// isometry (or too close to one for the witness to resolve).
pub fn certify(
    x: &Element,
    predicate: CertifiedPredicate,
    cfg: &ClassifierConfig,
) -> Result<Option<CertificateDocument>> {
    Ok(match predicate {
        CertifiedPredicate::Invertible => invertibility_certificate(x, cfg).map(CertificateDocument::Invertibility),
        CertifiedPredicate::PartialIsometry => construct_witness(x, cfg)?.map(CertificateDocument::NonPartialIsometry),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CheckDocument {
    Invertibility(CertificateCheck),
    NonPartialIsometry(WitnessCheck),
}

impl CheckDocument {
    pub fn accepted(&self) -> bool {
        match self {
            CheckDocument::Invertibility(c) => c.accepted,
            CheckDocument::NonPartialIsometry(c) => c.accepted,
        }
    }
}

/// Re-checks a certificate against `x`.
pub fn verify(x: &Element, cert: &CertificateDocument, cfg: &ClassifierConfig) -> Result<CheckDocument> {
    Ok(match cert {
        CertificateDocument::Invertibility(c) => CheckDocument::Invertibility(verify_certificate(x, c, cfg)?),
        CertificateDocument::NonPartialIsometry(w) => CheckDocument::NonPartialIsometry(verify_witness(x, w, cfg)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::to_json_17;
    use crate::linalg::ComplexMatrix;

    fn diag(d: &[f64]) -> Element {
        Element::single(ComplexMatrix::from_diag(d)).unwrap()
    }

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            input_digest(b""),
            "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn identity_satisfies_everything() {
        let shape = AlgebraShape::full(3);
        let unit = IdentifiedUnit::identity(&shape);
        let cfg = ClassifierConfig::default();
        let r = classify_all(&Element::unit(&shape), Some(&unit), &cfg).unwrap();
        assert_eq!(r.len(), 7);
        assert!(r.iter().all(|v| v.holds == Some(true) && v.agreement == Some(true)));
    }

    #[test]
    fn off_norm_is_not_applicable() {
        let cfg = ClassifierConfig::default();
        let r = classify_all(&diag(&[2.0, 1.0]), None, &cfg).unwrap();
        assert_eq!(r[0].status, Status::NotApplicable);
        assert_eq!(r[2].status, Status::NotApplicable);
        assert_eq!(r[1].holds, Some(false));
        assert_eq!(r[3].holds, Some(true));
        assert_eq!(r[4].reason.as_deref(), Some("no identified unit"));
    }

    #[test]
    fn certificates_round_trip_through_json() {
        let cfg = ClassifierConfig::default();
        let x = diag(&[2.0, 1.0]);
        let cert = certify(&x, CertifiedPredicate::Invertible, &cfg).unwrap().unwrap();
        let CertificateDocument::Invertibility(c) = &cert else {
            panic!()
        };
        assert!(c.u.distance(&diag(&[1.0, 1.0])).unwrap() < 1e-15);
        assert!((c.epsilon - 1.0).abs() < 1e-15);
        let back: CertificateDocument = serde_json::from_str(&to_json_17(&cert).unwrap()).unwrap();
        assert_eq!(back, cert);
        assert!(verify(&x, &back, &cfg).unwrap().accepted());
        assert!(certify(&diag(&[1.0, 0.0]), CertifiedPredicate::Invertible, &cfg)
            .unwrap()
            .is_none());

        let x = diag(&[1.0, 0.5]);
        let w = certify(&x, CertifiedPredicate::PartialIsometry, &cfg).unwrap().unwrap();
        let back: CertificateDocument = serde_json::from_str(&to_json_17(&w).unwrap()).unwrap();
        assert_eq!(back, w);
        assert!(verify(&x, &back, &cfg).unwrap().accepted());
        // the same witness says nothing about the identity
        assert!(!verify(&diag(&[1.0, 1.0]), &back, &cfg).unwrap().accepted());
    }
}
