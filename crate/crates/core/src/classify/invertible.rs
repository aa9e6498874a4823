//! Invertibility certificates: a unitary `u` and `ε > 0` with
//! `Re f(x) ≥ ε` for every `f ∈ S_u`.
//!
//! The condition is read as `x u* ≥ ε`, i.e. `x u*` Hermitian with smallest
//! eigenvalue at least `ε`. With the left polar decomposition `x = |x| u`
//! one has `x u* = |x|`, so `ε = σ_min(x)`.

use serde::{Deserialize, Serialize};

use super::{ClassifierConfig, Evidence, Predicate, Verdict};
use crate::algebra::{min_real_over_norming, unitary_residual, Element};
use crate::error::{Error, Result};
use crate::linalg::{lambda_min_hermitian_part, operator_norm, polar, PolarSide};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvertibilityCertificate {
    pub u: Element,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    pub accepted: bool,
    pub unitary_residual: f64,
    /// `‖xu* − (xu*)*‖`.
    pub hermitian_residual: f64,
    /// `λ_min(Herm(xu*))`.
    pub lambda_min: f64,
    pub epsilon: f64,
}

fn left_polar_unitary(x: &Element) -> Element {
    x.map_blocks(|b| polar(b, PolarSide::Left).expect("square block").isometry)
}

/// `(u, σ_min(x))` with `u` the unitary factor of the left polar
/// decomposition, or `None` when `σ_min(x)` is at most the classification
/// threshold.
pub fn invertibility_certificate(x: &Element, cfg: &ClassifierConfig) -> Option<InvertibilityCertificate> {
    let epsilon = x.min_singular_value();
    (epsilon > cfg.tolerances.classification).then(|| InvertibilityCertificate {
        u: left_polar_unitary(x),
        epsilon,
    })
}

/// Checks a certificate. Malformed certificates (non-positive or non-finite
/// `ε`, wrong shape) are errors; a well-formed certificate that fails the
/// check comes back with `accepted == false`.
pub fn verify_certificate(
    x: &Element,
    cert: &InvertibilityCertificate,
    cfg: &ClassifierConfig,
) -> Result<CertificateCheck> {
    if !cert.epsilon.is_finite() || cert.epsilon <= 0.0 {
        return Err(Error::MalformedCertificate(format!(
            "epsilon must be positive, got {}",
            cert.epsilon
        )));
    }
    if cert.u.shape() != x.shape() {
        return Err(Error::MalformedCertificate(format!(
            "unitary has shape {}, operator has shape {}",
            cert.u.shape(),
            x.shape()
        )));
    }
    let eq = cfg.tolerances.equality;
    let unitary_residual = unitary_residual(&cert.u);
    let mut hermitian_residual: f64 = 0.0;
    let mut lambda_min = f64::INFINITY;
    for (xb, ub) in x.blocks().iter().zip(cert.u.blocks()) {
        let h = xb * &ub.adjoint();
        hermitian_residual = hermitian_residual.max(operator_norm(&(&h - &h.adjoint())));
        lambda_min = lambda_min.min(lambda_min_hermitian_part(&h)?);
    }
    let accepted = unitary_residual <= eq && hermitian_residual <= eq && lambda_min >= cert.epsilon - eq;
    Ok(CertificateCheck {
        accepted,
        unitary_residual,
        hermitian_residual,
        lambda_min,
        epsilon: cert.epsilon,
    })
}

/// Invertibility verdict. Algebraic: `σ_min(x)` above the classification
/// threshold. Geometric: with `u` the left polar unitary,
/// `inf_{f ∈ S_u} Re f(x)` is above the threshold and `xu*` is Hermitian.
pub fn is_invertible(x: &Element, cfg: &ClassifierConfig) -> Result<Verdict> {
    let thr = cfg.tolerances.classification;
    let algebraic = x.min_singular_value() > thr;
    let u = left_polar_unitary(x);
    let m = min_real_over_norming(&u, x, &cfg.tolerances)?;
    let geometric = m.min_real > thr && m.hermitian_residual <= cfg.tolerances.equality;
    let evidence = match invertibility_certificate(x, cfg) {
        Some(certificate) => {
            let check = verify_certificate(x, &certificate, cfg)?;
            Some(Evidence::Certificate { certificate, check })
        }
        None => None,
    };
    Ok(Verdict::new(
        Predicate::Invertible,
        algebraic,
        geometric,
        evidence,
        cfg.tolerances,
    ))
}
