use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Scalar function used to build the witness `y = φ(|x|)·x`.
///
/// It must satisfy `φ(0) = φ(1) = 0`, `0 ≤ φ ≤ 1` and `φ(s) ≤ 1/s − 1` on
/// `(0, 1)`; positivity at the chosen spectral point is checked when the
/// witness is built.
#[derive(Clone)]
pub struct WitnessFunction {
    name: String,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl WitnessFunction {
    /// `φ(s) = s(1 − s)`. Here `s·φ(s) = s²(1 − s) ≤ 1 − s` on `[0, 1]`.
    pub fn quadratic() -> Self {
        WitnessFunction {
            name: "s(1-s)".into(),
            f: Arc::new(|s| s * (1.0 - s)),
        }
    }

    /// A user-supplied function; rejected when it fails the constraints on a
    /// grid of 1001 points.
    pub fn custom(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let wf = WitnessFunction {
            name: name.into(),
            f: Arc::new(f),
        };
        wf.validate()?;
        Ok(wf)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidWitnessFunction(format!("{}: {msg}", self.name)));
        if self.eval(0.0).abs() > 1e-12 || self.eval(1.0).abs() > 1e-12 {
            return bad("must vanish at 0 and 1".into());
        }
        for k in 1..1000 {
            let s = k as f64 / 1000.0;
            let v = self.eval(s);
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return bad(format!("value {v} at {s} outside [0, 1]"));
            }
            if v > 1.0 / s - 1.0 + 1e-12 {
                return bad(format!("value {v} at {s} exceeds 1/s - 1"));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WitnessFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WitnessFunction({})", self.name)
    }
}

impl Default for WitnessFunction {
    fn default() -> Self {
        Self::quadratic()
    }
}

/// Parameters of the partial-isometry witness and of the `X₁`/`X₂` testers.
#[derive(Debug, Clone)]
pub struct WitnessConfig {
    pub witness_function: WitnessFunction,
    /// Spectral points are taken from `[gap, 1 − gap]`.
    pub gap: f64,
    /// Radii of the `b`-grid for the `X₂` tester.
    pub radii: Vec<f64>,
    /// Number of phases `k·2π/phases` of the `b`-grid.
    pub phases: usize,
    /// The `X₁` search bracket is `[floor·upper/‖y‖, upper/‖y‖]`.
    pub search_upper: f64,
    pub search_floor: f64,
    /// Acceptance level of both set testers.
    pub tester_tolerance: f64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            witness_function: WitnessFunction::default(),
            gap: 1e-3,
            radii: log_spaced(1e-3, 1e3, 25),
            phases: 16,
            search_upper: 10.0,
            search_floor: 1e-3,
            tester_tolerance: 1e-7,
        }
    }
}

/// Everything a classifier needs besides its inputs.
#[derive(Debug, Clone)]
pub struct ClassifierConfig {
    pub tolerances: Tolerances,
    pub witness: WitnessConfig,
    /// Directions probed when cross-checking `X₁` against `X₂`.
    pub probes: usize,
    /// Samples drawn per unit of `span_dim` for the span cross-check.
    pub span_sample_factor: usize,
    /// Relative singular-value cutoff of [`crate::algebra::numeric_span_rank`].
    pub rank_tol: f64,
    /// Seed of the probe and sampling streams; classifiers are deterministic.
    pub seed: u64,
    /// Random states checked in addition to the state basis.
    pub state_samples: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            tolerances: Tolerances::default(),
            witness: WitnessConfig::default(),
            probes: 6,
            span_sample_factor: 3,
            rank_tol: 1e-7,
            seed: 0x5eed,
            state_samples: 16,
        }
    }
}

impl ClassifierConfig {
    pub fn with_tolerances(tolerances: Tolerances) -> Self {
        ClassifierConfig {
            tolerances,
            ..Default::default()
        }
    }

    pub(crate) fn rng(&self, stream: u64) -> rand_chacha::ChaCha8Rng {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// `count` points from `lo` to `hi` evenly spaced in `log10`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (count - 1) as f64))
        .collect()
}

/// `(gap, radii, phases, …)` as a serialisable echo for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSettings {
    pub witness_function: String,
    pub gap: f64,
    pub radii: usize,
    pub phases: usize,
    pub tester_tolerance: f64,
}

impl From<&WitnessConfig> for WitnessSettings {
    fn from(c: &WitnessConfig) -> Self {
        WitnessSettings {
            witness_function: c.witness_function.name().to_string(),
            gap: c.gap,
            radii: c.radii.len(),
            phases: c.phases,
            tester_tolerance: c.tester_tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_function_meets_constraints() {
        WitnessFunction::quadratic().validate().unwrap();
        // s²(1 − s) ≤ 1 − s on [0, 1]
        for k in 0..=100 {
            let s = k as f64 / 100.0;
            assert!(s * s * (1.0 - s) <= 1.0 - s + 1e-15);
        }
    }

    #[test]
    fn custom_functions_are_checked() {
        assert!(WitnessFunction::custom("half", |s| 0.5 * s * (1.0 - s)).is_ok());
        assert!(WitnessFunction::custom("nonzero at 0", |s| 0.1 + s * 0.0).is_err());
        // 4s(1 − s) exceeds 1/s − 1 near s = 1
        assert!(WitnessFunction::custom("too big", |s| 4.0 * s * (1.0 - s)).is_err());
    }

    #[test]
    fn grid_covers_six_decades() {
        let r = log_spaced(1e-3, 1e3, 25);
        assert!((r[0] - 1e-3).abs() < 1e-15);
        assert!((r[24] - 1e3).abs() < 1e-9);
        assert!((r[12] - 1.0).abs() < 1e-12);
    }
}
