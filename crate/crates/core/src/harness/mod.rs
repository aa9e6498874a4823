//! Seeded property suites.
//!
//! Every trial owns an RNG seeded from `(seed, suite, trial)`, so the report
//! does not depend on how trials are scheduled. Trials run in parallel and
//! are merged in trial order.

pub mod generators;
pub mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraShape;
use crate::classify::ClassifierConfig;
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

pub use generators::*;
pub use suites::TrialOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    /// Partial isometries: defect-corner directions lie in `X₂`.
    T1F,
    /// Non-partial-isometries: the witness is valid with margin ≥ 0.05.
    T1B,
    /// Extreme points.
    T1X,
    /// Unitaries and the span of `S_x`.
    T2,
    /// `f(1 − x*x) = 0` on `S_x` and the defect norm identity.
    T2P,
    /// Invertibility certificates.
    T4,
    /// Lumer and state tests for self-adjointness.
    #[serde(rename = "LUMER")]
    Lumer,
    /// Positivity conditions.
    P6,
    /// Projection conditions.
    P7,
    /// Adjoint recovery.
    #[serde(rename = "ADJ")]
    Adj,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::T1F,
        Suite::T1B,
        Suite::T1X,
        Suite::T2,
        Suite::T2P,
        Suite::T4,
        Suite::Lumer,
        Suite::P6,
        Suite::P7,
        Suite::Adj,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::T1F => "T1F",
            Suite::T1B => "T1B",
            Suite::T1X => "T1X",
            Suite::T2 => "T2",
            Suite::T2P => "T2P",
            Suite::T4 => "T4",
            Suite::Lumer => "LUMER",
            Suite::P6 => "P6",
            Suite::P7 => "P7",
            Suite::Adj => "ADJ",
        }
    }

    fn index(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).expect("listed") as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .find(|suite| suite.name().eq_ignore_ascii_case(s.trim()))
            .copied()
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    /// Trials per suite.
    pub trials: usize,
    /// Trial `t` runs on `shapes[t % shapes.len()]`.
    pub shapes: Vec<AlgebraShape>,
    pub tolerances: Tolerances,
    pub suites: Vec<Suite>,
    /// Record wall time. Off by default so reports are byte-reproducible.
    #[serde(default)]
    pub timings: bool,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 1,
            trials: 100,
            shapes: default_shapes(),
            tolerances: Tolerances::default(),
            suites: Suite::ALL.to_vec(),
            timings: false,
        }
    }
}

/// `M₂`, `M₄`, `M₆` and `M₂ ⊕ M₃`.
pub fn default_shapes() -> Vec<AlgebraShape> {
    [vec![2], vec![4], vec![6], vec![2, 3]]
        .into_iter()
        .map(|d| AlgebraShape::new(d).expect("valid"))
        .collect()
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.shapes.is_empty() {
            return Err(Error::InvalidConfig("at least one shape is required".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::InvalidConfig("at least one suite is required".into()));
        }
        for &suite in &self.suites {
            if let Some(shape) = self.shapes.iter().find(|s| !suites::supports(suite, s)) {
                return Err(Error::InvalidConfig(format!("suite {suite} cannot run on {shape}")));
            }
        }
        Ok(())
    }
}

/// Seed of trial `trial` of `suite`.
pub fn trial_seed(seed: u64, suite: Suite, trial: usize) -> u64 {
    splitmix(seed ^ splitmix((suite.index() << 48) ^ trial as u64))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Reruns one trial from its recorded seed.
pub fn run_trial(
    suite: Suite,
    shape: &AlgebraShape,
    trial: usize,
    seed: u64,
    tolerances: Tolerances,
) -> Result<TrialOutcome> {
    let mut cfg = ClassifierConfig::with_tolerances(tolerances);
    cfg.seed = seed;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    suites::run(suite, shape, trial, &mut rng, &cfg)
}

/// The failing trial run again with the decomposition tolerance 10× tighter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rerun {
    pub passed: bool,
    pub deviation: f64,
    /// Largest relative SVD reconstruction residual of the subject.
    pub decomposition_residual: f64,
    /// The residual meets the tightened bound, so the failure is not
    /// decomposition noise.
    pub decomposition_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub shape: AlgebraShape,
    pub deviation: f64,
    pub detail: String,
    pub rerun: Option<Rerun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<f64>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub seed: u64,
    pub trials: usize,
    pub shapes: Vec<AlgebraShape>,
    pub tolerances: Tolerances,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

fn failure_of(
    suite: Suite,
    shape: &AlgebraShape,
    trial: usize,
    seed: u64,
    cfg: &TrialConfig,
    outcome: Result<TrialOutcome>,
) -> Option<Failure> {
    let (deviation, detail) = match &outcome {
        Ok(o) if o.passed => return None,
        Ok(o) => (o.deviation, o.detail.clone()),
        Err(e) => (f64::NAN, e.to_string()),
    };
    let tight = cfg.tolerances.tightened(10.0);
    let rerun = run_trial(suite, shape, trial, seed, tight).ok().map(|o| {
        let decomposition_residual = decomposition_residual(&o.subject);
        Rerun {
            passed: o.passed,
            deviation: o.deviation,
            decomposition_residual,
            decomposition_ok: decomposition_residual <= tight.decomposition,
        }
    });
    Some(Failure {
        trial,
        seed,
        shape: shape.clone(),
        deviation,
        detail,
        rerun,
    })
}

/// Runs one suite.
pub fn run_one(suite: Suite, cfg: &TrialConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let outcomes: Vec<(f64, Option<Failure>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let shape = &cfg.shapes[t % cfg.shapes.len()];
            let seed = trial_seed(cfg.seed, suite, t);
            let outcome = run_trial(suite, shape, t, seed, cfg.tolerances);
            let deviation = outcome.as_ref().map_or(0.0, |o| o.deviation);
            (deviation, failure_of(suite, shape, t, seed, cfg, outcome))
        })
        .collect();
    let failures: Vec<Failure> = outcomes.iter().filter_map(|(_, f)| f.clone()).collect();
    let max_deviation = outcomes.iter().map(|(d, _)| *d).fold(0.0, f64::max);
    Ok(SuiteReport {
        suite,
        trials: cfg.trials,
        passed: cfg.trials - failures.len(),
        failed: failures.len(),
        max_deviation,
        wall_time_ms: cfg.timings.then(|| start.elapsed().as_secs_f64() * 1e3),
        failures,
    })
}

/// Runs every configured suite.
pub fn run_suite(cfg: &TrialConfig) -> Result<HarnessReport> {
    cfg.validate()?;
    let suites = cfg
        .suites
        .iter()
        .map(|&s| run_one(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(HarnessReport {
        seed: cfg.seed,
        trials: cfg.trials,
        shapes: cfg.shapes.clone(),
        tolerances: cfg.tolerances,
        passed: suites.iter().all(SuiteReport::ok),
        suites,
    })
}
