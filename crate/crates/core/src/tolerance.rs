//! The tolerance hierarchy shared by every module.
//!
//! Three decades separate each level: decomposition residuals sit at
//! `1e-10`, equality assertions at `1e-8` and semantic classification
//! thresholds at `1e-6`.

use serde::{Deserialize, Serialize};

pub const DECOMPOSITION: f64 = 1e-10;
pub const EQUALITY: f64 = 1e-8;
pub const CLASSIFICATION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Residual bound for computed decompositions, relative to `max(1, ‖A‖)`.
    pub decomposition: f64,
    /// Bound for asserted identities such as `f(x) = 1`.
    pub equality: f64,
    /// Threshold used when a numeric quantity decides a class.
    pub classification: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            decomposition: DECOMPOSITION,
            equality: EQUALITY,
            classification: CLASSIFICATION,
        }
    }
}

impl Tolerances {
    /// Same hierarchy with the decomposition level tightened by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Tolerances {
            decomposition: self.decomposition / factor,
            ..*self
        }
    }
}
