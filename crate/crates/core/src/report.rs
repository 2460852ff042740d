//! Verification reports: one JSON-serializable record per verifier run,
//! plus the one-line CSV summary.
//!
//! Reports are deterministic functions of their inputs (matrix, parameters,
//! seed, trial counts); wall-clock timing is deliberately kept out of the
//! serialized record so byte-identical reruns stay byte-identical.

use crate::tol;
use serde::{Deserialize, Serialize};

/// Tolerances a report was produced under.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Tolerances {
    /// Construction-level checks (ordering, orthogonality, sampling gates).
    pub construction: f64,
    /// Optimality comparisons.
    pub optimality: f64,
    /// Witness attainment of the exact value.
    pub witness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            construction: tol::CONSTRUCTION,
            optimality: tol::OPTIMALITY,
            witness: tol::WITNESS,
        }
    }
}

/// Outcome of one verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Which identity was verified: kyfan, conditional, cf, wielandt,
    /// lidskii, domination.
    pub theorem: String,
    pub n: usize,
    /// Flat `key=value` parameter list, `;`-separated.
    pub params: String,
    /// Exact value of the identity being verified.
    pub exact: f64,
    /// Which spectral projections attain the exact value.
    pub witness: String,
    /// Best sampled candidate value in the adversarial direction.
    pub best_sample: Option<f64>,
    /// Signed distance of the worst check from its bound; nonnegative margins
    /// pass with room, anything below the gate tolerance fails.
    pub margin: f64,
    pub pass: bool,
    /// False when a precondition of the statement did not hold (the
    /// implication is then not tested; this is not a failure).
    pub hypothesis_met: bool,
    pub seed: u64,
    pub trials: usize,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// 17 significant digits; round-trips f64 exactly.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

impl VerificationReport {
    pub fn csv_header() -> &'static str {
        "theorem,n,params,exact,best_sample,margin,pass,seed,trials"
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.theorem,
            self.n,
            self.params,
            fmt_g17(self.exact),
            self.best_sample.map(fmt_g17).unwrap_or_default(),
            fmt_g17(self.margin),
            if self.pass {
                if self.hypothesis_met {
                    "pass"
                } else {
                    "hypothesis-not-met"
                }
            } else {
                "fail"
            },
            self.seed,
            self.trials
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
