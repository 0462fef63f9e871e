//! Outcome records of theorem checks.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::json::{ser_f64, ser_map, ser_vec_vec};
use crate::knmean::KnSpec;

/// Default residual below which an "if" direction is accepted.
pub const DEFAULT_PASS_THRESHOLD: f64 = 1e-9;
/// Default residual above which a witness counts as a genuine violation.
pub const DEFAULT_COUNTEREXAMPLE_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    CounterexampleFound,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::CounterexampleFound => "counterexample_found",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// The data needed to recompute a residual from scratch.
///
/// `pmfs[i]` pairs with `values[i]` where both are present; `params` carries
/// the scalar knobs of the check (`q`, `c`, `d`, `beta`, `lambda`, `alpha`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub psi: Option<KnSpec>,
    #[serde(serialize_with = "ser_vec_vec")]
    pub pmfs: Vec<Vec<f64>>,
    #[serde(serialize_with = "ser_vec_vec")]
    pub values: Vec<Vec<f64>>,
    #[serde(serialize_with = "ser_map")]
    pub params: BTreeMap<String, f64>,
    #[serde(serialize_with = "ser_f64")]
    pub residual: f64,
}

impl Witness {
    pub fn new(psi: Option<KnSpec>, residual: f64) -> Self {
        Self {
            psi,
            pmfs: Vec::new(),
            values: Vec::new(),
            params: BTreeMap::new(),
            residual,
        }
    }

    pub fn with_pmf(mut self, probs: &[f64]) -> Self {
        self.pmfs.push(probs.to_vec());
        self
    }

    pub fn with_values(mut self, values: &[f64]) -> Self {
        self.values.push(values.to_vec());
        self
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub verdict: Verdict,
    #[serde(serialize_with = "ser_f64")]
    pub max_residual: f64,
    pub trials_run: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serialization is infallible")
    }
}

/// Tracks the worst residual over a sequence of trials. Ties keep the
/// earliest trial, so the outcome does not depend on evaluation order.
#[derive(Debug, Clone)]
pub(crate) struct Extremum {
    pub residual: f64,
    pub trial: Option<u64>,
    pub witness: Option<Witness>,
}

impl Extremum {
    pub fn new() -> Self {
        Self {
            residual: 0.0,
            trial: None,
            witness: None,
        }
    }

    pub fn offer(&mut self, trial: u64, residual: f64, witness: impl FnOnce() -> Witness) {
        let better = residual > self.residual || (residual.is_nan() && !self.residual.is_nan());
        if self.trial.is_none() || better {
            self.residual = residual;
            self.trial = Some(trial);
            self.witness = Some(witness());
        }
    }
}

/// Residual thresholds and search budget shared by every check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabConfig {
    pub budget: u64,
    pub seed: u64,
    pub pass_threshold: f64,
    pub counterexample_threshold: f64,
}

impl LabConfig {
    pub fn new(budget: u64, seed: u64) -> Self {
        Self {
            budget,
            seed,
            pass_threshold: DEFAULT_PASS_THRESHOLD,
            counterexample_threshold: DEFAULT_COUNTEREXAMPLE_THRESHOLD,
        }
    }

    /// Verdict for an "if"-direction suite that may legitimately pass.
    pub fn classify(&self, max_residual: f64) -> Verdict {
        if max_residual <= self.pass_threshold {
            Verdict::Pass
        } else if max_residual > self.counterexample_threshold || max_residual.is_nan() {
            Verdict::CounterexampleFound
        } else {
            Verdict::Inconclusive
        }
    }

    /// Verdict for a pure counterexample search, which can never pass.
    pub fn classify_search(&self, max_residual: f64) -> Verdict {
        if max_residual > self.counterexample_threshold {
            Verdict::CounterexampleFound
        } else {
            Verdict::Inconclusive
        }
    }

    pub(crate) fn report(&self, theorem_id: String, verdict: Verdict, ext: Extremum, trials: u64) -> VerificationReport {
        let witness = match verdict {
            Verdict::CounterexampleFound => ext.witness,
            _ => None,
        };
        VerificationReport {
            theorem_id,
            verdict,
            max_residual: ext.residual,
            trials_run: trials,
            seed: self.seed,
            witness,
            note: None,
        }
    }
}

impl Default for LabConfig {
    fn default() -> Self {
        Self::new(1000, 0)
    }
}
