//! Report records shared by the library pipelines and the CLI.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::boolfn::BooleanFunction;
use crate::exactref::GroundTruth;
use crate::oracles::OracleSet;

pub const SCHEMA_VERSION: u32 = 1;

/// Query accounting and notes for one pipeline stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagnostics {
    pub phase: String,
    /// Evaluations of f charged during the stage.
    pub queries: u64,
    /// Corrected oracle answers requested.
    pub oracle_queries: u64,
    /// Raw oracle evaluations performed (after caching).
    pub oracle_evals: u64,
    #[serde(default)]
    pub details: BTreeMap<String, Value>,
}

/// Snapshots counters at the start of a stage.
pub struct PhaseMeter<'a> {
    phase: &'static str,
    f: &'a BooleanFunction,
    set: Option<&'a OracleSet>,
    q0: u64,
    o0: u64,
    r0: u64,
    details: BTreeMap<String, Value>,
}

impl<'a> PhaseMeter<'a> {
    pub fn start(phase: &'static str, f: &'a BooleanFunction, set: Option<&'a OracleSet>) -> Self {
        Self {
            phase,
            f,
            set,
            q0: f.queries(),
            o0: set.map_or(0, OracleSet::queries),
            r0: set.map_or(0, OracleSet::raw_evals),
            details: BTreeMap::new(),
        }
    }

    pub fn note(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }

    pub fn finish(self) -> PhaseDiagnostics {
        PhaseDiagnostics {
            phase: self.phase.to_string(),
            queries: self.f.queries() - self.q0,
            oracle_queries: self.set.map_or(0, OracleSet::queries) - self.o0,
            oracle_evals: self.set.map_or(0, OracleSet::raw_evals) - self.r0,
            details: self.details,
        }
    }
}

/// What an estimator returns; the CLI wraps it into an [`EstimatorReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// Distance estimate α, or the subset-mass estimate for mass estimators.
    pub value: f64,
    pub kind: EstimateKind,
    /// Correlation estimate behind α, when the estimator produces one.
    pub corr: Option<f64>,
    /// Number of oracles the final stage worked with.
    pub k_prime: usize,
    /// Winning coordinate set (bit j ↔ coordinate j+1), for reporting only.
    pub best_set: Option<u64>,
    pub c_tilde: Option<f64>,
    pub candidates_examined: Option<u64>,
    pub branch_leaves: Option<u64>,
    pub phases: Vec<PhaseDiagnostics>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateKind {
    Distance,
    Mass,
}

impl Estimate {
    pub fn query_count(&self) -> u64 {
        self.phases.iter().map(|p| p.queries).sum()
    }
}

/// Comparison against exact references, filled when the instance is small enough.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthBlock {
    #[serde(flatten)]
    pub exact: GroundTruth,
    /// |estimate − exact| for the quantity the estimator targets.
    pub abs_error: f64,
    /// Exhaustive baseline 2^n·C(n,k) queries, for scale.
    pub exhaustive_queries: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorReport {
    pub schema_version: u32,
    pub estimator: String,
    pub alpha: Option<f64>,
    pub mass: Option<f64>,
    pub query_count: u64,
    pub k_prime: usize,
    pub best_set: Option<u64>,
    pub c_tilde: Option<f64>,
    pub candidates_examined: Option<u64>,
    pub branch_leaves: Option<u64>,
    pub phase_diagnostics: Vec<PhaseDiagnostics>,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
    pub seed: u64,
    pub config: Value,
    pub truth: Option<TruthBlock>,
    pub wall_time_ms: u64,
}
