//! Sample sizing and desk-scale budget overrides.
//!
//! Every count defaults to the value implied by the analysis (Hoeffding with
//! explicit ceilings). Those counts are astronomically large for realistic
//! accuracies, so a [`Budget`] can scale accuracy targets by `loose` or pin any
//! individual count. Reports echo the budget so off-spec runs are visible.

use serde::{Deserialize, Serialize};

/// Hoeffding: mean of [0,1]-valued samples within ±ε w.p. ≥ 1−δ.
pub fn unit_mean_samples(eps: f64, delta: f64) -> usize {
    ((2.0 / delta).ln() / (2.0 * eps * eps)).ceil().max(1.0) as usize
}

/// Hoeffding: mean of ±1-valued samples within ±ε w.p. ≥ 1−δ. The range is 2,
/// hence four times the [0,1] count.
pub fn sign_mean_samples(eps: f64, delta: f64) -> usize {
    (2.0 * (2.0 / delta).ln() / (eps * eps)).ceil().max(1.0) as usize
}

/// Odd repetition count making a majority of `g(y)·g(x·y)` wrong with
/// probability ≤ δ/q per corrected query.
pub fn majority_reps(query_budget: f64, delta: f64, nu: f64) -> usize {
    let gap = 0.5 - 2.0 * nu;
    let n = ((2.0 * query_budget / delta).ln() / (2.0 * gap * gap)).ceil().max(1.0) as usize;
    n | 1
}

/// M = ⌈log₂(10k)⌉: the last restriction level in λ estimation.
pub fn horizon(k: usize) -> usize {
    let target = 10 * k.max(1);
    (usize::BITS - (target - 1).leading_zeros()) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Multiplies every accuracy target before sample sizes are derived (1 = as analysed).
    pub loose: f64,
    /// Constant C in the oracle-reduction round count ⌈C(k + ln(1/δ))/ε²⌉.
    pub round_constant: f64,
    pub rounds: Option<usize>,
    /// Restrictions drawn per level when estimating λ.
    pub restrictions: Option<usize>,
    /// Evaluator samples per restriction when estimating restricted coefficients.
    pub coef_samples: Option<usize>,
    /// Constant C_r in the branching factor r = ⌈C_r/ε²⌉.
    pub branch_constant: f64,
    pub branch_samples: Option<usize>,
    pub corr_points: Option<usize>,
    pub corr_reps: Option<usize>,
    /// Constant C_t in the phase-two restriction count ⌈C_t·ln(2/δ)/ε²⌉.
    pub phase_two_constant: f64,
    pub phase_two_restrictions: Option<usize>,
    pub phase_two_samples: Option<usize>,
    /// Corruption rate of simulated coordinate oracles.
    pub nu: f64,
    /// Declared number of corrected oracle queries the failure budget must cover.
    pub query_budget: f64,
    pub correction_reps: Option<usize>,
    /// Constant c in the consistent-sampler step budget c·k′²·ln(k′/δ).
    pub sampler_constant: f64,
    pub sampler_delta: f64,
    pub kappa: Option<usize>,
    pub depth: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            loose: 1.0,
            round_constant: 30.0,
            rounds: None,
            restrictions: None,
            coef_samples: None,
            branch_constant: 40.0 * 10f64.ln(),
            branch_samples: None,
            corr_points: None,
            corr_reps: None,
            phase_two_constant: 2.0,
            phase_two_restrictions: None,
            phase_two_samples: None,
            nu: 0.1,
            query_budget: 1e9,
            correction_reps: None,
            sampler_constant: std::f64::consts::E,
            sampler_delta: 1e-9,
            kappa: None,
            depth: None,
        }
    }
}

impl Budget {
    /// Counts as analysed; only feasible for toy parameters.
    pub fn verbatim() -> Self {
        Self::default()
    }

    /// Pinned desk-scale profile: every sample count fixed to something that
    /// runs in seconds on one core at n ≤ 16. Accuracy guarantees no longer
    /// follow from the analysis; the acceptance suite measures them instead.
    pub fn desk() -> Self {
        Self {
            rounds: Some(8),
            restrictions: Some(24),
            coef_samples: Some(96),
            branch_samples: Some(4),
            corr_points: Some(256),
            corr_reps: Some(48),
            phase_two_restrictions: Some(24),
            phase_two_samples: Some(192),
            depth: Some(4),
            ..Self::default()
        }
    }

    pub fn scaled(&self, accuracy: f64) -> f64 {
        accuracy * self.loose
    }
}
