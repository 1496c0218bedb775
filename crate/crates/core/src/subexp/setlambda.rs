use serde::Serialize;

use crate::bits::{binomial, low_mask, subsets_of_size};
use crate::budget::{horizon, Budget};
use crate::error::{Error, Result};
use crate::fourier::BoundedEvaluator;
use crate::prune::{estimate_set_levels, LambdaConfig};
use crate::seed::SeedStream;

#[derive(Debug, Clone, Serialize)]
pub struct SetLambdaEstimates {
    pub kappa: usize,
    /// Restriction parameter p = 1 − 1/(2κ); level d keeps coordinates w.p. p^d.
    pub p: f64,
    pub levels: usize,
    /// All size-κ subsets of the evaluator's inputs, increasing.
    pub subsets: Vec<u64>,
    pub values: Vec<f64>,
    pub config: LambdaConfig,
}

impl SetLambdaEstimates {
    pub fn get(&self, u: u64) -> Option<f64> {
        self.subsets.binary_search(&u).ok().map(|i| self.values[i])
    }
}

pub fn set_levels(kappa: usize, k: usize) -> usize {
    2 * kappa * horizon(k) + 1
}

/// Sample plan for the set-level estimator over an evaluator with `arity` inputs.
pub fn set_lambda_plan(
    arity: usize,
    kappa: usize,
    k: usize,
    accuracy: f64,
    delta: f64,
    budget: &Budget,
) -> Result<LambdaConfig> {
    let targets = binomial(arity, kappa).max(1.0) as usize;
    LambdaConfig::plan_levels(targets, set_levels(kappa, k), k, accuracy, delta, budget)
}

/// Set-level estimate: λ̃_U for every size-κ U, from squared estimates of f̂_{J̄→z}(U)
/// under p^d-random restrictions, d = 0..2κ⌈log₂(10k)⌉.
pub fn estimate_set_lambdas(
    a: &dyn BoundedEvaluator,
    kappa: usize,
    cfg: &LambdaConfig,
    seeds: SeedStream,
) -> Result<SetLambdaEstimates> {
    if kappa == 0 {
        return Err(Error::input("κ must be at least 1"));
    }
    if cfg.restrictions == 0 || cfg.samples == 0 {
        return Err(Error::input("restriction and sample counts must be positive"));
    }
    let n = a.arity();
    let p = 1.0 - 1.0 / (2.0 * kappa as f64);
    let subsets: Vec<u64> = if kappa <= n { subsets_of_size(low_mask(n), kappa).collect() } else { Vec::new() };
    let per_level = if subsets.is_empty() {
        Vec::new()
    } else {
        estimate_set_levels(a, &subsets, |d| p.powi(d as i32), cfg, seeds)?
    };
    let values = (0..subsets.len()).map(|u| per_level.iter().map(|l| l[u]).sum::<f64>().max(0.0)).collect();
    Ok(SetLambdaEstimates { kappa, p, levels: cfg.levels, subsets, values, config: cfg.clone() })
}
