use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{chi, low_mask};
use crate::budget::{horizon, sign_mean_samples, unit_mean_samples, Budget};
use crate::error::{Error, Result};
use crate::fourier::BoundedEvaluator;
use crate::seed::{Rng, SeedStream};

/// Sample plan for a restriction-based λ estimator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaConfig {
    pub k: usize,
    pub accuracy: f64,
    pub delta: f64,
    /// Restrictions per level.
    pub restrictions: usize,
    /// Evaluator samples per restriction.
    pub samples: usize,
    pub levels: usize,
}

impl LambdaConfig {
    /// Counts implied by Hoeffding for `arity` inputs: per-level squared means
    /// to accuracy/(2L), per-coefficient error accuracy/(6L), where L is the
    /// level count. `loose` scales the accuracy; budget counts override.
    pub fn plan(arity: usize, k: usize, accuracy: f64, delta: f64, budget: &Budget) -> Result<Self> {
        Self::plan_levels(arity.max(1), horizon(k) + 1, k, accuracy, delta, budget)
    }

    pub(crate) fn plan_levels(
        targets: usize,
        levels: usize,
        k: usize,
        accuracy: f64,
        delta: f64,
        budget: &Budget,
    ) -> Result<Self> {
        if accuracy <= 0.0 || !(delta > 0.0 && delta < 1.0) {
            return Err(Error::input(format!("need accuracy > 0 and δ ∈ (0,1), got {accuracy}, {delta}")));
        }
        let acc = budget.scaled(accuracy);
        let l = levels as f64;
        let restrictions = budget
            .restrictions
            .unwrap_or_else(|| unit_mean_samples(acc / (2.0 * l), delta / (2.0 * targets as f64 * l)));
        let samples = budget.coef_samples.unwrap_or_else(|| {
            sign_mean_samples(acc / (6.0 * l), delta / (2.0 * l * restrictions as f64 * targets as f64))
        });
        Ok(Self { k, accuracy, delta, restrictions, samples, levels })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaEstimates {
    pub values: Vec<f64>,
    /// `per_level[d][i]`: average squared first-level coefficient at level d
    /// (unbiased, so individual levels can dip below zero).
    pub per_level: Vec<Vec<f64>>,
    pub config: LambdaConfig,
}

/// Random restriction keeping each of `n` coordinates with probability `keep`,
/// returned as (live mask, fixed bits).
pub(crate) fn draw_restriction(n: usize, keep: f64, rng: &mut Rng) -> (u64, u64) {
    let mut live = 0u64;
    for j in 0..n {
        if keep >= 1.0 || rng.gen::<f64>() < keep {
            live |= 1 << j;
        }
    }
    let fixed = rng.gen::<u64>() & low_mask(n) & !live;
    (live, fixed)
}

/// Restriction-based influence estimate: λ̃_i = Σ_d mean over 2^{-d}-random restrictions of the squared
/// estimated coefficient f̂_{J̄→z}({i}), clamped at zero.
pub fn estimate_lambdas(a: &dyn BoundedEvaluator, cfg: &LambdaConfig, seeds: SeedStream) -> Result<LambdaEstimates> {
    if cfg.restrictions == 0 || cfg.samples == 0 {
        return Err(Error::input("restriction and sample counts must be positive"));
    }
    let n = a.arity();
    let singletons: Vec<u64> = (0..n).map(|j| 1 << j).collect();
    let per_level = estimate_set_levels(a, &singletons, |d| 0.5f64.powi(d as i32), cfg, seeds)?;
    let values = (0..n).map(|i| per_level.iter().map(|l| l[i]).sum::<f64>().max(0.0)).collect();
    Ok(LambdaEstimates { values, per_level, config: cfg.clone() })
}

/// Unbiased estimate of c² from the sum `v` of `s` independent ±1 samples with
/// mean c: the pairwise U-statistic (v² − s)/(s(s−1)). Squaring the sample
/// mean instead would add (1 − c²)/s per level and set, which dominates the
/// error once many levels are summed. May be slightly negative.
pub(crate) fn square_estimate(v: i64, s: usize) -> f64 {
    let (v, s) = (v as f64, s as f64);
    if s < 2.0 {
        (v / s).powi(2)
    } else {
        (v * v - s) / (s * (s - 1.0))
    }
}

/// Estimates of squared restricted coefficients on the given sets, used by
/// the set-level estimator: `sets` are masks over the evaluator's inputs.
pub(crate) fn estimate_set_levels(
    a: &dyn BoundedEvaluator,
    sets: &[u64],
    keep_at: impl Fn(usize) -> f64 + Sync,
    cfg: &LambdaConfig,
    seeds: SeedStream,
) -> Result<Vec<Vec<f64>>> {
    let n = a.arity();
    let mut per_level = Vec::with_capacity(cfg.levels);
    for d in 0..cfg.levels {
        let keep = keep_at(d);
        let level_seeds = seeds.index(d as u64);
        let trials: Vec<Vec<f64>> = (0..cfg.restrictions)
            .into_par_iter()
            .map(|r| {
                let mut rng = level_seeds.index(r as u64).rng();
                let (live, fixed) = draw_restriction(n, keep, &mut rng);
                let inside: Vec<usize> = (0..sets.len()).filter(|&u| sets[u] & !live == 0).collect();
                let mut acc = vec![0i64; sets.len()];
                if !inside.is_empty() {
                    for _ in 0..cfg.samples {
                        let x = (rng.gen::<u64>() & live) | fixed;
                        let y = a.sample(x, &mut rng)? as i64;
                        for &u in &inside {
                            acc[u] += y * chi(sets[u], x) as i64;
                        }
                    }
                }
                let mut sq = vec![0.0; sets.len()];
                for &u in &inside {
                    sq[u] = square_estimate(acc[u], cfg.samples);
                }
                Ok(sq)
            })
            .collect::<Result<_>>()?;
        let mut level = vec![0.0; sets.len()];
        for t in &trials {
            level.iter_mut().zip(t).for_each(|(l, v)| *l += v);
        }
        level.iter_mut().for_each(|l| *l /= cfg.restrictions as f64);
        per_level.push(level);
    }
    Ok(per_level)
}

/// Weights proportional to clamped estimates; inverse-CDF sampling in index order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplingDistribution {
    weights: Vec<f64>,
    total: f64,
}

impl SamplingDistribution {
    pub fn new(values: &[f64]) -> Self {
        let weights: Vec<f64> = values.iter().map(|&v| if v.is_finite() && v > 0.0 { v } else { 0.0 }).collect();
        let total = weights.iter().sum();
        Self { weights, total }
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn is_zero(&self) -> bool {
        self.total <= 0.0
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `None` when the total mass is zero.
    pub fn sample(&self, rng: &mut Rng) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut u = rng.gen::<f64>() * self.total;
        let mut last = None;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > 0.0 {
                if u < w {
                    return Some(i);
                }
                u -= w;
                last = Some(i);
            }
        }
        last
    }
}
