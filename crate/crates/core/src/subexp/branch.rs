use std::collections::{BTreeSet, VecDeque};

use rand::Rng as _;
use serde::Serialize;

use super::setlambda::{estimate_set_lambdas, set_lambda_plan};
use crate::bits::{binomial, coords_of, deposit, low_mask, mask_of};
use crate::boolfn::BooleanFunction;
use crate::budget::Budget;
use crate::error::Result;
use crate::oracles::{sampler_budget, ImplicitJunta, OracleSet};
use crate::prune::SamplingDistribution;
use crate::seed::SeedStream;

/// Shape parameters of the branching process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchParams {
    pub kappa: usize,
    pub alpha: usize,
    /// Samples M₁..M_r per node.
    pub r: usize,
    pub depth_cap: usize,
}

impl BranchParams {
    /// κ = max(1, ⌈√(εk)⌉) unless overridden; α = ⌈k/κ⌉; r = ⌈C_r/ε²⌉;
    /// depth cap 3α + ⌈log₂(2/δ)⌉.
    pub fn for_distance(k: usize, eps: f64, delta: f64, budget: &Budget) -> Self {
        let kappa = budget.kappa.unwrap_or_else(|| ((eps * k as f64).sqrt().ceil() as usize).max(1)).clamp(1, k);
        Self::with_kappa(k, kappa, eps, delta, budget)
    }

    /// κ = ⌈√k⌉ unless overridden.
    pub fn for_mass(k: usize, eps: f64, delta: f64, budget: &Budget) -> Self {
        let kappa = budget.kappa.unwrap_or_else(|| (k as f64).sqrt().ceil() as usize).clamp(1, k);
        Self::with_kappa(k, kappa, eps, delta, budget)
    }

    fn with_kappa(k: usize, kappa: usize, eps: f64, delta: f64, budget: &Budget) -> Self {
        let alpha = k.div_ceil(kappa);
        let r = budget.branch_samples.unwrap_or_else(|| (budget.branch_constant / (eps * eps)).ceil() as usize);
        let depth_cap = budget.depth.unwrap_or(3 * alpha + (2.0 / delta).log2().ceil() as usize);
        Self { kappa, alpha, r, depth_cap }
    }

    /// ln ℓ with ℓ = 2(r+1)^{depth cap}, the declared node bound.
    pub fn ln_node_bound(&self) -> f64 {
        2f64.ln() + self.depth_cap as f64 * ((self.r + 1) as f64).ln()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchOutcome {
    /// Candidate sets B as masks over pool indices, increasing.
    pub candidates: Vec<u64>,
    pub nodes_expanded: u64,
    pub leaves: u64,
    pub zero_mass_nodes: u64,
    pub params: BranchParams,
}

/// Branching process over the oracle pool, breadth first, with nodes carrying the
/// same accumulated set merged. Every visited set is returned: a node's M = ∅
/// chain ends in a leaf carrying the same set.
#[allow(clippy::too_many_arguments)]
pub fn branching_process(
    f: &BooleanFunction,
    pool: &OracleSet,
    k: usize,
    eps: f64,
    delta: f64,
    params: BranchParams,
    budget: &Budget,
    seeds: SeedStream,
) -> Result<BranchOutcome> {
    let BranchParams { kappa, r, depth_cap, .. } = params;
    let accuracy = eps * eps / (48.0 * binomial(pool.len(), kappa).max(1.0));
    let node_delta = (delta / 2.0 * (-params.ln_node_bound()).exp()).max(f64::MIN_POSITIVE);
    let steps = sampler_budget(pool.len(), budget.sampler_constant, budget.sampler_delta);

    let mut seen: BTreeSet<u64> = BTreeSet::from([0]);
    let mut candidates: BTreeSet<u64> = BTreeSet::new();
    let mut queue = VecDeque::from([(0u64, 0usize)]);
    let (mut expanded, mut leaves, mut zero_mass) = (0u64, 0u64, 0u64);

    while let Some((chosen, depth)) = queue.pop_front() {
        candidates.insert(chosen);
        if depth >= depth_cap || chosen.count_ones() as usize > k.saturating_sub(kappa) {
            leaves += 1;
            continue;
        }
        expanded += 1;
        let fixed = coords_of(chosen);
        let free = coords_of(low_mask(pool.len()) & !chosen);
        let node_seeds = seeds.index(chosen);
        let mut rng = node_seeds.derive("node").rng();
        let z = rng.gen::<u64>() & low_mask(fixed.len());
        let a = ImplicitJunta::new(f, pool, &free, &fixed, z, steps)?;
        let cfg = set_lambda_plan(free.len(), kappa, k, accuracy, node_delta, budget)?;
        let est = estimate_set_lambdas(&a, kappa, &cfg, node_seeds.derive("lambda"))?;
        let dist = SamplingDistribution::new(&est.values);
        if dist.is_zero() {
            zero_mass += 1;
        }
        let free_mask = mask_of(&free);
        for _ in 0..r {
            let Some(u) = dist.sample(&mut rng) else { break };
            let child = chosen | deposit(est.subsets[u], free_mask);
            if seen.insert(child) {
                queue.push_back((child, depth + 1));
            }
        }
    }
    Ok(BranchOutcome {
        candidates: candidates.into_iter().collect(),
        nodes_expanded: expanded,
        leaves,
        zero_mass_nodes: zero_mass,
        params,
    })
}
