//! Single-coordinate λ estimation, oracle pruning and the relaxed
//! (poly-query) distance estimator.

mod lambda;

use rand::Rng as _;
use serde::Serialize;

use crate::bits::low_mask;
use crate::boolfn::BooleanFunction;
use crate::budget::{sign_mean_samples, unit_mean_samples, Budget};
use crate::error::{Error, PhaseExt, Result};
use crate::fourier::BoundedEvaluator;
use crate::oracles::{sampler_budget, ImplicitJunta, OracleProvider, OracleSet};
use crate::report::{Estimate, EstimateKind, PhaseMeter};
use crate::seed::SeedStream;

pub(crate) use lambda::estimate_set_levels;
pub use lambda::{estimate_lambdas, LambdaConfig, LambdaEstimates, SamplingDistribution};

pub(crate) fn check_eps(eps: f64, k: usize) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::input(format!("ε must lie in (0, 1/2), got {eps}")));
    }
    if k == 0 {
        return Err(Error::input("k must be at least 1"));
    }
    Ok(())
}

/// ⌈C(k + ln(1/δ))/ε²⌉ unless pinned by the budget.
pub fn reduce_rounds(k: usize, eps: f64, delta: f64, budget: &Budget) -> usize {
    budget
        .rounds
        .unwrap_or_else(|| (budget.round_constant * (k as f64 + (1.0 / delta).ln()) / (eps * eps)).ceil() as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReduceOutcome {
    /// Oracle indices in the order they were picked.
    pub chosen: Vec<usize>,
    pub rounds_planned: usize,
    pub rounds_run: usize,
    pub zero_mass_rounds: usize,
}

/// Oracle reduction: repeatedly pin the oracles picked so far to a fresh uniform z,
/// estimate λ over the remaining oracles of the implicit function, and pick one
/// proportionally to the estimates. Stops early once every oracle is picked.
pub fn reduce_oracles(
    f: &BooleanFunction,
    set: &OracleSet,
    k: usize,
    eps: f64,
    delta: f64,
    budget: &Budget,
    seeds: SeedStream,
) -> Result<ReduceOutcome> {
    let rounds = reduce_rounds(k, eps, delta, budget);
    let accuracy = eps * eps / (48.0 * set.len().max(1) as f64);
    let steps = sampler_budget(set.len(), budget.sampler_constant, budget.sampler_delta);
    let mut chosen: Vec<usize> = Vec::new();
    let mut zero_mass_rounds = 0;
    let mut rounds_run = 0;
    for round in 0..rounds {
        let free: Vec<usize> = (0..set.len()).filter(|i| !chosen.contains(i)).collect();
        if free.is_empty() {
            break;
        }
        rounds_run += 1;
        let round_seeds = seeds.index(round as u64);
        let mut rng = round_seeds.derive("pick").rng();
        let z = rng.gen::<u64>() & low_mask(chosen.len());
        let a = ImplicitJunta::new(f, set, &free, &chosen, z, steps)?;
        let cfg = LambdaConfig::plan(free.len(), k, accuracy, delta / (2.0 * rounds as f64), budget)?;
        let est = estimate_lambdas(&a, &cfg, round_seeds.derive("lambda"))?;
        match SamplingDistribution::new(&est.values).sample(&mut rng) {
            Some(i) => chosen.push(free[i]),
            None => zero_mass_rounds += 1,
        }
    }
    Ok(ReduceOutcome { chosen, rounds_planned: rounds, rounds_run, zero_mass_rounds })
}

/// (points, repetitions) for the correlation estimate.
pub fn corr_plan(eps: f64, delta: f64, budget: &Budget) -> (usize, usize) {
    let e = budget.scaled(eps);
    let points = budget.corr_points.unwrap_or_else(|| unit_mean_samples(e / 2.0, delta / 2.0));
    let reps = budget.corr_reps.unwrap_or_else(|| sign_mean_samples(e / 2.0, delta / (2.0 * points as f64)));
    (points, reps)
}

/// E_x |f_avg,S′(x)| estimated through implicit junta access on `chosen`.
pub fn estimate_best_junta_corr(
    f: &BooleanFunction,
    set: &OracleSet,
    chosen: &[usize],
    eps: f64,
    delta: f64,
    budget: &Budget,
    seeds: SeedStream,
) -> Result<f64> {
    let (points, reps) = corr_plan(eps, delta, budget);
    let steps = sampler_budget(chosen.len(), budget.sampler_constant, budget.sampler_delta);
    let a = ImplicitJunta::new(f, set, chosen, &[], 0, steps)?;
    let mut rng = seeds.rng();
    let mask = low_mask(chosen.len());
    let mut total = 0.0;
    for _ in 0..points {
        let x = rng.gen::<u64>() & mask;
        let mut acc = 0i64;
        for _ in 0..reps {
            acc += a.sample(x, &mut rng)? as i64;
        }
        total += (acc as f64 / reps as f64).abs();
    }
    Ok(total / points as f64)
}

/// Relaxed estimator: provider → reduce → correlation on the reduced set.
/// Returns α = (1 − corr)/2 with k′ = |𝒟′|.
pub fn relaxed_distance_estimate(
    f: &BooleanFunction,
    k: usize,
    eps: f64,
    provider: &dyn OracleProvider,
    budget: &Budget,
    seeds: SeedStream,
) -> Result<Estimate> {
    check_eps(eps, k)?;
    let mut phases = Vec::new();

    let meter = PhaseMeter::start("provider", f, None);
    let set = provider.provide(f, k, eps, budget, seeds.derive("provider")).phase("provider")?;
    let mut meter_done = meter;
    meter_done.note("oracles", set.len());
    phases.push(meter_done.finish());

    let mut meter = PhaseMeter::start("reduce", f, Some(&set));
    let reduced = reduce_oracles(f, &set, k, eps, 0.005, budget, seeds.derive("reduce")).phase("reduce")?;
    meter.note("rounds_planned", reduced.rounds_planned);
    meter.note("rounds_run", reduced.rounds_run);
    meter.note("zero_mass_rounds", reduced.zero_mass_rounds);
    meter.note("kept", reduced.chosen.len());
    phases.push(meter.finish());

    let mut meter = PhaseMeter::start("correlation", f, Some(&set));
    let corr = estimate_best_junta_corr(f, &set, &reduced.chosen, eps, 0.005, budget, seeds.derive("correlation"))
        .phase("correlation")?;
    let (points, reps) = corr_plan(eps, 0.005, budget);
    meter.note("points", points);
    meter.note("reps", reps);
    phases.push(meter.finish());

    Ok(Estimate {
        value: (1.0 - corr) / 2.0,
        kind: EstimateKind::Distance,
        corr: Some(corr),
        k_prime: reduced.chosen.len(),
        best_set: Some(set.harness_mask(reduced.chosen.iter().copied())),
        c_tilde: None,
        candidates_examined: None,
        branch_leaves: None,
        phases,
    })
}
