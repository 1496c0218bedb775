//! The subexponential estimator: set-level λ estimation, the branching
//! process over oracle subsets, and phase-two scoring of candidate sets.

mod branch;
mod phase_two;
mod setlambda;

use rayon::prelude::*;

pub use branch::{branching_process, BranchOutcome, BranchParams};
pub use phase_two::{exact_phase_two_score, phase_two, phase_two_plan, CandidateResult, PhaseTwoPlan, Scoring};
pub use setlambda::{estimate_set_lambdas, set_lambda_plan, set_levels, SetLambdaEstimates};

use crate::bits::coords_of;
use crate::boolfn::BooleanFunction;
use crate::budget::Budget;
use crate::error::{PhaseExt, Result};
use crate::oracles::OracleProvider;
use crate::prune::{check_eps, reduce_oracles};
use crate::report::{Estimate, EstimateKind, PhaseMeter};
use crate::seed::SeedStream;

/// Failure probability allotted to each pipeline stage.
const STAGE_DELTA: f64 = 1.0 / 20.0;

/// Distance to k-juntas: provider → reduce → branch → phase two, all at
/// ε₀ = ε/6. Returns α = (1 − min(c̃, 1))/2 for the best candidate.
pub fn distance_estimate(
    f: &BooleanFunction,
    k: usize,
    eps: f64,
    provider: &dyn OracleProvider,
    budget: &Budget,
    seeds: SeedStream,
) -> Result<Estimate> {
    check_eps(eps, k)?;
    let eps0 = eps / 6.0;
    let params = BranchParams::for_distance(k, eps0, STAGE_DELTA, budget);
    let scoring = Scoring::correlation(k, eps0);
    let (best, mut est) = pipeline(f, k, eps0, params, scoring, provider, budget, seeds)?;
    est.kind = EstimateKind::Distance;
    est.value = (1.0 - best.min(1.0)) / 2.0;
    est.corr = Some(best);
    Ok(est)
}

/// Largest Fourier mass on at most k variables, via the same pipeline with
/// κ = ⌈√k⌉ and truncated-mass scoring.
pub fn mass_estimate(
    f: &BooleanFunction,
    k: usize,
    eps: f64,
    provider: &dyn OracleProvider,
    budget: &Budget,
    seeds: SeedStream,
) -> Result<Estimate> {
    check_eps(eps, k)?;
    let eps0 = eps / 6.0;
    let params = BranchParams::for_mass(k, eps0, STAGE_DELTA, budget);
    let scoring = Scoring::Mass { kappa: params.kappa };
    let (best, mut est) = pipeline(f, k, eps0, params, scoring, provider, budget, seeds)?;
    est.kind = EstimateKind::Mass;
    est.value = best;
    Ok(est)
}

#[allow(clippy::too_many_arguments)]
fn pipeline(
    f: &BooleanFunction,
    k: usize,
    eps0: f64,
    params: BranchParams,
    scoring: Scoring,
    provider: &dyn OracleProvider,
    budget: &Budget,
    seeds: SeedStream,
) -> Result<(f64, Estimate)> {
    let mut phases = Vec::new();

    let mut meter = PhaseMeter::start("provider", f, None);
    let set = provider.provide(f, k, eps0, budget, seeds.derive("provider")).phase("provider")?;
    meter.note("oracles", set.len());
    phases.push(meter.finish());

    let mut meter = PhaseMeter::start("reduce", f, Some(&set));
    let reduced =
        reduce_oracles(f, &set, k, eps0, STAGE_DELTA, budget, seeds.derive("reduce")).phase("reduce")?;
    meter.note("rounds_planned", reduced.rounds_planned);
    meter.note("rounds_run", reduced.rounds_run);
    meter.note("zero_mass_rounds", reduced.zero_mass_rounds);
    meter.note("kept", reduced.chosen.len());
    phases.push(meter.finish());
    let pool = set.select(&reduced.chosen);

    let mut meter = PhaseMeter::start("branch", f, Some(&set));
    let tree = branching_process(f, &pool, k, eps0, STAGE_DELTA, params, budget, seeds.derive("branch"))
        .phase("branch")?;
    meter.note("kappa", params.kappa);
    meter.note("alpha", params.alpha);
    meter.note("r", params.r);
    meter.note("depth_cap", params.depth_cap);
    meter.note("nodes_expanded", tree.nodes_expanded);
    meter.note("zero_mass_nodes", tree.zero_mass_nodes);
    phases.push(meter.finish());

    let mut meter = PhaseMeter::start("phase_two", f, Some(&set));
    let delta_b = STAGE_DELTA / tree.candidates.len() as f64;
    let scored = tree
        .candidates
        .par_iter()
        .map(|&b| phase_two(f, &pool, b, k, eps0, delta_b, scoring, budget, seeds.derive("phase_two").index(b)))
        .collect::<Result<Vec<_>>>()
        .phase("phase_two")?;
    let all: Vec<CandidateResult> = scored.into_iter().flatten().collect();
    // highest estimate, smallest pool mask on ties
    let best = all
        .iter()
        .min_by(|a, b| b.estimate.total_cmp(&a.estimate).then(a.set.cmp(&b.set)))
        .cloned()
        .expect("phase two scores at least one candidate per leaf");
    meter.note("candidates", all.len());
    meter.note("leaf", pool.harness_mask(coords_of(best.leaf)));
    meter.note("cutoff", scoring.cutoff());
    phases.push(meter.finish());

    let est = Estimate {
        value: best.estimate,
        kind: EstimateKind::Distance,
        corr: None,
        k_prime: pool.len(),
        best_set: Some(pool.harness_mask(coords_of(best.set))),
        c_tilde: Some(best.estimate),
        candidates_examined: Some(all.len() as u64),
        branch_leaves: Some(tree.leaves),
        phases,
    };
    Ok((best.estimate, est))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{make_function, FunctionKind};
    use crate::oracles::SimulatedProvider;

    fn desk() -> Budget {
        Budget::desk()
    }

    #[test]
    fn constant_is_distance_zero() {
        let f = make_function(&FunctionKind::Constant(1), 8).unwrap();
        let est = distance_estimate(&f, 2, 0.2, &SimulatedProvider::default(), &desk(), SeedStream::new(1)).unwrap();
        assert!(est.value < 0.05, "{}", est.value);
        let names: Vec<_> = est.phases.iter().map(|p| p.phase.as_str()).collect();
        assert_eq!(names, ["provider", "reduce", "branch", "phase_two"]);
    }

    #[test]
    fn full_parity_is_half() {
        let f = make_function(&FunctionKind::Parity(0xff), 8).unwrap();
        let est = distance_estimate(&f, 2, 0.2, &SimulatedProvider::default(), &desk(), SeedStream::new(2)).unwrap();
        assert!((est.value - 0.5).abs() <= 0.2, "{}", est.value);
    }

    #[test]
    fn parity_mass_is_one() {
        let f = make_function(&FunctionKind::Parity(0b10010), 8).unwrap();
        let est = mass_estimate(&f, 2, 0.2, &SimulatedProvider::default(), &desk(), SeedStream::new(3)).unwrap();
        assert!((est.value - 1.0).abs() <= 0.2, "{}", est.value);
        assert_eq!(est.kind, EstimateKind::Mass);
    }
}
