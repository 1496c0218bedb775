use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{CoordinateOracle, Correction, OracleSet};
use crate::boolfn::BooleanFunction;
use crate::budget::{majority_reps, Budget};
use crate::error::{Error, Result};
use crate::fourier::FourierSpectrum;
use crate::seed::SeedStream;

/// Source of coordinate oracles covering every coordinate with
/// Inf_i^{≤k}[f] ≥ ε²/k (possibly more).
pub trait OracleProvider: Send + Sync {
    fn name(&self) -> &'static str;
    fn provide(&self, f: &BooleanFunction, k: usize, eps: f64, budget: &Budget, seeds: SeedStream) -> Result<OracleSet>;
}

/// Stand-in provider: selects coordinates by exact low-degree influence and
/// wraps each in a ν-corrupted, randomly signed dictator. It reads the truth
/// table directly, so it is charged no queries to f.
#[derive(Debug, Clone, Default)]
pub struct SimulatedProvider {
    /// Explicit coordinates (0-based) to use instead of thresholding.
    pub coords: Option<Vec<usize>>,
}

impl SimulatedProvider {
    pub fn with_coords(coords: Vec<usize>) -> Self {
        Self { coords: Some(coords) }
    }

    /// {i : Inf_i^{≤k}[f] ≥ ε²/k}, ascending.
    pub fn influential(spec: &FourierSpectrum, k: usize, eps: f64) -> Vec<usize> {
        let tau = eps * eps / k.max(1) as f64;
        (0..spec.arity()).filter(|&i| spec.influence(i, Some(k)) >= tau - 1e-12).collect()
    }
}

impl OracleProvider for SimulatedProvider {
    fn name(&self) -> &'static str {
        "simulated"
    }

    fn provide(&self, f: &BooleanFunction, k: usize, eps: f64, budget: &Budget, seeds: SeedStream) -> Result<OracleSet> {
        let mut coords = match &self.coords {
            Some(c) => c.clone(),
            None => {
                let spec = FourierSpectrum::of(f).map_err(|_| {
                    Error::unsupported("simulated oracle provider needs a truth table or an explicit coordinate list")
                })?;
                Self::influential(&spec, k, eps)
            }
        };
        let mut rng = seeds.derive("provider").rng();
        // presentation order carries no information about the coordinates
        coords.shuffle(&mut rng);
        let oracles = coords
            .iter()
            .map(|&c| CoordinateOracle::new(c, if rng.gen::<bool>() { 1 } else { -1 }, budget.nu, rng.gen()))
            .collect::<Result<Vec<_>>>()?;
        let correction = if budget.nu == 0.0 {
            Correction::Raw
        } else {
            Correction::Majority {
                reps: budget.correction_reps.map(|r| r | 1).unwrap_or_else(|| majority_reps(budget.query_budget, 0.01, budget.nu)),
            }
        };
        OracleSet::new(f.arity(), oracles, correction, seeds.derive("correction"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{make_function, plant_noisy_junta, FunctionKind};

    fn targets(set: &OracleSet) -> Vec<usize> {
        let mut t = set.harness_targets();
        t.sort_unstable();
        t
    }

    #[test]
    fn provider_examples() {
        let budget = Budget::default();
        let p = SimulatedProvider::default();
        let d = make_function(&FunctionKind::Dictator(0), 6).unwrap();
        assert_eq!(targets(&p.provide(&d, 1, 0.3, &budget, SeedStream::new(1)).unwrap()), vec![0]);
        let par = make_function(&FunctionKind::Parity(0b111), 6).unwrap();
        assert_eq!(targets(&p.provide(&par, 3, 0.3, &budget, SeedStream::new(1)).unwrap()), vec![0, 1, 2]);
        let maj = make_function(&FunctionKind::Majority(3), 8).unwrap();
        assert_eq!(targets(&p.provide(&maj, 3, 0.5, &budget, SeedStream::new(2)).unwrap()), vec![0, 1, 2]);
        let inst = plant_noisy_junta(10, 3, 0.0, 4).unwrap();
        let s = p.provide(&inst.realized, 3, 0.5, &budget, SeedStream::new(2)).unwrap();
        assert!(targets(&s).iter().all(|c| inst.support.contains(c)));
    }

    #[test]
    fn evaluator_backing_needs_coordinates() {
        let f = crate::boolfn::make_function_capped(&FunctionKind::Dictator(0), 8, 4).unwrap();
        let budget = Budget::default();
        assert!(matches!(
            SimulatedProvider::default().provide(&f, 1, 0.3, &budget, SeedStream::new(0)),
            Err(Error::Unsupported(_))
        ));
        let s = SimulatedProvider::with_coords(vec![0, 3]).provide(&f, 1, 0.3, &budget, SeedStream::new(0)).unwrap();
        assert_eq!(targets(&s), vec![0, 3]);
        assert_eq!(f.queries(), 0);
    }

    #[test]
    fn low_degree_threshold_keeps_the_best_junta() {
        // juntas on S lose at most τ against any |U| ≤ k
        use crate::exactref::{corr_on_set, exact_dist_to_juntas};
        for seed in 0..12u64 {
            let inst = plant_noisy_junta(9, 3, 0.15, seed).unwrap();
            let f = &inst.realized;
            let spec = FourierSpectrum::of(f).unwrap();
            let t = f.table().unwrap();
            for tau in [0.2, 0.4, 0.6] {
                let s = SimulatedProvider::influential(&spec, 3, tau);
                let mask = crate::bits::mask_of(&s);
                let best_on_s = crate::bits::subsets_of_size(mask, 3.min(s.len()))
                    .map(|u| corr_on_set(&t, u))
                    .fold(0.0, f64::max);
                let best = 1.0 - 2.0 * exact_dist_to_juntas(f, 3).unwrap().0;
                assert!(best_on_s >= best - tau - 1e-12, "seed {seed} τ {tau}");
            }
        }
    }
}
