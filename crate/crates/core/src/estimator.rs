//! Named estimation strategies behind one interface, so callers (the CLI, the
//! acceptance harness) can pick a pipeline by name.

use crate::boolfn::BooleanFunction;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::oracles::OracleProvider;
use crate::prune::relaxed_distance_estimate;
use crate::report::Estimate;
use crate::seed::SeedStream;
use crate::subexp::{distance_estimate, mass_estimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateParams {
    pub k: usize,
    pub eps: f64,
}

pub trait Estimator: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn estimate(
        &self,
        f: &BooleanFunction,
        params: EstimateParams,
        provider: &dyn OracleProvider,
        budget: &Budget,
        seeds: SeedStream,
    ) -> Result<Estimate>;
}

struct Relaxed;
struct Subexp;
struct Mass;

impl Estimator for Relaxed {
    fn name(&self) -> &'static str {
        "relaxed"
    }
    fn description(&self) -> &'static str {
        "distance to O(k/ε²)-juntas, poly(k/ε) queries"
    }
    fn estimate(&self, f: &BooleanFunction, p: EstimateParams, provider: &dyn OracleProvider, budget: &Budget, seeds: SeedStream) -> Result<Estimate> {
        relaxed_distance_estimate(f, p.k, p.eps, provider, budget, seeds)
    }
}

impl Estimator for Subexp {
    fn name(&self) -> &'static str {
        "subexp"
    }
    fn description(&self) -> &'static str {
        "distance to k-juntas via branching and damped low-degree scoring"
    }
    fn estimate(&self, f: &BooleanFunction, p: EstimateParams, provider: &dyn OracleProvider, budget: &Budget, seeds: SeedStream) -> Result<Estimate> {
        distance_estimate(f, p.k, p.eps, provider, budget, seeds)
    }
}

impl Estimator for Mass {
    fn name(&self) -> &'static str {
        "mass"
    }
    fn description(&self) -> &'static str {
        "largest Fourier mass on at most k variables"
    }
    fn estimate(&self, f: &BooleanFunction, p: EstimateParams, provider: &dyn OracleProvider, budget: &Budget, seeds: SeedStream) -> Result<Estimate> {
        mass_estimate(f, p.k, p.eps, provider, budget, seeds)
    }
}

#[derive(Default)]
pub struct EstimatorRegistry {
    entries: Vec<Box<dyn Estimator>>,
}

impl EstimatorRegistry {
    pub fn with_defaults() -> Self {
        let mut r = Self::default();
        r.register(Box::new(Relaxed));
        r.register(Box::new(Subexp));
        r.register(Box::new(Mass));
        r
    }

    /// Adds a strategy, replacing any existing one with the same name.
    pub fn register(&mut self, e: Box<dyn Estimator>) {
        self.entries.retain(|x| x.name() != e.name());
        self.entries.push(e);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Estimator> {
        self.entries
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::input(format!("unknown estimator '{name}' (known: {})", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Estimator> {
        self.entries.iter().map(|e| e.as_ref())
    }
}
