use rand::Rng as _;

use crate::bits::{chi, low_mask};
use crate::boolfn::BooleanFunction;
use crate::budget::sign_mean_samples;
use crate::error::{Error, Result};
use crate::seed::{Rng, SeedStream};

/// Randomized ±1 evaluator of a bounded function g : {±1}^n → [−1, 1]:
/// `sample(x)` has expectation g(x), independently across calls.
pub trait BoundedEvaluator: Send + Sync {
    fn arity(&self) -> usize;
    fn sample(&self, x: u64, rng: &mut Rng) -> Result<i8>;
}

impl BoundedEvaluator for BooleanFunction {
    fn arity(&self) -> usize {
        BooleanFunction::arity(self)
    }

    fn sample(&self, x: u64, _rng: &mut Rng) -> Result<i8> {
        Ok(self.query(x))
    }
}

/// Mean of `samples` draws of y·χ_S(x) with x uniform.
pub fn estimate_coefficient_with(a: &dyn BoundedEvaluator, s: u64, samples: usize, rng: &mut Rng) -> Result<f64> {
    let mask = low_mask(a.arity());
    let mut acc = 0i64;
    for _ in 0..samples {
        let x = rng.gen::<u64>() & mask;
        acc += (a.sample(x, rng)? * chi(s, x)) as i64;
    }
    Ok(acc as f64 / samples as f64)
}

/// f̂(S) to ±ε with probability ≥ 1−δ, sized by Hoeffding for ±1 samples.
pub fn estimate_coefficient(a: &dyn BoundedEvaluator, s: u64, eps: f64, delta: f64, seeds: SeedStream) -> Result<f64> {
    if eps <= 0.0 || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::input(format!("need ε > 0 and δ ∈ (0,1), got ε={eps}, δ={delta}")));
    }
    if s & !low_mask(a.arity()) != 0 {
        return Err(Error::input("coefficient set exceeds the evaluator arity"));
    }
    estimate_coefficient_with(a, s, sign_mean_samples(eps, delta), &mut seeds.rng())
}

/// Randomized evaluator of f_avg,T: keep x on T, rerandomize the rest.
#[derive(Debug, Clone)]
pub struct ProjectAvg {
    f: BooleanFunction,
    keep: u64,
}

pub fn project_avg(f: &BooleanFunction, t: u64) -> Result<ProjectAvg> {
    if t & !low_mask(f.arity()) != 0 {
        return Err(Error::input("projection set exceeds the arity"));
    }
    Ok(ProjectAvg { f: f.clone(), keep: t })
}

impl BoundedEvaluator for ProjectAvg {
    fn arity(&self) -> usize {
        self.f.arity()
    }

    fn sample(&self, x: u64, rng: &mut Rng) -> Result<i8> {
        let fresh = rng.gen::<u64>() & low_mask(self.f.arity()) & !self.keep;
        Ok(self.f.query((x & self.keep) | fresh))
    }
}
