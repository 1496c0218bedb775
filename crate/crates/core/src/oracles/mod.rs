//! Coordinate oracles, local correction, the consistent-input sampler and
//! implicit junta access.

mod provider;
mod sampler;

use std::sync::atomic::{AtomicI8, AtomicU64, Ordering};
use std::sync::Arc;

use rand::Rng as _;
use serde::Serialize;

use crate::bits::{coord, low_mask};
use crate::error::{Error, Result};
use crate::seed::{mix, unit, SeedStream};

pub use provider::{OracleProvider, SimulatedProvider};
pub use sampler::{sample_consistent, sampler_budget, ImplicitJunta};

/// Arity up to which corrected oracle answers are cached per point.
pub const MEMO_CAP: usize = 20;

/// g(y) = σ·y_i, except on a fixed pseudo-random ν-fraction of inputs where the
/// answer is flipped. Algorithms see only `eval`; the target is harness-only.
#[derive(Debug, Clone)]
pub struct CoordinateOracle {
    target: usize,
    sign: i8,
    nu: f64,
    key: u64,
}

impl CoordinateOracle {
    pub fn new(target: usize, sign: i8, nu: f64, key: u64) -> Result<Self> {
        if !(0.0..0.5).contains(&nu) {
            return Err(Error::input(format!("oracle corruption rate {nu} outside [0, 1/2)")));
        }
        if sign.abs() != 1 || target >= 64 {
            return Err(Error::input("oracle sign must be ±1 and target < 64"));
        }
        Ok(Self { target, sign, nu, key })
    }

    pub fn exact(target: usize) -> Self {
        Self { target, sign: 1, nu: 0.0, key: 0 }
    }

    #[inline]
    pub fn eval(&self, y: u64) -> i8 {
        let v = self.sign * coord(y, self.target);
        if self.nu > 0.0 && unit(mix(self.key, y)) < self.nu {
            -v
        } else {
            v
        }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Nominal coordinate. Test harnesses only — estimators never read it.
    pub fn harness_target(&self) -> usize {
        self.target
    }

    pub fn harness_sign(&self) -> i8 {
        self.sign
    }
}

/// Majority of `reps` draws of g(y)·g(x·y), y uniform over {±1}^n.
pub fn local_correct(g: &CoordinateOracle, n: usize, x: u64, reps: usize, seeds: SeedStream) -> Result<i8> {
    if reps.is_multiple_of(2) {
        return Err(Error::input(format!("local correction needs an odd repetition count, got {reps}")));
    }
    Ok(correct_with(g, n, x, reps, seeds))
}

fn correct_with(g: &CoordinateOracle, n: usize, x: u64, reps: usize, seeds: SeedStream) -> i8 {
    let mut rng = seeds.rng();
    let mask = low_mask(n);
    let mut votes = 0i32;
    for _ in 0..reps {
        let y = rng.gen::<u64>() & mask;
        votes += (g.eval(y) * g.eval(x ^ y)) as i32;
    }
    if votes > 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Correction {
    /// Use raw oracle answers.
    Raw,
    /// Local correction with an odd number of repetitions per query.
    Majority { reps: usize },
}

#[derive(Debug, Default)]
struct Counters {
    requested: AtomicU64,
    raw: AtomicU64,
}

/// An ordered collection of coordinate oracles behind a correction policy.
///
/// Corrected answers draw their repetition randomness from a hash of
/// (set key, oracle, point), so the corrected oracle is a fixed function of the
/// point. That makes per-point caching a pure optimisation.
#[derive(Debug, Clone)]
pub struct OracleSet {
    n: usize,
    oracles: Vec<CoordinateOracle>,
    correction: Correction,
    key: u64,
    memo: Vec<Option<Arc<Vec<AtomicI8>>>>,
    counters: Arc<Counters>,
}

impl OracleSet {
    pub fn new(n: usize, oracles: Vec<CoordinateOracle>, correction: Correction, seeds: SeedStream) -> Result<Self> {
        let mut targets: Vec<usize> = oracles.iter().map(|o| o.target).collect();
        targets.sort_unstable();
        targets.dedup();
        if targets.len() != oracles.len() {
            return Err(Error::input("oracles must target distinct coordinates"));
        }
        if targets.last().is_some_and(|&t| t >= n) {
            return Err(Error::input("oracle target exceeds the arity"));
        }
        if oracles.len() > 64 {
            return Err(Error::unsupported("at most 64 oracles per set"));
        }
        if let Correction::Majority { reps } = correction {
            if reps.is_multiple_of(2) {
                return Err(Error::input(format!("correction repetitions must be odd, got {reps}")));
            }
        }
        let memo = oracles
            .iter()
            .map(|_| {
                (matches!(correction, Correction::Majority { .. }) && n <= MEMO_CAP)
                    .then(|| Arc::new((0..1usize << n).map(|_| AtomicI8::new(0)).collect()))
            })
            .collect();
        Ok(Self { n, oracles, correction, key: seeds.value(), memo, counters: Arc::default() })
    }

    /// Exact dictator oracles for the given coordinates, no correction.
    pub fn exact(n: usize, coords: &[usize]) -> Result<Self> {
        Self::new(n, coords.iter().map(|&c| CoordinateOracle::exact(c)).collect(), Correction::Raw, SeedStream::new(0))
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.oracles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oracles.is_empty()
    }

    pub fn correction(&self) -> Correction {
        self.correction
    }

    pub fn oracles(&self) -> &[CoordinateOracle] {
        &self.oracles
    }

    /// Sub-collection in the given order; shares caches and counters.
    pub fn select(&self, idx: &[usize]) -> Self {
        Self {
            n: self.n,
            oracles: idx.iter().map(|&i| self.oracles[i].clone()).collect(),
            correction: self.correction,
            key: self.key,
            memo: idx.iter().map(|&i| self.memo[i].clone()).collect(),
            counters: self.counters.clone(),
        }
    }

    /// Corrected answer of oracle `j` at point `y`.
    #[inline]
    pub fn query(&self, j: usize, y: u64) -> i8 {
        self.counters.requested.fetch_add(1, Ordering::Relaxed);
        let g = &self.oracles[j];
        match self.correction {
            Correction::Raw => {
                self.counters.raw.fetch_add(1, Ordering::Relaxed);
                g.eval(y)
            }
            Correction::Majority { reps } => {
                if let Some(memo) = &self.memo[j] {
                    let cached = memo[y as usize].load(Ordering::Relaxed);
                    if cached != 0 {
                        return cached;
                    }
                }
                let seeds = SeedStream::new(mix(self.key ^ g.key, y));
                let v = correct_with(g, self.n, y, reps, seeds);
                // Charge a point once even if two workers race to fill it, so
                // the count does not depend on scheduling.
                let first = self.memo[j]
                    .as_ref()
                    .is_none_or(|memo| memo[y as usize].compare_exchange(0, v, Ordering::Relaxed, Ordering::Relaxed).is_ok());
                if first {
                    self.counters.raw.fetch_add(2 * reps as u64, Ordering::Relaxed);
                }
                v
            }
        }
    }

    /// Corrected oracle queries requested so far (shared across selections).
    pub fn queries(&self) -> u64 {
        self.counters.requested.load(Ordering::Relaxed)
    }

    /// Raw oracle evaluations charged: 2·reps per distinct cached point.
    pub fn raw_evals(&self) -> u64 {
        self.counters.raw.load(Ordering::Relaxed)
    }

    pub fn harness_targets(&self) -> Vec<usize> {
        self.oracles.iter().map(|o| o.target).collect()
    }

    /// Coordinate mask of a subset of oracle indices (harness use).
    pub fn harness_mask(&self, idx: impl IntoIterator<Item = usize>) -> u64 {
        idx.into_iter().fold(0, |m, i| m | 1 << self.oracles[i].target)
    }
}
