use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng as _;

use super::OracleSet;
use crate::bits::low_mask;
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::fourier::BoundedEvaluator;
use crate::seed::Rng;

/// Inner-step budget c·k′²·ln(k′/δ), at least c·ln(1/δ) so k′ = 1 is usable.
pub fn sampler_budget(k_prime: usize, c: f64, delta: f64) -> u64 {
    let kp = k_prime.max(1) as f64;
    (c * kp * kp * (kp / delta).ln()).ceil().max(1.0) as u64
}

/// Mismatches between the oracle answers at `y` and `target`, stopping once
/// `stop` is reached.
#[inline]
fn mismatches(set: &OracleSet, constraints: &[usize], target: u64, y: u64, stop: u32) -> u32 {
    let mut d = 0;
    for (b, &j) in constraints.iter().enumerate() {
        let want = 1 - 2 * ((target >> b) & 1) as i8;
        if set.query(j, y) != want {
            d += 1;
            if d >= stop {
                break;
            }
        }
    }
    d
}

/// Consistent-input sampler: a uniform y with g_{c_b}(y) = target_b for every constraint b.
///
/// `target` bit b set means the b-th constrained oracle must answer −1.
/// Returns the point and the number of inner (proposal) steps used.
pub fn sample_consistent(
    set: &OracleSet,
    constraints: &[usize],
    target: u64,
    budget: u64,
    rng: &mut Rng,
) -> Result<(u64, u64)> {
    if constraints.len() > 64 || target & !low_mask(constraints.len()) != 0 {
        return Err(Error::input("target has more bits than constrained oracles"));
    }
    let n = set.arity();
    let mask = low_mask(n);
    let mut y = rng.gen::<u64>() & mask;
    if constraints.is_empty() {
        return Ok((y, 0));
    }
    let kp = constraints.len();
    // Bernoulli(1/k′) per coordinate via a 32-bit threshold; k′ = 1 flips everything.
    let threshold = ((1u64 << 32) as f64 / kp as f64).round() as u64;
    let mut dist = mismatches(set, constraints, target, y, u32::MAX);
    let mut steps = 0u64;
    while dist > 0 {
        loop {
            steps += 1;
            if steps > budget {
                return Err(Error::SamplerExhausted { budget });
            }
            let mut flip = 0u64;
            for j in 0..n {
                if (rng.gen::<u32>() as u64) < threshold {
                    flip |= 1 << j;
                }
            }
            let cand = y ^ flip;
            let d = mismatches(set, constraints, target, cand, dist);
            if d < dist {
                y = cand;
                dist = d;
                break;
            }
        }
    }
    Ok((y, steps))
}

/// Randomized access to x ↦ E[f(y) | g_free(y) = x, g_fixed(y) = z].
///
/// Its arity is the number of free oracles; fixed oracles are pinned to `z`.
pub struct ImplicitJunta<'a> {
    f: &'a BooleanFunction,
    set: &'a OracleSet,
    constraints: Vec<usize>,
    free: usize,
    pinned: u64,
    budget: u64,
    steps: AtomicU64,
    draws: AtomicU64,
}

impl<'a> ImplicitJunta<'a> {
    /// `free` and `fixed` are disjoint oracle indices; `z` bit b pins `fixed[b]` to −1.
    pub fn new(
        f: &'a BooleanFunction,
        set: &'a OracleSet,
        free: &[usize],
        fixed: &[usize],
        z: u64,
        budget: u64,
    ) -> Result<Self> {
        if f.arity() != set.arity() {
            return Err(Error::input("oracle set and function disagree on arity"));
        }
        if free.len() + fixed.len() > 64 {
            return Err(Error::unsupported("at most 64 conditioned oracles"));
        }
        let mut constraints = free.to_vec();
        constraints.extend_from_slice(fixed);
        let mut seen = constraints.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != constraints.len() || seen.last().is_some_and(|&j| j >= set.len()) {
            return Err(Error::input("free and fixed oracle indices must be distinct and in range"));
        }
        let pinned = (z & low_mask(fixed.len())) << free.len();
        Ok(Self {
            f,
            set,
            constraints,
            free: free.len(),
            pinned,
            budget,
            steps: AtomicU64::new(0),
            draws: AtomicU64::new(0),
        })
    }

    /// Mean proposal steps per consistent sample so far.
    pub fn mean_steps(&self) -> f64 {
        let d = self.draws.load(Ordering::Relaxed);
        if d == 0 {
            0.0
        } else {
            self.steps.load(Ordering::Relaxed) as f64 / d as f64
        }
    }
}

impl BoundedEvaluator for ImplicitJunta<'_> {
    fn arity(&self) -> usize {
        self.free
    }

    fn sample(&self, x: u64, rng: &mut Rng) -> Result<i8> {
        let target = (x & low_mask(self.free)) | self.pinned;
        let (y, steps) = sample_consistent(self.set, &self.constraints, target, self.budget, rng)?;
        self.steps.fetch_add(steps, Ordering::Relaxed);
        self.draws.fetch_add(1, Ordering::Relaxed);
        Ok(self.f.query(y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::{coord, extract};
    use crate::boolfn::{make_function, FunctionKind};
    use crate::oracles::{CoordinateOracle, Correction};
    use crate::seed::SeedStream;

    #[test]
    fn single_and_double_constraints() {
        let set = OracleSet::exact(6, &[0, 1]).unwrap();
        let mut rng = SeedStream::new(1).rng();
        let mut hist = [0u32; 16];
        for _ in 0..8000 {
            let (y, _) = sample_consistent(&set, &[0, 1], 0b10, 1000, &mut rng).unwrap();
            assert_eq!((coord(y, 0), coord(y, 1)), (1, -1));
            hist[(y >> 2) as usize] += 1;
        }
        // completions roughly uniform: 500 expected per cell
        assert!(hist.iter().all(|&c| (380..620).contains(&c)), "{hist:?}");
    }

    #[test]
    fn signed_oracles_are_respected() {
        let oracles = vec![CoordinateOracle::new(3, -1, 0.0, 0).unwrap(), CoordinateOracle::exact(5)];
        let set = OracleSet::new(8, oracles, Correction::Raw, SeedStream::new(0)).unwrap();
        let mut rng = SeedStream::new(2).rng();
        for t in 0..4 {
            let (y, _) = sample_consistent(&set, &[0, 1], t, 10_000, &mut rng).unwrap();
            assert_eq!(-coord(y, 3), 1 - 2 * (t & 1) as i8);
            assert_eq!(coord(y, 5), 1 - 2 * (t >> 1) as i8);
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let set = OracleSet::exact(12, &[0, 1, 2, 3, 4, 5]).unwrap();
        let mut rng = SeedStream::new(3).rng();
        let hits = (0..50).filter(|_| matches!(
            sample_consistent(&set, &[0, 1, 2, 3, 4, 5], 0b111111, 1, &mut rng),
            Err(Error::SamplerExhausted { budget: 1 })
        )).count();
        assert!(hits > 0);
        assert_eq!(sampler_budget(1, 1.0, 0.5), 1);
    }

    #[test]
    fn implicit_junta_examples() {
        let mut rng = SeedStream::new(4).rng();
        let d1 = make_function(&FunctionKind::Dictator(0), 5).unwrap();
        let set = OracleSet::exact(5, &[0, 1]).unwrap();
        let a = ImplicitJunta::new(&d1, &set, &[0], &[], 0, 1000).unwrap();
        assert!((0..200).all(|_| a.sample(0, &mut rng).unwrap() == 1));

        let p = make_function(&FunctionKind::Parity(0b11), 5).unwrap();
        let a = ImplicitJunta::new(&p, &set, &[0], &[], 0, 1000).unwrap();
        let mean = (0..10_000).map(|_| a.sample(0, &mut rng).unwrap() as f64).sum::<f64>() / 1e4;
        assert!(mean.abs() < 0.04);

        // Maj_3 with x_1 = x_2 = +1 is +1 on both completions
        let maj = make_function(&FunctionKind::Majority(3), 5).unwrap();
        let a = ImplicitJunta::new(&maj, &set, &[0, 1], &[], 0, 1000).unwrap();
        assert!((0..200).all(|_| a.sample(0, &mut rng).unwrap() == 1));
        // pinned oracle: x_2 fixed to −1, x_1 free
        let a = ImplicitJunta::new(&maj, &set, &[0], &[1], 1, 1000).unwrap();
        assert_eq!(a.arity(), 1);
        let mean = (0..10_000).map(|_| a.sample(0, &mut rng).unwrap() as f64).sum::<f64>() / 1e4;
        assert!(mean.abs() < 0.04, "Maj(+1,−1,x₃) averages to 0");
        assert!(ImplicitJunta::new(&maj, &set, &[0], &[0], 0, 10).is_err());
    }

    #[test]
    fn implicit_mean_matches_projection() {
        // E[implicit(x)] = f_avg,T at the matching point, exact by enumeration
        let f = make_function(&FunctionKind::Random(21), 8).unwrap();
        let t = f.table().unwrap();
        let coords = [2usize, 5, 6];
        let set = OracleSet::exact(8, &coords).unwrap();
        let a = ImplicitJunta::new(&f, &set, &[0, 1, 2], &[], 0, 10_000).unwrap();
        let tmask = crate::bits::mask_of(&coords);
        let mut rng = SeedStream::new(5).rng();
        for x in 0..8u64 {
            let exact = (0..256u64).filter(|&y| extract(y, tmask) == x).map(|y| t.get(y) as f64).sum::<f64>() / 32.0;
            let m = 10_000;
            let mean = (0..m).map(|_| a.sample(x, &mut rng).unwrap() as f64).sum::<f64>() / m as f64;
            let sigma = ((1.0 - exact * exact) / m as f64).sqrt().max(1e-3);
            assert!((mean - exact).abs() <= 3.5 * sigma, "x={x} mean={mean} exact={exact}");
        }
    }
}
