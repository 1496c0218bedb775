use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{binomial_prefix, coords_of, deposit, extract, low_mask, subsets_of_size, submasks};
use crate::boolfn::BooleanFunction;
use crate::budget::{sign_mean_samples, Budget};
use crate::error::Result;
use crate::fourier::{butterfly, BoundedEvaluator};
use crate::oracles::{sampler_budget, ImplicitJunta, OracleSet};
use crate::seed::SeedStream;

/// What phase two scores for each candidate U ⊇ B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "score", rename_all = "snake_case")]
pub enum Scoring {
    /// E_x |Σ_{S⊆U∖B, |S|≤ζ} ĥ(S) ρ^{|S|} χ_S(x)|: damped low-degree correlation.
    Correlation { zeta: usize, rho: f64 },
    /// Σ_{S⊆U∖B, |S|≤κ} ĥ(S)²: truncated Fourier mass.
    Mass { kappa: usize },
}

impl Scoring {
    /// ζ = ⌈√(k/ε)·ln(2/ε)⌉ and ρ = 1 − √(ε/k).
    pub fn correlation(k: usize, eps: f64) -> Self {
        let ratio = k as f64 / eps;
        Scoring::Correlation { zeta: (ratio.sqrt() * (2.0 / eps).ln()).ceil() as usize, rho: 1.0 - (eps / k as f64).sqrt() }
    }

    pub fn cutoff(&self) -> usize {
        match *self {
            Scoring::Correlation { zeta, .. } => zeta,
            Scoring::Mass { kappa } => kappa,
        }
    }

    /// Score of one restriction given coefficients `c[s]` over the 2^m local
    /// subsets of U∖B (index bit j ↔ j-th coordinate of U∖B).
    pub fn score(&self, c: &[f64]) -> f64 {
        match *self {
            Scoring::Correlation { zeta, rho } => {
                let mut v: Vec<f64> = c
                    .iter()
                    .enumerate()
                    .map(|(s, &x)| {
                        let d = s.count_ones() as usize;
                        if d <= zeta {
                            x * rho.powi(d as i32)
                        } else {
                            0.0
                        }
                    })
                    .collect();
                butterfly(&mut v);
                v.iter().map(|x| x.abs()).sum::<f64>() / v.len() as f64
            }
            Scoring::Mass { kappa } => {
                c.iter().enumerate().filter(|(s, _)| s.count_ones() as usize <= kappa).map(|(_, x)| x * x).sum()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateResult {
    /// Candidate set U and its originating leaf B, as pool-index masks.
    pub set: u64,
    pub leaf: u64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseTwoPlan {
    pub restrictions: usize,
    pub samples: usize,
}

/// t = ⌈C_t·ln(2/δ)/ε²⌉ restrictions; per-coefficient error ε/count with
/// count = Σ_{j ≤ min(cutoff, k−|B|)} C(k−|B|, j).
pub fn phase_two_plan(k: usize, b: usize, eps: f64, delta: f64, cutoff: usize, n_coeffs: usize, budget: &Budget) -> PhaseTwoPlan {
    let e = budget.scaled(eps);
    let restrictions = budget
        .phase_two_restrictions
        .unwrap_or_else(|| (budget.phase_two_constant * (2.0 / delta).ln() / (e * e)).ceil() as usize)
        .max(1);
    let room = k.saturating_sub(b);
    let count = binomial_prefix(room, cutoff.min(room)).max(1.0);
    let samples = budget.phase_two_samples.unwrap_or_else(|| {
        sign_mean_samples(e / count, delta / (2.0 * restrictions as f64 * n_coeffs.max(1) as f64))
    });
    PhaseTwoPlan { restrictions, samples }
}

/// Phase-two estimator for one leaf B: scores every size-k U ⊇ B in the pool
/// (U = pool if the pool is smaller) and returns them in increasing mask order.
#[allow(clippy::too_many_arguments)]
pub fn phase_two(
    f: &BooleanFunction,
    pool: &OracleSet,
    leaf: u64,
    k: usize,
    eps: f64,
    delta: f64,
    scoring: Scoring,
    budget: &Budget,
    seeds: SeedStream,
) -> Result<Vec<CandidateResult>> {
    let all = low_mask(pool.len());
    let fixed = coords_of(leaf);
    let free = coords_of(all & !leaf);
    let room = k.saturating_sub(fixed.len()).min(free.len());
    // candidate extensions V ⊆ free (local masks), |V| = room
    let extensions: Vec<u64> = subsets_of_size(low_mask(free.len()), room).collect();
    let depth = scoring.cutoff().min(room);
    // every S ⊆ free with |S| ≤ depth, in local coordinates
    let coeff_sets: Vec<u64> = (0..=depth).flat_map(|d| subsets_of_size(low_mask(free.len()), d)).collect();
    let index: std::collections::HashMap<u64, usize> = coeff_sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let plan = phase_two_plan(k, fixed.len(), eps, delta, scoring.cutoff(), coeff_sets.len(), budget);
    let steps = sampler_budget(pool.len(), budget.sampler_constant, budget.sampler_delta);

    let mut totals = vec![0.0; extensions.len()];
    for t in 0..plan.restrictions {
        let mut rng = seeds.index(t as u64).rng();
        let z = rng.gen::<u64>() & low_mask(fixed.len());
        let a = ImplicitJunta::new(f, pool, &free, &fixed, z, steps)?;
        let mut acc = vec![0i64; coeff_sets.len()];
        let xmask = low_mask(free.len());
        for _ in 0..plan.samples {
            let x = rng.gen::<u64>() & xmask;
            let y = a.sample(x, &mut rng)? as i64;
            for (slot, &s) in acc.iter_mut().zip(&coeff_sets) {
                *slot += y * crate::bits::chi(s, x) as i64;
            }
        }
        let est: Vec<f64> = acc.iter().map(|&v| v as f64 / plan.samples as f64).collect();
        let scores: Vec<f64> = extensions
            .par_iter()
            .map(|&v| {
                let mut local = vec![0.0; 1 << room];
                for s in submasks(v) {
                    if let Some(&i) = index.get(&s) {
                        local[extract(s, v) as usize] = est[i];
                    }
                }
                scoring.score(&local)
            })
            .collect();
        totals.iter_mut().zip(&scores).for_each(|(acc, s)| *acc += s);
    }
    let free_mask = crate::bits::mask_of(&free);
    let mut out: Vec<CandidateResult> = extensions
        .iter()
        .zip(&totals)
        .map(|(&v, &total)| CandidateResult {
            set: leaf | deposit(v, free_mask),
            leaf,
            estimate: total / plan.restrictions as f64,
        })
        .collect();
    out.sort_by_key(|c| c.set);
    Ok(out)
}

/// Exact counterpart of one phase-two score: average over all z ∈ {±1}^B of
/// the score computed from the exact coefficients of f_{B→z} on U∖B.
/// `values` is f (or any real function) on {±1}^n; B and U are coordinate masks.
pub fn exact_phase_two_score(values: &[f64], leaf: u64, set: u64, scoring: Scoring) -> f64 {
    let n = values.len().trailing_zeros() as usize;
    let ext = set & !leaf;
    let rest = low_mask(n) & !set;
    let m = ext.count_ones();
    let mut total = 0.0;
    for z in submasks(leaf) {
        // ĥ(S) for S ⊆ U∖B equals 2^{-|B̄|} Σ_{x on B̄} f(z, x) χ_S(x)
        let mut proj = vec![0.0; 1 << m];
        for e in submasks(ext) {
            for r in submasks(rest) {
                proj[extract(e, ext) as usize] += values[(z | e | r) as usize];
            }
        }
        let scale = 1.0 / ((1u64 << m) as f64 * (1u64 << rest.count_ones()) as f64);
        butterfly(&mut proj);
        proj.iter_mut().for_each(|c| *c *= scale);
        total += scoring.score(&proj);
    }
    total / (1u64 << leaf.count_ones()) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{make_function, FunctionKind};
    use crate::exactref::corr_on_set;

    #[test]
    fn scoring_parameters() {
        match Scoring::correlation(3, 0.1) {
            Scoring::Correlation { zeta, rho } => {
                assert_eq!(zeta, ((30f64).sqrt() * 20f64.ln()).ceil() as usize);
                assert!((rho - (1.0 - (0.1f64 / 3.0).sqrt())).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
        // 1 - x - y + xy: undamped truncation overshoots, damping does not
        let c = [1.0, -1.0, -1.0, 1.0];
        assert!((Scoring::Correlation { zeta: 1, rho: 1.0 }.score(&c) - 1.5).abs() < 1e-12);
        assert!(Scoring::Correlation { zeta: 1, rho: 0.5 }.score(&c) <= 1.0 + 1e-12);
        assert_eq!(Scoring::Mass { kappa: 1 }.score(&c), 3.0);
    }

    #[test]
    fn pure_junta_scores_near_one() {
        let eps = 0.1;
        let pool = OracleSet::exact(8, &[0, 1, 3, 4, 6]).unwrap();
        let b = Budget { phase_two_restrictions: Some(8), phase_two_samples: Some(1500), ..Budget::default() };
        // with the junta's coordinates fixed every restriction is constant
        let f = make_function(&FunctionKind::Junta { coords: vec![1, 3, 4], subtable: vec![1, -1, -1, 1, -1, 1, 1, 1] }, 8).unwrap();
        let out = phase_two(&f, &pool, 0b01110, 3, eps, 0.05, Scoring::correlation(3, eps), &b, SeedStream::new(1)).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].estimate >= 1.0 - 3.2 * eps, "{}", out[0].estimate);
        // a junta with no mass above level one needs no fixing at all
        let f = make_function(&FunctionKind::Dictator(3), 8).unwrap();
        let out = phase_two(&f, &pool, 0, 3, eps, 0.05, Scoring::correlation(3, eps), &b, SeedStream::new(1)).unwrap();
        assert_eq!(out.len(), 10);
        let best = out.iter().fold(&out[0], |a, c| if c.estimate > a.estimate { c } else { a });
        assert!(best.set & 0b100 != 0);
        assert!(best.estimate >= 1.0 - 3.2 * eps, "{}", best.estimate);
    }

    #[test]
    fn exact_score_matches_definition() {
        // with no damping and full cutoff the score is the exact correlation on U
        let f = make_function(&FunctionKind::Random(3), 7).unwrap();
        let t = f.table().unwrap();
        let values = t.to_f64();
        for (leaf, set) in [(0u64, 0b0000111u64), (0b1, 0b1011), (0b100, 0b1100100)] {
            let s = exact_phase_two_score(&values, leaf, set, Scoring::Correlation { zeta: 7, rho: 1.0 });
            assert!((s - corr_on_set(&t, set)).abs() < 1e-12);
        }
    }

    #[test]
    fn small_pool_uses_whole_pool() {
        let f = make_function(&FunctionKind::Dictator(0), 5).unwrap();
        let pool = OracleSet::exact(5, &[0, 2]).unwrap();
        let b = Budget { phase_two_restrictions: Some(2), phase_two_samples: Some(64), ..Budget::default() };
        let out = phase_two(&f, &pool, 0, 3, 0.1, 0.05, Scoring::Mass { kappa: 2 }, &b, SeedStream::new(2)).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].set, 0b11);
    }
}
