//! Brute-force ground truth: exact distances, subset masses and λ closed forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::{self, binomial, extract};
use crate::boolfn::{BooleanFunction, TruthTable};
use crate::budget::horizon;
use crate::error::{Error, Result};
use crate::fourier::FourierSpectrum;

/// Largest arity the exhaustive references accept.
pub const EXACT_CAP: usize = 16;

fn table_of(f: &BooleanFunction) -> Result<TruthTable> {
    if f.arity() > EXACT_CAP {
        return Err(Error::unsupported(format!("exact reference limited to n ≤ {EXACT_CAP}, got n={}", f.arity())));
    }
    f.table().ok_or_else(|| Error::unsupported("exact reference needs a truth-table-backed function"))
}

/// 2^n · corr(f, J_T) = Σ_a |Σ_{x: x_T = a} f(x)|, an exact integer.
pub fn corr_numerator(t: &TruthTable, set: u64) -> u64 {
    let mut sums = vec![0i64; 1 << set.count_ones()];
    for x in 0..t.len() as u64 {
        sums[extract(x, set) as usize] += t.get(x) as i64;
    }
    sums.iter().map(|s| s.unsigned_abs()).sum()
}

/// corr(f, J_T) = E_x |f_avg,T(x)|: the best correlation of any junta on T.
pub fn corr_on_set(t: &TruthTable, set: u64) -> f64 {
    corr_numerator(t, set) as f64 / t.len() as f64
}

/// E_x |g_avg,T(x)| for a real-valued g given pointwise.
pub fn corr_values(values: &[f64], set: u64) -> f64 {
    let mut sums = vec![0f64; 1 << set.count_ones()];
    for (x, v) in values.iter().enumerate() {
        sums[extract(x as u64, set) as usize] += v;
    }
    sums.iter().map(|s| s.abs()).sum::<f64>() / values.len() as f64
}

/// (dist(f, J_{n,k}), T*) with T* the smallest-mask maximizer among size-min(k,n) sets.
pub fn exact_dist_to_juntas(f: &BooleanFunction, k: usize) -> Result<(f64, u64)> {
    let t = table_of(f)?;
    let size = k.min(t.arity());
    let sets: Vec<u64> = bits::combinations(t.arity(), size).collect();
    let best = sets
        .par_iter()
        .map(|&s| (corr_numerator(&t, s), s))
        .reduce(|| (0, u64::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let corr = best.0 as f64 / t.len() as f64;
    Ok(((1.0 - corr) / 2.0, best.1))
}

/// max over |T| ≤ k of Σ_{S⊆T} f̂(S)², with the smallest-mask maximizer.
pub fn exact_subset_mass(f: &BooleanFunction, k: usize) -> Result<(f64, u64)> {
    let t = table_of(f)?;
    Ok(subset_mass_of(&FourierSpectrum::of_table(&t), k))
}

pub fn subset_mass_of(spec: &FourierSpectrum, k: usize) -> (f64, u64) {
    let n = spec.arity();
    // zeta transform: g[T] = Σ_{S⊆T} f̂(S)²
    let mut g: Vec<f64> = spec.coeffs().iter().map(|c| c * c).collect();
    for j in 0..n {
        for t in 0..g.len() {
            if t >> j & 1 == 1 {
                g[t] += g[t ^ (1 << j)];
            }
        }
    }
    let size = k.min(n);
    bits::combinations(n, size)
        .map(|s| (g[s as usize], s))
        .fold((f64::NEG_INFINITY, u64::MAX), |a, b| if b.0 > a.0 { b } else { a })
}

/// Weight of level-|S| mass in λ_i: Σ_{m=0}^{M} 2^{-m}(1−2^{-m})^{s−1}, 0^0 = 1.
pub fn lambda_weight(s: usize, k: usize) -> f64 {
    (0..=horizon(k))
        .map(|m| {
            let q = 0.5f64.powi(m as i32);
            q * (1.0 - q).powi(s as i32 - 1)
        })
        .sum()
}

/// λ_i = Σ_{S∋i} f̂(S)² · lambda_weight(|S|).
pub fn exact_lambda(spec: &FourierSpectrum, i: usize, k: usize) -> f64 {
    let w: Vec<f64> = (0..=spec.arity()).map(|s| lambda_weight(s, k)).collect();
    spec.weighted_sum(1 << i, None, |s| w[s])
}

/// Weight for sets: Σ_{m=0}^{2|U|M} p^{m|U|}(1−p^m)^{s−|U|}, p = 1 − 1/(2|U|).
pub fn lambda_set_weight(s: usize, u: usize, k: usize) -> f64 {
    let p = 1.0 - 1.0 / (2.0 * u as f64);
    (0..=2 * u * horizon(k))
        .map(|m| {
            let pm = p.powi(m as i32);
            pm.powi(u as i32) * (1.0 - pm).powi((s - u) as i32)
        })
        .sum()
}

pub fn exact_lambda_set(spec: &FourierSpectrum, u: u64, k: usize) -> f64 {
    let size = u.count_ones() as usize;
    let w: Vec<f64> = (0..=spec.arity()).map(|s| if s >= size { lambda_set_weight(s, size, k) } else { 0.0 }).collect();
    spec.weighted_sum(u, None, |s| w[s])
}

/// Exact references bundled for a report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GroundTruth {
    pub distance: f64,
    pub best_set: u64,
    pub subset_mass: f64,
    pub mass_set: u64,
    /// Distance to juntas on the larger arity k′, when requested.
    pub distance_k_prime: Option<f64>,
}

pub fn ground_truth(f: &BooleanFunction, k: usize, k_prime: Option<usize>) -> Result<GroundTruth> {
    let (distance, best_set) = exact_dist_to_juntas(f, k)?;
    let (subset_mass, mass_set) = exact_subset_mass(f, k)?;
    let distance_k_prime = match k_prime {
        Some(kp) if kp.min(f.arity()) as f64 <= f.arity() as f64 && binomial(f.arity(), kp.min(f.arity())) <= 1e6 => {
            Some(exact_dist_to_juntas(f, kp)?.0)
        }
        _ => None,
    };
    Ok(GroundTruth { distance, best_set, subset_mass, mass_set, distance_k_prime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{make_function, FunctionKind};
    use crate::seed::SeedStream;
    use rand::Rng as _;

    fn f(kind: FunctionKind, n: usize) -> BooleanFunction {
        make_function(&kind, n).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(exact_dist_to_juntas(&f(FunctionKind::Dictator(0), 4), 1).unwrap(), (0.0, 1));
        assert_eq!(exact_dist_to_juntas(&f(FunctionKind::Parity(0b11), 4), 1).unwrap().0, 0.5);
        assert_eq!(exact_dist_to_juntas(&f(FunctionKind::Majority(3), 3), 1).unwrap(), (0.25, 1));
        let full = f(FunctionKind::Parity(0xFFF), 12);
        assert_eq!(exact_dist_to_juntas(&full, 3).unwrap().0, 0.5);
        let big = crate::boolfn::make_function_capped(&FunctionKind::Dictator(0), 17, 20).unwrap();
        assert!(matches!(exact_dist_to_juntas(&big, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn mass_examples() {
        assert_eq!(exact_subset_mass(&f(FunctionKind::Parity(0b1011), 6), 3).unwrap(), (1.0, 0b1011));
        let maj = f(FunctionKind::Majority(3), 3);
        assert_eq!(exact_subset_mass(&maj, 1).unwrap(), (0.25, 1));
        assert_eq!(exact_subset_mass(&maj, 3).unwrap().0, 1.0);
    }

    #[test]
    fn lambda_closed_forms() {
        let d = FourierSpectrum::of(&f(FunctionKind::Dictator(0), 3)).unwrap();
        assert!((exact_lambda(&d, 0, 1) - 1.9375).abs() < 1e-12);
        let p = FourierSpectrum::of(&f(FunctionKind::Parity(0b11), 3)).unwrap();
        let direct: f64 = (0..=5).map(|m| 0.5f64.powi(m) * (1.0 - 0.5f64.powi(m))).sum();
        assert!((exact_lambda(&p, 0, 2) - direct).abs() < 1e-12);
        // the infinite-horizon series sums to 2/3; six levels reach 0.6357
        assert!(direct < 2.0 / 3.0 && (direct - 0.6357).abs() < 1e-4);
        // χ_U itself: geometric series in p^{|U|}
        for u in 1..=3usize {
            for k in 1..=6 {
                let chi = FourierSpectrum::of(&f(FunctionKind::Parity((1 << u) - 1), 4)).unwrap();
                let m = 2 * u * horizon(k);
                let p = 1.0 - 1.0 / (2.0 * u as f64);
                let closed = (1.0 - p.powi(((m + 1) * u) as i32)) / (1.0 - p.powi(u as i32));
                let v = exact_lambda_set(&chi, (1 << u) - 1, k);
                assert!((v - closed).abs() < 1e-10);
                assert!(v <= 1.0 / (1.0 - p.powi(u as i32)) && (2.0..=3.0).contains(&(1.0 / (1.0 - p.powi(u as i32)))));
            }
        }
        assert_eq!(exact_lambda_set(&d, 0b11, 2), 0.0);
    }

    #[test]
    fn distance_monotone_in_k() {
        for seed in 0..5 {
            let g = f(FunctionKind::Random(seed), 7);
            let d: Vec<f64> = (0..=7).map(|k| exact_dist_to_juntas(&g, k).unwrap().0).collect();
            assert!(d.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(d[7], 0.0);
        }
    }

    #[test]
    fn sign_of_projection_is_optimal() {
        // every Boolean junta on T, |T| ≤ 3, correlates no better than sgn(f_avg,T)
        for seed in 0..6 {
            let g = f(FunctionKind::Random(seed), 5);
            let t = g.table().unwrap();
            for size in 1..=3usize {
                for set in bits::combinations(5, size) {
                    let best = (0..1u64 << (1 << size))
                        .map(|h| {
                            (0..32u64)
                                .map(|x| t.get(x) as i64 * (1 - 2 * ((h >> extract(x, set)) & 1) as i64))
                                .sum::<i64>()
                        })
                        .max()
                        .unwrap();
                    assert_eq!(best as u64, corr_numerator(&t, set));
                }
            }
        }
    }

    #[test]
    fn lambda_matches_exhaustive_restrictions() {
        // λ_i = Σ_m E_{(J,z)~R_{2^-m}} f̂_{J̄→z}({i})², averaged exactly over all (J,z)
        let mut rng = SeedStream::new(4).rng();
        for _ in 0..4 {
            let n = 5;
            let g = f(FunctionKind::Random(rng.gen()), n);
            let spec = FourierSpectrum::of(&g).unwrap();
            let t = g.table().unwrap();
            for k in [1usize, 2, 3] {
                for i in 0..n {
                    let mut total = 0.0;
                    for m in 0..=horizon(k) {
                        let q = 0.5f64.powi(m as i32);
                        for live in 0..1u64 << n {
                            if live >> i & 1 == 0 {
                                continue;
                            }
                            let pj = q.powi(live.count_ones() as i32) * (1.0 - q).powi(n as i32 - live.count_ones() as i32);
                            let rest = bits::low_mask(n) & !live;
                            let mut avg = 0.0;
                            for z in bits::submasks(rest) {
                                let c: f64 = bits::submasks(live)
                                    .map(|y| (t.get(y | z) * bits::coord(y, i)) as f64)
                                    .sum::<f64>()
                                    / (1u64 << live.count_ones()) as f64;
                                avg += c * c;
                            }
                            total += pj * avg / (1u64 << rest.count_ones()) as f64;
                        }
                    }
                    assert!((total - exact_lambda(&spec, i, k)).abs() < 1e-10);
                }
            }
        }
    }
}
