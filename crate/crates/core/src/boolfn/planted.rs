use rand::seq::index::sample;
use rand::Rng as _;

use super::{junta_index, make_function_capped, BooleanFunction, FunctionKind, TruthTable, TABLE_CAP};
use crate::error::{Error, Result};
use crate::seed::{mix, unit, SeedStream};

/// A random k-junta with each output flipped independently with probability γ.
#[derive(Debug, Clone)]
pub struct PlantedInstance {
    pub base: BooleanFunction,
    pub realized: BooleanFunction,
    /// Ground-truth relevant set, sorted, 0-based.
    pub support: Vec<usize>,
    pub gamma: f64,
    pub seed: u64,
}

/// Flips are a keyed hash of the input index rather than a memo table, so the
/// realized function is a pure function of (seed, x) at any arity.
pub fn plant_noisy_junta(n: usize, k: usize, gamma: f64, seed: u64) -> Result<PlantedInstance> {
    plant_noisy_junta_capped(n, k, gamma, seed, TABLE_CAP)
}

pub fn plant_noisy_junta_capped(n: usize, k: usize, gamma: f64, seed: u64, cap: usize) -> Result<PlantedInstance> {
    if !(0.0..0.5).contains(&gamma) {
        return Err(Error::input(format!("corruption rate must lie in [0, 1/2), got {gamma}")));
    }
    if k > n {
        return Err(Error::input(format!("k={k} exceeds n={n}")));
    }
    if n > 64 {
        return Err(Error::unsupported(format!("arity {n} exceeds 64-bit point encoding")));
    }
    let seeds = SeedStream::new(seed);
    let mut rng = seeds.derive("plant").rng();
    let mut support: Vec<usize> = sample(&mut rng, n, k).into_vec();
    support.sort_unstable();
    let subtable: Vec<i8> = (0..1usize << k).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
    let kind = FunctionKind::Junta { coords: support.clone(), subtable: subtable.clone() };
    let base = make_function_capped(&kind, n, cap)?;

    let key = seeds.derive("flips").value();
    let coords = support.clone();
    let realized_at = move |x: u64| {
        let v = subtable[junta_index(x, &coords)];
        if unit(mix(key, x)) < gamma {
            -v
        } else {
            v
        }
    };
    let realized = if n <= cap {
        BooleanFunction::from_table(TruthTable::from_fn(n, &realized_at))
    } else {
        BooleanFunction::from_fn(n, realized_at)?
    };
    Ok(PlantedInstance { base, realized, support, gamma, seed })
}
