//! Bitmask helpers. A subset of coordinates is a `u64` with bit j set for
//! coordinate j (0-based internally; user-facing surfaces are 1-based).

/// χ_S(x) as ±1: bit set means the coordinate takes value −1.
#[inline]
pub fn chi(s: u64, x: u64) -> i8 {
    1 - 2 * ((s & x).count_ones() & 1) as i8
}

#[inline]
pub fn chi_f(s: u64, x: u64) -> f64 {
    chi(s, x) as f64
}

/// Value of coordinate j at point x, as ±1.
#[inline]
pub fn coord(x: u64, j: usize) -> i8 {
    1 - 2 * ((x >> j) & 1) as i8
}

#[inline]
pub fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Scatter the low bits of `src` into the set positions of `mask`.
pub fn deposit(src: u64, mut mask: u64) -> u64 {
    let mut out = 0;
    let mut b = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if (src >> b) & 1 == 1 {
            out |= low;
        }
        mask ^= low;
        b += 1;
    }
    out
}

/// Gather the bits of `x` at the set positions of `mask` into the low bits.
pub fn extract(x: u64, mut mask: u64) -> u64 {
    let mut out = 0;
    let mut b = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if x & low != 0 {
            out |= 1 << b;
        }
        mask ^= low;
        b += 1;
    }
    out
}

pub fn mask_of(coords: &[usize]) -> u64 {
    coords.iter().fold(0, |m, &c| m | (1u64 << c))
}

pub fn coords_of(mut mask: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        v.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    v
}

/// Size-`k` subsets of `{0..m}` in increasing numeric order (Gosper's hack).
pub struct Combinations {
    next: Option<u64>,
    limit: u64,
}

impl Iterator for Combinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        if cur == 0 {
            self.next = None;
            return Some(0);
        }
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        let nxt = (((r ^ cur) >> 2) / c) | r;
        self.next = if r != 0 && nxt < self.limit { Some(nxt) } else { None };
        Some(cur)
    }
}

pub fn combinations(m: usize, k: usize) -> Combinations {
    assert!(m < 64, "combinations over at most 63 elements");
    if k > m {
        return Combinations { next: None, limit: 0 };
    }
    Combinations { next: Some(low_mask(k)), limit: 1u64 << m }
}

/// Size-`k` subsets of the set bits of `pool`, increasing numerically.
pub fn subsets_of_size(pool: u64, k: usize) -> impl Iterator<Item = u64> {
    let m = pool.count_ones() as usize;
    combinations(m, k).map(move |c| deposit(c, pool))
}

/// All submasks of `mask` in increasing numeric order, including 0 and `mask`.
pub fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let m = mask.count_ones();
    (0..(1u64 << m)).map(move |c| deposit(c, mask))
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Σ_{j ≤ d} C(n, j).
pub fn binomial_prefix(n: usize, d: usize) -> f64 {
    (0..=d.min(n)).map(|j| binomial(n, j)).sum()
}

/// Render a 0-based mask as 1-based coordinate list, e.g. `{1,3}`.
pub fn fmt_set(mask: u64) -> String {
    let parts: Vec<String> = coords_of(mask).iter().map(|c| (c + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}
