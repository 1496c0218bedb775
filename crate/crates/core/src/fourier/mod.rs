//! Exact Fourier analysis over {±1}^n and sampling-based coefficient estimation.

mod sampled;

use crate::bits::{self, binomial};
use crate::boolfn::{BooleanFunction, TruthTable};
use crate::error::{Error, Result};

pub use sampled::{estimate_coefficient, estimate_coefficient_with, project_avg, BoundedEvaluator, ProjectAvg};

/// In-place unnormalized Walsh–Hadamard butterfly.
pub fn butterfly(a: &mut [f64]) {
    let len = a.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (p, q) = (*u, *v);
                *u = p + q;
                *v = p - q;
            }
        }
        h *= 2;
    }
}

/// Coefficients f̂(S) indexed by subset mask, f̂(S) = E[f·χ_S].
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    /// Exact transform of a table-backed function; does not charge queries.
    pub fn of(f: &BooleanFunction) -> Result<Self> {
        let t = f.table().ok_or_else(|| Error::unsupported("exact spectrum needs a truth-table-backed function"))?;
        Ok(Self::of_table(&t))
    }

    pub fn of_table(t: &TruthTable) -> Self {
        Self::of_values(&t.to_f64())
    }

    /// Transform of an arbitrary real-valued function given pointwise.
    pub fn of_values(values: &[f64]) -> Self {
        assert!(values.len().is_power_of_two(), "value table must have 2^n entries");
        let mut coeffs = values.to_vec();
        butterfly(&mut coeffs);
        let scale = 1.0 / values.len() as f64;
        coeffs.iter_mut().for_each(|c| *c *= scale);
        Self { n: values.len().trailing_zeros() as usize, coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(coeffs.len().is_power_of_two(), "coefficient table must have 2^n entries");
        Self { n: coeffs.len().trailing_zeros() as usize, coeffs }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, s: u64) -> f64 {
        self.coeffs[s as usize]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Pointwise values Σ_S f̂(S)χ_S(x).
    pub fn values(&self) -> Vec<f64> {
        let mut v = self.coeffs.clone();
        butterfly(&mut v);
        v
    }

    pub fn total_weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn variance(&self) -> f64 {
        self.total_weight() - self.coeffs[0] * self.coeffs[0]
    }

    /// Σ_{S∋i, |S|≤cap} f̂(S)².
    pub fn influence(&self, i: usize, cap: Option<usize>) -> f64 {
        self.weighted_sum(1 << i, cap, |_| 1.0)
    }

    /// Σ_{S∋i, |S|≤cap} f̂(S)²/|S|.
    pub fn norm_inf(&self, i: usize, cap: Option<usize>) -> f64 {
        self.weighted_sum(1 << i, cap, |s| 1.0 / s as f64)
    }

    /// Σ_{S⊇U, |S|≤cap} f̂(S)²/C(|S|,|U|).
    pub fn norm_inf_set(&self, u: u64, cap: Option<usize>) -> Result<f64> {
        if u == 0 {
            return Err(Error::input("normalized influence of a set needs a nonempty set"));
        }
        let size = u.count_ones() as usize;
        Ok(self.weighted_sum(u, cap, |s| 1.0 / binomial(s, size)))
    }

    /// Σ_{S⊇U, |S|≤cap} f̂(S)²·w(|S|), walking only supersets of U.
    pub fn weighted_sum(&self, u: u64, cap: Option<usize>, w: impl Fn(usize) -> f64) -> f64 {
        let cap = cap.unwrap_or(self.n);
        let free = bits::low_mask(self.n) & !u;
        bits::submasks(free)
            .map(|r| r | u)
            .filter(|s| s.count_ones() as usize <= cap)
            .map(|s| {
                let c = self.coeffs[s as usize];
                c * c * w(s.count_ones() as usize)
            })
            .sum()
    }

    /// Σ_{S⊆T} f̂(S)².
    pub fn subset_mass(&self, t: u64) -> f64 {
        bits::submasks(t).map(|s| self.coeffs[s as usize].powi(2)).sum()
    }

    /// T_ρ: coefficient-wise scaling by ρ^{|S|}.
    pub fn noise(&self, rho: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&rho) {
            return Err(Error::input(format!("noise rate {rho} outside [-1, 1]")));
        }
        let coeffs = self.coeffs.iter().enumerate().map(|(s, c)| c * rho.powi(s.count_ones() as i32)).collect();
        Ok(Self { n: self.n, coeffs })
    }

    /// Projection f^{⊆T}: keep only coefficients on subsets of T.
    pub fn project(&self, t: u64) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(s, &c)| if s as u64 & !t == 0 { c } else { 0.0 }).collect();
        Self { n: self.n, coeffs }
    }

    /// Keep only levels |S| ≤ d.
    pub fn truncate(&self, d: usize) -> Self {
        let coeffs =
            self.coeffs.iter().enumerate().map(|(s, &c)| if s.count_ones() as usize <= d { c } else { 0.0 }).collect();
        Self { n: self.n, coeffs }
    }

    /// E_x |g(x)| for the real function with this spectrum.
    pub fn mean_abs(&self) -> f64 {
        let v = self.values();
        v.iter().map(|x| x.abs()).sum::<f64>() / v.len() as f64
    }

    /// CSV dump `mask,coefficient`, 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mask,coefficient\n");
        for (s, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{s},{}\n", sig12(*c)));
        }
        out
    }
}

/// Format with 12 significant digits in plain or exponent notation.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{}", if v == 0.0 { 0.0 } else { v });
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{v:.11e}")
    }
}
