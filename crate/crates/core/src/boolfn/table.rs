use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Dense truth table, one bit per input index (bit set ↔ value −1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n: usize,
    bits: Vec<u64>,
}

impl TruthTable {
    pub fn constant(n: usize, sign: i8) -> Self {
        let words = (1usize << n).div_ceil(64);
        let fill = if sign < 0 { u64::MAX } else { 0 };
        let mut t = Self { n, bits: vec![fill; words] };
        t.trim();
        t
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> i8) -> Self {
        let mut t = Self::constant(n, 1);
        for x in 0..(1u64 << n) {
            if f(x) < 0 {
                t.bits[(x >> 6) as usize] |= 1 << (x & 63);
            }
        }
        t
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let len = signs.len();
        if !len.is_power_of_two() {
            return Err(Error::input(format!("truth table length {len} is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        Ok(Self::from_fn(n, |x| signs[x as usize]))
    }

    fn trim(&mut self) {
        let size = 1usize << self.n;
        if size < 64 {
            self.bits[0] &= (1u64 << size) - 1;
        }
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: u64) -> i8 {
        1 - 2 * ((self.bits[(x >> 6) as usize] >> (x & 63)) & 1) as i8
    }

    pub fn signs(&self) -> Vec<i8> {
        (0..self.len() as u64).map(|x| self.get(x)).collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        (0..self.len() as u64).map(|x| self.get(x) as f64).collect()
    }

    /// Number of disagreeing inputs.
    pub fn hamming(&self, other: &TruthTable) -> u64 {
        self.bits.iter().zip(&other.bits).map(|(a, b)| (a ^ b).count_ones() as u64).sum()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.len() + 16);
        writeln!(s, "n={}", self.n).unwrap();
        for x in 0..self.len() as u64 {
            s.push(if self.get(x) > 0 { '+' } else { '-' });
        }
        s.push('\n');
        s
    }

    pub fn parse(text: &str, cap: usize) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
        let n: usize = header
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Parse { line: 1, msg: format!("expected `n=<int>`, got {header:?}") })?;
        if n > cap {
            return Err(Error::unsupported(format!("truth table arity {n} exceeds cap {cap}")));
        }
        let body = lines.next().unwrap_or("").trim_end_matches('\r');
        if body.len() != 1 << n {
            return Err(Error::Parse {
                line: 2,
                msg: format!("expected {} signs for n={n}, found {}", 1usize << n, body.len()),
            });
        }
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse { line: 3, msg: format!("unexpected trailing content {extra:?}") });
        }
        let mut signs = Vec::with_capacity(body.len());
        for (i, c) in body.chars().enumerate() {
            signs.push(match c {
                '+' => 1,
                '-' => -1,
                other => {
                    return Err(Error::Parse { line: 2, msg: format!("invalid sign {other:?} at index {i}") })
                }
            });
        }
        Self::from_signs(&signs)
    }

    pub fn read(path: &Path, cap: usize) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, cap)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_tables() {
        let t = TruthTable::from_signs(&[1, -1, -1, 1]).unwrap();
        assert_eq!(t.to_text(), "n=2\n+--+\n");
        assert_eq!(TruthTable::parse("n=2\n+--+\n", 20).unwrap(), t);
        assert!(TruthTable::parse("n=2\n+--\n", 20).is_err());
        assert!(TruthTable::parse("n=2\n+-x+\n", 20).is_err());
        assert!(TruthTable::parse("m=2\n+--+\n", 20).is_err());
        assert!(matches!(TruthTable::parse("n=3\n++++++++\n", 2), Err(Error::Unsupported(_))));
        assert!(TruthTable::from_signs(&[1, 1, 1]).is_err());
    }

    proptest! {
        #[test]
        fn text_roundtrip(n in 0usize..10, seed in any::<u64>()) {
            let t = TruthTable::from_fn(n, |x| if crate::seed::mix(seed, x) & 1 == 0 { 1 } else { -1 });
            let back = TruthTable::parse(&t.to_text(), 20).unwrap();
            prop_assert_eq!(back.to_text(), t.to_text());
            prop_assert_eq!(back, t);
        }
    }
}
