use std::path::PathBuf;

use clap::Args;
use junta_core::bits::{coords_of, low_mask, mask_of};
use junta_core::boolfn::{make_function, plant_noisy_junta, TruthTable, TABLE_CAP};
use junta_core::{BooleanFunction, FunctionKind, SeedStream};
use serde_json::{json, Value};

use crate::Failure;

/// How the function under test is obtained. Coordinates are 1-based.
#[derive(Args, Debug, Clone)]
pub struct InstanceArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Truth-table file (`n=<int>` line, then 2^n characters over +/-).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Plant a random k-junta and corrupt it at rate --gamma.
    #[arg(long)]
    pub plant: bool,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// random | constant[:-1] | dictator:i | parity:all | parity:i,j,.. | majority:m
    #[arg(long, default_value = "random")]
    pub kind: String,
}

pub struct Instance {
    pub f: BooleanFunction,
    pub description: Value,
}

impl InstanceArgs {
    pub fn k(&self) -> Result<usize, Failure> {
        self.k.ok_or_else(|| Failure::invalid("--k is required"))
    }

    pub fn build(&self) -> Result<Instance, Failure> {
        if let Some(path) = &self.input {
            let t = TruthTable::read(path, TABLE_CAP)?;
            if self.n.is_some_and(|n| n != t.arity()) {
                return Err(Failure::invalid(format!("--n {} disagrees with the file's n={}", self.n.unwrap(), t.arity())));
            }
            let n = t.arity();
            return Ok(Instance {
                f: BooleanFunction::from_table(t),
                description: json!({ "source": "file", "path": path.display().to_string(), "n": n }),
            });
        }
        let n = self.n.ok_or_else(|| Failure::invalid("--n is required unless --in is given"))?;
        let key = SeedStream::new(self.seed).derive("instance").value();
        if self.plant {
            let k = self.k()?;
            let p = plant_noisy_junta(n, k, self.gamma, key)?;
            let support: Vec<usize> = p.support.iter().map(|c| c + 1).collect();
            return Ok(Instance {
                f: p.realized,
                description: json!({ "source": "planted", "n": n, "k": k, "gamma": self.gamma, "support": support }),
            });
        }
        let kind = parse_kind(&self.kind, n, key)?;
        Ok(Instance { f: make_function(&kind, n)?, description: json!({ "source": "kind", "n": n, "kind": self.kind }) })
    }
}

fn coord(s: &str, n: usize) -> Result<usize, Failure> {
    let i: usize = s.trim().parse().map_err(|_| Failure::invalid(format!("bad coordinate '{s}'")))?;
    if i == 0 || i > n {
        return Err(Failure::invalid(format!("coordinate {i} outside 1..={n}")));
    }
    Ok(i - 1)
}

pub fn parse_kind(spec: &str, n: usize, key: u64) -> Result<FunctionKind, Failure> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match (name, arg) {
        ("random", "") => FunctionKind::Random(key),
        ("constant", "" | "1" | "+1") => FunctionKind::Constant(1),
        ("constant", "-1") => FunctionKind::Constant(-1),
        ("dictator", i) => FunctionKind::Dictator(coord(i, n)?),
        ("parity", "all") => FunctionKind::Parity(low_mask(n)),
        ("parity", list) if !list.is_empty() => {
            let coords = list.split(',').map(|s| coord(s, n)).collect::<Result<Vec<_>, _>>()?;
            FunctionKind::Parity(mask_of(&coords))
        }
        ("majority", m) => FunctionKind::Majority(m.parse().map_err(|_| Failure::invalid(format!("bad majority size '{m}'")))?),
        _ => return Err(Failure::invalid(format!("unknown function kind '{spec}'"))),
    })
}

/// 1-based coordinate list for a bitmask.
pub fn coords_1based(mask: u64) -> Vec<usize> {
    coords_of(mask).iter().map(|c| c + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_parse() {
        assert_eq!(parse_kind("parity:1,3", 4, 0).unwrap(), FunctionKind::Parity(0b101));
        assert_eq!(parse_kind("parity:all", 3, 0).unwrap(), FunctionKind::Parity(0b111));
        assert_eq!(parse_kind("dictator:2", 4, 0).unwrap(), FunctionKind::Dictator(1));
        assert_eq!(parse_kind("constant:-1", 4, 0).unwrap(), FunctionKind::Constant(-1));
        assert!(parse_kind("dictator:0", 4, 0).is_err());
        assert!(parse_kind("wobble", 4, 0).is_err());
    }
}
