//! Query-counted Boolean functions f : {±1}^n → {±1}.
//!
//! Points are `u64` indices: bit j set means x_{j+1} = −1. Coordinates are
//! 0-based in the library.

mod planted;
mod table;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::bits::{self, low_mask};
use crate::error::{Error, Result};
use crate::seed::{mix, SeedStream};

pub use planted::{plant_noisy_junta, PlantedInstance};
pub use table::TruthTable;

/// Largest arity for which dense truth tables are built.
pub const TABLE_CAP: usize = 20;

type EvalFn = dyn Fn(u64) -> i8 + Send + Sync;

enum Kernel {
    Table(TruthTable),
    Eval(Box<EvalFn>),
    Restricted { inner: Arc<Kernel>, live: u64, fixed: u64 },
}

impl Kernel {
    #[inline]
    fn eval(&self, x: u64) -> i8 {
        match self {
            Kernel::Table(t) => t.get(x),
            Kernel::Eval(f) => f(x),
            Kernel::Restricted { inner, live, fixed } => inner.eval((x & live) | fixed),
        }
    }

    fn tabulable(&self) -> bool {
        match self {
            Kernel::Table(_) => true,
            Kernel::Eval(_) => false,
            Kernel::Restricted { inner, .. } => inner.tabulable(),
        }
    }
}

/// A Boolean function behind a monotone, shared query counter. Clones and
/// restrictions share the counter of the function they came from.
#[derive(Clone)]
pub struct BooleanFunction {
    n: usize,
    kernel: Arc<Kernel>,
    queries: Arc<AtomicU64>,
}

impl fmt::Debug for BooleanFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let backing = match &*self.kernel {
            Kernel::Table(_) => "table",
            Kernel::Eval(_) => "evaluator",
            Kernel::Restricted { .. } => "restricted",
        };
        f.debug_struct("BooleanFunction")
            .field("n", &self.n)
            .field("backing", &backing)
            .field("queries", &self.queries())
            .finish()
    }
}

impl BooleanFunction {
    fn with_kernel(n: usize, kernel: Kernel) -> Self {
        Self { n, kernel: Arc::new(kernel), queries: Arc::new(AtomicU64::new(0)) }
    }

    pub fn from_table(table: TruthTable) -> Self {
        Self::with_kernel(table.arity(), Kernel::Table(table))
    }

    /// Opaque evaluator over point indices. `f` must return ±1.
    pub fn from_fn(n: usize, f: impl Fn(u64) -> i8 + Send + Sync + 'static) -> Result<Self> {
        if n > 64 {
            return Err(Error::unsupported(format!("arity {n} exceeds 64-bit point encoding")));
        }
        Ok(Self::with_kernel(n, Kernel::Eval(Box::new(f))))
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// Evaluate at a point given as n signs.
    pub fn eval(&self, x: &[i8]) -> Result<i8> {
        if x.len() != self.n {
            return Err(Error::input(format!("point has {} coordinates, function arity is {}", x.len(), self.n)));
        }
        let mut idx = 0u64;
        for (j, &v) in x.iter().enumerate() {
            match v {
                1 => {}
                -1 => idx |= 1 << j,
                other => return Err(Error::input(format!("coordinate {} has value {other}, expected ±1", j + 1))),
            }
        }
        Ok(self.query(idx))
    }

    /// Evaluate at a point index; one query.
    #[inline]
    pub fn query(&self, x: u64) -> i8 {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.kernel.eval(x)
    }

    pub fn is_tabulable(&self) -> bool {
        self.kernel.tabulable()
    }

    /// Materialize the truth table from backing storage without charging
    /// queries. Used by exact analysis only; `None` for opaque evaluators.
    pub fn table(&self) -> Option<TruthTable> {
        match &*self.kernel {
            Kernel::Table(t) => Some(t.clone()),
            k if k.tabulable() && self.n <= TABLE_CAP => Some(TruthTable::from_fn(self.n, |x| k.eval(x))),
            _ => None,
        }
    }

    pub fn restrict(&self, r: &Restriction) -> Result<BooleanFunction> {
        if r.n != self.n {
            return Err(Error::input(format!("restriction arity {} does not match function arity {}", r.n, self.n)));
        }
        let kernel = match &*self.kernel {
            // (x & l2 | f2) & l1 | f1 collapses to one restriction
            Kernel::Restricted { inner, live, fixed } => Kernel::Restricted {
                inner: inner.clone(),
                live: live & r.live,
                fixed: (r.fixed & live) | fixed,
            },
            _ => Kernel::Restricted { inner: self.kernel.clone(), live: r.live, fixed: r.fixed },
        };
        Ok(Self { n: self.n, kernel: Arc::new(kernel), queries: self.queries.clone() })
    }
}

/// A pair (J, z): live coordinates J and the values z of the rest.
///
/// The restricted function keeps arity n and ignores the coordinates outside J,
/// so restricted functions compose and share point encoding with the original.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Restriction {
    n: usize,
    live: u64,
    fixed: u64,
}

impl Restriction {
    /// `fixed` holds z as index bits on the complement of `live`.
    pub fn new(n: usize, live: u64, fixed: u64) -> Result<Self> {
        let all = low_mask(n);
        if n > 64 || live & !all != 0 || fixed & !all != 0 {
            return Err(Error::input("restriction masks exceed the arity"));
        }
        if live & fixed != 0 {
            return Err(Error::input("fixed assignment overlaps the live set"));
        }
        Ok(Self { n, live, fixed })
    }

    /// From 0-based live coordinates and explicit ±1 values for the rest
    /// (`z[j]` for coordinate j; entries on live coordinates are ignored).
    pub fn from_signs(n: usize, live: &[usize], z: &[i8]) -> Result<Self> {
        if z.len() != n {
            return Err(Error::input("fixed assignment must list one sign per coordinate"));
        }
        let live = bits::mask_of(live);
        let fixed = (0..n).filter(|&j| live >> j & 1 == 0 && z[j] < 0).fold(0, |m, j| m | 1 << j);
        Self::new(n, live, fixed)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn live(&self) -> u64 {
        self.live
    }

    pub fn fixed(&self) -> u64 {
        self.fixed
    }
}

/// Generator kinds. Coordinates are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    Constant(i8),
    Dictator(usize),
    Parity(u64),
    /// Majority of the first m coordinates, m odd.
    Majority(usize),
    /// Junta on `coords` with `subtable[Σ_j bit(coords[j]) << j]`.
    Junta { coords: Vec<usize>, subtable: Vec<i8> },
    Table(TruthTable),
    /// Uniformly random function keyed by a seed.
    Random(u64),
}

impl FunctionKind {
    fn validate(&self, n: usize) -> Result<()> {
        match self {
            FunctionKind::Constant(s) if s.abs() != 1 => Err(Error::input("constant must be ±1")),
            FunctionKind::Dictator(i) if *i >= n => Err(Error::input(format!("dictator coordinate {} > n={n}", i + 1))),
            FunctionKind::Parity(s) if *s & !low_mask(n) != 0 => Err(Error::input("parity set exceeds arity")),
            FunctionKind::Majority(m) if m % 2 == 0 => Err(Error::input(format!("majority needs odd arity, got {m}"))),
            FunctionKind::Majority(m) if *m > n => Err(Error::input(format!("majority of {m} inputs exceeds n={n}"))),
            FunctionKind::Junta { coords, subtable } => {
                if coords.len() > n {
                    return Err(Error::input(format!("junta set of size {} exceeds n={n}", coords.len())));
                }
                if coords.iter().any(|&c| c >= n) {
                    return Err(Error::input("junta coordinate out of range"));
                }
                let mut sorted = coords.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != coords.len() {
                    return Err(Error::input("junta coordinates must be distinct"));
                }
                if subtable.len() != 1 << coords.len() {
                    return Err(Error::input(format!(
                        "junta subtable needs {} signs, got {}",
                        1usize << coords.len(),
                        subtable.len()
                    )));
                }
                if subtable.iter().any(|s| s.abs() != 1) {
                    return Err(Error::input("subtable entries must be ±1"));
                }
                Ok(())
            }
            FunctionKind::Table(t) if t.arity() != n => {
                Err(Error::input(format!("table arity {} does not match n={n}", t.arity())))
            }
            _ => Ok(()),
        }
    }

    fn evaluator(&self) -> Box<EvalFn> {
        match self.clone() {
            FunctionKind::Constant(s) => Box::new(move |_| s),
            FunctionKind::Dictator(i) => Box::new(move |x| bits::coord(x, i)),
            FunctionKind::Parity(s) => Box::new(move |x| bits::chi(s, x)),
            FunctionKind::Majority(m) => {
                let mask = low_mask(m);
                Box::new(move |x| if 2 * (x & mask).count_ones() < m as u32 { 1 } else { -1 })
            }
            FunctionKind::Junta { coords, subtable } => {
                Box::new(move |x| subtable[junta_index(x, &coords)])
            }
            FunctionKind::Table(t) => Box::new(move |x| t.get(x)),
            FunctionKind::Random(seed) => {
                let key = SeedStream::new(seed).derive("random-function").value();
                Box::new(move |x| if mix(key, x) & 1 == 0 { 1 } else { -1 })
            }
        }
    }
}

#[inline]
pub(crate) fn junta_index(x: u64, coords: &[usize]) -> usize {
    coords.iter().enumerate().fold(0, |acc, (j, &c)| acc | (((x >> c) & 1) as usize) << j)
}

pub fn make_function(kind: &FunctionKind, n: usize) -> Result<BooleanFunction> {
    make_function_capped(kind, n, TABLE_CAP)
}

/// Table-backed when n ≤ `cap`, evaluator-backed otherwise.
pub fn make_function_capped(kind: &FunctionKind, n: usize, cap: usize) -> Result<BooleanFunction> {
    kind.validate(n)?;
    if let FunctionKind::Table(t) = kind {
        return Ok(BooleanFunction::from_table(t.clone()));
    }
    let f = kind.evaluator();
    if n <= cap {
        Ok(BooleanFunction::from_table(TruthTable::from_fn(n, f)))
    } else {
        BooleanFunction::from_fn(n, f)
    }
}
