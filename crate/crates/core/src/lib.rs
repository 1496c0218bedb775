//! Tolerant junta testing and k-junta distance approximation under query access.
//!
//! The crate is organised bottom-up: [`boolfn`] holds query-counted Boolean
//! functions, [`fourier`] the exact and sampled spectral toolkit, [`oracles`]
//! coordinate oracles and implicit junta access, [`prune`] and [`subexp`] the
//! two estimator families, and [`exactref`] brute-force ground truth used to
//! check everything else. Estimators are exposed behind the [`estimator`]
//! registry so front ends can select them by name.

pub mod bits;
pub mod boolfn;
pub mod budget;
pub mod error;
pub mod estimator;
pub mod exactref;
pub mod fourier;
pub mod oracles;
pub mod prune;
pub mod report;
pub mod seed;
pub mod subexp;

pub use boolfn::{BooleanFunction, FunctionKind, PlantedInstance, Restriction};
pub use budget::Budget;
pub use error::{Error, Result};
pub use estimator::{EstimateParams, Estimator, EstimatorRegistry};
pub use fourier::{BoundedEvaluator, FourierSpectrum};
pub use seed::SeedStream;
