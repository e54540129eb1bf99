//! Differential evolution with centroid-of-best injection and dynamic
//! quasi-opposition, plus the pieces needed to train MLP classifiers with it
//! and run cross-validated benchmarks.

pub mod bench;
pub mod centroid;
pub mod data;
pub mod error;
pub mod exec;
pub mod mlp;
pub mod objective;
pub mod operators;
pub mod opposition;
pub mod optimizer;
pub mod population;
pub mod seed;

pub use error::{Error, Result};
pub use exec::Execution;
pub use objective::Objective;
pub use optimizer::{run_cende_dobl, run_de_baseline, OptimizerConfig, RunTrace};
pub use population::{Bounds, Individual, Population};
