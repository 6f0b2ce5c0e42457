//! Self-adjusting and static (1+(λ,λ)) genetic algorithms on OneMax, with
//! the tooling to tune, trace and compare them.

#![deny(unsafe_code)]

pub mod algorithms;
pub mod analysis;
pub mod error;
pub mod experiment;
pub mod genome;
pub mod operators;
pub mod presets;
pub mod rng;
pub mod trace;
pub mod tuning;

pub use algorithms::{
    run_dyn, run_rls, run_static, run_switch, Algorithm, DynConfig, RunResult, StaticConfig,
    StaticSelection, TraceOptions,
};
pub use error::{Error, Result};
pub use genome::{hamming, onemax, BitString, Fitness};
pub use rng::RandomSource;
