//! Hyper-parameter search: exhaustive `(A, b)` grid sweeps and an iterated
//! racing tuner with adaptive capping.

mod race;
mod space;
mod sweep;
mod target;

pub use race::{race_tune, AuditEntry, TunedConfig, TunerSettings, TunerState, TuningOutcome};
pub use space::{Param, ParamKind, ParamSpace};
pub use sweep::{grid_sweep, linspace, GridAxis, SweepCell, SweepSpec};
pub use target::{AlgorithmTarget, Evaluation, Family, SyntheticTarget, TuningTarget};
