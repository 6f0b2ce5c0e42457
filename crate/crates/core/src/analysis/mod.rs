//! Derived statistics over runs: summaries, closed-form reference values,
//! fixed-target gradients and crossings, and paired significance tests.

mod fixed_target;
mod formulas;
pub mod significance;
mod stats;

pub use fixed_target::{ft_crossing, ft_gradient, CrossingMode, DEFAULT_GRADIENT_WINDOW};
pub use formulas::{lambda_star, success_rate};
pub use significance::{paired_t_test, wilcoxon_signed_rank, TestReport};
pub use stats::{quantile, summarize, RunStats};
