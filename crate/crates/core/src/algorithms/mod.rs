//! The optimizers: self-adjusting and static (1+(λ,λ)) GA, RLS, and the
//! RLS-then-GA switch hybrid.
//!
//! All of them share the same cost model. The initial sample is charged one
//! evaluation, every fitness evaluation after that is charged one, and
//! crossover offspring that are copies of one of their parents are free
//! because their fitness is already known. A run stops as soon as the
//! optimum has been sampled or the evaluation count reaches the budget, so
//! `evaluations <= budget` always holds.

mod dynamic;
mod rls;
mod static_ga;
mod switch;

pub use dynamic::run_dyn;
pub use rls::run_rls;
pub use static_ga::run_static;
pub use switch::run_switch;

use rand::Rng;

use crate::error::{config, Result};
use crate::genome::{onemax, BitString, Fitness};
use crate::trace::TraceSink;

/// Hyper-parameters of the self-adjusting GA: `p = αλ/n`, `λ2 = nint(βλ)`,
/// `c = γ/λ`, and the update factors `A` (on failure) and `b` (on success).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `A > 1`, applied to `λ` after an iteration without strict improvement.
    pub increase: f64,
    /// `0 < b < 1`, applied to `λ` after a strict improvement.
    pub decrease: f64,
}

impl DynConfig {
    pub fn new(alpha: f64, beta: f64, gamma: f64, increase: f64, decrease: f64) -> Result<Self> {
        let cfg = Self {
            alpha,
            beta,
            gamma,
            increase,
            decrease,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The standard one-fifth rule setup `(1, 1, 1, (3/2)^(1/4), 2/3)`.
    pub fn default_rule() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            increase: 1.5f64.powf(0.25),
            decrease: 2.0 / 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.increase.is_finite() && self.increase > 1.0) {
            return Err(config(format!("A must be > 1, got {}", self.increase)));
        }
        if !(self.decrease > 0.0 && self.decrease < 1.0) {
            return Err(config(format!(
                "b must be in (0, 1), got {}",
                self.decrease
            )));
        }
        Ok(())
    }
}

/// Candidate set of the static GA's final selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StaticSelection {
    /// Best mutant and crossover offspring, as in the self-adjusting GA.
    /// This is the variant whose runtimes match the published static tables.
    #[default]
    WithMutant,
    /// Crossover offspring only.
    OffspringOnly,
}

/// Parameters of the static GA: `λ1` mutants, `λ2` crossover offspring,
/// mutation rate `k/n`, crossover bias `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticConfig {
    pub lambda1: usize,
    pub lambda2: usize,
    pub k: usize,
    pub c: f64,
    pub selection: StaticSelection,
}

impl StaticConfig {
    pub fn new(lambda1: usize, lambda2: usize, k: usize, c: f64) -> Result<Self> {
        let cfg = Self {
            lambda1,
            lambda2,
            k,
            c,
            selection: StaticSelection::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda1 == 0 || self.lambda2 == 0 {
            return Err(config("lambda1 and lambda2 must be >= 1"));
        }
        if self.k == 0 {
            return Err(config("k must be >= 1"));
        }
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(config(format!("c must be in (0, 1), got {}", self.c)));
        }
        Ok(())
    }
}

/// What to record during a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraceOptions {
    /// First-hit times per target.
    pub fixed_target: bool,
    /// One [`IterationRecord`] per completed iteration.
    pub history: bool,
}

impl TraceOptions {
    pub const NONE: Self = Self {
        fixed_target: false,
        history: false,
    };
    pub const FIXED_TARGET: Self = Self {
        fixed_target: true,
        history: false,
    };
    pub const ALL: Self = Self {
        fixed_target: true,
        history: true,
    };
}

/// State at the end of a completed iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub evaluations: u64,
    pub parent_fitness: Fitness,
    /// Real-valued `λ` after the update (1 for RLS, unused for static).
    pub lambda: f64,
    pub lambda1: usize,
    pub lambda2: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub evaluations: u64,
    pub success: bool,
    /// Best fitness sampled during the run.
    pub final_fitness: Fitness,
    pub trace: Option<TraceSink>,
    pub history: Option<Vec<IterationRecord>>,
}

/// Any of the supported optimizers with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Algorithm {
    Dyn(DynConfig),
    Static(StaticConfig),
    Rls,
    Switch { target: Fitness, cfg: DynConfig },
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Dyn(_) => "dyn",
            Algorithm::Static(_) => "static",
            Algorithm::Rls => "rls",
            Algorithm::Switch { .. } => "switch",
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(config(format!("n must be >= 2, got {n}")));
        }
        match self {
            Algorithm::Dyn(cfg) => cfg.validate(),
            Algorithm::Static(cfg) => {
                cfg.validate()?;
                if cfg.k > n {
                    return Err(config(format!("k = {} exceeds n = {n}", cfg.k)));
                }
                Ok(())
            }
            Algorithm::Rls => Ok(()),
            Algorithm::Switch { target, cfg } => {
                if *target > n {
                    return Err(crate::error::domain(format!(
                        "switch target {target} exceeds n = {n}"
                    )));
                }
                cfg.validate()
            }
        }
    }

    pub fn run<R: Rng + ?Sized>(
        &self,
        n: usize,
        budget: u64,
        rng: &mut R,
        opts: TraceOptions,
    ) -> Result<RunResult> {
        match self {
            Algorithm::Dyn(cfg) => run_dyn(cfg, n, budget, rng, opts),
            Algorithm::Static(cfg) => run_static(cfg, n, budget, rng, opts),
            Algorithm::Rls => run_rls(n, budget, rng, opts),
            Algorithm::Switch { target, cfg } => run_switch(*target, cfg, n, budget, rng, opts),
        }
    }
}

pub(crate) fn check_run_args(n: usize, budget: u64) -> Result<()> {
    if n < 2 {
        return Err(config(format!("n must be >= 2, got {n}")));
    }
    if budget == 0 {
        return Err(config("budget must be >= 1"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Continue,
    Stop,
}

/// Evaluation counter: charges evaluations, tracks the best sampled fitness,
/// feeds the fixed-target trace and decides when to stop.
pub(crate) struct Ledger {
    n: usize,
    budget: u64,
    evaluations: u64,
    best: Fitness,
    trace: Option<TraceSink>,
    history: Option<Vec<IterationRecord>>,
}

impl Ledger {
    pub fn new(n: usize, budget: u64, opts: TraceOptions) -> Self {
        Self {
            n,
            budget,
            evaluations: 0,
            best: 0,
            trace: opts.fixed_target.then(|| TraceSink::new(n)),
            history: opts.history.then(Vec::new),
        }
    }

    /// Charges one evaluation of a solution with fitness `fitness`.
    pub fn charge(&mut self, fitness: Fitness, lambda1: usize) -> Flow {
        self.evaluations += 1;
        if self.evaluations == 1 || fitness > self.best {
            self.best = self.best.max(fitness);
            if let Some(t) = self.trace.as_mut() {
                t.record_hit(fitness, self.evaluations, lambda1);
            }
        }
        if fitness == self.n || self.evaluations >= self.budget {
            Flow::Stop
        } else {
            Flow::Continue
        }
    }

    pub fn iteration_done(
        &mut self,
        parent_fitness: Fitness,
        lambda: f64,
        lambda1: usize,
        lambda2: usize,
    ) {
        if let Some(h) = self.history.as_mut() {
            h.push(IterationRecord {
                evaluations: self.evaluations,
                parent_fitness,
                lambda,
                lambda1,
                lambda2,
            });
        }
    }

    pub fn finish(self) -> RunResult {
        RunResult {
            evaluations: self.evaluations,
            success: self.best == self.n,
            final_fitness: self.best,
            trace: self.trace,
            history: self.history,
        }
    }
}

/// Current parent of a run.
pub(crate) struct Parent {
    pub x: BitString,
    pub fx: Fitness,
}

impl Parent {
    /// Samples the initial parent uniformly and charges its evaluation.
    pub fn initial<R: Rng + ?Sized>(
        n: usize,
        rng: &mut R,
        ledger: &mut Ledger,
        lambda1: usize,
    ) -> (Self, Flow) {
        let x = BitString::random(n, rng);
        let fx = onemax(&x);
        let flow = ledger.charge(fx, lambda1);
        (Self { x, fx }, flow)
    }

    /// Fitness change from flipping `positions` of the parent.
    pub fn delta(&self, positions: &[usize]) -> isize {
        positions
            .iter()
            .map(|&i| if self.x.get(i) { -1 } else { 1 })
            .sum()
    }

    pub fn fitness_after(&self, positions: &[usize]) -> Fitness {
        (self.fx as isize + self.delta(positions)) as Fitness
    }

    pub fn apply(&mut self, positions: &[usize], new_fitness: Fitness) {
        for &i in positions {
            self.x.flip(i);
        }
        self.fx = new_fitness;
        debug_assert_eq!(self.fx, onemax(&self.x));
    }
}

/// Clamps a mutation rate or crossover bias into `[1/n, 0.99]`.
pub(crate) fn clamp_probability(v: f64, n: usize) -> f64 {
    v.clamp(1.0 / n as f64, 0.99)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(DynConfig::new(1.0, 1.0, 1.0, 1.1, 0.7).is_ok());
        assert!(DynConfig::new(0.0, 1.0, 1.0, 1.1, 0.7).is_err());
        assert!(DynConfig::new(1.0, 1.0, 1.0, 1.0, 0.7).is_err());
        assert!(DynConfig::new(1.0, 1.0, 1.0, 1.1, 1.0).is_err());
        assert!(DynConfig::new(1.0, f64::NAN, 1.0, 1.1, 0.5).is_err());
        assert!(DynConfig::default_rule().validate().is_ok());

        assert!(StaticConfig::new(5, 60, 7, 0.0143).is_ok());
        assert!(StaticConfig::new(0, 60, 7, 0.0143).is_err());
        assert!(StaticConfig::new(5, 60, 0, 0.0143).is_err());
        assert!(StaticConfig::new(5, 60, 7, 1.0).is_err());
        assert!(Algorithm::Static(StaticConfig::new(1, 1, 11, 0.5).unwrap())
            .validate(10)
            .is_err());
        assert!(Algorithm::Rls.validate(1).is_err());
    }

    #[test]
    fn default_rule_is_one_fifth() {
        let cfg = DynConfig::default_rule();
        // A^4 b = 1: four failures undo one success.
        assert!((cfg.increase.powi(4) * cfg.decrease - 1.0).abs() < 1e-15);
    }

    #[test]
    fn clamp_bounds() {
        assert_eq!(clamp_probability(0.0001, 100), 0.01);
        assert_eq!(clamp_probability(3.0, 100), 0.99);
        assert_eq!(clamp_probability(0.5, 100), 0.5);
    }
}
