use crate::algorithms::{Algorithm, DynConfig, StaticConfig, TraceOptions};
use crate::error::{config, Result};
use crate::experiment::run_seeded;
use crate::rng::splitmix64;

use super::space::ParamSpace;

/// Outcome of one tuning run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    /// Score used for racing; equals the cap when censored.
    pub cost: f64,
    pub censored: bool,
    /// Budget units (fitness evaluations) the run consumed.
    pub consumed: u64,
}

/// Something the racing tuner can minimize. Evaluations must be pure
/// functions of `(values, seed, cap)`.
pub trait TuningTarget: Sync {
    /// Checks that every configuration of `space` can be evaluated.
    fn validate(&self, space: &ParamSpace) -> Result<()>;

    /// Largest cost a single run may be charged.
    fn run_budget(&self) -> f64;

    /// Runs `values` on instance `seed`, stopping at `cap`.
    fn evaluate(&self, values: &[f64], seed: u64, cap: f64) -> Result<Evaluation>;
}

/// Algorithm family being tuned. Parameters absent from the space keep the
/// base configuration's value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    Dyn(DynConfig),
    Static(StaticConfig),
}

impl Family {
    fn names(&self) -> &'static [&'static str] {
        match self {
            Family::Dyn(_) => &["alpha", "beta", "gamma", "A", "b"],
            Family::Static(_) => &["lambda1", "lambda2", "k", "c"],
        }
    }
}

/// Optimization time on OneMax as tuning cost.
#[derive(Clone, Debug)]
pub struct AlgorithmTarget {
    pub family: Family,
    pub n: usize,
    pub run_budget: u64,
    slots: Vec<usize>,
}

impl AlgorithmTarget {
    pub fn new(family: Family, space: &ParamSpace, n: usize, run_budget: u64) -> Result<Self> {
        if run_budget == 0 {
            return Err(config("run budget must be >= 1"));
        }
        let names = family.names();
        let slots = space
            .params
            .iter()
            .map(|p| {
                names.iter().position(|&q| q == p.name).ok_or_else(|| {
                    config(format!(
                        "{} is not a parameter of this family ({names:?})",
                        p.name
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let target = Self {
            family,
            n,
            run_budget,
            slots,
        };
        target.validate(space)?;
        Ok(target)
    }

    /// Concrete algorithm for a point of the space.
    pub fn algorithm(&self, values: &[f64]) -> Result<Algorithm> {
        let algo = match self.family {
            Family::Dyn(base) => {
                let mut v = [
                    base.alpha,
                    base.beta,
                    base.gamma,
                    base.increase,
                    base.decrease,
                ];
                for (&slot, &x) in self.slots.iter().zip(values) {
                    v[slot] = x;
                }
                Algorithm::Dyn(DynConfig::new(v[0], v[1], v[2], v[3], v[4])?)
            }
            Family::Static(base) => {
                let mut v = [
                    base.lambda1 as f64,
                    base.lambda2 as f64,
                    base.k as f64,
                    base.c,
                ];
                for (&slot, &x) in self.slots.iter().zip(values) {
                    v[slot] = x;
                }
                let mut cfg = StaticConfig::new(v[0] as usize, v[1] as usize, v[2] as usize, v[3])?;
                cfg.selection = base.selection;
                Algorithm::Static(cfg)
            }
        };
        algo.validate(self.n)?;
        Ok(algo)
    }
}

impl TuningTarget for AlgorithmTarget {
    fn validate(&self, space: &ParamSpace) -> Result<()> {
        if space.dims() != self.slots.len() {
            return Err(config("space does not match the target"));
        }
        // Corners of the space cover the integer limits; real parameters are
        // sampled strictly inside their bounds.
        let inner: Vec<f64> = space
            .params
            .iter()
            .map(|p| match p.kind {
                super::ParamKind::Integer => p.upper,
                super::ParamKind::Real => 0.5 * (p.lower + p.upper),
            })
            .collect();
        self.algorithm(&inner).map(|_| ())
    }

    fn run_budget(&self) -> f64 {
        self.run_budget as f64
    }

    fn evaluate(&self, values: &[f64], seed: u64, cap: f64) -> Result<Evaluation> {
        let algo = self.algorithm(values)?;
        let limit = (cap.floor() as u64).clamp(1, self.run_budget);
        let r = run_seeded(&algo, self.n, limit, seed, TraceOptions::NONE)?;
        Ok(Evaluation {
            cost: if r.success {
                r.evaluations as f64
            } else {
                limit as f64
            },
            censored: !r.success,
            consumed: r.evaluations,
        })
    }
}

/// Noisy convex test function: `scale · (1 + Σ ((x_i - x*_i) / w_i)²)`
/// times a noise factor in `[1 - noise, 1 + noise]`. Half of the noise is
/// shared by all configurations on an instance, half is specific to the
/// configuration.
#[derive(Clone, Debug)]
pub struct SyntheticTarget {
    pub optimum: Vec<f64>,
    pub widths: Vec<f64>,
    pub scale: f64,
    pub noise: f64,
    /// Cap of the first runs, before any incumbent is known.
    pub run_budget: f64,
}

fn unit(bits: u64) -> f64 {
    (bits >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

impl SyntheticTarget {
    pub fn score(&self, values: &[f64], seed: u64) -> f64 {
        let bowl: f64 = values
            .iter()
            .zip(&self.optimum)
            .zip(&self.widths)
            .map(|((x, o), w)| ((x - o) / w).powi(2))
            .sum();
        let own = values.iter().fold(seed, |h, v| splitmix64(h ^ v.to_bits()));
        let noise = 0.5 * unit(splitmix64(seed)) + 0.5 * unit(splitmix64(own));
        self.scale * (1.0 + bowl) * (1.0 + self.noise * noise)
    }
}

impl TuningTarget for SyntheticTarget {
    fn validate(&self, space: &ParamSpace) -> Result<()> {
        if space.dims() != self.optimum.len() || self.widths.len() != self.optimum.len() {
            return Err(config("space does not match the target"));
        }
        if !(self.noise >= 0.0 && self.noise < 1.0) {
            return Err(config("noise must be in [0, 1)"));
        }
        if !(self.run_budget.is_finite() && self.run_budget > 0.0) {
            return Err(config("run budget must be finite and positive"));
        }
        Ok(())
    }

    fn run_budget(&self) -> f64 {
        self.run_budget
    }

    fn evaluate(&self, values: &[f64], seed: u64, cap: f64) -> Result<Evaluation> {
        let s = self.score(values, seed);
        let (cost, censored) = if s > cap { (cap, true) } else { (s, false) };
        Ok(Evaluation {
            cost,
            censored,
            consumed: cost.ceil() as u64,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuning::Param;

    #[test]
    fn dyn_target_fills_in_base_values() {
        let space = ParamSpace::dyn_update_strengths();
        let t = AlgorithmTarget::new(Family::Dyn(DynConfig::default_rule()), &space, 100, 1000)
            .unwrap();
        match t.algorithm(&[1.3, 0.6]).unwrap() {
            Algorithm::Dyn(c) => assert_eq!((c.alpha, c.increase, c.decrease), (1.0, 1.3, 0.6)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn capped_runs_are_censored_at_the_cap() {
        let space = ParamSpace::dyn_update_strengths();
        let t = AlgorithmTarget::new(Family::Dyn(DynConfig::default_rule()), &space, 500, 150_000)
            .unwrap();
        let e = t.evaluate(&[1.1, 0.7], 3, 50.7).unwrap();
        assert_eq!(
            e,
            Evaluation {
                cost: 50.0,
                censored: true,
                consumed: 50
            }
        );
        let full = t.evaluate(&[1.1, 0.7], 3, 1e12).unwrap();
        assert!(!full.censored && full.cost == full.consumed as f64);
    }

    #[test]
    fn unknown_or_invalid_parameters_are_rejected() {
        let space = ParamSpace::new(vec![Param::real("zeta", 0.0, 1.0)]).unwrap();
        assert!(
            AlgorithmTarget::new(Family::Dyn(DynConfig::default_rule()), &space, 100, 10).is_err()
        );
        let too_big_k = ParamSpace::static_full(1000);
        let base = StaticConfig::new(5, 60, 7, 0.0143).unwrap();
        assert!(AlgorithmTarget::new(Family::Static(base), &too_big_k, 50, 10).is_err());
        assert!(
            AlgorithmTarget::new(Family::Static(base), &ParamSpace::static_full(50), 50, 10)
                .is_ok()
        );
    }

    #[test]
    fn synthetic_noise_is_bounded_and_deterministic() {
        let t = SyntheticTarget {
            optimum: vec![0.3],
            widths: vec![1.0],
            scale: 100.0,
            noise: 0.2,
            run_budget: 1000.0,
        };
        for seed in 0..500 {
            let s = t.score(&[0.3], seed);
            assert!((80.0..=120.0).contains(&s));
            assert_eq!(s, t.score(&[0.3], seed));
        }
    }
}
