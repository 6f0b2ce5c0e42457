use rand::Rng;
use rand_distr::Distribution;

use super::{check_run_args, clamp_probability, Flow, Ledger, Parent, RunResult, TraceOptions};
use crate::algorithms::DynConfig;
use crate::error::Result;
use crate::genome::Fitness;
use crate::operators::{nint, ConditionalBinomial, FlipSampler, TieBreakMax};

/// Runs the self-adjusting GA `dyn(α, β, γ, A, b)` on OneMax of size `n`.
///
/// Offspring are kept as sets of flipped positions relative to the parent, so
/// an iteration costs `O((λ1 + λ2) ℓ)` instead of `O((λ1 + λ2) n)`. A
/// crossover offspring differs from the parent exactly in the subset of the
/// mutant's flipped positions it inherited.
pub fn run_dyn<R: Rng + ?Sized>(
    cfg: &DynConfig,
    n: usize,
    budget: u64,
    rng: &mut R,
    opts: TraceOptions,
) -> Result<RunResult> {
    cfg.validate()?;
    check_run_args(n, budget)?;
    let mut ledger = Ledger::new(n, budget, opts);
    let (mut parent, flow) = Parent::initial(n, rng, &mut ledger, 1);
    if flow == Flow::Continue {
        let mut engine = Variation::new(n);
        dyn_phase(cfg, &mut parent, &mut engine, &mut ledger, rng);
    }
    Ok(ledger.finish())
}

/// Iterates from the given parent with `λ = 1` until the ledger says stop.
pub(crate) fn dyn_phase<R: Rng + ?Sized>(
    cfg: &DynConfig,
    parent: &mut Parent,
    engine: &mut Variation,
    ledger: &mut Ledger,
    rng: &mut R,
) {
    let n = engine.n();
    let nf = n as f64;
    let lambda_max = (n - 1) as f64;
    let mut lambda: f64 = 1.0;
    loop {
        debug_assert!((1.0..=lambda_max).contains(&lambda));
        let lambda1 = nint(lambda);
        let lambda2 = nint(cfg.beta * lambda).max(1);
        let p = clamp_probability(cfg.alpha * lambda / nf, n);
        let c = clamp_probability(cfg.gamma / lambda, n);
        let radius = ConditionalBinomial::new(n, p)
            .expect("clamped rate")
            .sample(rng);

        let Some(mutant_fitness) = engine.mutation_phase(parent, radius, lambda1, ledger, rng)
        else {
            return;
        };
        let Some(fy) = engine.crossover_phase(
            parent,
            mutant_fitness,
            true,
            c,
            lambda1,
            lambda2,
            ledger,
            rng,
        ) else {
            return;
        };

        if fy > parent.fx {
            engine.accept(parent, fy);
            lambda = (cfg.decrease * lambda).max(1.0);
        } else {
            if fy == parent.fx {
                engine.accept(parent, fy);
            }
            lambda = (cfg.increase * lambda).min(lambda_max);
        }
        ledger.iteration_done(parent.fx, lambda, lambda1, lambda2);
    }
}

/// Scratch buffers for one run's mutation and crossover phases.
pub(crate) struct Variation {
    sampler: FlipSampler,
    mutant: Vec<usize>,
    offspring: Vec<usize>,
    winner: Vec<usize>,
}

impl Variation {
    pub fn new(n: usize) -> Self {
        Self {
            sampler: FlipSampler::new(n),
            mutant: Vec::new(),
            offspring: Vec::new(),
            winner: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.sampler.n()
    }

    /// Creates `lambda1` mutants at Hamming distance `radius` and keeps the
    /// best one (ties uniform). Returns its fitness, or `None` if the run
    /// has to stop.
    pub fn mutation_phase<R: Rng + ?Sized>(
        &mut self,
        parent: &Parent,
        radius: usize,
        lambda1: usize,
        ledger: &mut Ledger,
        rng: &mut R,
    ) -> Option<Fitness> {
        let mut selector = TieBreakMax::new();
        for _ in 0..lambda1 {
            let flips = self.sampler.sample(radius, rng);
            let f = parent.fitness_after(flips);
            if selector.offer(f, rng) {
                self.mutant.clear();
                self.mutant.extend_from_slice(flips);
            }
            if ledger.charge(f, lambda1) == Flow::Stop {
                return None;
            }
        }
        selector.best()
    }

    /// Creates `lambda2` biased-crossover offspring of the parent and the
    /// kept mutant. The winner (stored internally, read by [`Self::accept`])
    /// is the best of the offspring, plus the mutant itself when
    /// `include_mutant` is set. Copies of either parent are not charged.
    #[allow(clippy::too_many_arguments)]
    pub fn crossover_phase<R: Rng + ?Sized>(
        &mut self,
        parent: &Parent,
        mutant_fitness: Fitness,
        include_mutant: bool,
        c: f64,
        lambda1: usize,
        lambda2: usize,
        ledger: &mut Ledger,
        rng: &mut R,
    ) -> Option<Fitness> {
        let mut selector = TieBreakMax::new();
        if include_mutant {
            selector.offer(mutant_fitness, rng);
            self.winner.clear();
            self.winner.extend_from_slice(&self.mutant);
        }
        for _ in 0..lambda2 {
            self.offspring.clear();
            for &i in &self.mutant {
                if rng.random_bool(c) {
                    self.offspring.push(i);
                }
            }
            let f = if self.offspring.is_empty() {
                parent.fx
            } else if self.offspring.len() == self.mutant.len() {
                mutant_fitness
            } else {
                let f = parent.fitness_after(&self.offspring);
                if ledger.charge(f, lambda1) == Flow::Stop {
                    return None;
                }
                f
            };
            if selector.offer(f, rng) {
                std::mem::swap(&mut self.winner, &mut self.offspring);
            }
        }
        selector.best()
    }

    /// Replaces the parent by the crossover winner.
    pub fn accept(&self, parent: &mut Parent, fitness: Fitness) {
        parent.apply(&self.winner, fitness);
    }
}
