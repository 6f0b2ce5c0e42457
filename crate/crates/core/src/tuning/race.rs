//! Iterated racing with adaptive capping.
//!
//! Each iteration races a population of configurations on a shared, growing
//! list of instance seeds. After `first_test` instances, every configuration
//! that is significantly worse than the incumbent (paired Wilcoxon test) is
//! dropped. The survivors seed the next population, which is sampled from
//! truncated normals around them with the spread halved every iteration.
//! Runs are stopped at `cap_factor` times the incumbent's mean and scored
//! at that bound.

use rayon::prelude::*;

use crate::analysis::wilcoxon_signed_rank;
use crate::error::{domain, Result};
use crate::rng::{derive_seed, splitmix64, RandomSource};

use super::space::ParamSpace;
use super::target::TuningTarget;

#[derive(Clone, Debug, PartialEq)]
pub struct TunerSettings {
    /// Instances before the first elimination test.
    pub first_test: usize,
    /// Significance level of the elimination test.
    pub alpha: f64,
    /// Runs are capped at this multiple of the incumbent's mean.
    pub cap_factor: f64,
    /// Configurations per race; `None` scales with the dimension.
    pub population: Option<usize>,
    /// Survivors carried into the next iteration; `None` scales with the
    /// dimension.
    pub elites: Option<usize>,
    /// Spread (fraction of each parameter's range) in the first resampling
    /// iteration.
    pub initial_spread: f64,
}

impl Default for TunerSettings {
    fn default() -> Self {
        Self {
            first_test: 5,
            alpha: 0.05,
            cap_factor: 2.0,
            population: None,
            elites: None,
            initial_spread: 0.25,
        }
    }
}

impl TunerSettings {
    fn population(&self, dims: usize) -> usize {
        self.population.unwrap_or(12 + 4 * dims).max(2)
    }

    fn elites(&self, dims: usize) -> usize {
        self.elites.unwrap_or(2 + dims.ilog2() as usize).max(1)
    }

    /// Planned iterations; the budget is split evenly among the ones left.
    fn planned_iterations(&self, dims: usize) -> usize {
        2 + dims.ilog2() as usize
    }
}

/// One result of a configuration on an instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub cost: f64,
    pub censored: bool,
    /// Bound the run was stopped at.
    pub cap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub id: usize,
    pub values: Vec<f64>,
    /// Results on instances `0, 1, 2, ...` in order.
    pub results: Vec<Observation>,
}

impl Candidate {
    fn costs(&self, len: usize) -> Vec<f64> {
        self.results[..len].iter().map(|o| o.cost).collect()
    }

    fn mean(&self, len: usize) -> f64 {
        self.results[..len].iter().map(|o| o.cost).sum::<f64>() / len as f64
    }
}

/// Snapshot of the tuner.
#[derive(Clone, Debug, PartialEq)]
pub struct TunerState {
    pub alive: Vec<Candidate>,
    /// Spread of the truncated normals used for the latest resampling.
    pub spread: f64,
    pub consumed: u64,
    pub cap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditEntry {
    pub iteration: usize,
    pub config_id: usize,
    pub values: Vec<f64>,
    pub instance: usize,
    pub seed: u64,
    /// Budget units the run consumed.
    pub evaluations: u64,
    pub cost: f64,
    pub censored: bool,
    pub cap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TunedConfig {
    pub id: usize,
    pub values: Vec<f64>,
    /// Mean cost over `instances` instances, censored runs at their cap.
    pub mean: f64,
    pub instances: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuningOutcome {
    pub best: TunedConfig,
    pub audit: Vec<AuditEntry>,
    pub consumed: u64,
    pub iterations: usize,
    /// Set when the budget ran out before the returned configuration had
    /// been evaluated on `first_test` instances.
    pub warning: bool,
    pub state: TunerState,
}

/// Seed of racing instance `j`, shared by all configurations.
pub fn instance_seed(master_seed: u64, j: usize) -> u64 {
    derive_seed(splitmix64(master_seed ^ 0x7261_6365), j as u64)
}

/// Length of the instance prefix all candidates share.
fn common_len(cands: &[Candidate]) -> usize {
    cands.iter().map(|c| c.results.len()).min().unwrap_or(0)
}

fn best_index(cands: &[Candidate], len: usize) -> usize {
    let mut best = 0;
    for (i, c) in cands.iter().enumerate() {
        if c.mean(len) < cands[best].mean(len) {
            best = i;
        }
    }
    best
}

struct Tuner<'a, T: TuningTarget> {
    space: &'a ParamSpace,
    target: &'a T,
    settings: &'a TunerSettings,
    total_budget: u64,
    master_seed: u64,
    consumed: u64,
    cap: f64,
    audit: Vec<AuditEntry>,
    next_id: usize,
}

impl<T: TuningTarget> Tuner<'_, T> {
    fn candidate(&mut self, values: Vec<f64>) -> Candidate {
        self.next_id += 1;
        Candidate {
            id: self.next_id - 1,
            values,
            results: Vec::new(),
        }
    }

    /// Cap for step `j`: `cap_factor` times the best mean among the
    /// configurations evaluated on every earlier instance (at the start of a
    /// race, the elites carried over).
    fn update_cap(&mut self, alive: &[Candidate], j: usize) {
        let seen: Vec<Candidate> = alive
            .iter()
            .filter(|c| c.results.len() >= j.max(1))
            .cloned()
            .collect();
        let len = common_len(&seen);
        let bound = if len == 0 {
            f64::INFINITY
        } else {
            self.settings.cap_factor * seen[best_index(&seen, len)].mean(len)
        };
        self.cap = bound.min(self.target.run_budget());
    }

    /// Races `alive` until at most `keep` remain, the iteration's share of
    /// the budget is used, or the next step is unaffordable. Returns `false`
    /// once the total budget is exhausted.
    fn race(
        &mut self,
        iteration: usize,
        alive: &mut Vec<Candidate>,
        keep: usize,
        share: u64,
    ) -> Result<bool> {
        let start = self.consumed;
        let mut j = 0;
        loop {
            if alive.len() <= keep && common_len(alive) >= self.settings.first_test {
                return Ok(true);
            }
            if share == 0 {
                return Ok(false);
            }
            if self.consumed - start >= share {
                return Ok(true);
            }
            // Everyone has instance j - 1 or more; elites may already have j.
            let todo: Vec<usize> = (0..alive.len())
                .filter(|&i| alive[i].results.len() == j)
                .collect();
            if !todo.is_empty() {
                self.update_cap(alive, j);
                let cap = self.cap;
                let worst = (todo.len() as f64 * cap.ceil()) as u64;
                if self.consumed + worst > self.total_budget {
                    return Ok(false);
                }
                let seed = instance_seed(self.master_seed, j);
                let target = self.target;
                let evals = todo
                    .par_iter()
                    .map(|&i| target.evaluate(&alive[i].values, seed, cap))
                    .collect::<Result<Vec<_>>>()?;
                for (&i, e) in todo.iter().zip(evals) {
                    self.consumed += e.consumed;
                    let c = &mut alive[i];
                    c.results.push(Observation {
                        cost: e.cost,
                        censored: e.censored,
                        cap,
                    });
                    self.audit.push(AuditEntry {
                        iteration,
                        config_id: c.id,
                        values: c.values.clone(),
                        instance: j,
                        seed,
                        evaluations: e.consumed,
                        cost: e.cost,
                        censored: e.censored,
                        cap,
                    });
                }
            }
            j += 1;
            if j >= self.settings.first_test {
                self.eliminate(alive, j);
            }
        }
    }

    fn eliminate(&self, alive: &mut Vec<Candidate>, len: usize) {
        let best = best_index(alive, len);
        let best_costs = alive[best].costs(len);
        let best_mean = alive[best].mean(len);
        let alpha = self.settings.alpha;
        let mut i = 0;
        alive.retain(|c| {
            let idx = i;
            i += 1;
            if idx == best || c.mean(len) <= best_mean {
                return true;
            }
            match wilcoxon_signed_rank(&c.costs(len), &best_costs) {
                Ok(t) => !t.is_significant(alpha),
                Err(_) => true,
            }
        });
    }
}

/// Tunes `target` over `space` within `total_budget` budget units.
///
/// Never consumes more than `total_budget`: a racing step is only started if
/// it stays within budget even when every run hits the cap. Deterministic
/// for a given `master_seed`.
pub fn race_tune<T: TuningTarget>(
    space: &ParamSpace,
    target: &T,
    total_budget: u64,
    master_seed: u64,
    settings: &TunerSettings,
) -> Result<TuningOutcome> {
    target.validate(space)?;
    if settings.first_test < 1
        || settings.cap_factor.is_nan()
        || settings.cap_factor < 1.0
        || !(settings.alpha > 0.0 && settings.alpha < 1.0)
    {
        return Err(domain("invalid tuner settings"));
    }
    let dims = space.dims();
    let population = settings.population(dims);
    let keep = settings.elites(dims).min(population);
    let planned = settings.planned_iterations(dims);
    let mut rng = RandomSource::new(derive_seed(master_seed, u64::MAX));
    let mut tuner = Tuner {
        space,
        target,
        settings,
        total_budget,
        master_seed,
        consumed: 0,
        cap: target.run_budget(),
        audit: Vec::new(),
        next_id: 0,
    };

    let mut alive: Vec<Candidate> = Vec::new();
    let mut spread = 1.0;
    let mut iteration = 0;
    loop {
        // Sample the new population.
        let mut fresh: Vec<Vec<f64>> = Vec::new();
        let mut attempts = 0;
        while alive.len() + fresh.len() < population && attempts < 20 * population {
            attempts += 1;
            let v = if alive.is_empty() {
                tuner.space.sample_uniform(&mut rng)
            } else {
                // Parents weighted by rank: best elite gets weight k.
                let k = alive.len();
                let total = k * (k + 1) / 2;
                let mut pick = rand::Rng::random_range(&mut rng, 0..total);
                let mut parent = 0;
                while pick >= k - parent {
                    pick -= k - parent;
                    parent += 1;
                }
                tuner
                    .space
                    .sample_around(&alive[parent].values, spread, &mut rng)
            };
            if !alive.iter().any(|c| c.values == v) && !fresh.contains(&v) {
                fresh.push(v);
            }
        }
        for v in fresh {
            let c = tuner.candidate(v);
            alive.push(c);
        }

        let remaining = total_budget - tuner.consumed;
        let share = remaining / planned.saturating_sub(iteration).max(1) as u64;
        let more = tuner.race(iteration, &mut alive, keep, share)?;

        // Rank by mean on the shared prefix and keep the elites.
        let len = common_len(&alive);
        if len > 0 {
            alive.sort_by(|a, b| a.mean(len).total_cmp(&b.mean(len)).then(a.id.cmp(&b.id)));
        }
        if !more || !more_points(space) || alive.iter().all(|c| c.results.is_empty()) {
            break;
        }
        alive.truncate(keep);
        iteration += 1;
        spread = settings.initial_spread * 0.5f64.powi(iteration as i32 - 1);
    }

    // Prefer configurations that went through at least one test.
    let tested: Vec<Candidate> = alive
        .iter()
        .filter(|c| c.results.len() >= settings.first_test)
        .cloned()
        .collect();
    let warning = tested.is_empty();
    let pool = if warning { alive.clone() } else { tested };
    let len = common_len(&pool);
    let best = if len == 0 {
        &pool[0]
    } else {
        &pool[best_index(&pool, len)]
    };
    let best = TunedConfig {
        id: best.id,
        values: best.values.clone(),
        mean: if len == 0 { f64::NAN } else { best.mean(len) },
        instances: len,
    };
    Ok(TuningOutcome {
        best,
        consumed: tuner.consumed,
        iterations: iteration + 1,
        warning,
        state: TunerState {
            alive,
            spread,
            consumed: tuner.consumed,
            cap: tuner.cap,
        },
        audit: tuner.audit,
    })
}

/// Whether the space has more than one point.
fn more_points(space: &ParamSpace) -> bool {
    space.params.iter().any(|p| p.lower < p.upper)
}
