use rand::Rng;
use rand_distr::Distribution;

use super::dynamic::Variation;
use super::{check_run_args, clamp_probability, Flow, Ledger, Parent, RunResult, TraceOptions};
use crate::algorithms::{StaticConfig, StaticSelection};
use crate::error::{config, Result};
use crate::operators::ConditionalBinomial;

/// Runs the static GA `stat(λ1, λ2, k, c)`.
///
/// With [`StaticSelection::WithMutant`] the best mutant competes with the
/// crossover offspring for the final selection; with
/// [`StaticSelection::OffspringOnly`] only the offspring do. The parent is
/// replaced if the winner is at least as good.
pub fn run_static<R: Rng + ?Sized>(
    cfg: &StaticConfig,
    n: usize,
    budget: u64,
    rng: &mut R,
    opts: TraceOptions,
) -> Result<RunResult> {
    cfg.validate()?;
    check_run_args(n, budget)?;
    if cfg.k > n {
        return Err(config(format!("k = {} exceeds n = {n}", cfg.k)));
    }
    let p = clamp_probability(cfg.k as f64 / n as f64, n);
    let c = clamp_probability(cfg.c, n);
    let radius = ConditionalBinomial::new(n, p)?;
    let with_mutant = cfg.selection == StaticSelection::WithMutant;

    let mut ledger = Ledger::new(n, budget, opts);
    let (mut parent, flow) = Parent::initial(n, rng, &mut ledger, cfg.lambda1);
    let mut engine = Variation::new(n);
    if flow == Flow::Stop {
        return Ok(ledger.finish());
    }
    loop {
        let ell = radius.sample(rng);
        let Some(fm) = engine.mutation_phase(&parent, ell, cfg.lambda1, &mut ledger, rng) else {
            break;
        };
        let Some(fy) = engine.crossover_phase(
            &parent,
            fm,
            with_mutant,
            c,
            cfg.lambda1,
            cfg.lambda2,
            &mut ledger,
            rng,
        ) else {
            break;
        };
        if fy >= parent.fx {
            engine.accept(&mut parent, fy);
        }
        ledger.iteration_done(parent.fx, cfg.lambda1 as f64, cfg.lambda1, cfg.lambda2);
    }
    Ok(ledger.finish())
}
