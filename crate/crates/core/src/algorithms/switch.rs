use rand::Rng;

use super::dynamic::{dyn_phase, Variation};
use super::rls::rls_phase;
use super::{check_run_args, Flow, Ledger, Parent, RunResult, TraceOptions};
use crate::algorithms::DynConfig;
use crate::error::{domain, Result};
use crate::genome::Fitness;

/// RLS until the parent reaches `target`, then the self-adjusting GA from
/// that parent with `λ` reset to 1. The evaluation count carries over.
pub fn run_switch<R: Rng + ?Sized>(
    target: Fitness,
    cfg: &DynConfig,
    n: usize,
    budget: u64,
    rng: &mut R,
    opts: TraceOptions,
) -> Result<RunResult> {
    cfg.validate()?;
    check_run_args(n, budget)?;
    if target > n {
        return Err(domain(format!("switch target {target} exceeds n = {n}")));
    }
    let mut ledger = Ledger::new(n, budget, opts);
    let (mut parent, flow) = Parent::initial(n, rng, &mut ledger, 1);
    if flow == Flow::Continue && rls_phase(&mut parent, n, &mut ledger, rng, target) {
        let mut engine = Variation::new(n);
        dyn_phase(cfg, &mut parent, &mut engine, &mut ledger, rng);
    }
    Ok(ledger.finish())
}
