use anyhow::{anyhow, bail, Result};
use clap::{Args, ValueEnum};

use ollga::algorithms::{Algorithm, DynConfig, StaticConfig, StaticSelection};
use ollga::experiment::DEFAULT_BUDGET;
use ollga::presets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoKind {
    Dyn,
    Static,
    Rls,
    Switch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SelectionArg {
    WithMutant,
    OffspringOnly,
}

/// Algorithm selection. A preset provides a starting point; explicit
/// parameter flags override its values.
#[derive(Args, Clone, Debug, Default)]
pub struct AlgoArgs {
    /// Named configuration (dyn-default, dyn-C, dyn-C2, stat-1000, rls, ...).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub algo: Option<AlgoKind>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Update strength on failure (`A > 1`).
    #[arg(long = "A")]
    pub increase: Option<f64>,
    /// Update strength on success (`0 < b < 1`).
    #[arg(long = "b")]
    pub decrease: Option<f64>,
    #[arg(long)]
    pub lambda1: Option<usize>,
    #[arg(long)]
    pub lambda2: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_enum)]
    pub static_selection: Option<SelectionArg>,
    /// Fitness at which the switch hybrid hands over from RLS to the GA.
    #[arg(long)]
    pub switch_target: Option<usize>,
}

impl AlgoArgs {
    pub fn preset(name: &str) -> Self {
        Self {
            preset: Some(name.to_string()),
            ..Self::default()
        }
    }

    pub fn resolve(&self) -> Result<Algorithm> {
        let base = match &self.preset {
            Some(name) => Some(
                presets::lookup(name)
                    .ok_or_else(|| anyhow!("unknown preset {name:?}"))?
                    .algorithm,
            ),
            None => None,
        };
        let kind = match (self.algo, base) {
            (Some(k), _) => k,
            (None, Some(Algorithm::Dyn(_))) => AlgoKind::Dyn,
            (None, Some(Algorithm::Static(_))) => AlgoKind::Static,
            (None, Some(Algorithm::Rls)) => AlgoKind::Rls,
            (None, Some(Algorithm::Switch { .. })) => AlgoKind::Switch,
            (None, None) => AlgoKind::Dyn,
        };
        let dyn_base = match base {
            Some(Algorithm::Dyn(cfg)) | Some(Algorithm::Switch { cfg, .. }) => Some(cfg),
            _ => None,
        };
        match kind {
            AlgoKind::Dyn | AlgoKind::Switch => {
                if base.is_some() && dyn_base.is_none() {
                    bail!(
                        "preset {:?} is not a self-adjusting GA",
                        self.preset.as_deref().unwrap_or("")
                    );
                }
                self.reject(&[
                    ("lambda1", self.lambda1.is_some()),
                    ("lambda2", self.lambda2.is_some()),
                    ("k", self.k.is_some()),
                    ("c", self.c.is_some()),
                ])?;
                let d = dyn_base.unwrap_or_else(DynConfig::default_rule);
                let cfg = DynConfig::new(
                    self.alpha.unwrap_or(d.alpha),
                    self.beta.unwrap_or(d.beta),
                    self.gamma.unwrap_or(d.gamma),
                    self.increase.unwrap_or(d.increase),
                    self.decrease.unwrap_or(d.decrease),
                )?;
                if kind == AlgoKind::Dyn {
                    if self.switch_target.is_some() {
                        bail!("--switch-target needs --algo switch");
                    }
                    Ok(Algorithm::Dyn(cfg))
                } else {
                    let target = self
                        .switch_target
                        .ok_or_else(|| anyhow!("--algo switch needs --switch-target"))?;
                    Ok(Algorithm::Switch { target, cfg })
                }
            }
            AlgoKind::Static => {
                self.reject_dyn()?;
                let s = match base {
                    Some(Algorithm::Static(s)) => Some(s),
                    Some(_) => bail!(
                        "preset {:?} is not a static GA",
                        self.preset.as_deref().unwrap_or("")
                    ),
                    None => None,
                };
                let pick = |flag: Option<usize>, from: Option<usize>, name: &str| {
                    flag.or(from)
                        .ok_or_else(|| anyhow!("static GA needs --{name}"))
                };
                let mut cfg = StaticConfig::new(
                    pick(self.lambda1, s.map(|s| s.lambda1), "lambda1")?,
                    pick(self.lambda2, s.map(|s| s.lambda2), "lambda2")?,
                    pick(self.k, s.map(|s| s.k), "k")?,
                    self.c
                        .or(s.map(|s| s.c))
                        .ok_or_else(|| anyhow!("static GA needs --c"))?,
                )?;
                cfg.selection = match self.static_selection {
                    Some(SelectionArg::WithMutant) => StaticSelection::WithMutant,
                    Some(SelectionArg::OffspringOnly) => StaticSelection::OffspringOnly,
                    None => s.map_or(StaticSelection::default(), |s| s.selection),
                };
                Ok(Algorithm::Static(cfg))
            }
            AlgoKind::Rls => {
                if base.is_some() && base != Some(Algorithm::Rls) {
                    bail!(
                        "preset {:?} is not RLS",
                        self.preset.as_deref().unwrap_or("")
                    );
                }
                self.reject_dyn()?;
                self.reject(&[
                    ("lambda1", self.lambda1.is_some()),
                    ("lambda2", self.lambda2.is_some()),
                    ("k", self.k.is_some()),
                    ("c", self.c.is_some()),
                ])?;
                Ok(Algorithm::Rls)
            }
        }
    }

    fn reject_dyn(&self) -> Result<()> {
        self.reject(&[
            ("alpha", self.alpha.is_some()),
            ("beta", self.beta.is_some()),
            ("gamma", self.gamma.is_some()),
            ("A", self.increase.is_some()),
            ("b", self.decrease.is_some()),
            ("switch-target", self.switch_target.is_some()),
        ])
    }

    fn reject(&self, flags: &[(&str, bool)]) -> Result<()> {
        match flags.iter().find(|(_, set)| *set) {
            Some((name, _)) => bail!("--{name} does not apply to this algorithm"),
            None => Ok(()),
        }
    }
}

/// Problem size, repetitions, budget and seeding shared by most commands.
#[derive(Args, Clone, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
    /// Evaluation budget per run.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Master seed; run `i` uses `derive_seed(seed, i)`.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl RunArgs {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            bail!("--n must be >= 2, got {}", self.n);
        }
        if self.runs == 0 {
            bail!("--runs must be >= 1");
        }
        if self.budget == 0 {
            bail!("--budget must be >= 1");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_with_override() {
        let a = AlgoArgs {
            decrease: Some(0.8),
            ..AlgoArgs::preset("dyn-C")
        };
        match a.resolve().unwrap() {
            Algorithm::Dyn(c) => assert_eq!((c.alpha, c.increase, c.decrease), (0.45, 1.16, 0.8)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bare_flags_default_to_dyn_default() {
        assert_eq!(
            AlgoArgs::default().resolve().unwrap(),
            Algorithm::Dyn(DynConfig::default_rule())
        );
    }

    #[test]
    fn mismatches_are_errors() {
        let static_without_params = AlgoArgs {
            algo: Some(AlgoKind::Static),
            ..AlgoArgs::default()
        };
        assert!(static_without_params.resolve().is_err());
        let rls_with_alpha = AlgoArgs {
            alpha: Some(1.0),
            ..AlgoArgs::preset("rls")
        };
        assert!(rls_with_alpha.resolve().is_err());
        let switch_without_target = AlgoArgs {
            algo: Some(AlgoKind::Switch),
            ..AlgoArgs::default()
        };
        assert!(switch_without_target.resolve().is_err());
        assert!(AlgoArgs::preset("nope").resolve().is_err());
        let wrong_kind = AlgoArgs {
            algo: Some(AlgoKind::Static),
            ..AlgoArgs::preset("dyn-C")
        };
        assert!(wrong_kind.resolve().is_err());
    }

    #[test]
    fn switch_uses_the_preset_ga() {
        let a = AlgoArgs {
            algo: Some(AlgoKind::Switch),
            switch_target: Some(90),
            ..AlgoArgs::preset("dyn-C")
        };
        match a.resolve().unwrap() {
            Algorithm::Switch { target, cfg } => assert_eq!((target, cfg.beta), (90, 1.6)),
            other => panic!("{other:?}"),
        }
    }
}
