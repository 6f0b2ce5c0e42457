//! Named configurations.

use crate::algorithms::{Algorithm, DynConfig, StaticConfig, StaticSelection};

/// A named algorithm configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub algorithm: Algorithm,
}

const fn dynamic(alpha: f64, beta: f64, gamma: f64, increase: f64, decrease: f64) -> Algorithm {
    Algorithm::Dyn(DynConfig {
        alpha,
        beta,
        gamma,
        increase,
        decrease,
    })
}

const fn fixed(lambda1: usize, lambda2: usize, k: usize, c: f64) -> Algorithm {
    Algorithm::Static(StaticConfig {
        lambda1,
        lambda2,
        k,
        c,
        selection: StaticSelection::WithMutant,
    })
}

/// `(3/2)^(1/4)`.
pub const ONE_FIFTH_INCREASE: f64 = 1.106_681_919_700_321_5;
pub const ONE_FIFTH_DECREASE: f64 = 2.0 / 3.0;

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "dyn-default",
        algorithm: dynamic(1.0, 1.0, 1.0, ONE_FIFTH_INCREASE, ONE_FIFTH_DECREASE),
    },
    Preset {
        name: "dyn-C",
        algorithm: dynamic(0.45, 1.6, 1.0, 1.16, 0.7),
    },
    Preset {
        name: "dyn-C2",
        algorithm: dynamic(0.5, 2.0, 0.5, ONE_FIFTH_INCREASE, ONE_FIFTH_DECREASE),
    },
    // Best cell of the (A, b) grid at n = 1000.
    Preset {
        name: "dyn-grid-1000",
        algorithm: dynamic(1.0, 1.0, 1.0, 1.06, 0.82),
    },
    // Tuned update strengths, n = 1000.
    Preset {
        name: "dyn-ab-1000",
        algorithm: dynamic(1.0, 1.0, 1.0, 1.07, 0.79),
    },
    Preset {
        name: "stat-500",
        algorithm: fixed(6, 49, 7, 0.0151),
    },
    Preset {
        name: "stat-1000",
        algorithm: fixed(5, 60, 7, 0.0143),
    },
    Preset {
        name: "rls",
        algorithm: Algorithm::Rls,
    },
];

pub fn lookup(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}
