//! Straight-line reference implementation of the self-adjusting GA on full
//! bit strings, written directly from the pseudo-code with the public
//! operators and no shortcuts.

#![allow(dead_code)]

use ollga::algorithms::DynConfig;
use ollga::operators::{best_of_uar, crossover_biased, mutate_exact, nint, sample_bin_gt0};
use ollga::{onemax, BitString, Fitness};
use rand::Rng;

pub struct ReferenceRun {
    pub evaluations: u64,
    pub success: bool,
}

struct Counter {
    n: usize,
    budget: u64,
    evaluations: u64,
    done: bool,
    success: bool,
}

impl Counter {
    fn eval(&mut self, x: &BitString) -> Fitness {
        let f = onemax(x);
        self.evaluations += 1;
        if f == self.n {
            self.success = true;
            self.done = true;
        }
        if self.evaluations >= self.budget {
            self.done = true;
        }
        f
    }
}

pub fn reference_dyn<R: Rng>(cfg: &DynConfig, n: usize, budget: u64, rng: &mut R) -> ReferenceRun {
    let mut c = Counter {
        n,
        budget,
        evaluations: 0,
        done: false,
        success: false,
    };
    let mut x = BitString::random(n, rng);
    let mut fx = c.eval(&x);
    let mut lambda: f64 = 1.0;
    let nf = n as f64;
    while !c.done {
        let p = (cfg.alpha * lambda / nf).clamp(1.0 / nf, 0.99);
        let bias = (cfg.gamma / lambda).clamp(1.0 / nf, 0.99);
        let lambda1 = nint(lambda);
        let lambda2 = nint(cfg.beta * lambda).max(1);
        let ell = sample_bin_gt0(n, p, rng).unwrap();

        let mut mutants: Vec<(BitString, Fitness)> = Vec::new();
        for _ in 0..lambda1 {
            let m = mutate_exact(&x, ell, rng).unwrap();
            let f = c.eval(&m);
            mutants.push((m, f));
            if c.done {
                break;
            }
        }
        if c.done {
            break;
        }
        let pick = best_of_uar(&mutants, rng);
        let (xp, fxp) = mutants.swap_remove(pick);

        let mut pool: Vec<(BitString, Fitness)> = vec![(xp.clone(), fxp)];
        for _ in 0..lambda2 {
            let y = crossover_biased(&x, &xp, bias, rng).unwrap();
            let f = if y == x {
                fx
            } else if y == xp {
                fxp
            } else {
                c.eval(&y)
            };
            pool.push((y, f));
            if c.done {
                break;
            }
        }
        if c.done {
            break;
        }
        let (y, fy) = pool.swap_remove(best_of_uar(&pool, rng));
        if fy > fx {
            lambda = (cfg.decrease * lambda).max(1.0);
        } else {
            lambda = (cfg.increase * lambda).min(nf - 1.0);
        }
        if fy >= fx {
            x = y;
            fx = fy;
        }
    }
    ReferenceRun {
        evaluations: c.evaluations,
        success: c.success,
    }
}

/// Expected RLS optimization time from a uniform start, including the
/// initial evaluation: `1 + Σ_f0 P(f0) Σ_{i=f0}^{n-1} n / (n - i)`.
pub fn rls_expected_time(n: usize) -> f64 {
    let nf = n as f64;
    // tail[i] = Σ_{j=i}^{n-1} n/(n-j)
    let mut tail = vec![0.0; n + 1];
    for i in (0..n).rev() {
        tail[i] = tail[i + 1] + nf / (nf - i as f64);
    }
    // Binomial(n, 1/2) weights via logs of factorials.
    let mut ln_fact = vec![0.0f64; n + 1];
    for k in 1..=n {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let mut e = 0.0;
    for f0 in 0..=n {
        let w = (ln_fact[n] - ln_fact[f0] - ln_fact[n - f0] - nf * std::f64::consts::LN_2).exp();
        e += w * tail[f0];
    }
    1.0 + e
}

/// `C(n,k) p^k (1-p)^(n-k) / (1 - (1-p)^n)` by direct products.
pub fn bin_gt0_pmf(n: usize, p: f64, k: usize) -> f64 {
    let mut coef = 1.0f64;
    for i in 0..k {
        coef = coef * (n - i) as f64 / (i + 1) as f64;
    }
    coef * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32) / (1.0 - (1.0 - p).powi(n as i32))
}
