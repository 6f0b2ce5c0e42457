//! Variation and selection primitives shared by all optimizers.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{domain, Error, Result};
use crate::genome::{BitString, Fitness};

/// Nearest integer, halves rounded up: `nint(2.5) == 3`.
pub fn nint(r: f64) -> usize {
    debug_assert!(r >= 0.0, "nint expects a nonnegative argument, got {r}");
    let floor = r.floor();
    if r - floor < 0.5 {
        floor as usize
    } else {
        r.ceil() as usize
    }
}

/// Binomial distribution `Bin(n, p)` conditioned on a positive outcome.
#[derive(Clone, Copy, Debug)]
pub struct ConditionalBinomial {
    n: usize,
    p: f64,
    inner: Binomial,
}

impl ConditionalBinomial {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("Bin>0 needs n >= 1"));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(domain(format!("Bin>0 needs 0 < p < 1, got {p}")));
        }
        let inner = Binomial::new(n as u64, p).map_err(|e| domain(e.to_string()))?;
        Ok(Self { n, p, inner })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Probability of `k`; zero outside `1..=n`.
    pub fn pmf(&self, k: usize) -> f64 {
        if k == 0 || k > self.n {
            return 0.0;
        }
        let n = self.n as f64;
        let kf = k as f64;
        let ln_choose = ln_gamma(n + 1.0) - ln_gamma(kf + 1.0) - ln_gamma(n - kf + 1.0);
        let ln_mass = ln_choose + kf * self.p.ln() + (n - kf) * (-self.p).ln_1p();
        ln_mass.exp() / self.positive_mass()
    }

    pub fn mean(&self) -> f64 {
        self.n as f64 * self.p / self.positive_mass()
    }

    /// `1 - (1 - p)^n`, the unconditional probability of a positive draw.
    fn positive_mass(&self) -> f64 {
        -((self.n as f64) * (-self.p).ln_1p()).exp_m1()
    }
}

impl Distribution<usize> for ConditionalBinomial {
    /// Rejection from the unconditional binomial: redraw on zero.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        loop {
            let k = self.inner.sample(rng);
            if k > 0 {
                return k as usize;
            }
        }
    }
}

fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Draws the mutation radius from `Bin>0(n, p)`.
pub fn sample_bin_gt0<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<usize> {
    Ok(ConditionalBinomial::new(n, p)?.sample(rng))
}

/// Uniform random `ℓ`-subsets of `0..n` by partial Fisher–Yates.
///
/// The scratch permutation is kept between calls. Partial Fisher–Yates
/// started from any permutation yields a uniform subset, so it never needs
/// resetting and each draw costs `O(ℓ)`.
#[derive(Clone, Debug)]
pub struct FlipSampler {
    perm: Vec<usize>,
}

impl FlipSampler {
    pub fn new(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// Returns `ell` distinct positions, uniform over all `C(n, ell)` subsets.
    pub fn sample<R: Rng + ?Sized>(&mut self, ell: usize, rng: &mut R) -> &[usize] {
        let n = self.perm.len();
        debug_assert!(ell <= n);
        for i in 0..ell {
            let j = rng.random_range(i..n);
            self.perm.swap(i, j);
        }
        &self.perm[..ell]
    }
}

/// Flips exactly `ell` uniformly chosen positions of `x`.
pub fn mutate_exact<R: Rng + ?Sized>(x: &BitString, ell: usize, rng: &mut R) -> Result<BitString> {
    if ell == 0 || ell > x.len() {
        return Err(domain(format!(
            "mutation radius must be in 1..={}, got {ell}",
            x.len()
        )));
    }
    let mut sampler = FlipSampler::new(x.len());
    let mut y = x.clone();
    for &i in sampler.sample(ell, rng) {
        y.flip(i);
    }
    Ok(y)
}

/// Biased uniform crossover: each position comes from `xp` with probability
/// `c`, otherwise from `x`.
pub fn crossover_biased<R: Rng + ?Sized>(
    x: &BitString,
    xp: &BitString,
    c: f64,
    rng: &mut R,
) -> Result<BitString> {
    if x.len() != xp.len() {
        return Err(Error::Dimension {
            left: x.len(),
            right: xp.len(),
        });
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(domain(format!("crossover bias must be in (0, 1), got {c}")));
    }
    let bits = x
        .bits()
        .iter()
        .zip(xp.bits())
        .map(|(&a, &b)| if rng.random_bool(c) { b } else { a })
        .collect();
    Ok(BitString::from_bits(bits))
}

/// Streaming arg-max with uniform tie breaking (reservoir sampling over the
/// tied entries).
#[derive(Clone, Copy, Debug, Default)]
pub struct TieBreakMax {
    best: Option<Fitness>,
    ties: u32,
}

impl TieBreakMax {
    pub fn new() -> Self {
        Self::default()
    }

    /// Offers a candidate; returns `true` when it becomes the current pick.
    pub fn offer<R: Rng + ?Sized>(&mut self, fitness: Fitness, rng: &mut R) -> bool {
        match self.best {
            Some(best) if fitness < best => false,
            Some(best) if fitness == best => {
                self.ties += 1;
                rng.random_range(0..self.ties) == 0
            }
            _ => {
                self.best = Some(fitness);
                self.ties = 1;
                true
            }
        }
    }

    pub fn best(&self) -> Option<Fitness> {
        self.best
    }
}

/// Index of a maximum-fitness candidate, ties broken uniformly at random.
pub fn best_of_uar<T, R: Rng + ?Sized>(candidates: &[(T, Fitness)], rng: &mut R) -> usize {
    assert!(
        !candidates.is_empty(),
        "best_of_uar needs at least one candidate"
    );
    let mut pick = 0;
    let mut selector = TieBreakMax::new();
    for (i, (_, f)) in candidates.iter().enumerate() {
        if selector.offer(*f, rng) {
            pick = i;
        }
    }
    pick
}
