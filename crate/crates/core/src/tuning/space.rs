use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{domain, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    Real,
    Integer,
}

/// One tunable parameter. Real parameters are sampled from the open
/// interval `(lower, upper)`, integer ones from `lower..=upper`. Equal
/// bounds pin the parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
    pub lower: f64,
    pub upper: f64,
}

impl Param {
    pub fn real(name: &str, lower: f64, upper: f64) -> Self {
        Self {
            name: name.to_string(),
            kind: ParamKind::Real,
            lower,
            upper,
        }
    }

    pub fn integer(name: &str, lower: i64, upper: i64) -> Self {
        Self {
            name: name.to_string(),
            kind: ParamKind::Integer,
            lower: lower as f64,
            upper: upper as f64,
        }
    }

    pub fn range(&self) -> f64 {
        self.upper - self.lower
    }

    fn is_fixed(&self) -> bool {
        self.lower == self.upper
    }

    fn admits(&self, v: f64) -> bool {
        match self.kind {
            ParamKind::Real => self.is_fixed() || (v > self.lower && v < self.upper),
            ParamKind::Integer => v >= self.lower && v <= self.upper,
        }
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.is_fixed() {
            return self.lower;
        }
        match self.kind {
            ParamKind::Real => loop {
                let v = rng.random_range(self.lower..self.upper);
                if self.admits(v) {
                    return v;
                }
            },
            ParamKind::Integer => rng.random_range(self.lower as i64..=self.upper as i64) as f64,
        }
    }

    /// Normal around `center` with standard deviation `spread * range`,
    /// truncated to the parameter's domain by rejection.
    pub fn sample_around<R: Rng + ?Sized>(&self, center: f64, spread: f64, rng: &mut R) -> f64 {
        if self.is_fixed() {
            return self.lower;
        }
        let sd = (spread * self.range()).max(f64::MIN_POSITIVE);
        let normal = Normal::new(center, sd).expect("finite spread");
        for _ in 0..1000 {
            let mut v = normal.sample(rng);
            if self.kind == ParamKind::Integer {
                v = v.round();
            }
            if self.admits(v) {
                return v;
            }
        }
        self.sample_uniform(rng)
    }
}

/// Ordered set of tunable parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpace {
    pub params: Vec<Param>,
}

impl ParamSpace {
    pub fn new(params: Vec<Param>) -> Result<Self> {
        if params.is_empty() {
            return Err(domain("parameter space is empty"));
        }
        for p in &params {
            if !(p.lower.is_finite() && p.upper.is_finite() && p.lower <= p.upper) {
                return Err(domain(format!(
                    "{}: bounds [{}, {}] are invalid",
                    p.name, p.lower, p.upper
                )));
            }
            if p.kind == ParamKind::Integer && (p.lower.fract() != 0.0 || p.upper.fract() != 0.0) {
                return Err(domain(format!(
                    "{}: integer bounds must be integral",
                    p.name
                )));
            }
        }
        for (i, p) in params.iter().enumerate() {
            if params[..i].iter().any(|q| q.name == p.name) {
                return Err(domain(format!("duplicate parameter {}", p.name)));
            }
        }
        Ok(Self { params })
    }

    /// `A ∈ (1, 2.5)`, `b ∈ (0.4, 1)`, the update strengths of the
    /// self-adjusting GA.
    pub fn dyn_update_strengths() -> Self {
        Self {
            params: vec![Param::real("A", 1.0, 2.5), Param::real("b", 0.4, 1.0)],
        }
    }

    /// All five hyper-parameters of the self-adjusting GA.
    pub fn dyn_full() -> Self {
        Self {
            params: vec![
                Param::real("alpha", 1.0 / 3.0, 10.0),
                Param::real("beta", 1.0, 10.0),
                Param::real("gamma", 1.0 / 3.0, 10.0),
                Param::real("A", 1.01, 2.5),
                Param::real("b", 0.4, 0.99),
            ],
        }
    }

    /// The static GA's `λ1, λ2, k ∈ {1..100}` and `c ∈ [0.01, 0.5]`.
    pub fn static_full(n: usize) -> Self {
        Self {
            params: vec![
                Param::integer("lambda1", 1, 100),
                Param::integer("lambda2", 1, 100),
                Param::integer("k", 1, (n as i64).min(100)),
                Param::real("c", 0.01, 0.5),
            ],
        }
    }

    pub fn dims(&self) -> usize {
        self.params.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }

    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.params.iter().map(|p| p.sample_uniform(rng)).collect()
    }

    pub fn sample_around<R: Rng + ?Sized>(
        &self,
        center: &[f64],
        spread: f64,
        rng: &mut R,
    ) -> Vec<f64> {
        self.params
            .iter()
            .zip(center)
            .map(|(p, &c)| p.sample_around(c, spread, rng))
            .collect()
    }

    pub fn contains(&self, values: &[f64]) -> bool {
        values.len() == self.dims() && self.params.iter().zip(values).all(|(p, &v)| p.admits(v))
    }
}
