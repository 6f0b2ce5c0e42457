//! Paired significance tests plus the goodness-of-fit machinery used by the
//! statistical test suites.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal, StudentsT};

use crate::error::{Error, Result};

/// Levels at which significance is reported.
pub const LEVELS: [f64; 3] = [0.05, 0.01, 0.001];

#[derive(Clone, Debug, PartialEq)]
pub struct TestReport {
    pub statistic: f64,
    pub p_value: f64,
    /// Levels from [`LEVELS`] with `p_value < level`.
    pub significant_at: Vec<f64>,
    /// Set when the statistic is undefined (no variation in the paired
    /// differences) and the p-value is a limit.
    pub degenerate: bool,
}

impl TestReport {
    fn new(statistic: f64, p_value: f64, degenerate: bool) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        Self {
            statistic,
            p_value,
            significant_at: LEVELS.iter().copied().filter(|&l| p_value < l).collect(),
            degenerate,
        }
    }

    pub fn is_significant(&self, level: f64) -> bool {
        self.p_value < level
    }
}

fn differences(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x - y).collect())
}

/// Two-sided paired Student t-test on `a - b`.
///
/// Zero variance of the differences is reported as degenerate: `p = 1` with
/// statistic 0 when all differences vanish, otherwise `p = 0` with an
/// infinite statistic carrying the sign of the shift.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TestReport> {
    let d = differences(a, b)?;
    if d.len() < 2 {
        return Err(Error::Insufficient(
            "paired t-test needs at least two pairs".into(),
        ));
    }
    let m = d.len() as f64;
    let mean = d.iter().sum::<f64>() / m;
    let var = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    if var == 0.0 {
        return Ok(if mean == 0.0 {
            TestReport::new(0.0, 1.0, true)
        } else {
            TestReport::new(f64::INFINITY.copysign(mean), 0.0, true)
        });
    }
    let t = mean / (var / m).sqrt();
    let dist = StudentsT::new(0.0, 1.0, m - 1.0).expect("valid degrees of freedom");
    let p = 2.0 * dist.sf(t.abs());
    Ok(TestReport::new(t, p, false))
}

/// Average ranks (1-based) of `values`, ties sharing the mean rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Below this many nonzero differences the exact null distribution is used.
const WILCOXON_EXACT_BELOW: usize = 20;
const WILCOXON_MIN_PAIRS: usize = 5;

/// Two-sided Wilcoxon signed-rank test on `a - b`; zero differences are
/// dropped. The statistic is `min(W+, W-)`.
///
/// Exact null distribution (by counting sign patterns over the observed,
/// possibly tied ranks) for fewer than 20 nonzero differences; normal
/// approximation with tie correction otherwise.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<TestReport> {
    let d: Vec<f64> = differences(a, b)?
        .into_iter()
        .filter(|&x| x != 0.0)
        .collect();
    if d.is_empty() {
        return Ok(TestReport::new(0.0, 1.0, true));
    }
    if d.len() < WILCOXON_MIN_PAIRS {
        return Err(Error::Insufficient(format!(
            "Wilcoxon test needs at least {WILCOXON_MIN_PAIRS} nonzero differences, have {}",
            d.len()
        )));
    }
    let abs: Vec<f64> = d.iter().map(|x| x.abs()).collect();
    let ranks = average_ranks(&abs);
    let w_plus: f64 = d
        .iter()
        .zip(&ranks)
        .filter(|(x, _)| **x > 0.0)
        .map(|(_, r)| r)
        .sum();
    let m = d.len() as f64;
    let total = m * (m + 1.0) / 2.0;
    let w_minus = total - w_plus;
    let statistic = w_plus.min(w_minus);

    let p = if d.len() < WILCOXON_EXACT_BELOW {
        // Doubled ranks are integers even with ties.
        let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
        let max: usize = doubled.iter().sum();
        let mut counts = vec![0f64; max + 1];
        counts[0] = 1.0;
        for &r in &doubled {
            for s in (r..=max).rev() {
                counts[s] += counts[s - r];
            }
        }
        let limit = (2.0 * statistic).round() as usize;
        let tail: f64 = counts[..=limit].iter().sum();
        2.0 * tail / 2f64.powi(d.len() as i32)
    } else {
        let mut tie_term = 0.0;
        let mut sorted = abs.clone();
        sorted.sort_by(f64::total_cmp);
        let mut i = 0;
        while i < sorted.len() {
            let j = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
            let t = j as f64;
            tie_term += t * t * t - t;
            i += j;
        }
        let mean = total / 2.0;
        let var = m * (m + 1.0) * (2.0 * m + 1.0) / 24.0 - tie_term / 48.0;
        let z = (w_plus - mean) / var.sqrt();
        2.0 * Normal::standard().sf(z.abs())
    };
    Ok(TestReport::new(statistic, p, false))
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic Kolmogorov
/// distribution. Returns `(D, p)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Insufficient(
            "KS test needs two nonempty samples".into(),
        ));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let en = (na * nb / (na + nb)).sqrt();
    Ok((d, kolmogorov_sf(en * d)))
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.2 {
        // The alternating series converges slowly here and the tail is 1.
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * x * x).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Pearson chi-square goodness of fit. Adjacent cells are pooled until each
/// expected count is at least 5. Returns `(statistic, degrees of freedom, p)`.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> Result<(f64, usize, f64)> {
    if observed.len() != expected.len() {
        return Err(Error::Dimension {
            left: observed.len(),
            right: expected.len(),
        });
    }
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&obs, &exp) in observed.iter().zip(expected) {
        o += obs as f64;
        e += exp;
        if e >= 5.0 {
            cells.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => cells.push((o, e)),
        }
    }
    if cells.len() < 2 {
        return Err(Error::Insufficient(
            "chi-square needs at least two pooled cells".into(),
        ));
    }
    let stat: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = cells.len() - 1;
    let p = ChiSquared::new(dof as f64).expect("positive dof").sf(stat);
    Ok((stat, dof, p))
}
