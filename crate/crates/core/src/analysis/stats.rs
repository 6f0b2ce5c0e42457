use crate::error::{Error, Result};

/// Summary of a runtime sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunStats {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (divisor `count - 1`; 0 for one sample).
    pub sd: f64,
    pub q20: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub q98: f64,
    /// `100 * sd / mean`.
    pub rsd: f64,
    /// `mean / n`.
    pub normalized_mean: f64,
}

/// Quantile of sorted data, interpolating linearly at position `q (len - 1)`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn summarize(samples: &[f64], n: usize) -> Result<RunStats> {
    if samples.is_empty() {
        return Err(Error::Insufficient(
            "cannot summarize an empty sample".into(),
        ));
    }
    let count = samples.len();
    let mean = samples.iter().sum::<f64>() / count as f64;
    let sd = if count > 1 {
        let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(RunStats {
        count,
        mean,
        sd,
        q20: quantile(&sorted, 0.20),
        q25: quantile(&sorted, 0.25),
        q50: quantile(&sorted, 0.50),
        q75: quantile(&sorted, 0.75),
        q98: quantile(&sorted, 0.98),
        rsd: if mean != 0.0 { 100.0 * sd / mean } else { 0.0 },
        normalized_mean: mean / n as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_sample() {
        let s = summarize(&[10.0, 10.0, 10.0], 5).unwrap();
        assert_eq!(s.mean, 10.0);
        assert_eq!(s.rsd, 0.0);
        for q in [s.q20, s.q25, s.q50, s.q75, s.q98] {
            assert_eq!(q, 10.0);
        }
        assert_eq!(s.normalized_mean, 2.0);
    }

    #[test]
    fn interpolated_median() {
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        let s = summarize(&xs, 100).unwrap();
        assert_eq!(s.q50, 50.5);
        // position 0.2 * 99 = 19.8 -> 20 + 0.8
        assert!((s.q20 - 20.8).abs() < 1e-12);
        assert!((s.q98 - 98.02).abs() < 1e-9);
    }

    #[test]
    fn sample_sd_uses_bessel_correction() {
        let s = summarize(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0], 1).unwrap();
        assert!((s.sd - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(summarize(&[], 1).is_err());
    }

    proptest! {
        #[test]
        fn quantiles_ordered_and_permutation_invariant(
            mut xs in prop::collection::vec(0u32..100_000, 1..200),
            seed in any::<u64>(),
        ) {
            let a: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
            let s1 = summarize(&a, 10).unwrap();
            prop_assert!(s1.q20 <= s1.q25 && s1.q25 <= s1.q50 && s1.q50 <= s1.q75 && s1.q75 <= s1.q98);
            prop_assert!(s1.rsd >= 0.0);
            // deterministic shuffle
            let len = xs.len();
            let mut state = seed;
            for i in (1..len).rev() {
                state = crate::rng::splitmix64(state);
                xs.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let b: Vec<f64> = xs.iter().map(|&x| x as f64).collect();
            let s2 = summarize(&b, 10).unwrap();
            prop_assert_eq!((s1.q20, s1.q25, s1.q50, s1.q75, s1.q98), (s2.q20, s2.q25, s2.q50, s2.q75, s2.q98));
        }
    }
}
