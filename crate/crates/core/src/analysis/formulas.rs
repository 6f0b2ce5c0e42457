use crate::error::{domain, Result};

/// Generalized success rate `1 - ln(b) / ln(A)` of the multiplicative update:
/// `λ` is stationary when one in this many iterations is a success.
pub fn success_rate(increase: f64, decrease: f64) -> Result<f64> {
    if !(increase > 1.0 && increase.is_finite()) {
        return Err(domain(format!("A must be > 1, got {increase}")));
    }
    if !(decrease > 0.0 && decrease < 1.0) {
        return Err(domain(format!("b must be in (0, 1), got {decrease}")));
    }
    Ok(1.0 - decrease.ln() / increase.ln())
}

/// Fitness-dependent reference population size `sqrt(n / (n - f))`.
pub fn lambda_star(n: usize, fitness: usize) -> Result<f64> {
    if fitness >= n {
        return Err(domain(format!("fitness {fitness} must be below n = {n}")));
    }
    Ok((n as f64 / (n - fitness) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    #[allow(clippy::approx_constant)]
    fn success_rate_examples() {
        let five = success_rate(1.5f64.powf(0.25), 2.0 / 3.0).unwrap();
        assert!((five - 5.0).abs() < 1e-12);
        assert_eq!(format!("{:.2}", success_rate(1.06, 0.82).unwrap()), "4.41");
        assert_eq!(
            format!("{:.2}", success_rate(1.071, 0.7854).unwrap()),
            "4.52"
        );
    }

    #[test]
    fn success_rate_domain() {
        assert!(success_rate(1.0, 0.5).is_err());
        assert!(success_rate(1.2, 1.0).is_err());
        assert!(success_rate(1.2, 0.0).is_err());
    }

    #[test]
    fn lambda_star_examples() {
        assert!((lambda_star(10_000, 9_900).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(lambda_star(37, 0).unwrap(), 1.0);
        assert!((lambda_star(10_000, 9_999).unwrap() - 100.0).abs() < 1e-12);
        assert!(lambda_star(10, 10).is_err());
    }

    proptest! {
        #[test]
        fn success_rate_is_power_invariant(a in 1.001f64..3.0, b in 0.05f64..0.999, k in 0.1f64..5.0) {
            let r1 = success_rate(a, b).unwrap();
            let r2 = success_rate(a.powf(k), b.powf(k)).unwrap();
            prop_assert!(r1 > 1.0);
            prop_assert!((r1 - r2).abs() <= 1e-9 * r1.abs());
        }
    }
}
