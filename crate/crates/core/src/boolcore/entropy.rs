use crate::{Error, Result};

/// Slack used when comparing real-valued logarithms.
pub const LOG_SLACK: f64 = 1e-9;

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("probability {p} outside [0,1]")));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.log2() - (1.0 - p) * (1.0 - p).log2())
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialBounds {
    pub lower: f64,
    pub upper: f64,
    pub exact: u128,
}

/// `2^{H(k/n) n} / (n+1) ≤ C(n,k) ≤ 2^{H(k/n) n}`, with the exact value.
pub fn binomial_entropy_bounds(n: u64, k: u64) -> Result<BinomialBounds> {
    if k > n || n == 0 {
        return Err(Error::invalid(format!("need 0 ≤ k ≤ n and n ≥ 1, got n={n}, k={k}")));
    }
    let upper = (binary_entropy(k as f64 / n as f64)? * n as f64).exp2();
    let lower = upper / (n + 1) as f64;
    let exact = binomial(n, k);
    let log_exact = (exact as f64).log2();
    assert!(lower.log2() <= log_exact + LOG_SLACK, "lower bound violated at ({n},{k})");
    assert!(log_exact <= upper.log2() + LOG_SLACK, "upper bound violated at ({n},{k})");
    Ok(BinomialBounds { lower, upper, exact })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // 2 - (3/4) log2 3
        let expected = 2.0 - 0.75 * 3f64.log2();
        assert!((binary_entropy(0.25).unwrap() - expected).abs() < 1e-15);
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn bounds_examples() {
        let b = binomial_entropy_bounds(4, 2).unwrap();
        assert_eq!(b.exact, 6);
        assert!((b.lower - 3.2).abs() < 1e-12 && (b.upper - 16.0).abs() < 1e-12);
        let b = binomial_entropy_bounds(8, 4).unwrap();
        assert_eq!(b.exact, 70);
        assert!((b.lower - 256.0 / 9.0).abs() < 1e-9);
        let b = binomial_entropy_bounds(7, 0).unwrap();
        assert_eq!((b.exact, b.upper), (1, 1.0));
        assert!((b.lower - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn bounds_hold_up_to_30() {
        for n in 1..=30 {
            for k in 0..=n {
                binomial_entropy_bounds(n, k).unwrap();
            }
        }
    }

    #[test]
    fn binomial_matches_pascal() {
        let mut row = vec![1u128];
        for n in 1..=40u64 {
            let mut next = vec![1u128; n as usize + 1];
            for k in 1..n as usize {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
            for k in 0..=n {
                assert_eq!(binomial(n, k), row[k as usize]);
            }
        }
    }
}
