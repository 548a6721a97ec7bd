use crate::dynamics::Sign;
use crate::error::{Error, Result};
use crate::sigma::isqrt_exact;

/// Number of positive divisors of n, from its prime factorization.
pub fn divisor_count(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("divisor_count needs n >= 1".into()));
    }
    let mut n = n;
    let mut total = 1;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        total *= e + 1;
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        total *= 2;
    }
    Ok(total)
}

/// ♯{(x, y) ∈ ℕ² : K ≤ x ≤ 2K, x² ± y² = m}, with ℕ ∋ 0.
pub fn ntlemma_count(m: i64, k: u64, sign: Sign) -> u64 {
    (k..=2 * k)
        .filter(|&x| {
            let x2 = (x as i128) * (x as i128);
            let y2 = match sign {
                Sign::Plus => m as i128 - x2,
                Sign::Minus => x2 - m as i128,
            };
            y2 >= 0 && u64::try_from(y2).ok().and_then(isqrt_exact).is_some()
        })
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(divisor_count(1).unwrap(), 1);
        assert_eq!(divisor_count(12).unwrap(), 6);
        assert_eq!(divisor_count(36).unwrap(), 9);
        assert_eq!(divisor_count(97).unwrap(), 2);
        assert_eq!(divisor_count(1 << 40).unwrap(), 41);
        assert!(divisor_count(0).is_err());
    }

    #[test]
    fn lemma_examples() {
        assert_eq!(ntlemma_count(0, 4, Sign::Minus), 5);
        assert_eq!(ntlemma_count(1, 1, Sign::Plus), 1);
        assert_eq!(ntlemma_count(-3, 5, Sign::Plus), 0);
        // 25 = 5² + 0² = 4² + 3² = 3² + 4².
        assert_eq!(ntlemma_count(25, 3, Sign::Plus), 3);
    }
}
