//! Small exact-integer helpers shared across modules: trial factorisation,
//! perfect-power tests, and log10 of big integers to fixed precision.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Int;

/// Complete factorisation of `|n|` by trial division. Runs while the trial
/// divisor squared is at most the remaining cofactor, so it is only suitable
/// for desk-scale inputs (roughly |n| < 10^14, or smooth larger values).
pub fn trial_factor(n: &Int) -> Vec<(Int, u32)> {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m <= Int::one() {
        return out;
    }
    let push = |p: Int, e: u32, out: &mut Vec<(Int, u32)>| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e2 = 0u32;
    while m.is_even() {
        m /= 2;
        e2 += 1;
    }
    push(Int::from(2), e2, &mut out);
    let mut d = Int::from(3);
    while &d * &d <= m {
        let mut e = 0u32;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        push(d.clone(), e, &mut out);
        d += 2;
    }
    if m > Int::one() {
        out.push((m, 1));
    }
    out
}

/// Prime divisors of `|n|` in increasing order (empty for |n| <= 1).
pub fn prime_divisors(n: &Int) -> Vec<Int> {
    trial_factor(n).into_iter().map(|(p, _)| p).collect()
}

/// Factorisation by trial division up to `cap`; the second component is the
/// unfactored cofactor when one remains (it may be prime or composite).
pub fn factor_with_cap(n: &Int, cap: u64) -> (Vec<(Int, u32)>, Option<Int>) {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m <= Int::one() {
        return (out, None);
    }
    let mut e2 = 0u32;
    while m.is_even() {
        m /= 2;
        e2 += 1;
    }
    if e2 > 0 {
        out.push((Int::from(2), e2));
    }
    let mut d = Int::from(3);
    let cap = Int::from(cap);
    while d <= cap && &d * &d <= m {
        let mut e = 0u32;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 2;
    }
    if m.is_one() {
        (out, None)
    } else if &d * &d > m {
        // remaining cofactor is prime
        out.push((m, 1));
        (out, None)
    } else {
        (out, Some(m))
    }
}

/// Product of the distinct primes dividing `|n|`, excluding those in `skip`.
pub fn radical_excluding(n: &Int, skip: &[u64]) -> Int {
    let mut r = Int::one();
    for (p, _) in trial_factor(n) {
        if skip.iter().any(|s| p == Int::from(*s)) {
            continue;
        }
        r *= p;
    }
    r
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &Int) -> Int {
    assert!(!n.is_negative(), "isqrt of negative");
    n.sqrt()
}

/// True if `n >= 0` is a perfect square.
pub fn is_square(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// True if `|n|` is a perfect k-th power (k >= 1). Sign is ignored.
pub fn is_perfect_power(n: &Int, k: u32) -> bool {
    if k == 0 {
        return false;
    }
    let m = n.abs();
    let r = m.nth_root(k);
    num_traits::pow::pow(r, k as usize) == m
}

/// log10 of a positive integer, accurate to well below 1e-9 absolutely.
///
/// The leading 17 decimal digits are converted to f64; the rest contribute
/// only through the digit count.
pub fn log10_big(n: &Int) -> f64 {
    assert!(n.is_positive(), "log10 of non-positive integer");
    let s = n.to_string();
    let digits = s.len();
    let take = digits.min(17);
    let lead: f64 = s[..take].parse().expect("leading digits parse");
    lead.log10() + (digits - take) as f64
}

/// log10(sqrt(n) + 1) for integer n >= 1, to ~12 significant digits.
///
/// sqrt(n) is bracketed by integer square roots of n * 10^48 so no floating
/// point enters before the final log of a 25-ish digit integer.
pub fn log10_sqrt_plus_one(n: &Int) -> f64 {
    assert!(n.is_positive());
    let scale_digits = 24u32;
    let scale: Int = Int::from(10).pow(scale_digits);
    let scaled = isqrt(&(n * &scale * &scale));
    // (scaled + scale) / scale ~= sqrt(n) + 1
    log10_big(&(scaled + &scale)) - scale_digits as f64
}

/// Decimal digit count of a positive integer.
pub fn digit_count(n: &Int) -> usize {
    n.to_string().trim_start_matches('-').len()
}

/// Convert to f64, returning None when out of range.
pub fn to_f64(n: &Int) -> Option<f64> {
    n.to_f64().filter(|x| x.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_small() {
        let f = trial_factor(&Int::from(96));
        assert_eq!(f, vec![(Int::from(2), 5), (Int::from(3), 1)]);
        assert!(trial_factor(&Int::from(1)).is_empty());
        assert_eq!(trial_factor(&Int::from(-7)), vec![(Int::from(7), 1)]);
    }

    #[test]
    fn radical_skips() {
        let r = radical_excluding(&Int::from(2u64.pow(6) * 27 * 35), &[2, 3]);
        assert_eq!(r, Int::from(35));
    }

    #[test]
    fn log10_matches_f64_range() {
        for n in [1u64, 9, 10, 999, 12345678901234567] {
            let exact = log10_big(&Int::from(n));
            assert!((exact - (n as f64).log10()).abs() < 1e-9);
        }
    }

    #[test]
    fn sqrt_plus_one_log() {
        // log10(sqrt(729)+1) = log10(28)
        let v = log10_sqrt_plus_one(&Int::from(729));
        assert!((v - 28f64.log10()).abs() < 1e-11);
        // irrational case: log10(sqrt(243)+1)
        let v = log10_sqrt_plus_one(&Int::from(243));
        assert!((v - (243f64.sqrt() + 1.0).log10()).abs() < 1e-10);
    }

    #[test]
    fn perfect_powers() {
        assert!(is_perfect_power(&Int::from(2187), 7)); // 3^7
        assert!(!is_perfect_power(&Int::from(2186), 7));
        assert!(is_square(&Int::from(144)));
        assert!(!is_square(&Int::from(-4)));
    }
}
