//! The divisor function d(n) and its exact summation over a half-open range.

use crate::{CoreError, Result};

/// Number of divisors of n, exact, by trial-division factorization.
pub fn divisor_count(n: u64) -> Result<u64> {
    if n < 1 {
        return Err(CoreError::DomainError("divisor_count requires n >= 1".into()));
    }
    let mut m = n;
    let mut count = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u64;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            count *= e + 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        count *= 2;
    }
    Ok(count)
}

/// Sum of d(n) over integers n in (lower, upper], exact, by a segmented
/// divisor sieve.
pub fn divisor_sum_range(lower: f64, upper: f64) -> Result<u64> {
    if !(lower.is_finite() && upper.is_finite()) || lower < 0.0 {
        return Err(CoreError::DomainError(
            "divisor_sum_range requires finite nonnegative bounds".into(),
        ));
    }
    let lo = lower.floor() as u64 + 1;
    let hi = upper.floor() as u64;
    if hi < lo {
        return Ok(0);
    }
    let len = (hi - lo + 1) as usize;
    let mut counts = vec![0u32; len];
    for d in 1..=hi {
        let first = lo.div_ceil(d) * d;
        let mut m = first;
        while m <= hi {
            counts[(m - lo) as usize] += 1;
            m += d;
        }
    }
    Ok(counts.iter().map(|c| *c as u64).sum())
}
