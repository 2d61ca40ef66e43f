//! Binomial coefficients, exact and floating point.
//!
//! `C(a, b)` is zero whenever `b > a` or either argument is negative, which
//! keeps the erasure formulas total for large erasure counts.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Exact `C(a, b)`.
pub fn binomial_big(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// `C(a, b)` in floating point with the zero convention for out-of-range
/// arguments.
pub fn binomial(a: i64, b: i64) -> f64 {
    if a < 0 || b < 0 || b > a {
        return 0.0;
    }
    let b = b.min(a - b);
    let mut acc = 1.0;
    for i in 0..b {
        acc *= (a - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// `C(a, e) / C(n, e)` computed as a product of ratios, avoiding overflow.
/// Requires `0 <= e <= n`.
pub fn binomial_ratio(a: i64, n: i64, e: i64) -> f64 {
    debug_assert!(e >= 0 && e <= n);
    if a < e {
        return 0.0;
    }
    (0..e).map(|i| (a - i) as f64 / (n - i) as f64).product()
}
