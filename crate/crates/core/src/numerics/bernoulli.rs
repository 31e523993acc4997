//! Even-index Bernoulli numbers, computed once in exact rational arithmetic.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Largest `k` for which `B_{2k}` is tabulated.
pub const MAX_INDEX: usize = 64;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // Akiyama–Tanigawa: exact B_0..B_{2*MAX_INDEX} (with B_1 = +1/2).
        let n_max = 2 * MAX_INDEX;
        let mut a: Vec<BigRational> = Vec::with_capacity(n_max + 1);
        let mut out = vec![0.0; MAX_INDEX + 1];
        for m in 0..=n_max {
            a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
            }
            if m % 2 == 0 {
                let b = &a[0];
                out[m / 2] = if b.is_zero() { 0.0 } else { b.to_f64().unwrap_or(f64::NAN) };
            }
        }
        out
    })
}

/// `B_{2k}` as a double, for `0 <= k <= MAX_INDEX`.
pub fn bernoulli_even(k: usize) -> f64 {
    assert!(k <= MAX_INDEX, "B_{} is not tabulated", 2 * k);
    table()[k]
}

/// `B_{2k} / (2k)!`, the Euler–Maclaurin coefficient.
pub fn bernoulli_over_factorial(k: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=MAX_INDEX)
            .map(|k| {
                let mut f = bernoulli_even(k);
                for j in 1..=(2 * k) {
                    f /= j as f64;
                }
                f
            })
            .collect()
    })[k]
}
