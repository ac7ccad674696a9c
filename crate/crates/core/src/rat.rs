//! Exact rational arithmetic helpers.
//!
//! Everything in the workbench runs over `BigRational`; there is no floating
//! point anywhere. This module adds the handful of conveniences the rest of
//! the crate leans on: short constructors, integrality tests, `mod 1`
//! reduction into `[0, 1)`, and lcm of denominators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The scalar type used throughout the workbench.
pub type Q = BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Reduce `x` modulo 1 into `[0, 1)`.
pub fn mod1(x: &Q) -> Q {
    let f = x.floor();
    x - f
}

/// The multiplicative order of `x mod 1`, i.e. the denominator of the
/// reduced fraction (1 for integers).
pub fn denom_order(x: &Q) -> BigInt {
    mod1(x).denom().clone()
}

/// Least common multiple of the denominators of a family of rationals.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Q>>(xs: I) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    l
}

/// `x * k` as an exact integer; panics if not integral (internal use only).
pub fn mul_to_integer(x: &Q, k: &BigInt) -> BigInt {
    let y = x * Q::from_integer(k.clone());
    assert!(is_integer(&y), "expected integral value");
    y.to_integer()
}

/// Render a rational as `p/q` (or just `p` when integral).
pub fn fmt_q(x: &Q) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact sign as -1, 0, or 1.
pub fn sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
