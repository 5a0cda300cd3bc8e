//! Exact rational helpers shared across the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders as `n` or `n/d`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `n`, `-n` or `n/d`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Exact `k`-th root of a non-negative rational, if it exists.
pub fn exact_root(q: &Rational, k: u32) -> Option<Rational> {
    if q.is_negative() || k == 0 {
        return None;
    }
    if k == 1 {
        return Some(q.clone());
    }
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    let r = Rational::new(n, d);
    if pow_i(&r, k as i64) == *q {
        Some(r)
    } else {
        None
    }
}

/// Integer power with negative exponents allowed for non-zero bases.
pub fn pow_i(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow::pow(q.clone(), e as usize)
    } else {
        Rational::one() / num_traits::pow::pow(q.clone(), (-e) as usize)
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}
