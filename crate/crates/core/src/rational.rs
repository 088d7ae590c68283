//! Exact scalar helpers shared by every engine.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use crate::error::{Error, Result};

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Canonical textual form `p/q`. Integers are written with denominator 1 so
/// that every emitted rational has the same shape.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Binomial coefficient with the lattice path convention: zero whenever
/// `k < 0` or `k > n`, and for negative `n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// If `r` is `±2^e` for an integer `e`, returns `e`.
pub fn power_of_two_exponent(r: &BigRational) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let exp_of = |v: &BigInt| -> Option<i64> {
        let bits = v.bits();
        if bits == 0 {
            return None;
        }
        let shift = bits - 1;
        if *v == (BigInt::one() << shift) {
            shift.to_i64()
        } else {
            None
        }
    };
    Some(exp_of(r.numer())? - exp_of(r.denom())?)
}

pub fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << (e as usize))
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

pub fn lcm_of_denominators<'a>(items: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    items
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(0, 0), int(1));
        assert_eq!(binomial(0, -1), int(0));
        assert_eq!(binomial(0, 1), int(0));
        assert_eq!(binomial(6, 2), int(15));
        assert_eq!(binomial(-1, 0), int(0));
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(fmt_rational(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rational(&rat(7, 1)), "7/1");
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational(" 5 ").unwrap(), rat(5, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(power_of_two_exponent(&rat(8, 1)), Some(3));
        assert_eq!(power_of_two_exponent(&rat(1, 4)), Some(-2));
        assert_eq!(power_of_two_exponent(&rat(1, 1)), Some(0));
        assert_eq!(power_of_two_exponent(&rat(3, 2)), None);
        assert_eq!(power_of_two_exponent(&rat(-2, 1)), None);
        assert_eq!(pow2(-3), rat(1, 8));
    }
}
