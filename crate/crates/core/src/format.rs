//! Decimal rendering of exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Rounds to `digits` significant digits (half away from zero) and prints
/// in plain positional notation with trailing zeros removed:
/// `15406/2500 -> "6.1624"`, `87/100 -> "0.87"`, `1/3 -> "0.333333"`.
pub fn decimal(r: &BigRational, digits: u32) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let sign = if r.is_negative() { "-" } else { "" };
    let r = r.abs();
    let ten = BigInt::from(10);

    // Exponent e with 10^e <= r < 10^(e+1).
    let mut e: i64 = 0;
    let mut scaled = r.clone();
    let one = BigRational::from_integer(1.into());
    let tenr = BigRational::from_integer(ten.clone());
    while scaled >= tenr {
        scaled /= &tenr;
        e += 1;
    }
    while scaled < one {
        scaled *= &tenr;
        e -= 1;
    }
    // Integer with `digits` digits: round(r * 10^(digits-1-e)).
    let shift = digits as i64 - 1 - e;
    let scaled = if shift >= 0 {
        &r * BigRational::from_integer(ten.pow(shift as u32))
    } else {
        &r / BigRational::from_integer(ten.pow((-shift) as u32))
    };
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut n = q;
    if rem * 2 >= *scaled.denom() {
        n += 1;
    }
    let mut text = n.to_string();
    let mut point = text.len() as i64 - shift;
    if text.len() as u32 > digits {
        // Rounding carried into a new digit (9.999995 -> 10.0000).
        text.pop();
        point = text.len() as i64 - shift + 1;
    }
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), text)
    } else if point as usize >= text.len() {
        format!("{}{}", text, "0".repeat(point as usize - text.len()))
    } else {
        format!("{}.{}", &text[..point as usize], &text[point as usize..])
    };
    let body = if body.contains('.') {
        body.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        body
    };
    format!("{sign}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        assert_eq!(decimal(&q(15406, 2500), 6), "6.1624");
        assert_eq!(decimal(&q(402, 100), 6), "4.02");
        assert_eq!(decimal(&q(87, 100), 6), "0.87");
        assert_eq!(decimal(&q(1, 3), 6), "0.333333");
        assert_eq!(decimal(&q(2, 3), 6), "0.666667");
        assert_eq!(decimal(&q(6, 1), 6), "6");
        assert_eq!(decimal(&q(0, 1), 6), "0");
        assert_eq!(decimal(&q(-5, 4), 6), "-1.25");
        assert_eq!(decimal(&q(1234567, 1), 6), "1234570");
        assert_eq!(decimal(&q(1, 1000), 6), "0.001");
        assert_eq!(decimal(&q(9999995, 1000000), 6), "10");
        assert_eq!(decimal(&q(247, 900), 6), "0.274444");
    }
}
