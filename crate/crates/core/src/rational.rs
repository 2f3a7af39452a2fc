//! Exact rational helpers shared by the verifiers and the CLI.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Pow, Zero};

/// `a/b` from machine integers.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `base^exp / 1`.
pub fn power(base: u64, exp: u32) -> BigInt {
    BigInt::from(base).pow(exp)
}

/// Renders `p` as `a/b` (integers render without the denominator).
pub fn format(p: &BigRational) -> String {
    if p.denom().is_one() {
        p.numer().to_string()
    } else {
        format!("{}/{}", p.numer(), p.denom())
    }
}

/// Parses `a/b`, a plain integer, or an exact decimal such as `0.25`.
pub fn parse(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let numer: BigInt = a.trim().parse().map_err(|_| bad(s))?;
        let denom: BigInt = b.trim().parse().map_err(|_| bad(s))?;
        if denom.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(BigRational::new(numer, denom));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let int_part: BigInt = if int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad(s))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad(s));
        }
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad(s))?;
        let negative = int.trim_start().starts_with('-');
        let magnitude = int_part.magnitude().clone() * scale.magnitude() + frac_part.magnitude();
        let numer = BigInt::from_biguint(
            if negative {
                num::bigint::Sign::Minus
            } else {
                num::bigint::Sign::Plus
            },
            magnitude,
        );
        return Ok(BigRational::new(numer, scale));
    }
    let numer: BigInt = s.parse().map_err(|_| bad(s))?;
    Ok(BigRational::from_integer(numer))
}

fn bad(s: &str) -> String {
    format!("cannot parse `{s}` as a rational (expected a/b, integer, or decimal)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("1/3").unwrap(), ratio(1, 3));
        assert_eq!(parse("0").unwrap(), ratio(0, 1));
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse(" 2 / 6 ").unwrap(), ratio(1, 3));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn format_reduced() {
        assert_eq!(format(&ratio(9, 10)), "9/10");
        assert_eq!(format(&ratio(4, 4)), "1");
        assert_eq!(format(&ratio(0, 7)), "0");
    }
}
