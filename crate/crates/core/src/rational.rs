//! Exact rational scalars and their `num/den` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    frac(1, 2)
}

/// Always `num/den`, including integers (`3/1`). Used by every machine format.
pub fn to_fraction_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Short human form: integers without the denominator.
pub fn to_display_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// LaTeX form, `\tfrac{n}{d}` for proper fractions.
pub fn to_latex(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        let sign = if q.is_negative() { "-" } else { "" };
        format!("{}\\tfrac{{{}}}{{{}}}", sign, q.numer().abs(), q.denom())
    }
}

/// Accepts `n`, `n/d` and surrounding whitespace.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// serde adapter storing a rational as the string `num/den`.
pub mod as_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_fraction_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_strings() {
        assert_eq!(to_fraction_string(&frac(-2, 4)), "-1/2");
        assert_eq!(to_fraction_string(&int(3)), "3/1");
        assert_eq!(to_display_string(&int(3)), "3");
        assert_eq!(to_latex(&frac(-1, 2)), "-\\tfrac{1}{2}");
    }

    #[test]
    fn parse_roundtrip() {
        for q in [frac(7, 3), frac(-1, 6), int(0), int(-12)] {
            assert_eq!(parse(&to_fraction_string(&q)).unwrap(), q);
        }
        assert_eq!(parse(" 4 ").unwrap(), int(4));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }
}
