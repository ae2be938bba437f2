//! Exact rational scalars.
//!
//! `Rational` is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Textual form is `p/q`, or just `p` for integers.

use alloc::string::String;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

/// `numer / denom` as an exact rational. Panics if `denom == 0`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational")]
    Empty,
    #[error("invalid integer `{0}` in rational")]
    BadInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `p/q` or `p`. No surrounding whitespace is accepted.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |s: &str| {
        // BigInt accepts a leading '+', which we keep out of the format.
        if s.is_empty() || s.starts_with('+') {
            return Err(ParseRationalError::BadInteger(s.into()));
        }
        BigInt::from_str(s).map_err(|_| ParseRationalError::BadInteger(s.into()))
    };
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(text)?)),
        Some((p, q)) => {
            let numer = parse_int(p)?;
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(text.into()));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("2/4").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3/9").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("1/-2").unwrap(), rat(-1, 2));
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(matches!(parse_rational(""), Err(ParseRationalError::Empty)));
        assert!(parse_rational("1/2/3").is_err());
        assert!(parse_rational(" 1/2").is_err());
        assert!(parse_rational("+1").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn display_is_lowest_terms() {
        assert_eq!(rat(6, 8).to_string(), "3/4");
        assert_eq!(rat(4, 2).to_string(), "2");
        assert_eq!(rat(-1, 2).to_string(), "-1/2");
    }
}
