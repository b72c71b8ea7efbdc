//! Exact rationals and correctly rounded binary floats.
//!
//! Both are thin layers over GMP/MPFR through `rug`. Rationals are kept in
//! canonical form by the library after every operation, so coefficient
//! equality is plain `==`.

use rug::ops::Pow;
pub use rug::{Float as BigFloat, Integer, Rational};

use crate::error::{Error, Result};

/// Smallest float precision accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 64;

/// Parses `[sign]digits[/digits]` into a canonical rational.
///
/// Whitespace, decimal points and exponents are rejected so that no float
/// literal can leak into the exact path.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let malformed = || Error::MalformedRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let unsigned = num.strip_prefix(['+', '-']).unwrap_or(num);
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(unsigned) || !den.is_none_or(digits) {
        return Err(malformed());
    }
    let num: Integer = num.parse().map_err(|_| malformed())?;
    let den: Integer = match den {
        Some(d) => d.parse().map_err(|_| malformed())?,
        None => Integer::from(1),
    };
    if den == 0 {
        return Err(Error::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::from((num, den)))
}

/// Canonical text form: `num/den`, or just `num` when the denominator is 1.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// `x^k` for any integer `k`; zero to a negative power is an error.
pub fn rational_power(x: &Rational, k: i64) -> Result<Rational> {
    if k < 0 && *x == 0 {
        return Err(Error::ZeroToNegativePower(k));
    }
    let e = i32::try_from(k).map_err(|_| Error::Numeric(format!("exponent {k} out of range")))?;
    Ok(x.clone().pow(e))
}

/// Rounds `x` to nearest at `precision` bits.
pub fn to_float(x: &Rational, precision: u32) -> Result<BigFloat> {
    if precision < MIN_PRECISION {
        return Err(Error::PrecisionTooLow(precision));
    }
    Ok(BigFloat::with_val(precision, x))
}

/// Shorthand for `num/den`; panics on a zero denominator, so only for literals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_canonicalizes() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-4/2").unwrap(), rat(-2, 1));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational("+5/10").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("0/9").unwrap(), rat(0, 1));
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "1.5", "0.707", "1/", "/2", "a", "1/2/3", " 1", "1e3", "--1", "1/-2"] {
            assert!(
                matches!(parse_rational(bad), Err(Error::MalformedRational(_))),
                "{bad:?} should be malformed"
            );
        }
        assert!(matches!(parse_rational("3/0"), Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn powers() {
        assert_eq!(rational_power(&rat(1, 2), 3).unwrap(), rat(1, 8));
        assert_eq!(rational_power(&rat(2, 3), -2).unwrap(), rat(9, 4));
        assert_eq!(rational_power(&rat(5, 7), 0).unwrap(), rat(1, 1));
        assert_eq!(rational_power(&rat(0, 1), -1), Err(Error::ZeroToNegativePower(-1)));
    }

    #[test]
    fn float_rounding() {
        assert_eq!(to_float(&rat(1, 2), 128).unwrap(), 0.5);
        assert_eq!(to_float(&rat(0, 1), 64).unwrap(), 0);
        let third = to_float(&rat(1, 3), 128).unwrap();
        let back = third.to_rational().unwrap();
        let rel = (back - rat(1, 3)).abs() * 3;
        assert!(rel < Rational::from(1) / (Integer::from(1) << 127u32));
        assert_eq!(to_float(&rat(1, 3), 32), Err(Error::PrecisionTooLow(32)));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..500).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn field_ops_are_exact(x in small_rational(), y in small_rational()) {
            prop_assert_eq!(Rational::from(&x + &y) - &y, x.clone());
            if y != 0 {
                prop_assert_eq!(Rational::from(&x * &y) / &y, x);
            }
        }

        #[test]
        fn parse_inverts_format(x in small_rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }

        #[test]
        fn float_relative_error(x in small_rational(), prec in 64u32..300) {
            prop_assume!(x != 0);
            let f = to_float(&x, prec).unwrap();
            let back = f.to_rational().unwrap();
            let rel = ((back - &x) / &x).abs();
            let bound = Rational::from(1) / (Integer::from(1) << (prec - 1));
            prop_assert!(rel < bound);
        }
    }
}
