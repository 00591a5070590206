//! Exact rational arithmetic helpers.
//!
//! Coefficients are arbitrary-precision rationals, always in lowest terms
//! with positive denominator (`num_rational::BigRational` guarantees this
//! canonical form). This module adds the generalized binomial coefficient
//! and the `"p/q"` string round-trip used by every JSON surface.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Rational from an integer pair, mostly for tests and literals.
pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

/// Generalized binomial coefficient a(a-1)...(a-k+1)/k! for rational a.
pub fn gen_binomial(a: &Rational, k: usize) -> Rational {
    let mut num = Rational::one();
    let mut fact = BigInt::one();
    for i in 0..k {
        num *= a - rat_int(i as i64);
        fact *= BigInt::from(i as i64 + 1);
    }
    num / BigRational::from_integer(fact)
}

/// Parses "p/q" or "p"; the sign may sit on the numerator only.
pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::InvalidInput(format!("bad rational '{s}': {e}")))
}

/// Renders in canonical "p/q" form, or plain "p" for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_binomial_k_zero_is_one() {
        assert_eq!(gen_binomial(&rat(7, 3), 0), rat_int(1));
        assert_eq!(gen_binomial(&rat(-5, 2), 0), rat_int(1));
    }

    #[test]
    fn gen_binomial_integer_case() {
        assert_eq!(gen_binomial(&rat_int(2), 2), rat_int(1));
        assert_eq!(gen_binomial(&rat_int(5), 2), rat_int(10));
    }

    #[test]
    fn gen_binomial_half() {
        // (1/2)(-1/2)/2 = -1/8
        assert_eq!(gen_binomial(&rat(1, 2), 2), rat(-1, 8));
    }

    #[test]
    fn gen_binomial_times_factorial_is_falling_product() {
        let a = rat(7, 5);
        for k in 0..=10usize {
            let mut prod = Rational::one();
            let mut fact = Rational::one();
            for i in 0..k {
                prod *= &a - rat_int(i as i64);
                fact *= rat_int(i as i64 + 1);
            }
            assert_eq!(gen_binomial(&a, k) * fact, prod, "k={k}");
        }
    }

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["5", "-3/7", "0", "22/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert!(parse_rational("x/y").is_err());
    }

    #[test]
    fn format_integer_has_no_denominator() {
        assert_eq!(format_rational(&rat(10, 2)), "5");
    }
}
