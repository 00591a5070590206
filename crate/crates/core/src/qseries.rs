//! Truncated formal power series in q² over the rationals.
//!
//! Every elliptic quantity in the engine is a polynomial in the nome
//! squared: coefficient `d` of a [`QSeries`] multiplies q^{2d}. The
//! truncation order K is part of the value; mixing orders is an error,
//! never a silent coercion.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, rational_to_f64, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Zero series at truncation order `k` (k+1 stored coefficients).
    pub fn zero(k: usize) -> Self {
        QSeries {
            coeffs: vec![Rational::zero(); k + 1],
        }
    }

    pub fn one(k: usize) -> Self {
        Self::constant(Rational::one(), k)
    }

    pub fn constant(c: Rational, k: usize) -> Self {
        let mut s = Self::zero(k);
        s.coeffs[0] = c;
        s
    }

    /// The monomial q^{2d}, zero if d exceeds the truncation order.
    pub fn q2_pow(d: usize, k: usize) -> Self {
        let mut s = Self::zero(k);
        if d <= k {
            s.coeffs[d] = Rational::one();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the q^0 term");
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> &Rational {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(QSeries { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(QSeries { coeffs })
    }

    pub fn neg(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let k = self.order();
        let mut coeffs = vec![Rational::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > k {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Ok(QSeries { coeffs })
    }

    /// Multiplicative inverse; requires a non-zero constant term.
    pub fn inv(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let k = self.order();
        let c0 = self.coeffs[0].recip();
        let mut inv = vec![Rational::zero(); k + 1];
        inv[0] = c0.clone();
        for d in 1..=k {
            let mut acc = Rational::zero();
            for i in 1..=d {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &inv[d - i];
                }
            }
            inv[d] = -&c0 * acc;
        }
        Ok(QSeries { coeffs: inv })
    }

    /// Numerical value at a concrete nome q (sums c_d q^{2d}).
    pub fn eval_f64(&self, q: f64) -> f64 {
        let q2 = q * q;
        let mut acc = 0.0;
        let mut p = 1.0;
        for c in &self.coeffs {
            acc += rational_to_f64(c) * p;
            p *= q2;
        }
        acc
    }

    /// JSON form: array of "p/q" strings, index d = coefficient of q^{2d}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(format_rational(c)))
                .collect(),
        )
    }
}

impl std::fmt::Display for QSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if d == 0 {
                write!(f, "{}", format_rational(c))?;
            } else {
                write!(f, "({})*q^{}", format_rational(c), 2 * d)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use proptest::prelude::*;

    fn series(vals: &[i64], k: usize) -> QSeries {
        let mut s = QSeries::zero(k);
        for (d, v) in vals.iter().enumerate() {
            s.coeffs[d] = rat_int(*v);
        }
        s
    }

    #[test]
    fn mul_truncates() {
        // (1+q^2)(1-q^2) at K=2 -> 1 - q^4
        let a = series(&[1, 1], 2);
        let b = series(&[1, -1], 2);
        assert_eq!(a.mul(&b).unwrap(), series(&[1, 0, -1], 2));
        // q^2 * q^2 at K=1 -> 0
        let q2 = QSeries::q2_pow(1, 1);
        assert!(q2.mul(&q2).unwrap().is_zero());
    }

    #[test]
    fn mul_identity() {
        let a = series(&[3, -2, 5], 2);
        assert_eq!(a.mul(&QSeries::one(2)).unwrap(), a);
    }

    #[test]
    fn mul_order_mismatch_rejected() {
        let a = QSeries::one(2);
        let b = QSeries::one(3);
        assert_eq!(a.mul(&b), Err(Error::OrderMismatch(2, 3)));
    }

    #[test]
    fn inv_geometric() {
        // 1/(1-q^2) at K=3 -> 1 + q^2 + q^4 + q^6
        let a = series(&[1, -1], 3);
        assert_eq!(a.inv().unwrap(), series(&[1, 1, 1, 1], 3));
        assert_eq!(QSeries::one(4).inv().unwrap(), QSeries::one(4));
        assert_eq!(QSeries::q2_pow(1, 3).inv(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn eval_at_numeric_q() {
        let a = series(&[1, 2], 3);
        let q: f64 = 0.1;
        assert!((a.eval_f64(q) - (1.0 + 2.0 * q * q)).abs() < 1e-15);
    }

    prop_compose! {
        fn arb_series(k: usize)(vals in prop::collection::vec(-20i64..20, k + 1)) -> QSeries {
            QSeries::from_coeffs(vals.into_iter().map(rat_int).collect())
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(4), b in arb_series(4), c in arb_series(4)) {
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(&ab_c, &a_bc);
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn inverse_is_two_sided(mut a in arb_series(5)) {
            if a.coeff(0).is_zero() {
                a = a.add(&QSeries::constant(rat(1, 3), 5)).unwrap();
            }
            let inv = a.inv().unwrap();
            prop_assert_eq!(a.mul(&inv).unwrap(), QSeries::one(5));
            prop_assert_eq!(inv.mul(&a).unwrap(), QSeries::one(5));
        }
    }
}
