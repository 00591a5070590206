//! Coefficient-ring abstraction.
//!
//! The spectral walk engine and the symmetric-polynomial containers run
//! over several scalar types: exact rationals (trigonometric case),
//! truncated q²-series (elliptic formal case), floats (elliptic numeric
//! case), and truncated Taylor jets of any of these (for derivatives of
//! the spectral function in the Lagrange series). Context such as the
//! truncation order travels with the values, so constructors are methods
//! on a prototype value rather than free functions.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::Result;
use crate::qseries::QSeries;
use crate::rational::{rational_to_f64, Rational};

pub trait Scalar: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Embeds an exact rational using `self` for truncation context.
    fn from_rational(&self, r: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn is_zero(&self) -> bool;
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        num_traits::One::one()
    }
    fn from_rational(&self, r: &Rational) -> Self {
        r.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(crate::error::Error::ZeroConstantTerm);
        }
        Ok(self.recip())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for QSeries {
    fn zero_like(&self) -> Self {
        QSeries::zero(self.order())
    }
    fn one_like(&self) -> Self {
        QSeries::one(self.order())
    }
    fn from_rational(&self, r: &Rational) -> Self {
        QSeries::constant(r.clone(), self.order())
    }
    fn add(&self, other: &Self) -> Self {
        QSeries::add(self, other).expect("order mismatch in scalar add")
    }
    fn sub(&self, other: &Self) -> Self {
        QSeries::sub(self, other).expect("order mismatch in scalar sub")
    }
    fn mul(&self, other: &Self) -> Self {
        QSeries::mul(self, other).expect("order mismatch in scalar mul")
    }
    fn neg(&self) -> Self {
        QSeries::neg(self)
    }
    fn inv(&self) -> Result<Self> {
        QSeries::inv(self)
    }
    fn is_zero(&self) -> bool {
        QSeries::is_zero(self)
    }
}

impl Scalar for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }
    fn one_like(&self) -> Self {
        1.0
    }
    fn from_rational(&self, r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if *self == 0.0 {
            return Err(crate::error::Error::ZeroConstantTerm);
        }
        Ok(1.0 / self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Scalar for Complex64 {
    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rational(&self, r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self> {
        if self.norm() == 0.0 {
            return Err(crate::error::Error::ZeroConstantTerm);
        }
        Ok(1.0 / self)
    }
    fn is_zero(&self) -> bool {
        self.norm() == 0.0
    }
}

/// Truncated Taylor jet in an auxiliary variable t over a scalar ring.
///
/// `coeffs[i]` is the coefficient of t^i. Used to carry Φ and its
/// ξ-derivatives through the walk engine in a single pass.
#[derive(Clone, PartialEq, Debug)]
pub struct Jet<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    /// Constant jet `c` of Taylor order `ord` (ord+1 coefficients).
    pub fn constant(c: S, ord: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; ord + 1];
        coeffs[0] = c;
        Jet { coeffs }
    }

    /// The variable itself: c + t, so derivatives in t track derivatives in ξ.
    pub fn variable(c: S, ord: usize) -> Self {
        let mut j = Self::constant(c.clone(), ord);
        if ord >= 1 {
            j.coeffs[1] = c.one_like();
        }
        j
    }

    pub fn taylor_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &S {
        &self.coeffs[i]
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    fn zero_like(&self) -> Self {
        Jet::constant(self.coeffs[0].zero_like(), self.taylor_order())
    }
    fn one_like(&self) -> Self {
        Jet::constant(self.coeffs[0].one_like(), self.taylor_order())
    }
    fn from_rational(&self, r: &Rational) -> Self {
        Jet::constant(self.coeffs[0].from_rational(r), self.taylor_order())
    }
    fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        Jet { coeffs }
    }
    fn sub(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        Jet { coeffs }
    }
    fn mul(&self, other: &Self) -> Self {
        let ord = self.taylor_order();
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; ord + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > ord {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Jet { coeffs }
    }
    fn neg(&self) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }
    fn inv(&self) -> Result<Self> {
        let ord = self.taylor_order();
        let c0 = self.coeffs[0].inv()?;
        let mut inv = vec![self.coeffs[0].zero_like(); ord + 1];
        inv[0] = c0.clone();
        for d in 1..=ord {
            let mut acc = self.coeffs[0].zero_like();
            for i in 1..=d {
                acc = acc.add(&self.coeffs[i].mul(&inv[d - i]));
            }
            inv[d] = c0.mul(&acc).neg();
        }
        Ok(Jet { coeffs: inv })
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}
