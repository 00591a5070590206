//! Model parameters: variable count, coupling, and elliptic deformation.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};

/// Coupling data for the N-body model and the polynomial eigenproblem.
#[derive(Clone, PartialEq, Debug)]
pub struct ModelParams {
    n_vars: usize,
    lambda: Rational,
}

impl ModelParams {
    pub fn new(n_vars: usize, lambda: Rational) -> Result<Self> {
        if n_vars < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least two variables, got {n_vars}"
            )));
        }
        if lambda <= Rational::zero() {
            return Err(Error::InvalidInput(format!(
                "coupling must be positive, got {lambda}"
            )));
        }
        Ok(ModelParams { n_vars, lambda })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    /// gamma = 2 lambda (lambda - 1).
    pub fn gamma(&self) -> Rational {
        rat_int(2) * &self.lambda * (&self.lambda - Rational::one())
    }

    pub fn lambda_f64(&self) -> f64 {
        crate::rational::rational_to_f64(&self.lambda)
    }

    pub fn gamma_f64(&self) -> f64 {
        crate::rational::rational_to_f64(&self.gamma())
    }
}

/// Elliptic deformation: q²-truncation order, optionally a numeric nome.
#[derive(Clone, PartialEq, Debug)]
pub struct EllipticParams {
    trunc_order: usize,
    q: Option<f64>,
}

impl EllipticParams {
    pub fn formal(trunc_order: usize) -> Self {
        EllipticParams {
            trunc_order,
            q: None,
        }
    }

    pub fn numeric(trunc_order: usize, q: f64) -> Result<Self> {
        if !(0.0 < q && q < 1.0) {
            return Err(Error::InvalidInput(format!("nome must lie in (0,1), got {q}")));
        }
        Ok(EllipticParams {
            trunc_order,
            q: Some(q),
        })
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc_order
    }

    pub fn q(&self) -> Option<f64> {
        self.q
    }

    /// beta = -2 ln q, the imaginary period scale.
    pub fn beta(&self) -> Option<f64> {
        self.q.map(|q| -2.0 * q.ln())
    }
}
