//! Exact computation of Jack polynomials and their elliptic deformation
//! through the explicit contour-integral solution of the (elliptic)
//! Calogero-Sutherland model, plus an independent triangular-recursion
//! oracle and a numerical verification harness.

pub mod assemble;
pub mod coeff;
pub mod error;
pub mod fbasis;
pub mod fourier_oracle;
pub mod intvec;
pub mod jack;
pub mod model;
pub mod qseries;
pub mod rational;
pub mod report;
pub mod residual;
pub mod rawpoly;
pub mod spectral;
pub mod sympoly;
pub mod theta;

pub use coeff::{Jet, Scalar};
pub use error::{Error, Result};
pub use intvec::{dominance_leq, IntVector, Partition};
pub use model::{EllipticParams, ModelParams};
pub use qseries::QSeries;
pub use rational::{gen_binomial, parse_rational, rational_to_f64, Rational};
pub use sympoly::{monomial_sym, SymPoly};
