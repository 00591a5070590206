//! Eigenfunction assembly: P_n = Σ_m α_n(m) f_m.
//!
//! The trigonometric assembly over the tail box reproduces the Jack
//! polynomials up to normalization (checked against the triangular
//! recursion oracle, including the product shift by powers of
//! z_1 ... z_N). The elliptic assembly produces the q²-deformed
//! symmetric functions, Laurent in general.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fbasis::{f_elliptic_cached, FContext};
use crate::intvec::{IntVector, Partition};
use crate::jack::jack_by_recursion;
use crate::model::{EllipticParams, ModelParams};
use crate::qseries::QSeries;
use crate::rational::Rational;
use crate::spectral::{
    alpha_elliptic, alpha_trig, e0_with_momentum, eigenvalue_fixed_point, EigenvalueDiagnostics,
};
use crate::sympoly::SymPoly;

/// An assembled eigenfunction of the polynomial part of the model.
#[derive(Clone, Debug)]
pub struct Eigenfunction<C: crate::coeff::Scalar> {
    pub label: IntVector,
    pub poly: SymPoly<C>,
    pub p_momentum: i64,
    /// Set when the label is not a partition (experimental territory:
    /// such assemblies are expected to cancel to zero).
    pub non_partition: bool,
}

pub struct TrigAssembly {
    pub eigenfunction: Eigenfunction<Rational>,
    /// E₀ including the center-of-mass momentum.
    pub eigenvalue: Rational,
}

pub struct EllipticAssembly {
    pub eigenfunction: Eigenfunction<QSeries>,
    pub eigenvalue: QSeries,
    pub diagnostics: EigenvalueDiagnostics,
}

/// Assembles the trigonometric P_n. Non-partition labels are allowed
/// and flagged; for partitions the result must be a genuine polynomial.
pub fn assemble_p_trig(
    label: &IntVector,
    params: &ModelParams,
    p_momentum: i64,
) -> Result<TrigAssembly> {
    let table = alpha_trig(label, params, 0)?;
    let mut ctx = FContext::new(params.clone());
    let mut poly = SymPoly::zero(params.n_vars());
    for (m, alpha) in &table.entries {
        let f = ctx.f_trig(m)?;
        if f.is_zero() {
            continue;
        }
        poly = poly.add(&f.scale(alpha))?;
    }
    let is_partition = label.is_partition();
    if is_partition && poly.is_laurent() {
        return Err(Error::ResidualLaurentSupport(label.0.clone()));
    }
    Ok(TrigAssembly {
        eigenfunction: Eigenfunction {
            label: label.clone(),
            poly,
            p_momentum,
            non_partition: !is_partition,
        },
        eigenvalue: e0_with_momentum(label, p_momentum, params),
    })
}

/// Assembles the elliptic P_n together with its eigenvalue series.
pub fn assemble_p_elliptic(
    n: &Partition,
    params: &ModelParams,
    ell: &EllipticParams,
    p_momentum: i64,
) -> Result<EllipticAssembly> {
    let (e_series, diagnostics) = eigenvalue_fixed_point(n, params, ell)?;
    let table = alpha_elliptic(n.vector(), &e_series, params, ell)?;
    let mut ctx = FContext::new(params.clone());
    let mut cache: HashMap<IntVector, SymPoly<QSeries>> = HashMap::new();
    let mut poly = SymPoly::zero(params.n_vars());
    for (m, alpha) in &table.entries {
        let f = match cache.get(m) {
            Some(f) => f.clone(),
            None => {
                let f = f_elliptic_cached(m, &mut ctx, ell)?;
                cache.insert(m.clone(), f.clone());
                f
            }
        };
        if f.is_zero() {
            continue;
        }
        poly = poly.add(&f.scale(alpha))?;
    }
    // momentum shifts the eigenvalue through the free part only: walk
    // denominators depend on equal-weight differences that cancel the
    // shift, so the series translates rigidly
    let eigenvalue = if p_momentum == 0 {
        e_series
    } else {
        let shift = e0_with_momentum(n.vector(), p_momentum, params)
            - crate::spectral::e0(n.vector(), params);
        e_series.add(&QSeries::constant(shift, ell.trunc_order()))?
    };
    Ok(EllipticAssembly {
        eigenfunction: Eigenfunction {
            label: n.vector().clone(),
            poly,
            p_momentum,
            non_partition: false,
        },
        eigenvalue,
        diagnostics,
    })
}

pub struct JackComparison {
    /// Leading coefficient of the shifted assembly, i.e. the
    /// proportionality constant against the unit-leading oracle.
    pub constant: Rational,
    pub matches: bool,
}

/// Checks (z_1...z_N)^k P_{n - k e} against the recursion oracle.
///
/// Both sides are normalized to unit leading coefficient and compared
/// exactly; a mismatch is a hard error, not a report.
pub fn compare_with_jack(
    n: &Partition,
    k_shift: i64,
    params: &ModelParams,
) -> Result<JackComparison> {
    let nv = params.n_vars();
    if n.len() != nv {
        return Err(Error::LengthMismatch(n.len(), nv));
    }
    let last = *n.vector().0.last().unwrap();
    if k_shift > last {
        return Err(Error::InvalidInput(format!(
            "shift {k_shift} exceeds the last part {last}"
        )));
    }
    let lowered = IntVector::new(n.vector().0.iter().map(|x| x - k_shift).collect());
    let assembly = assemble_p_trig(&lowered, params, 0)?;
    let shifted = assembly.eigenfunction.poly.shift_all(k_shift);
    let oracle = jack_by_recursion(n, params)?;

    let (_, lead) = shifted.leading_coeff()?;
    let normalized = shifted.normalize_leading()?;
    let oracle_normalized = oracle.poly.normalize_leading()?;
    if normalized != oracle_normalized {
        return Err(Error::MismatchBeyondNormalization(n.vector().0.clone()));
    }
    Ok(JackComparison {
        constant: lead,
        matches: true,
    })
}
