//! Verification suites and their JSON report surface.
//!
//! Each check produces a named single-line record with the measured
//! residual, the tolerance it was held to, and the seed that generated
//! its sample points, so any line can be reproduced in isolation.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::assemble::{assemble_p_elliptic, assemble_p_trig, compare_with_jack};
use crate::error::Result;
use crate::intvec::{IntVector, Partition};
use crate::intvec::partitions_of_weight;
use crate::model::{EllipticParams, ModelParams};
use crate::qseries::QSeries;
use crate::rational::{format_rational, rat, rat_int, Rational};
use crate::residual::{
    check_identity_f, check_identity_fnm, check_identity_fnm_dual, residual_eigen_elliptic,
    residual_eigen_trig, sample_angles, sample_complex,
};
use crate::spectral::s_elliptic;
use crate::theta::ThetaEval;

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub seed: u64,
}

impl CheckReport {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64, seed: u64) -> Self {
        let name = name.into();
        CheckReport {
            pass: residual <= tolerance,
            name,
            residual,
            tolerance,
            seed,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.pass,
            "seed": self.seed,
        })
    }
}

pub fn reports_to_json(reports: &[CheckReport]) -> serde_json::Value {
    serde_json::json!({
        "checks": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "pass": reports.iter().all(|r| r.pass),
    })
}

/// Functional identities: the two-family kernel in both modes, the
/// unequal-family versions with their additive constants, the S
/// difference identity, and the Fourier form of the potential.
pub fn suite_identities(seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // H(x)F = H(y)F, trigonometric
    let params = ModelParams::new(2, rat(3, 2))?;
    let theta = ThetaEval::trig();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x = sample_complex(&mut rng, 2, 0.6, 0.2);
        let y = sample_complex(&mut rng, 2, 0.6, 0.2);
        worst = worst.max(check_identity_f(&x, &y, &params, &theta)?);
    }
    out.push(CheckReport::new("identity_F_trig", worst, 1e-8, seed));

    // same identity with the elliptic weight at q = 0.2
    let params_e = ModelParams::new(2, rat_int(2))?;
    let theta_e = ThetaEval::elliptic(0.2, None)?;
    let beta = theta_e.beta();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x = sample_complex(&mut rng, 2, 0.2 * beta, 0.2);
        let y = sample_complex(&mut rng, 2, 0.2 * beta, 0.2);
        worst = worst.max(check_identity_f(&x, &y, &params_e, &theta_e)?);
    }
    out.push(CheckReport::new("identity_F_elliptic_q0.2", worst, 1e-8, seed));

    // unequal family sizes with the printed constants
    for (n, m) in [(2usize, 0usize), (2, 1), (3, 1)] {
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let x = sample_complex(&mut rng, n, 0.6, 0.25);
            let y = sample_complex(&mut rng, m, 0.6, 0.25);
            worst = worst.max(check_identity_fnm(&x, &y, 2.0, &theta)?);
        }
        out.push(CheckReport::new(
            format!("identity_FNM_{n}_{m}"),
            worst,
            1e-8,
            seed,
        ));
    }

    // dual identity with reciprocal coupling
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let x = sample_complex(&mut rng, 2, 0.6, 0.25);
        let y = sample_complex(&mut rng, 1, 0.6, 0.25);
        worst = worst.max(check_identity_fnm_dual(&x, &y, 2.0, &theta)?);
    }
    out.push(CheckReport::new("identity_FNM_dual_2_1", worst, 1e-8, seed));

    // S_ν - S_{-ν} = ν as exact series
    let mut fails = 0usize;
    for nu in 1..=10i64 {
        let diff = s_elliptic(nu, 8).sub(&s_elliptic(-nu, 8))?;
        if diff != QSeries::constant(rat_int(nu), 8) {
            fails += 1;
        }
    }
    out.push(CheckReport::new("s_difference_identity", fails as f64, 0.5, seed));

    // Fourier form of the elliptic potential on a strip grid
    let theta_f = ThetaEval::elliptic(0.2, None)?;
    let betaf = theta_f.beta();
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        for j in 1..=3 {
            let r = Complex64::new(-2.5 + 1.2 * i as f64, betaf * j as f64 / 4.0);
            let direct = theta_f.potential(r)?;
            let fourier = theta_f.potential_fourier(r)?;
            worst = worst.max((direct - fourier).norm());
        }
    }
    out.push(CheckReport::new("potential_fourier_vs_lattice", worst, 1e-10, seed));

    Ok(out)
}

/// Assembly against the recursion oracle on a fast grid.
pub fn suite_jack(seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (nv, lam) in [(2usize, rat(1, 2)), (2, rat_int(2)), (3, rat(3, 2))] {
        let params = ModelParams::new(nv, lam.clone())?;
        let mut fails = 0usize;
        let mut cases = 0usize;
        for w in 0..=4i64 {
            for n in partitions_of_weight(w, nv) {
                cases += 1;
                if compare_with_jack(&n, 0, &params).is_err() {
                    fails += 1;
                }
            }
        }
        out.push(CheckReport::new(
            format!("jack_match_N{nv}_lambda_{}", format_rational(&lam)),
            fails as f64,
            0.5,
            seed,
        ));
        let _ = cases;
    }
    // shift independence
    let params = ModelParams::new(2, rat_int(2))?;
    let mut fails = 0usize;
    for (parts, k) in [([2i64, 1], 1i64), ([3, 2], 2), ([2, 2], 1)] {
        let n = Partition::from_parts(&parts)?;
        if compare_with_jack(&n, k, &params).is_err() {
            fails += 1;
        }
    }
    out.push(CheckReport::new("jack_shift_independence", fails as f64, 0.5, seed));

    // non-partition labels assemble to zero
    let params = ModelParams::new(2, rat(3, 2))?;
    let mut fails = 0usize;
    for label in [[0i64, 1], [1, 2], [0, 2], [-1, 3]] {
        let a = assemble_p_trig(&IntVector::new(label.to_vec()), &params, 0)?;
        if !a.eigenfunction.poly.is_zero() {
            fails += 1;
        }
    }
    out.push(CheckReport::new("non_partition_vanishing", fails as f64, 0.5, seed));
    Ok(out)
}

/// Pointwise eigen-equation residuals, trigonometric and elliptic.
pub fn suite_residuals(seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for (nv, parts, lam) in [
        (2usize, vec![2i64, 0], rat_int(2)),
        (2, vec![0, 0], rat(3, 2)),
        (3, vec![2, 1, 0], rat(1, 2)),
    ] {
        let params = ModelParams::new(nv, lam.clone())?;
        let a = assemble_p_trig(&IntVector::new(parts.clone()), &params, 0)?;
        let samples: Vec<Vec<f64>> = (0..20).map(|_| sample_angles(&mut rng, nv, 0.25)).collect();
        let r = residual_eigen_trig(&a.eigenfunction.poly, &a.eigenvalue, 0, &params, &samples)?;
        out.push(CheckReport::new(
            format!("residual_trig_N{nv}_{parts:?}_lambda_{}", format_rational(&lam)),
            r,
            1e-10,
            seed,
        ));
    }

    // small-coupling elliptic case inside the safety factor
    let params = ModelParams::new(2, rat(1, 2))?;
    let n = Partition::from_parts(&[2, 1])?;
    let q = 0.1;
    for k in [0usize, 1, 2] {
        let ell = EllipticParams::numeric(k, q)?;
        let a = assemble_p_elliptic(&n, &params, &ell, 0)?;
        let samples: Vec<Vec<f64>> = (0..20).map(|_| sample_angles(&mut rng, 2, 0.25)).collect();
        let r = residual_eigen_elliptic(
            &a.eigenfunction.poly,
            a.eigenvalue.eval_f64(q),
            0,
            &params,
            q,
            &samples,
        )?;
        out.push(CheckReport::new(
            format!("residual_elliptic_K{k}_q{q}"),
            r,
            100.0 * q.powi(2 * (k as i32 + 1)),
            seed,
        ));
    }

    // truncation-order slope at stronger coupling: halving q must scale
    // the residual by about 2^{2(K+1)}
    let params = ModelParams::new(2, rat_int(2))?;
    let n = Partition::from_parts(&[1, 0])?;
    let k = 2usize;
    let samples: Vec<Vec<f64>> = (0..20).map(|_| sample_angles(&mut rng, 2, 0.25)).collect();
    let mut residuals = Vec::new();
    for q in [0.2f64, 0.1, 0.05] {
        let ell = EllipticParams::numeric(k, q)?;
        let a = assemble_p_elliptic(&n, &params, &ell, 0)?;
        residuals.push(residual_eigen_elliptic(
            &a.eigenfunction.poly,
            a.eigenvalue.eval_f64(q),
            0,
            &params,
            q,
            &samples,
        )?);
    }
    let want = 2f64.powi(2 * (k as i32 + 1));
    let mut slope_err: f64 = 0.0;
    for w in residuals.windows(2) {
        let ratio = w[0] / w[1];
        slope_err = slope_err.max((ratio.ln() / want.ln() - 1.0).abs());
    }
    out.push(CheckReport::new("residual_truncation_slope", slope_err, 0.2, seed));

    Ok(out)
}

pub fn suite_all(seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = suite_identities(seed)?;
    out.extend(suite_jack(seed)?);
    out.extend(suite_residuals(seed)?);
    Ok(out)
}

/// JSON for an eigenvalue result per the wire schema.
pub fn eigenvalue_json(
    n: &IntVector,
    mode: &str,
    value: serde_json::Value,
    a: Option<&Rational>,
    delta: Option<&Rational>,
    k: Option<usize>,
) -> serde_json::Value {
    serde_json::json!({
        "n": n.0.clone(),
        "mode": mode,
        "value": value,
        "a": a.map(format_rational),
        "delta": delta.map(format_rational),
        "K": k,
    })
}

/// JSON for an α table.
pub fn alpha_table_json<C: crate::coeff::Scalar + crate::sympoly::CoeffJson>(
    table: &crate::spectral::AlphaTable<C>,
    mode: &str,
    k: Option<usize>,
) -> serde_json::Value {
    serde_json::json!({
        "base": table.base.0.clone(),
        "mode": mode,
        "K": k,
        "entries": table
            .entries
            .iter()
            .map(|(m, c)| serde_json::json!({"m": m.0.clone(), "coeff": c.coeff_json()}))
            .collect::<Vec<_>>(),
    })
}
