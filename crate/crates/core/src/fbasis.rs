//! The building-block symmetric functions f_m.
//!
//! f_m is the N-fold constant-term extraction over nested circles of
//!
//!   prod_{j<k} Theta(xi_j/xi_k)^lambda / prod_{j,k} Theta(z_j/xi_k)^lambda
//!
//! against xi^m. Three routes are implemented and cross-checked:
//!
//! * exact trigonometric case (Theta(x) = 1 - x): finite enumeration of
//!   binomial-series terms under the 2N linear exponent constraints;
//! * elliptic case as a truncated q²-series: every correction factor of
//!   the theta product is expanded with a bounded q-budget and reduces
//!   to shifted trigonometric blocks;
//! * numeric contour quadrature on the nested circles, used by the
//!   verification harness as an independent check.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intvec::IntVector;
use crate::model::{EllipticParams, ModelParams};
use crate::qseries::QSeries;
use crate::rational::{gen_binomial, Rational};
use crate::rawpoly::RawPoly;
use crate::sympoly::SymPoly;

/// Exact f_m in the trigonometric case.
///
/// Enumerates non-negative integer matrices mu_{j<k} and nu_{jk} subject
/// to the exponent-balance constraints; each admissible pair contributes
/// prod binom(lambda, mu) * prod binom(-lambda, nu) * (-1)^{sum mu + sum nu}
/// on the monomial with exponents given by the nu row sums. Returns the
/// zero polynomial whenever some tail sum of the label is negative.
pub fn f_trig(label: &IntVector, params: &ModelParams) -> Result<SymPoly<Rational>> {
    let n = params.n_vars();
    if label.len() != n {
        return Err(Error::LengthMismatch(label.len(), n));
    }
    let raw = f_trig_raw(label, params);
    SymPoly::from_raw(&raw)
}

fn f_trig_raw(label: &IntVector, params: &ModelParams) -> RawPoly<Rational> {
    let n = params.n_vars();
    let lambda = params.lambda();
    let mut out = RawPoly::zero(n);
    if !label.tail_nonneg() {
        return out;
    }
    let weight = label.weight();
    if weight < 0 {
        return out;
    }

    // tails tail[c] = sum_{j >= c} label_j, for the per-entry mu caps
    let mut tail = vec![0i64; n + 1];
    for c in (0..n).rev() {
        tail[c] = tail[c + 1] + label.0[c];
    }

    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| ((j + 1)..n).map(move |k| (j, k)))
        .collect();

    // cap for mu_{jk}: crossing sums at every cut c in (j, k] stay <= tail[c]
    let caps: Vec<i64> = pairs
        .iter()
        .map(|&(j, k)| ((j + 1)..=k).map(|c| tail[c]).min().unwrap())
        .collect();

    let mut mu = vec![0i64; pairs.len()];
    enumerate_mu(
        &pairs, &caps, &tail, &mut mu, 0, label, lambda, weight, &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate_mu(
    pairs: &[(usize, usize)],
    caps: &[i64],
    tail: &[i64],
    mu: &mut Vec<i64>,
    idx: usize,
    label: &IntVector,
    lambda: &Rational,
    weight: i64,
    out: &mut RawPoly<Rational>,
) {
    let n = label.len();
    if idx == pairs.len() {
        // column sums of nu are fixed by the balance constraints
        let mut colsum = vec![0i64; n];
        for j in 0..n {
            let mut s = label.0[j];
            for (p, &(a, b)) in pairs.iter().enumerate() {
                if b == j {
                    s -= mu[p]; // incoming mu_{a j}, a < j
                }
                if a == j {
                    s += mu[p]; // outgoing mu_{j b}, b > j
                }
            }
            colsum[j] = s;
        }
        if colsum.iter().any(|&c| c < 0) {
            return;
        }
        debug_assert_eq!(colsum.iter().sum::<i64>(), weight);

        // mu part of the coefficient
        let mut mu_coeff = Rational::one();
        for (p, &m) in mu.iter().enumerate() {
            let _ = p;
            let mut c = gen_binomial(lambda, m as usize);
            if m % 2 != 0 {
                c = -c;
            }
            mu_coeff *= c;
        }
        if mu_coeff.is_zero() {
            return;
        }

        // distribute every column over rows; only row sums matter, so run
        // a DP over partial row-sum vectors
        let neg_lambda = -lambda.clone();
        let mut states: HashMap<Vec<i64>, Rational> = HashMap::new();
        states.insert(vec![0i64; n], mu_coeff);
        for &cs in &colsum {
            if cs == 0 {
                continue;
            }
            let comps = compositions(cs, n);
            let mut next: HashMap<Vec<i64>, Rational> = HashMap::new();
            for (state, coeff) in &states {
                for comp in &comps {
                    let mut c = coeff.clone();
                    for &d in comp {
                        if d > 0 {
                            let mut b = gen_binomial(&neg_lambda, d as usize);
                            if d % 2 != 0 {
                                b = -b;
                            }
                            c *= b;
                        }
                    }
                    if c.is_zero() {
                        continue;
                    }
                    let mut ns = state.clone();
                    for (r, &d) in comp.iter().enumerate() {
                        ns[r] += d;
                    }
                    *next.entry(ns).or_insert_with(Rational::zero) += c;
                }
            }
            states = next;
        }
        for (rowsums, coeff) in states {
            out.add_term(IntVector::new(rowsums), coeff);
        }
        return;
    }

    let (j, k) = pairs[idx];
    let _ = (j, k);
    for v in 0..=caps[idx].max(0) {
        mu[idx] = v;
        // prune: partial crossing sums must respect each tail cut
        if crossing_ok(pairs, mu, idx, tail) {
            enumerate_mu(pairs, caps, tail, mu, idx + 1, label, lambda, weight, out);
        }
    }
    mu[idx] = 0;
}

fn crossing_ok(pairs: &[(usize, usize)], mu: &[i64], upto: usize, tail: &[i64]) -> bool {
    let n = tail.len() - 1;
    for c in 1..n {
        let mut s = 0;
        for (p, &(a, b)) in pairs.iter().enumerate().take(upto + 1) {
            if a < c && c <= b {
                s += mu[p];
            }
        }
        if s > tail[c] {
            return false;
        }
    }
    true
}

/// All compositions of `total` into `parts` non-negative integers.
fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; parts];
    fn rec(out: &mut Vec<Vec<i64>>, cur: &mut Vec<i64>, idx: usize, rem: i64) {
        if idx + 1 == cur.len() {
            cur[idx] = rem;
            out.push(cur.clone());
            cur[idx] = 0;
            return;
        }
        for v in 0..=rem {
            cur[idx] = v;
            rec(out, cur, idx + 1, rem - v);
        }
        cur[idx] = 0;
    }
    if parts == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(&mut out, &mut cur, 0, total);
    out
}

/// Memoizing context for f computations at fixed parameters.
pub struct FContext {
    params: ModelParams,
    trig: HashMap<IntVector, SymPoly<Rational>>,
    trig_raw: HashMap<IntVector, RawPoly<Rational>>,
}

impl FContext {
    pub fn new(params: ModelParams) -> Self {
        FContext {
            params,
            trig: HashMap::new(),
            trig_raw: HashMap::new(),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn f_trig(&mut self, label: &IntVector) -> Result<SymPoly<Rational>> {
        if let Some(p) = self.trig.get(label) {
            return Ok(p.clone());
        }
        let p = f_trig(label, &self.params)?;
        self.trig.insert(label.clone(), p.clone());
        Ok(p)
    }

    fn f_trig_raw(&mut self, label: &IntVector) -> RawPoly<Rational> {
        if let Some(p) = self.trig_raw.get(label) {
            return p.clone();
        }
        let p = f_trig_raw(label, &self.params);
        self.trig_raw.insert(label.clone(), p.clone());
        p
    }
}

/// One elementary correction factor (1 - q^{2m} w)^{±lambda} of the
/// elliptic theta products, with w one of xi_j/xi_k, xi_k/xi_j,
/// z_j/xi_k, xi_k/z_j.
struct CorrectionFactor {
    /// q²-cost per unit power of the factor.
    m: usize,
    /// true for the numerator factors (exponent +lambda).
    numerator: bool,
    /// shift of the f label per unit power (xi exponents).
    xi_shift: Vec<i64>,
    /// shift of the z exponents per unit power.
    z_shift: Vec<i64>,
}

fn correction_factors(n: usize, k_order: usize) -> Vec<CorrectionFactor> {
    let mut out = Vec::new();
    for m in 1..=k_order {
        for j in 0..n {
            for k in (j + 1)..n {
                // numerator pair j<k: (1 - q^{2m} xi_j/xi_k)^lambda
                let mut xi = vec![0i64; n];
                xi[j] += 1;
                xi[k] -= 1;
                out.push(CorrectionFactor {
                    m,
                    numerator: true,
                    xi_shift: xi,
                    z_shift: vec![0; n],
                });
                // and (1 - q^{2m} xi_k/xi_j)^lambda
                let mut xi = vec![0i64; n];
                xi[k] += 1;
                xi[j] -= 1;
                out.push(CorrectionFactor {
                    m,
                    numerator: true,
                    xi_shift: xi,
                    z_shift: vec![0; n],
                });
            }
        }
        for j in 0..n {
            for k in 0..n {
                // denominator factor (1 - q^{2m} z_j/xi_k)^{-lambda}
                let mut xi = vec![0i64; n];
                xi[k] -= 1;
                let mut zs = vec![0i64; n];
                zs[j] += 1;
                out.push(CorrectionFactor {
                    m,
                    numerator: false,
                    xi_shift: xi,
                    z_shift: zs,
                });
                // and (1 - q^{2m} xi_k/z_j)^{-lambda}
                let mut xi = vec![0i64; n];
                xi[k] += 1;
                let mut zs = vec![0i64; n];
                zs[j] -= 1;
                out.push(CorrectionFactor {
                    m,
                    numerator: false,
                    xi_shift: xi,
                    z_shift: zs,
                });
            }
        }
    }
    out
}

/// f_m as a truncated q²-series over (possibly Laurent) monomials.
///
/// Factor-by-factor binomial expansion in the nested-contour region; at
/// q²-order d <= K only product factors with m <= d contribute, so the
/// enumeration reduces to finitely many shifted trigonometric blocks.
pub fn f_elliptic(
    label: &IntVector,
    params: &ModelParams,
    ell: &EllipticParams,
) -> Result<SymPoly<QSeries>> {
    let mut ctx = FContext::new(params.clone());
    f_elliptic_cached(label, &mut ctx, ell)
}

pub fn f_elliptic_cached(
    label: &IntVector,
    ctx: &mut FContext,
    ell: &EllipticParams,
) -> Result<SymPoly<QSeries>> {
    let n = ctx.params.n_vars();
    if label.len() != n {
        return Err(Error::LengthMismatch(label.len(), n));
    }
    let k_order = ell.trunc_order();
    let lambda = ctx.params.lambda().clone();
    let factors = correction_factors(n, k_order);

    let mut raw: RawPoly<QSeries> = RawPoly::zero(n);

    // walk assignments of powers t_f with sum m_f t_f <= K
    struct Assignment {
        budget_used: usize,
        coeff: Rational,
        xi: Vec<i64>,
        z: Vec<i64>,
    }
    let mut stack = vec![(0usize, Assignment {
        budget_used: 0,
        coeff: Rational::one(),
        xi: vec![0; n],
        z: vec![0; n],
    })];
    while let Some((fi, asg)) = stack.pop() {
        if fi == factors.len() {
            // shifted trigonometric block times the z-monomial
            let shifted = IntVector::new(
                label
                    .0
                    .iter()
                    .zip(&asg.xi)
                    .map(|(a, b)| a + b)
                    .collect(),
            );
            let block = ctx.f_trig_raw(&shifted);
            if block.is_zero() {
                continue;
            }
            let qfac = QSeries::q2_pow(asg.budget_used, k_order).scale(&asg.coeff);
            let shift = IntVector::new(asg.z.clone());
            for (e, c) in &block.terms {
                raw.add_term(e.add(&shift), qfac.scale(c));
            }
            continue;
        }
        let f = &factors[fi];
        let mut t = 0usize;
        loop {
            let used = asg.budget_used + f.m * t;
            if used > k_order {
                break;
            }
            let mut coeff = asg.coeff.clone();
            if t > 0 {
                let base = if f.numerator {
                    gen_binomial(&lambda, t)
                } else {
                    gen_binomial(&(-lambda.clone()), t)
                };
                coeff *= base;
                if t % 2 != 0 {
                    coeff = -coeff;
                }
            }
            if !coeff.is_zero() {
                let mut xi = asg.xi.clone();
                let mut z = asg.z.clone();
                for i in 0..n {
                    xi[i] += f.xi_shift[i] * t as i64;
                    z[i] += f.z_shift[i] * t as i64;
                }
                stack.push((
                    fi + 1,
                    Assignment {
                        budget_used: used,
                        coeff,
                        xi,
                        z,
                    },
                ));
            }
            t += 1;
        }
    }

    SymPoly::from_raw(&raw)
}

/// Numeric contour quadrature of the defining integral.
///
/// Trapezoidal rule on the nested circles xi_j = e^{eps j} e^{i y_j};
/// each binomial factor keeps its principal branch, admissible because
/// every expansion ratio has modulus below one on the contours.
pub fn f_numeric(
    label: &IntVector,
    params: &ModelParams,
    ell: Option<&EllipticParams>,
    z: &[Complex64],
    eps: f64,
    quad_points: usize,
) -> Result<Complex64> {
    let n = params.n_vars();
    if label.len() != n || z.len() != n {
        return Err(Error::LengthMismatch(label.len(), n));
    }
    let (q, m_cut) = match ell.and_then(|e| e.q()) {
        Some(q) => {
            let beta = -2.0 * q.ln();
            let limit = beta / n as f64;
            if !(eps > 0.0 && eps < limit) {
                return Err(Error::ContourViolation(limit, eps));
            }
            // factor m contributes ~ (q^2 e^{N eps})^m; stop below 1e-16
            let rate = 2.0 * q.ln() + n as f64 * eps;
            let m_cut = (-16.0 * std::f64::consts::LN_10 / rate).ceil() as usize + 1;
            (q, m_cut)
        }
        None => {
            if eps <= 0.0 {
                return Err(Error::ContourViolation(f64::INFINITY, eps));
            }
            (0.0, 0)
        }
    };
    let lambda = params.lambda_f64();

    // log Theta(x) with the elliptic product truncated at m_cut
    let log_theta = |x: Complex64| -> Complex64 {
        let mut acc = (Complex64::new(1.0, 0.0) - x).ln();
        let mut q2m = q * q;
        for _ in 0..m_cut {
            acc += (Complex64::new(1.0, 0.0) - q2m * x).ln();
            acc += (Complex64::new(1.0, 0.0) - q2m / x).ln();
            q2m *= q * q;
        }
        acc
    };

    let radii: Vec<f64> = (1..=n).map(|j| (eps * j as f64).exp()).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut idx = vec![0usize; n];
    let step = 2.0 * std::f64::consts::PI / quad_points as f64;
    loop {
        let xi: Vec<Complex64> = idx
            .iter()
            .zip(&radii)
            .map(|(&i, &r)| Complex64::from_polar(r, -std::f64::consts::PI + step * i as f64))
            .collect();
        // integrand: xi^label * prod_{j<k} Theta(xi_j/xi_k)^lambda
        //            / prod_{j,k} Theta(z_j/xi_k)^lambda
        let mut log_val = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for k in (j + 1)..n {
                log_val += lambda * log_theta(xi[j] / xi[k]);
            }
        }
        for zj in z {
            for xik in &xi {
                log_val -= lambda * log_theta(zj / xik);
            }
        }
        let mut val = log_val.exp();
        for (xij, &lj) in xi.iter().zip(&label.0) {
            val *= xij.powi(lj as i32);
        }
        acc += val;

        // advance the multi-index
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < quad_points {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == n {
                return Ok(acc / (quad_points as f64).powi(n as i32));
            }
        }
    }
}

/// Quadrature with a doubling check; errs when refinement moves the
/// result by more than `tol` relative.
pub fn f_numeric_checked(
    label: &IntVector,
    params: &ModelParams,
    ell: Option<&EllipticParams>,
    z: &[Complex64],
    eps: f64,
    quad_points: usize,
    tol: f64,
) -> Result<Complex64> {
    let coarse = f_numeric(label, params, ell, z, eps, quad_points)?;
    let fine = f_numeric(label, params, ell, z, eps, quad_points * 2)?;
    let diff = (fine - coarse).norm();
    if diff > tol * fine.norm().max(1.0) {
        return Err(Error::NonConvergence(diff));
    }
    Ok(fine)
}
