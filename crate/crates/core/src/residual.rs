//! Pointwise analytic verification of the eigen-equation and the
//! functional identities.
//!
//! The Hamiltonian is applied through exact differentiation of the
//! polynomial factor plus closed-form logarithmic derivatives of the
//! ground-state weight, so no basis truncation enters the verifier.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::rational::{rational_to_f64, Rational};
use crate::rawpoly::RawPoly;
use crate::sympoly::SymPoly;
use crate::theta::ThetaEval;

/// Per-coordinate first and second log-derivatives of the ground state
/// Ψ₀ = Π_{j<k} θ(x_j - x_k)^λ.
pub fn groundstate_log_derivatives(
    x: &[Complex64],
    lambda: f64,
    theta: &ThetaEval,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let n = x.len();
    let mut first = vec![Complex64::new(0.0, 0.0); n];
    let mut second = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for k in 0..n {
            if k == j {
                continue;
            }
            let r = x[j] - x[k];
            first[j] += lambda * theta.log_deriv(r)?;
            second[j] += lambda * theta.log_deriv2(r)?;
        }
    }
    Ok((first, second))
}

/// Polynomial data prepared for pointwise application of H.
struct PolyEval {
    raw: Vec<(Vec<i64>, Complex64)>,
}

impl PolyEval {
    fn from_raw<C: crate::coeff::Scalar>(
        raw: &RawPoly<C>,
        to_c: impl Fn(&C) -> Complex64,
    ) -> Self {
        PolyEval {
            raw: raw
                .terms
                .iter()
                .map(|(e, c)| (e.0.clone(), to_c(c)))
                .collect(),
        }
    }

    /// Returns (P, A_j = z_j ∂_j P, B_j = (z_j ∂_j)² P) at the point.
    fn derivatives(&self, z: &[Complex64]) -> (Complex64, Vec<Complex64>, Vec<Complex64>) {
        let n = z.len();
        let mut p = Complex64::new(0.0, 0.0);
        let mut a = vec![Complex64::new(0.0, 0.0); n];
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        for (exp, c) in &self.raw {
            let mut m = *c;
            for (zi, &ei) in z.iter().zip(exp.iter()) {
                m *= zi.powi(ei as i32);
            }
            p += m;
            for (j, &ej) in exp.iter().enumerate() {
                a[j] += (ej as f64) * m;
                b[j] += ((ej * ej) as f64) * m;
            }
        }
        (p, a, b)
    }
}

/// Max eigen-equation residual |(HΨ - EΨ)/Ψ| over the sample points.
///
/// Works for both the exact trigonometric assembly (rational data,
/// float evaluation noise only) and the elliptic assembly evaluated at
/// a numeric nome (residual of the truncation order).
pub fn residual_eigen_trig(
    poly: &SymPoly<Rational>,
    eigenvalue: &Rational,
    p_momentum: i64,
    params: &ModelParams,
    samples: &[Vec<f64>],
) -> Result<f64> {
    let theta = ThetaEval::trig();
    let pe = PolyEval::from_raw(&poly.to_raw(), |c| Complex64::new(rational_to_f64(c), 0.0));
    residual_eigen_impl(
        &pe,
        rational_to_f64(eigenvalue),
        p_momentum,
        params,
        &theta,
        samples,
    )
}

pub fn residual_eigen_elliptic(
    poly: &SymPoly<crate::qseries::QSeries>,
    eigenvalue: f64,
    p_momentum: i64,
    params: &ModelParams,
    q: f64,
    samples: &[Vec<f64>],
) -> Result<f64> {
    let theta = ThetaEval::elliptic(q, None)?;
    let pe = PolyEval::from_raw(&poly.to_raw(), |c| Complex64::new(c.eval_f64(q), 0.0));
    residual_eigen_impl(&pe, eigenvalue, p_momentum, params, &theta, samples)
}

fn residual_eigen_impl(
    pe: &PolyEval,
    eigenvalue: f64,
    p_momentum: i64,
    params: &ModelParams,
    theta: &ThetaEval,
    samples: &[Vec<f64>],
) -> Result<f64> {
    let n = params.n_vars();
    let lambda = params.lambda_f64();
    let gamma = params.gamma_f64();
    let mut worst: f64 = 0.0;
    for x in samples {
        if x.len() != n {
            return Err(Error::LengthMismatch(x.len(), n));
        }
        let xc: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let z: Vec<Complex64> = x.iter().map(|&v| Complex64::new(0.0, v).exp()).collect();
        let (p, a, b) = pe.derivatives(&z);
        if p.norm() < 1e-9 {
            continue; // node of the polynomial factor
        }
        let (l1, l2) = groundstate_log_derivatives(&xc, lambda, theta)?;
        // momentum factor e^{ip Σ x}: adds ip to each ∂_j log Ψ
        let ip = Complex64::new(0.0, p_momentum as f64);
        let mut h_over_psi = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let dlogp = Complex64::new(0.0, 1.0) * a[j] / p + ip;
            let d2p_over_p = -b[j] / p - (p_momentum as f64) * (p_momentum as f64)
                + 2.0 * ip * (Complex64::new(0.0, 1.0) * a[j] / p);
            h_over_psi -= d2p_over_p + 2.0 * dlogp * l1[j] + l1[j] * l1[j] + l2[j];
        }
        for j in 0..n {
            for k in (j + 1)..n {
                h_over_psi += gamma * theta.potential(xc[j] - xc[k])?;
            }
        }
        let res = (h_over_psi - eigenvalue).norm();
        worst = worst.max(res);
    }
    Ok(worst)
}

/// Residual of H(x)F = H(y)F for the two-family kernel
/// F = Π θ(x_j-x_k)^λ θ(y_k-y_j)^λ / Π θ(x_j-y_k)^λ.
///
/// This is the equal-size case of the F_{N,M} identity (the additive
/// constant vanishes at N = M).
pub fn check_identity_f(
    x: &[Complex64],
    y: &[Complex64],
    params: &ModelParams,
    theta: &ThetaEval,
) -> Result<f64> {
    let n = params.n_vars();
    if x.len() != n || y.len() != n {
        return Err(Error::LengthMismatch(x.len(), n));
    }
    let lambda = params.lambda_f64();
    let gamma = params.gamma_f64();
    let hx = fnm_side(x, y, lambda, gamma, lambda, theta, true)?;
    let hy = fnm_side(y, x, lambda, gamma, lambda, theta, false)?;
    Ok((hx - hy).norm())
}

/// Residual of [H_{λ,N}(x) - H_{λ,M}(y) - c_{N,M}] F_{N,M} = 0 with
/// c_{N,M} = λ²(N-M)[(N-M)²-1]/12 (trigonometric θ).
pub fn check_identity_fnm(
    x: &[Complex64],
    y: &[Complex64],
    lambda: f64,
    theta: &ThetaEval,
) -> Result<f64> {
    let gamma = 2.0 * lambda * (lambda - 1.0);
    let hx = fnm_side(x, y, lambda, gamma, lambda, theta, true)?;
    let hy = fnm_side(y, x, lambda, gamma, lambda, theta, false)?;
    let nm = x.len() as f64 - y.len() as f64;
    let c = lambda * lambda * nm * (nm * nm - 1.0) / 12.0;
    Ok((hx - hy - c).norm())
}

/// Residual of the dual identity
/// [H_{λ,N}(x) + λ H_{1/λ,M}(y) - c̃_{N,M}] F̃_{N,M} = 0 with
/// c̃ = [λ²N(N²-1) + M(M²-1)/λ + 3MN(λN+M)]/12.
pub fn check_identity_fnm_dual(
    x: &[Complex64],
    y: &[Complex64],
    lambda: f64,
    theta: &ThetaEval,
) -> Result<f64> {
    let n = x.len() as f64;
    let m = y.len() as f64;
    let gamma_x = 2.0 * lambda * (lambda - 1.0);
    let inv = 1.0 / lambda;
    let gamma_y = 2.0 * inv * (inv - 1.0);
    // cross factors θ(x_j - y_k)^{+1}: slope -(-1) = +1 against the own
    // log-derivative bookkeeping below
    let hx = fnm_side(x, y, lambda, gamma_x, -1.0, theta, true)?;
    let hy = fnm_side(y, x, inv, gamma_y, -1.0, theta, false)?;
    let c = (lambda * lambda * n * (n * n - 1.0)
        + m * (m * m - 1.0) / lambda
        + 3.0 * m * n * (lambda * n + m))
        / 12.0;
    Ok((hx + lambda * hy - c).norm())
}

/// H(own)F/F for a kernel with own-family exponent `own_lambda` and
/// cross-factor exponent `-cross_exp` (denominator convention).
fn fnm_side(
    own: &[Complex64],
    other: &[Complex64],
    own_lambda: f64,
    own_gamma: f64,
    cross_exp: f64,
    theta: &ThetaEval,
    own_is_x: bool,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..own.len() {
        let mut l1 = Complex64::new(0.0, 0.0);
        let mut l2 = Complex64::new(0.0, 0.0);
        for k in 0..own.len() {
            if k == j {
                continue;
            }
            let r = own[j] - own[k];
            l1 += own_lambda * theta.log_deriv(r)?;
            l2 += own_lambda * theta.log_deriv2(r)?;
        }
        for ok in other {
            // cross factor is θ(x - y)^{-cross_exp}; both ∂_x and ∂_y pick
            // up a log-derivative, with the chain-rule sign for y
            let r = if own_is_x {
                own[j] - *ok
            } else {
                *ok - own[j]
            };
            let chain = if own_is_x { 1.0 } else { -1.0 };
            l1 -= cross_exp * chain * theta.log_deriv(r)?;
            l2 -= cross_exp * theta.log_deriv2(r)?;
        }
        acc -= l1 * l1 + l2;
    }
    for j in 0..own.len() {
        for k in (j + 1)..own.len() {
            acc += own_gamma * theta.potential(own[j] - own[k])?;
        }
    }
    Ok(acc)
}

/// Random angles with pairwise separation (mod 2π).
pub fn sample_angles<R: Rng>(rng: &mut R, n: usize, min_sep: f64) -> Vec<f64> {
    loop {
        let pts: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        let ok = (0..n).all(|j| {
            ((j + 1)..n).all(|k| {
                let d = (pts[j] - pts[k]).rem_euclid(2.0 * std::f64::consts::PI);
                d.min(2.0 * std::f64::consts::PI - d) > min_sep
            })
        });
        if ok {
            return pts;
        }
    }
}

/// Random complex points with bounded imaginary part and separation.
pub fn sample_complex<R: Rng>(
    rng: &mut R,
    n: usize,
    im_bound: f64,
    min_sep: f64,
) -> Vec<Complex64> {
    loop {
        let pts: Vec<Complex64> = (0..n)
            .map(|_| {
                Complex64::new(
                    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                    rng.gen_range(-im_bound..im_bound),
                )
            })
            .collect();
        let ok = (0..n).all(|j| ((j + 1)..n).all(|k| (pts[j] - pts[k]).norm() > min_sep));
        if ok {
            return pts;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::{assemble_p_elliptic, assemble_p_trig};
    use crate::intvec::{IntVector, Partition};
    use crate::model::EllipticParams;
    use crate::rational::{rat, rat_int};
    use rand::SeedableRng;

    fn iv(v: &[i64]) -> IntVector {
        IntVector::new(v.to_vec())
    }

    #[test]
    fn groundstate_derivatives_antisymmetric_n2() {
        let theta = ThetaEval::trig();
        let x = [Complex64::new(0.8, 0.0), Complex64::new(-1.1, 0.0)];
        let (l1, _) = groundstate_log_derivatives(&x, 1.7, &theta).unwrap();
        assert!((l1[0] + l1[1]).norm() < 1e-13);
        // ∂₁ log Ψ₀ = (λ/2) cot((x₁-x₂)/2)
        let want = 1.7 * 0.5 / ((0.8f64 + 1.1) / 2.0).tan();
        assert!((l1[0].re - want).abs() < 1e-13);
        // elliptic at tiny q matches trig
        let te = ThetaEval::elliptic(1e-8, None).unwrap();
        let (l1e, l2e) = groundstate_log_derivatives(&x, 1.7, &te).unwrap();
        let (l1t, l2t) = groundstate_log_derivatives(&x, 1.7, &theta).unwrap();
        assert!((l1e[0] - l1t[0]).norm() < 1e-12);
        assert!((l2e[1] - l2t[1]).norm() < 1e-12);
    }

    #[test]
    fn trig_residuals_at_float_precision() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (nv, parts, lam) in [
            (2usize, vec![0i64, 0], rat(3, 2)),
            (2, vec![2, 0], rat_int(2)),
            (3, vec![2, 1, 0], rat(1, 2)),
        ] {
            let params = ModelParams::new(nv, lam).unwrap();
            let a = assemble_p_trig(&iv(&parts), &params, 0).unwrap();
            let samples: Vec<Vec<f64>> =
                (0..12).map(|_| sample_angles(&mut rng, nv, 0.25)).collect();
            let r = residual_eigen_trig(
                &a.eigenfunction.poly,
                &a.eigenvalue,
                0,
                &params,
                &samples,
            )
            .unwrap();
            assert!(r < 1e-10, "{parts:?}: residual {r:e}");
        }
    }

    #[test]
    fn momentum_residual() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let params = ModelParams::new(2, rat_int(2)).unwrap();
        let a = assemble_p_trig(&iv(&[2, 1]), &params, 2).unwrap();
        let samples: Vec<Vec<f64>> = (0..8).map(|_| sample_angles(&mut rng, 2, 0.3)).collect();
        let r =
            residual_eigen_trig(&a.eigenfunction.poly, &a.eigenvalue, 2, &params, &samples)
                .unwrap();
        assert!(r < 1e-10, "residual {r:e}");
    }

    #[test]
    fn elliptic_residual_scales_with_truncation() {
        // the residual behaves as C(λ,K) q^{2(K+1)}: the constant is
        // q-independent and grows with the coupling, so assert the
        // absolute safety-factor bound at small coupling and the
        // truncation-order slope at strong coupling
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let samples: Vec<Vec<f64>> = (0..10).map(|_| sample_angles(&mut rng, 2, 0.3)).collect();

        let small = ModelParams::new(2, rat(1, 2)).unwrap();
        let n = Partition::from_parts(&[2, 1]).unwrap();
        for k in [0usize, 1, 2] {
            let q = 0.1;
            let ell = EllipticParams::numeric(k, q).unwrap();
            let a = assemble_p_elliptic(&n, &small, &ell, 0).unwrap();
            let r = residual_eigen_elliptic(
                &a.eigenfunction.poly,
                a.eigenvalue.eval_f64(q),
                0,
                &small,
                q,
                &samples,
            )
            .unwrap();
            assert!(r <= 100.0 * q.powi(2 * (k as i32 + 1)), "K={k}: residual {r:e}");
        }

        let strong = ModelParams::new(2, rat_int(2)).unwrap();
        let n = Partition::from_parts(&[1, 0]).unwrap();
        let k = 2usize;
        let mut residuals = Vec::new();
        for q in [0.1f64, 0.05] {
            let ell = EllipticParams::numeric(k, q).unwrap();
            let a = assemble_p_elliptic(&n, &strong, &ell, 0).unwrap();
            residuals.push(
                residual_eigen_elliptic(
                    &a.eigenfunction.poly,
                    a.eigenvalue.eval_f64(q),
                    0,
                    &strong,
                    q,
                    &samples,
                )
                .unwrap(),
            );
        }
        let ratio: f64 = residuals[0] / residuals[1];
        let slope = ratio.log2() / (2.0 * (k as f64 + 1.0));
        assert!((slope - 1.0).abs() < 0.2, "slope {slope} from ratio {ratio}");
    }

    #[test]
    fn identity_f_trig_and_swap() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let params = ModelParams::new(2, rat(3, 2)).unwrap();
        let theta = ThetaEval::trig();
        for _ in 0..25 {
            let x = sample_complex(&mut rng, 2, 0.8, 0.2);
            let y = sample_complex(&mut rng, 2, 0.8, 0.2);
            let r = check_identity_f(&x, &y, &params, &theta).unwrap();
            assert!(r < 1e-10, "residual {r:e}");
            let r_swapped = check_identity_f(&y, &x, &params, &theta).unwrap();
            assert!((r - r_swapped).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_f_elliptic() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        let params = ModelParams::new(2, rat_int(2)).unwrap();
        let theta = ThetaEval::elliptic(0.2, None).unwrap();
        let beta = theta.beta();
        for _ in 0..10 {
            let x = sample_complex(&mut rng, 2, 0.2 * beta, 0.2);
            let y = sample_complex(&mut rng, 2, 0.2 * beta, 0.2);
            let r = check_identity_f(&x, &y, &params, &theta).unwrap();
            assert!(r < 1e-8, "residual {r:e}");
        }
    }

    #[test]
    fn identity_fnm_cases() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let theta = ThetaEval::trig();
        for (n, m) in [(2usize, 0usize), (2, 1), (3, 1)] {
            for _ in 0..10 {
                let x = sample_complex(&mut rng, n, 0.6, 0.25);
                let y = sample_complex(&mut rng, m, 0.6, 0.25);
                let r = check_identity_fnm(&x, &y, 2.0, &theta).unwrap();
                assert!(r < 1e-9, "(N,M)=({n},{m}) residual {r:e}");
            }
        }
    }

    #[test]
    fn identity_fnm_dual() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(24);
        let theta = ThetaEval::trig();
        for (n, m, lam) in [(2usize, 1usize, 2.0f64), (1, 1, 1.5), (3, 2, 0.5)] {
            for _ in 0..10 {
                let x = sample_complex(&mut rng, n, 0.6, 0.25);
                let y = sample_complex(&mut rng, m, 0.6, 0.25);
                let r = check_identity_fnm_dual(&x, &y, lam, &theta).unwrap();
                assert!(r < 1e-9, "(N,M)=({n},{m}) λ={lam} residual {r:e}");
            }
        }
    }

    #[test]
    fn fnm_reduces_to_groundstate_at_m_zero() {
        // M=0: the identity is H Ψ₀ = E₀ Ψ₀ with c_{N,0} = λ²N(N²-1)/12
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(25);
        let theta = ThetaEval::trig();
        for nv in [2usize, 3] {
            let x = sample_complex(&mut rng, nv, 0.4, 0.3);
            let r = check_identity_fnm(&x, &[], 1.5, &theta).unwrap();
            assert!(r < 1e-10, "N={nv} residual {r:e}");
        }
    }
}
