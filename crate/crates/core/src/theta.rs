//! Numerical evaluation of the weight function θ, its logarithmic
//! derivatives, and the pair potential V.
//!
//! Trigonometric mode: θ(r) = sin(r/2), V(r) = 1/(4 sin²(r/2)).
//! Elliptic mode: θ(r) = sin(r/2) ∏_{m≥1} (1 - 2 q^{2m} cos r + q^{4m}),
//! V(r) = Σ_{m∈Z} 1/(4 sin²((r + i m β)/2)) with β = -2 ln q. Products
//! and lattice sums are truncated once terms fall below the target
//! precision; the truncation level and its tail estimate are recorded.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::s_numeric;

const TAIL_TARGET: f64 = 1e-17;

#[derive(Clone, Debug)]
pub struct ThetaEval {
    /// Nome; zero selects the trigonometric closed forms.
    q: f64,
    /// Elliptic product/lattice truncation for real arguments.
    m_cut: usize,
    /// Estimated magnitude of the first dropped term at Im r = 0.
    pub tail_bound: f64,
}

impl ThetaEval {
    pub fn trig() -> Self {
        ThetaEval {
            q: 0.0,
            m_cut: 0,
            tail_bound: 0.0,
        }
    }

    pub fn elliptic(q: f64, m_cut: Option<usize>) -> Result<Self> {
        if !(0.0 < q && q < 1.0) {
            return Err(Error::InvalidInput(format!("nome must lie in (0,1), got {q}")));
        }
        let beta = -2.0 * q.ln();
        let auto = (-TAIL_TARGET.ln() / beta).ceil() as usize + 2;
        let m_cut = m_cut.unwrap_or(auto);
        ThetaEval::check_cut(q, m_cut)
    }

    fn check_cut(q: f64, m_cut: usize) -> Result<Self> {
        let tail_bound = q.powi(2 * (m_cut as i32 + 1));
        Ok(ThetaEval {
            q,
            m_cut,
            tail_bound,
        })
    }

    pub fn is_elliptic(&self) -> bool {
        self.q > 0.0
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn m_cut(&self) -> usize {
        self.m_cut
    }

    pub fn beta(&self) -> f64 {
        if self.q > 0.0 {
            -2.0 * self.q.ln()
        } else {
            f64::INFINITY
        }
    }

    /// Effective truncation for a complex argument: terms decay like
    /// (q² e^{|Im r|})^m, so the cut grows as Im r approaches ±β.
    fn cut_for(&self, r: Complex64) -> Result<usize> {
        if self.q == 0.0 {
            return Ok(0);
        }
        let beta = self.beta();
        let margin = beta - r.im.abs();
        if margin <= 0.1 * beta {
            return Err(Error::InvalidInput(format!(
                "argument too deep in the strip: |Im r| = {} vs β = {beta}",
                r.im.abs()
            )));
        }
        let needed = (-TAIL_TARGET.ln() / margin).ceil() as usize + 2;
        Ok(needed.max(self.m_cut))
    }

    pub fn theta(&self, r: Complex64) -> Result<Complex64> {
        let mut val = (r / 2.0).sin();
        if self.q > 0.0 {
            let cut = self.cut_for(r)?;
            let cosr = r.cos();
            let q2 = self.q * self.q;
            let mut q2m = q2;
            for _ in 0..cut {
                val *= 1.0 - 2.0 * q2m * cosr + q2m * q2m;
                q2m *= q2;
            }
        }
        Ok(val)
    }

    /// θ'(r)/θ(r); errs on (near-)coincident arguments.
    pub fn log_deriv(&self, r: Complex64) -> Result<Complex64> {
        let s = (r / 2.0).sin();
        if s.norm() < 1e-12 {
            return Err(Error::CoincidentPoints);
        }
        let mut val = 0.5 * (r / 2.0).cos() / s;
        if self.q > 0.0 {
            let cut = self.cut_for(r)?;
            let cosr = r.cos();
            let sinr = r.sin();
            let q2 = self.q * self.q;
            let mut q2m = q2;
            for _ in 0..cut {
                let den = 1.0 - 2.0 * q2m * cosr + q2m * q2m;
                val += 2.0 * q2m * sinr / den;
                q2m *= q2;
            }
        }
        Ok(val)
    }

    /// (θ'/θ)'(r) = θ''/θ - (θ'/θ)².
    pub fn log_deriv2(&self, r: Complex64) -> Result<Complex64> {
        let s = (r / 2.0).sin();
        if s.norm() < 1e-12 {
            return Err(Error::CoincidentPoints);
        }
        let mut val = -0.25 / (s * s);
        if self.q > 0.0 {
            let cut = self.cut_for(r)?;
            let cosr = r.cos();
            let sinr = r.sin();
            let q2 = self.q * self.q;
            let mut q2m = q2;
            for _ in 0..cut {
                let den = 1.0 - 2.0 * q2m * cosr + q2m * q2m;
                val += 2.0 * q2m * (cosr * den - 2.0 * q2m * sinr * sinr) / (den * den);
                q2m *= q2;
            }
        }
        Ok(val)
    }

    /// The pair potential by its defining sum.
    pub fn potential(&self, r: Complex64) -> Result<Complex64> {
        let term = |w: Complex64| -> Result<Complex64> {
            let s = (w / 2.0).sin();
            if s.norm() < 1e-12 {
                return Err(Error::SingularPoint);
            }
            Ok(0.25 / (s * s))
        };
        let mut val = term(r)?;
        if self.q > 0.0 {
            let beta = self.beta();
            let cut = self.cut_for(r)? as i64;
            for m in 1..=cut {
                val += term(r + Complex64::new(0.0, m as f64 * beta))?;
                val += term(r - Complex64::new(0.0, m as f64 * beta))?;
            }
        }
        Ok(val)
    }

    /// Fourier form of the potential in the strip 0 < Im r < β:
    /// V(r) = -Σ_{ν≥1} [ S_ν e^{iνr} + S_{-ν} e^{-iνr} ].
    /// Trigonometric S_{-ν} vanishes, recovering the one-sided sum.
    pub fn potential_fourier(&self, r: Complex64) -> Result<Complex64> {
        if r.im <= 0.0 {
            return Err(Error::InvalidInput(
                "Fourier form needs Im r > 0".into(),
            ));
        }
        if self.q > 0.0 && r.im >= self.beta() {
            return Err(Error::InvalidInput(
                "Fourier form needs Im r < beta".into(),
            ));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for nu in 1..10_000i64 {
            let up = Complex64::new(0.0, 1.0) * (nu as f64) * r;
            let mut term = s_plus(self.q, nu) * up.exp();
            if self.q > 0.0 {
                term += s_minus(self.q, nu) * (-up).exp();
            }
            acc -= term;
            if term.norm() < 1e-18 && nu > 4 {
                break;
            }
        }
        Ok(acc)
    }
}

fn s_plus(q: f64, nu: i64) -> f64 {
    if q == 0.0 {
        nu as f64
    } else {
        s_numeric(nu, q)
    }
}

fn s_minus(q: f64, nu: i64) -> f64 {
    if q == 0.0 {
        0.0
    } else {
        s_numeric(-nu, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trig_values() {
        let t = ThetaEval::trig();
        // V(π) = 1/4
        let v = t.potential(c(std::f64::consts::PI, 0.0)).unwrap();
        assert!((v - c(0.25, 0.0)).norm() < 1e-14);
        // θ'/θ = cot(r/2)/2
        let r = c(1.3, 0.0);
        let u = t.log_deriv(r).unwrap();
        assert!((u.re - 0.5 / (0.65f64).tan()).abs() < 1e-14);
        // (θ'/θ)' = -V
        let du = t.log_deriv2(r).unwrap();
        let v = t.potential(r).unwrap();
        assert!((du + v).norm() < 1e-13);
    }

    #[test]
    fn elliptic_reduces_to_trig_at_small_q() {
        let t0 = ThetaEval::trig();
        let te = ThetaEval::elliptic(1e-9, None).unwrap();
        for r in [c(0.9, 0.0), c(-2.1, 0.3), c(0.4, -0.2)] {
            assert!((t0.theta(r).unwrap() - te.theta(r).unwrap()).norm() < 1e-12);
            assert!((t0.log_deriv(r).unwrap() - te.log_deriv(r).unwrap()).norm() < 1e-12);
            assert!((t0.potential(r).unwrap() - te.potential(r).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn log_derivs_match_finite_differences() {
        let te = ThetaEval::elliptic(0.25, None).unwrap();
        let r = c(1.1, 0.2);
        let h = 1e-6;
        let fd = (te.theta(r + c(h, 0.0)).unwrap().ln() - te.theta(r - c(h, 0.0)).unwrap().ln())
            / (2.0 * h);
        assert!((fd - te.log_deriv(r).unwrap()).norm() < 1e-8);
        let fd2 = (te.log_deriv(r + c(h, 0.0)).unwrap() - te.log_deriv(r - c(h, 0.0)).unwrap())
            / (2.0 * h);
        assert!((fd2 - te.log_deriv2(r).unwrap()).norm() < 1e-7);
    }

    #[test]
    fn fourier_matches_lattice_sum() {
        // trig: classical one-sided identity in the upper half plane
        let t0 = ThetaEval::trig();
        let r = c(0.7, 0.4);
        let direct = t0.potential(r).unwrap();
        let fourier = t0.potential_fourier(r).unwrap();
        assert!((direct - fourier).norm() < 1e-12);
        // elliptic: two-sided sum against the lattice
        let te = ThetaEval::elliptic(0.2, None).unwrap();
        let beta = te.beta();
        for (re, frac) in [(0.3, 0.2), (-1.2, 0.5), (2.0, 0.8)] {
            let r = c(re, frac * beta);
            let direct = te.potential(r).unwrap();
            let fourier = te.potential_fourier(r).unwrap();
            assert!(
                (direct - fourier).norm() < 1e-10,
                "r={r}: {direct} vs {fourier}"
            );
        }
    }

    #[test]
    fn singular_points_rejected() {
        let t = ThetaEval::trig();
        assert!(matches!(
            t.potential(c(0.0, 0.0)),
            Err(Error::SingularPoint)
        ));
        assert!(matches!(
            t.log_deriv(c(2.0 * std::f64::consts::PI, 0.0)),
            Err(Error::CoincidentPoints)
        ));
    }
}
