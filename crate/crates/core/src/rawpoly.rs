//! Dense-exponent ("raw") multivariate Laurent polynomials.
//!
//! Internal representation used wherever the symmetric structure is not
//! yet available: applying differential operators monomial by monomial,
//! accumulating contour-expansion terms, and checking that Laurent parts
//! cancel. Keys are full exponent vectors, not orbit representatives.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::intvec::IntVector;

#[derive(Clone, PartialEq, Debug)]
pub struct RawPoly<C: Scalar> {
    pub n_vars: usize,
    pub terms: BTreeMap<IntVector, C>,
}

impl<C: Scalar> RawPoly<C> {
    pub fn zero(n_vars: usize) -> Self {
        RawPoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: IntVector, coeff: C) {
        debug_assert_eq!(exp.len(), self.n_vars);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &RawPoly<C>) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = RawPoly::zero(self.n_vars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.mul(c));
        }
        out
    }

    /// Multiplies by the single monomial z^shift.
    pub fn mul_monomial(&self, shift: &IntVector, c: &C) -> Self {
        let mut out = RawPoly::zero(self.n_vars);
        for (e, a) in &self.terms {
            out.add_term(e.add(shift), a.mul(c));
        }
        out
    }

    /// z_j^2 d/dz_j: z^a -> a_j z^{a + e_j}.
    pub fn z2_d(&self, j: usize) -> Self {
        let mut out = RawPoly::zero(self.n_vars);
        for (e, a) in &self.terms {
            let aj = e.0[j];
            if aj == 0 {
                continue;
            }
            let mut exp = e.clone();
            exp.0[j] += 1;
            let factor = a.from_rational(&crate::rational::rat_int(aj));
            out.add_term(exp, a.mul(&factor));
        }
        out
    }

    /// z_j^2 d^2/dz_j^2 acting diagonally: z^a -> a_j (a_j - 1) z^a.
    pub fn z2_d2_diag(&self) -> Vec<(IntVector, Vec<i64>)> {
        self.terms
            .keys()
            .map(|e| (e.clone(), e.0.clone()))
            .collect()
    }

    /// Exact division by (z_j - z_k); errs if a remainder survives.
    ///
    /// Works on Laurent support too; termination comes from the strictly
    /// decreasing z_j-exponent of the reduced leading term.
    pub fn div_exact_zj_minus_zk(&self, j: usize, k: usize) -> Result<Self> {
        let mut rem = self.clone();
        let mut quot = RawPoly::zero(self.n_vars);
        loop {
            // leading term by z_j exponent (ties broken by map order)
            let lead = rem
                .terms
                .iter()
                .max_by_key(|(e, _)| e.0[j])
                .map(|(e, c)| (e.clone(), c.clone()));
            let Some((e, c)) = lead else {
                return Ok(quot);
            };
            // dividing z^e by z_j: all terms of the true quotient have
            // z_j-degree >= min, and the remainder check catches failure
            let mut qe = e.clone();
            qe.0[j] -= 1;
            quot.add_term(qe.clone(), c.clone());
            // rem -= (z_j - z_k) * c z^qe
            let mut tj = qe.clone();
            tj.0[j] += 1;
            rem.add_term(tj, c.neg());
            let mut tk = qe.clone();
            tk.0[k] += 1;
            rem.add_term(tk, c);
            // once every term is free of z_j beyond the k-shifted image the
            // iteration either empties or cycles downward; detect failure by
            // an exponent dropping far below anything in the dividend
            if let Some((emin, _)) = rem.terms.iter().min_by_key(|(e, _)| e.0[j]) {
                let floor = self.terms.keys().map(|e| e.0[j]).min().unwrap_or(0) - 1;
                if emin.0[j] < floor {
                    return Err(Error::NonSymmetricInput(j, k));
                }
            }
        }
    }

    /// Numeric evaluation at a point (rational-coefficient case handles
    /// evaluation through `Scalar::from_rational` embeddings elsewhere).
    pub fn eval_complex(&self, z: &[Complex64], coeff_to_c: impl Fn(&C) -> Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = Complex64::new(1.0, 0.0);
            for (zi, &ei) in z.iter().zip(&e.0) {
                m *= zi.powi(ei as i32);
            }
            acc += coeff_to_c(c) * m;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_int, Rational};

    fn iv(v: &[i64]) -> IntVector {
        IntVector::new(v.to_vec())
    }

    #[test]
    fn divide_power_difference() {
        // (z0^3 - z1^3) / (z0 - z1) = z0^2 + z0 z1 + z1^2
        let mut p: RawPoly<Rational> = RawPoly::zero(2);
        p.add_term(iv(&[3, 0]), rat_int(1));
        p.add_term(iv(&[0, 3]), rat_int(-1));
        let q = p.div_exact_zj_minus_zk(0, 1).unwrap();
        let mut want = RawPoly::zero(2);
        want.add_term(iv(&[2, 0]), rat_int(1));
        want.add_term(iv(&[1, 1]), rat_int(1));
        want.add_term(iv(&[0, 2]), rat_int(1));
        assert_eq!(q, want);
    }

    #[test]
    fn division_failure_detected() {
        let mut p: RawPoly<Rational> = RawPoly::zero(2);
        p.add_term(iv(&[1, 0]), rat_int(1)); // z0 alone is not divisible
        assert!(p.div_exact_zj_minus_zk(0, 1).is_err());
    }

    #[test]
    fn division_on_laurent_support() {
        // (z1^-1 - z0^-1)/(z0 - z1) = z0^-1 z1^-1
        let mut p: RawPoly<Rational> = RawPoly::zero(2);
        p.add_term(iv(&[0, -1]), rat_int(1));
        p.add_term(iv(&[-1, 0]), rat_int(-1));
        let q = p.div_exact_zj_minus_zk(0, 1).unwrap();
        let mut want = RawPoly::zero(2);
        want.add_term(iv(&[-1, -1]), rat_int(1));
        assert_eq!(q, want);
    }
}
