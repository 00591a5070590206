//! Symmetric polynomials in the monomial basis.
//!
//! A [`SymPoly`] stores coefficients keyed by sorted-decreasing exponent
//! vectors. The monomial symmetric function follows the full-S_N
//! convention: M_m(z) = sum over all N! permutations P of z^{m_P}, so for
//! repeated parts M_m carries the stabilizer multiplicity (M_{(1,1)} =
//! 2 z_1 z_2 for N = 2). Laurent support (negative exponents) is allowed
//! when flagged; it shows up in elliptic intermediates.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::coeff::Scalar;
use crate::error::{Error, Result};
use crate::intvec::{dominance_leq, IntVector};
use crate::qseries::QSeries;
use crate::rational::{format_rational, rational_to_f64, Rational};
use crate::rawpoly::RawPoly;

#[derive(Clone, PartialEq, Debug)]
pub struct SymPoly<C: Scalar> {
    n_vars: usize,
    terms: BTreeMap<IntVector, C>,
}

impl<C: Scalar> SymPoly<C> {
    pub fn zero(n_vars: usize) -> Self {
        SymPoly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when some stored key carries a negative exponent; consumers
    /// that require genuine polynomials reject such values.
    pub fn is_laurent(&self) -> bool {
        self.terms.keys().any(|k| k.0.iter().any(|&x| x < 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntVector, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, key: &IntVector) -> Option<&C> {
        self.terms.get(key)
    }

    /// Inserts/accumulates a coefficient on the orbit of `key` (sorted form).
    pub fn add_term(&mut self, key: IntVector, coeff: C) {
        debug_assert_eq!(key.len(), self.n_vars);
        let key = key.sorted_desc();
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n_vars != other.n_vars {
            return Err(Error::LengthMismatch(self.n_vars, other.n_vars));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale_neg())
    }

    fn scale_neg(&self) -> Self {
        SymPoly {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = SymPoly::zero(self.n_vars);
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a.mul(c));
        }
        out
    }

    /// Degree marker: Some(w) iff every stored key has weight w.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let w = it.next()?.weight();
        it.all(|k| k.weight() == w).then_some(w)
    }

    /// Keys that are dominance-maximal among the stored support.
    fn maximal_keys(&self) -> Vec<IntVector> {
        let keys: Vec<_> = self.terms.keys().cloned().collect();
        keys.iter()
            .filter(|k| {
                keys.iter()
                    .all(|other| *k == other || !dominance_leq(k, other).unwrap_or(false))
            })
            .cloned()
            .collect()
    }

    /// Divides by the coefficient of the unique dominance-maximal key.
    pub fn normalize_leading(&self) -> Result<Self> {
        let maxima = self.maximal_keys();
        if maxima.len() != 1 {
            return Err(Error::NoUniqueLeading);
        }
        let lead = self.terms.get(&maxima[0]).unwrap();
        let inv = lead.inv()?;
        Ok(self.scale(&inv))
    }

    /// The coefficient of the unique dominance-maximal key.
    pub fn leading_coeff(&self) -> Result<(IntVector, C)> {
        let maxima = self.maximal_keys();
        if maxima.len() != 1 {
            return Err(Error::NoUniqueLeading);
        }
        let c = self.terms.get(&maxima[0]).unwrap().clone();
        Ok((maxima[0].clone(), c))
    }

    /// Multiplies by (z_1 ... z_N)^k, shifting every key by k on each entry.
    pub fn shift_all(&self, k: i64) -> Self {
        let mut out = SymPoly::zero(self.n_vars);
        for (key, c) in &self.terms {
            let shifted = IntVector::new(key.0.iter().map(|x| x + k).collect());
            out.add_term(shifted, c.clone());
        }
        out
    }

    /// Expands into the raw monomial form.
    ///
    /// Full-S_N convention: a coefficient c on key m contributes
    /// c * |Stab(m)| to every distinct rearrangement of m.
    pub fn to_raw(&self) -> RawPoly<C> {
        let mut out = RawPoly::zero(self.n_vars);
        for (key, c) in &self.terms {
            let stab = key.stabilizer_size() as i64;
            let factor = c.mul(&c.from_rational(&crate::rational::rat_int(stab)));
            for perm in distinct_permutations(key) {
                out.add_term(perm, factor.clone());
            }
        }
        out
    }

    /// Collects a raw symmetric polynomial into the monomial basis.
    ///
    /// Checks that all rearrangements of each orbit carry the same raw
    /// coefficient (a genuine symmetry test), then divides by the
    /// stabilizer size to land in the full-S_N normalization.
    pub fn from_raw(raw: &RawPoly<C>) -> Result<Self> {
        let mut out = SymPoly::zero(raw.n_vars);
        let mut seen: BTreeMap<IntVector, usize> = BTreeMap::new();
        for (e, c) in &raw.terms {
            let key = e.sorted_desc();
            *seen.entry(key.clone()).or_insert(0) += 1;
            if e == &key {
                let stab = key.stabilizer_size();
                let inv_stab = c.from_rational(&Rational::new(1.into(), (stab as i64).into()));
                out.add_term(key, c.mul(&inv_stab));
            }
        }
        // every orbit must be fully populated with identical coefficients
        for (key, count) in &seen {
            let orbit = distinct_permutations(key).len();
            if *count != orbit {
                return Err(Error::InvalidInput(format!(
                    "raw polynomial is not symmetric at orbit {key}"
                )));
            }
            let rep = raw.terms.get(key);
            for perm in distinct_permutations(key) {
                if raw.terms.get(&perm) != rep {
                    return Err(Error::InvalidInput(format!(
                        "raw polynomial is not symmetric at orbit {key}"
                    )));
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value
    where
        C: CoeffJson,
    {
        serde_json::json!({
            "N": self.n_vars,
            "terms": self
                .terms
                .iter()
                .map(|(k, c)| {
                    serde_json::json!({
                        "partition": k.0.clone(),
                        "coeff": c.coeff_json(),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// JSON rendering of a coefficient per the wire schema.
pub trait CoeffJson {
    fn coeff_json(&self) -> serde_json::Value;
}

impl CoeffJson for Rational {
    fn coeff_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

impl CoeffJson for QSeries {
    fn coeff_json(&self) -> serde_json::Value {
        self.to_json()
    }
}

/// All distinct permutations of a vector (deduplicated orbit).
pub fn distinct_permutations(v: &IntVector) -> Vec<IntVector> {
    let mut sorted = v.0.clone();
    sorted.sort_unstable();
    let mut out = Vec::new();
    // Heap-free next_permutation loop over the multiset
    loop {
        out.push(IntVector::new(sorted.clone()));
        // next lexicographic permutation
        let n = sorted.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && sorted[i - 1] >= sorted[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while sorted[j] <= sorted[i - 1] {
            j -= 1;
        }
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
    }
    out
}

/// The monomial symmetric function M_m as a SymPoly with a single key.
///
/// The coefficient equals 1 in this basis; expansion to raw form carries
/// the orbit. Matches M_m = sum over all N! permutations: expanding and
/// re-collecting yields coefficient 1 on the sorted key.
pub fn monomial_sym(m: &IntVector) -> SymPoly<Rational> {
    let mut p = SymPoly::zero(m.len());
    p.add_term(m.clone(), num_traits::One::one());
    p
}

impl SymPoly<Rational> {
    /// Evaluates the polynomial at a complex point.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n_vars);
        self.to_raw().eval_complex(z, |c| {
            Complex64::new(rational_to_f64(c), 0.0)
        })
    }

    /// Embeds into constant q-series coefficients at truncation order k.
    pub fn to_qseries(&self, k: usize) -> SymPoly<QSeries> {
        let mut out = SymPoly::zero(self.n_vars);
        for (key, c) in &self.terms {
            out.add_term(key.clone(), QSeries::constant(c.clone(), k));
        }
        out
    }
}

impl SymPoly<QSeries> {
    /// Evaluates at a complex point for a concrete nome q.
    pub fn eval_at_q(&self, q: f64, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n_vars);
        self.to_raw()
            .eval_complex(z, |c| Complex64::new(c.eval_f64(q), 0.0))
    }

    /// The polynomial of coefficients of q^{2d}.
    pub fn order_part(&self, d: usize) -> SymPoly<Rational> {
        let mut out = SymPoly::zero(self.n_vars);
        for (key, c) in &self.terms {
            out.add_term(key.clone(), c.coeff(d).clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn iv(v: &[i64]) -> IntVector {
        IntVector::new(v.to_vec())
    }

    #[test]
    fn monomial_sym_examples() {
        // m=(1,0): raw = z1 + z2
        let p = monomial_sym(&iv(&[1, 0]));
        let raw = p.to_raw();
        assert_eq!(raw.terms.len(), 2);
        assert_eq!(raw.terms.get(&iv(&[1, 0])), Some(&rat_int(1)));
        // m=(1,1): full-S_N convention gives 2 z1 z2
        let p = monomial_sym(&iv(&[1, 1]));
        let raw = p.to_raw();
        assert_eq!(raw.terms.get(&iv(&[1, 1])), Some(&rat_int(2)));
        let back = SymPoly::from_raw(&raw).unwrap();
        assert_eq!(back, p);
        // m=(0,0): both permutations contribute 1, so M_{(0,0)} = 2
        let p = monomial_sym(&iv(&[0, 0]));
        let z = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)];
        assert!((p.eval(&z) - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn raw_round_trip() {
        let mut p: SymPoly<Rational> = SymPoly::zero(3);
        p.add_term(iv(&[2, 1, 1]), rat(3, 5));
        p.add_term(iv(&[2, 2, 0]), rat(-7, 2));
        assert_eq!(SymPoly::from_raw(&p.to_raw()).unwrap(), p);
    }

    #[test]
    fn from_raw_detects_asymmetry() {
        let mut raw: RawPoly<Rational> = RawPoly::zero(2);
        raw.add_term(iv(&[2, 0]), rat_int(1));
        assert!(SymPoly::from_raw(&raw).is_err());
        raw.add_term(iv(&[0, 2]), rat_int(2));
        assert!(SymPoly::from_raw(&raw).is_err());
    }

    #[test]
    fn normalize_leading_divides_by_max() {
        // 3 M_{(2,0)} + 6 M_{(1,1)} -> M_{(2,0)} + 2 M_{(1,1)}
        let mut p: SymPoly<Rational> = SymPoly::zero(2);
        p.add_term(iv(&[2, 0]), rat_int(3));
        p.add_term(iv(&[1, 1]), rat_int(6));
        let n = p.normalize_leading().unwrap();
        assert_eq!(n.coeff(&iv(&[2, 0])), Some(&rat_int(1)));
        assert_eq!(n.coeff(&iv(&[1, 1])), Some(&rat_int(2)));
    }

    #[test]
    fn add_cancels() {
        let mut p: SymPoly<Rational> = SymPoly::zero(2);
        p.add_term(iv(&[2, 1]), rat(5, 3));
        let q = p.sub(&p).unwrap();
        assert!(q.is_zero());
        assert_eq!(p.scale(&rat_int(1)), p);
    }

    #[test]
    fn no_unique_leading_detected() {
        // N=3: (3,1,1) and (2,2,2)... those are comparable? prefix sums
        // (3,4,5) vs (2,4,6): incomparable at equal weight? 3>2 but 5<6
        // wait weights differ: 5 vs 6. Use (3,1,0) and (2,2,0): comparable.
        // Incomparable pair at weight 6, N=3: (4,1,1) vs (3,3,0).
        let mut p: SymPoly<Rational> = SymPoly::zero(3);
        p.add_term(iv(&[4, 1, 1]), rat_int(1));
        p.add_term(iv(&[3, 3, 0]), rat_int(1));
        assert_eq!(p.normalize_leading(), Err(Error::NoUniqueLeading));
    }

    #[test]
    fn evaluation_is_symmetric() {
        let mut p: SymPoly<Rational> = SymPoly::zero(3);
        p.add_term(iv(&[3, 1, 0]), rat(2, 7));
        p.add_term(iv(&[2, 1, 1]), rat(-1, 3));
        let z = [
            Complex64::new(0.6, 0.4),
            Complex64::new(-0.3, 0.8),
            Complex64::new(0.2, -0.9),
        ];
        let zp = [z[2], z[0], z[1]];
        assert!((p.eval(&z) - p.eval(&zp)).norm() < 1e-12);
    }

    #[test]
    fn shift_all_moves_keys() {
        let mut p: SymPoly<Rational> = SymPoly::zero(2);
        p.add_term(iv(&[2, 0]), rat_int(3));
        let s = p.shift_all(2);
        assert_eq!(s.coeff(&iv(&[4, 2])), Some(&rat_int(3)));
    }
}
