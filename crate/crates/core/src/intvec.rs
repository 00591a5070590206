//! Integer exponent vectors, partitions, and the dominance order.

use crate::error::{Error, Result};

/// A vector in Z^N; exponent vectors, state labels, and partition storage.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        IntVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn prefix_sums(&self) -> Vec<i64> {
        let mut acc = 0;
        self.0
            .iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect()
    }

    /// True iff every tail sum m_j + ... + m_N is non-negative.
    pub fn tail_nonneg(&self) -> bool {
        let mut tail = 0;
        for x in self.0.iter().rev() {
            tail += x;
            if tail < 0 {
                return false;
            }
        }
        true
    }

    pub fn is_partition(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1]) && self.0.last().map_or(true, |&x| x >= 0)
    }

    /// Entries sorted weakly decreasing; the canonical key of a monomial orbit.
    pub fn sorted_desc(&self) -> IntVector {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        IntVector(v)
    }

    /// |stabilizer| in S_N: the product of factorials of entry multiplicities.
    pub fn stabilizer_size(&self) -> u64 {
        let sorted = self.sorted_desc();
        let mut size = 1u64;
        let mut run = 1u64;
        for w in sorted.0.windows(2) {
            if w[0] == w[1] {
                run += 1;
                size *= run;
            } else {
                run = 1;
            }
        }
        size
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        debug_assert_eq!(self.len(), other.len());
        IntVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// self + nu * E_{jk} where (E_jk)_l = delta_{jl} - delta_{kl}.
    pub fn step(&self, j: usize, k: usize, nu: i64) -> IntVector {
        let mut v = self.0.clone();
        v[j] += nu;
        v[k] -= nu;
        IntVector(v)
    }
}

impl std::fmt::Display for IntVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Dominance order: m <= n iff equal weight and every prefix sum of m
/// is bounded by the matching prefix sum of n.
pub fn dominance_leq(m: &IntVector, n: &IntVector) -> Result<bool> {
    if m.len() != n.len() {
        return Err(Error::LengthMismatch(m.len(), n.len()));
    }
    let pm = m.prefix_sums();
    let pn = n.prefix_sums();
    if pm.last() != pn.last() {
        return Ok(false);
    }
    Ok(pm.iter().zip(&pn).all(|(a, b)| a <= b))
}

/// A weakly decreasing vector of non-negative integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Partition(IntVector);

impl Partition {
    pub fn new(v: IntVector) -> Result<Self> {
        if !v.is_partition() {
            return Err(Error::InvalidInput(format!("{v} is not a partition")));
        }
        Ok(Partition(v))
    }

    pub fn from_parts(parts: &[i64]) -> Result<Self> {
        Self::new(IntVector::new(parts.to_vec()))
    }

    pub fn vector(&self) -> &IntVector {
        &self.0
    }

    pub fn weight(&self) -> i64 {
        self.0.weight()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// All partitions of `weight` with exactly `n_parts` entries (zero-padded),
/// in descending lexicographic order. Descending lex refines dominance, so
/// iterating this list front-to-back is a valid linear extension.
pub fn partitions_of_weight(weight: i64, n_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n_parts];
    fn rec(out: &mut Vec<Partition>, cur: &mut Vec<i64>, idx: usize, rem: i64, max: i64) {
        if idx == cur.len() {
            if rem == 0 {
                out.push(Partition(IntVector::new(cur.clone())));
            }
            return;
        }
        let hi = max.min(rem);
        for v in (0..=hi).rev() {
            cur[idx] = v;
            // remaining entries are each <= v, so v*(slots left) must cover rem - v
            if rem - v <= v * (cur.len() - idx - 1) as i64 {
                rec(out, cur, idx + 1, rem - v, v);
            }
        }
        cur[idx] = 0;
    }
    rec(&mut out, &mut cur, 0, weight, weight);
    out
}

/// Partitions m <= n in dominance order (n included), descending lex.
pub fn partitions_dominated_by(n: &Partition) -> Vec<Partition> {
    partitions_of_weight(n.weight(), n.len())
        .into_iter()
        .filter(|m| dominance_leq(m.vector(), n.vector()).unwrap())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(v: &[i64]) -> IntVector {
        IntVector::new(v.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&iv(&[1, 1]), &iv(&[2, 0])).unwrap());
        assert!(!dominance_leq(&iv(&[2, 0]), &iv(&[1, 1])).unwrap());
        // weights differ
        assert!(!dominance_leq(&iv(&[1, 0]), &iv(&[2, 0])).unwrap());
        assert!(dominance_leq(&iv(&[1]), &iv(&[1, 0])).is_err());
    }

    #[test]
    fn tail_nonneg_examples() {
        assert!(!iv(&[2, -1]).tail_nonneg());
        assert!(iv(&[2, 0]).tail_nonneg());
        assert!(!iv(&[1, -1]).tail_nonneg());
        assert!(iv(&[3, -1, 0]).tail_nonneg() == false); // tail at j=2 is -1
        assert!(iv(&[3, 0, -1]).tail_nonneg() == false);
        assert!(iv(&[-1, 2]).tail_nonneg()); // tails: 2, 1
    }

    #[test]
    fn stabilizer_sizes() {
        assert_eq!(iv(&[1, 1]).stabilizer_size(), 2);
        assert_eq!(iv(&[2, 0]).stabilizer_size(), 1);
        assert_eq!(iv(&[3, 3, 3, 1]).stabilizer_size(), 6);
        assert_eq!(iv(&[0, 0, 0, 0]).stabilizer_size(), 24);
    }

    #[test]
    fn partition_enumeration() {
        let p = partitions_of_weight(4, 2);
        let got: Vec<Vec<i64>> = p.iter().map(|x| x.vector().0.clone()).collect();
        assert_eq!(got, vec![vec![4, 0], vec![3, 1], vec![2, 2]]);
        assert_eq!(partitions_of_weight(6, 4).len(), 9);
        assert_eq!(partitions_of_weight(0, 3).len(), 1);
    }

    #[test]
    fn dominated_by_filters() {
        let n = Partition::from_parts(&[2, 1, 1]).unwrap();
        let ms = partitions_dominated_by(&n);
        let got: Vec<Vec<i64>> = ms.iter().map(|x| x.vector().0.clone()).collect();
        assert_eq!(got, vec![vec![2, 1, 1]]);
        let n = Partition::from_parts(&[3, 1, 0]).unwrap();
        let ms = partitions_dominated_by(&n);
        assert_eq!(ms.len(), 3); // (3,1,0), (2,2,0), (2,1,1)
    }

    proptest! {
        #[test]
        fn dominance_is_partial_order(
            a in prop::collection::vec(0i64..6, 4),
            b in prop::collection::vec(0i64..6, 4),
            c in prop::collection::vec(0i64..6, 4),
        ) {
            let (mut a, mut b, mut c) = (a, b, c);
            a.sort_unstable_by(|x, y| y.cmp(x));
            b.sort_unstable_by(|x, y| y.cmp(x));
            c.sort_unstable_by(|x, y| y.cmp(x));
            let (a, b, c) = (iv(&a), iv(&b), iv(&c));
            prop_assert!(dominance_leq(&a, &a).unwrap());
            if dominance_leq(&a, &b).unwrap() && dominance_leq(&b, &a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if dominance_leq(&a, &b).unwrap() && dominance_leq(&b, &c).unwrap() {
                prop_assert!(dominance_leq(&a, &c).unwrap());
            }
        }
    }
}
