//! The monoid ℕⁿ of exponents, used both for derivative orders and for
//! monomials in the operator ring.

use std::fmt;

use crate::error::{Error, Result};

/// An element of ℕⁿ. Ordering is lexicographic on the entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The generator e_k, with `k` zero-based.
    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// Total degree |α|.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn check_len(&self, other: &MultiIndex) -> Result<()> {
        if self.0.len() != other.0.len() {
            return Err(Error::LengthMismatch {
                expected: self.0.len(),
                found: other.0.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_len(other)?;
        Ok(self.plus(other))
    }

    /// α ⋄ β, the shift that lifts α to max(α, β).
    pub fn diamond(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_len(other)?;
        Ok(MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b) - a)
                .collect(),
        ))
    }

    /// `other - self` when `other ≥ self` componentwise.
    pub fn try_subtract(&self, other: &MultiIndex) -> Result<Option<MultiIndex>> {
        self.check_len(other)?;
        Ok(self.divides_into(other))
    }

    pub fn lcm(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_len(other)?;
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect(),
        ))
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    // Unchecked variants for callers that already validated the ambient.

    pub(crate) fn plus(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn bumped(&self, k: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[k] += 1;
        MultiIndex(v)
    }

    pub(crate) fn divides_into(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.0.len() != other.0.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| b.checked_sub(a))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Every index of length `n` with total order at most `max_order`, in
    /// graded order (by total order, then lexicographically descending).
    pub fn all_up_to(n: usize, max_order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in 0..=max_order {
            let mut buf = vec![0u32; n];
            compositions(&mut buf, 0, d, &mut out);
        }
        out
    }
}

fn compositions(buf: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if buf.is_empty() {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos + 1 == buf.len() {
        buf[pos] = remaining;
        out.push(MultiIndex(buf.clone()));
        return;
    }
    for v in (0..=remaining).rev() {
        buf[pos] = v;
        compositions(buf, pos + 1, remaining - v, out);
    }
    buf[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi<const N: usize>(v: [u32; N]) -> MultiIndex {
        MultiIndex::from(v)
    }

    #[test]
    fn add_examples() {
        assert_eq!(mi([1, 0]).add(&mi([0, 2])).unwrap(), mi([1, 2]));
        assert_eq!(mi([0, 0]).add(&mi([3, 1])).unwrap(), mi([3, 1]));
        assert_eq!(mi([2, 1]).add(&mi([1, 3])).unwrap(), mi([3, 4]));
    }

    #[test]
    fn diamond_examples() {
        assert_eq!(mi([2, 1]).diamond(&mi([1, 3])).unwrap(), mi([0, 2]));
        assert_eq!(mi([1, 3]).diamond(&mi([2, 1])).unwrap(), mi([1, 0]));
        assert!(mi([4, 0, 7]).diamond(&mi([4, 0, 7])).unwrap().is_zero());
    }

    #[test]
    fn try_subtract_examples() {
        assert_eq!(mi([1, 0]).try_subtract(&mi([2, 3])).unwrap(), Some(mi([1, 3])));
        assert_eq!(mi([2, 0]).try_subtract(&mi([1, 5])).unwrap(), None);
        assert_eq!(mi([3, 2]).try_subtract(&mi([3, 2])).unwrap(), Some(mi([0, 0])));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(
            mi([1, 0]).add(&mi([1, 0, 0])),
            Err(Error::LengthMismatch { expected: 2, found: 3 })
        ));
        assert!(mi([1]).diamond(&mi([1, 2])).is_err());
        assert!(mi([1]).try_subtract(&mi([1, 2])).is_err());
    }

    #[test]
    fn enumeration_counts() {
        // C(d + n, n) indices of order ≤ d in n variables.
        assert_eq!(MultiIndex::all_up_to(2, 2).len(), 6);
        assert_eq!(MultiIndex::all_up_to(3, 5).len(), 56);
        assert_eq!(MultiIndex::all_up_to(1, 4).len(), 5);
        assert_eq!(MultiIndex::all_up_to(2, 1), vec![mi([0, 0]), mi([1, 0]), mi([0, 1])]);
    }

    fn pair(n: usize) -> impl Strategy<Value = (MultiIndex, MultiIndex)> {
        (
            prop::collection::vec(0u32..8, n),
            prop::collection::vec(0u32..8, n),
        )
            .prop_map(|(a, b)| (MultiIndex(a), MultiIndex(b)))
    }

    proptest! {
        #[test]
        fn diamond_lifts_to_lcm((a, b) in (1usize..5).prop_flat_map(pair)) {
            let left = a.add(&a.diamond(&b).unwrap()).unwrap();
            let right = b.add(&b.diamond(&a).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(left, a.lcm(&b).unwrap());
        }

        #[test]
        fn diamond_zero_iff_dominates((a, b) in (1usize..5).prop_flat_map(pair)) {
            prop_assert_eq!(a.diamond(&b).unwrap().is_zero(), b.le(&a));
        }

        #[test]
        fn subtract_inverts_add((a, c) in (1usize..5).prop_flat_map(pair)) {
            let sum = a.add(&c).unwrap();
            prop_assert_eq!(a.try_subtract(&sum).unwrap(), Some(c));
        }
    }
}
