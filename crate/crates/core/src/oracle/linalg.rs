//! Fraction-free sparse elimination over ℤ, used for exact span and kernel
//! questions over ℚ.
//!
//! Columns are added one at a time and kept in echelon form keyed by their
//! highest row index. Every stored vector remembers which combination of the
//! original columns produced it, so kernel vectors and solutions come out as
//! explicit coefficient lists.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;
type IntVec = BTreeMap<usize, BigInt>;

#[derive(Clone, Debug)]
struct Row {
    vec: IntVec,
    combo: IntVec,
}

/// Incremental column echelon form.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, Row>,
    kernel: Vec<SparseVec>,
    columns: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Appends a column; returns its index. If it depends on earlier
    /// columns, the dependency is recorded as a kernel vector.
    pub fn push(&mut self, column: &SparseVec) -> usize {
        let index = self.columns;
        self.columns += 1;
        let (vec, den) = integerize(column);
        let mut combo = IntVec::new();
        combo.insert(index, den);
        let mut row = Row { vec, combo };
        normalize(&mut row.vec, &mut row.combo, None);
        self.eliminate(&mut row, None);
        match row.vec.keys().next_back().copied() {
            Some(p) => {
                self.rows.insert(p, row);
            }
            None => self.kernel.push(primitive(&row.combo)),
        }
        index
    }

    /// Linear relations among the pushed columns: each vector c satisfies
    /// Σ c_j column_j = 0. Together they span the kernel.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    /// Coefficients c with Σ c_j column_j = target, if the target lies in
    /// the span.
    pub fn solve(&self, target: &SparseVec) -> Option<SparseVec> {
        let (vec, den) = integerize(target);
        let mut row = Row {
            vec,
            combo: IntVec::new(),
        };
        let mut scale = BigInt::one();
        normalize(&mut row.vec, &mut row.combo, Some(&mut scale));
        self.eliminate(&mut row, Some(&mut scale));
        if !row.vec.is_empty() {
            return None;
        }
        // scale·den·target + Σ combo_j column_j = 0
        let mut out = SparseVec::new();
        let denom = -(scale * den);
        for (j, c) in row.combo {
            out.insert(j, Rational::new(c, denom.clone()));
        }
        Some(out)
    }

    pub fn solve_all(&self, targets: &[SparseVec]) -> Vec<Option<SparseVec>> {
        targets.iter().map(|t| self.solve(t)).collect()
    }

    fn eliminate(&self, row: &mut Row, mut scale: Option<&mut BigInt>) {
        while let Some((&p, a)) = row.vec.iter().next_back() {
            let Some(pivot) = self.rows.get(&p) else {
                break;
            };
            let b = &pivot.vec[&p];
            let g = a.gcd(b);
            let fa = a / &g;
            let fb = b / &g;
            // row ← fb·row − fa·pivot
            scale_in_place(&mut row.vec, &fb);
            scale_in_place(&mut row.combo, &fb);
            axpy(&mut row.vec, &(-&fa), &pivot.vec);
            axpy(&mut row.combo, &(-&fa), &pivot.combo);
            if let Some(s) = scale.as_deref_mut() {
                *s *= &fb;
            }
            normalize(&mut row.vec, &mut row.combo, scale.as_deref_mut());
        }
    }
}

/// Multiplies by the lcm of denominators; returns the integer vector and
/// that lcm.
fn integerize(v: &SparseVec) -> (IntVec, BigInt) {
    let den = v
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let out = v
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&k, c)| (k, c.numer() * (&den / c.denom())))
        .collect();
    (out, den)
}

fn scale_in_place(v: &mut IntVec, f: &BigInt) {
    if f.is_one() {
        return;
    }
    for c in v.values_mut() {
        *c *= f;
    }
}

fn axpy(v: &mut IntVec, f: &BigInt, w: &IntVec) {
    for (k, c) in w {
        let entry = v.entry(*k).or_insert_with(BigInt::zero);
        *entry += f * c;
        if entry.is_zero() {
            v.remove(k);
        }
    }
}

/// Divides vec, combo and the optional scale by their common content.
fn normalize(vec: &mut IntVec, combo: &mut IntVec, scale: Option<&mut BigInt>) {
    let mut g = BigInt::zero();
    for c in vec.values().chain(combo.values()) {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if let Some(s) = scale.as_deref() {
        g = g.gcd(s);
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for c in vec.values_mut().chain(combo.values_mut()) {
        *c /= &g;
    }
    if let Some(s) = scale {
        *s /= &g;
    }
}

/// The vector divided by its content, first entry positive.
fn primitive(v: &IntVec) -> SparseVec {
    let mut g = BigInt::zero();
    for c in v.values() {
        g = g.gcd(c);
    }
    let sign = v.values().next().is_some_and(|c| c.is_negative());
    let g = if sign { -g } else { g };
    v.iter()
        .map(|(&k, c)| (k, Rational::new(c.clone(), g.clone())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn sv(entries: &[(usize, Rational)]) -> SparseVec {
        entries.iter().cloned().collect()
    }

    fn apply(cols: &[SparseVec], coeffs: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&j, c) in coeffs {
            for (&r, v) in &cols[j] {
                *out.entry(r).or_insert_with(Rational::zero) += c * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    #[test]
    fn solves_and_refuses() {
        let cols = vec![
            sv(&[(0, int(1)), (1, int(2))]),
            sv(&[(1, rat(1, 3)), (2, int(1))]),
        ];
        let mut e = Echelon::new();
        for c in &cols {
            e.push(c);
        }
        assert_eq!(e.rank(), 2);
        let target = sv(&[(0, int(2)), (1, int(5)), (2, int(3))]);
        let x = e.solve(&target).unwrap();
        assert_eq!(apply(&cols, &x), target);
        assert_eq!(x[&0], int(2));
        assert_eq!(x[&1], int(3));
        assert!(e.solve(&sv(&[(2, int(1)), (0, int(1))])).is_none());
        assert_eq!(e.solve(&SparseVec::new()), Some(SparseVec::new()));
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let cols = vec![
            sv(&[(0, int(1)), (1, int(1))]),
            sv(&[(1, int(1)), (2, int(1))]),
            sv(&[(0, rat(1, 2)), (2, rat(-1, 2))]),
            SparseVec::new(),
        ];
        let mut e = Echelon::new();
        for c in &cols {
            e.push(c);
        }
        assert_eq!(e.rank(), 2);
        assert_eq!(e.kernel().len(), 2);
        for k in e.kernel() {
            assert!(!k.is_empty());
            assert!(apply(&cols, k).is_empty());
        }
    }
}
