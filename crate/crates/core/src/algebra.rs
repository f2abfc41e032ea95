//! Differential polynomials over ℚ in the independent variables x₁..xₙ and the
//! derivative variables u^i_α, with formal partial and total derivatives.
//!
//! A [`DiffPoly`] is the finitely supported fragment of the series algebra
//! K||Y||. Every operation keeps the representation canonical: no zero
//! coefficients, no zero exponents, and a fixed term order, so structural
//! equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

/// Number of independent variables `n` and of unknowns `m` for one problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ambient {
    pub n: usize,
    pub m: u32,
}

impl Ambient {
    pub fn new(n: usize, m: u32) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Structural(format!(
                "ambient needs n ≥ 1 and m ≥ 1, got n={n}, m={m}"
            )));
        }
        Ok(Ambient { n, m })
    }

    pub fn check_index(&self, order: &MultiIndex) -> Result<()> {
        if order.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: order.len(),
            });
        }
        Ok(())
    }

    pub fn check_deriv(&self, d: &Deriv) -> Result<()> {
        if d.unknown == 0 || d.unknown > self.m {
            return Err(Error::IndexOutOfRange {
                what: "unknown",
                index: d.unknown,
                bound: self.m,
            });
        }
        self.check_index(&d.order)
    }

    pub fn check_var(&self, v: &Var) -> Result<()> {
        match v {
            Var::X(j) => {
                if *j == 0 || *j as usize > self.n {
                    return Err(Error::IndexOutOfRange {
                        what: "independent variable",
                        index: *j,
                        bound: self.n as u32,
                    });
                }
                Ok(())
            }
            Var::U(d) => self.check_deriv(d),
        }
    }

    pub fn check_poly(&self, f: &DiffPoly) -> Result<()> {
        for mono in f.terms.keys() {
            for v in mono.0.keys() {
                self.check_var(v)?;
            }
        }
        Ok(())
    }

    /// All derivative variables u^i_α with |α| ≤ `max_order`.
    pub fn derivs_up_to(&self, max_order: u32) -> Vec<Deriv> {
        let orders = MultiIndex::all_up_to(self.n, max_order);
        (1..=self.m)
            .flat_map(|i| orders.iter().map(move |a| Deriv::new(i, a.clone())))
            .collect()
    }
}

/// The derivative variable u^i_α. `unknown` is 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Deriv {
    pub unknown: u32,
    pub order: MultiIndex,
}

impl Deriv {
    pub fn new(unknown: u32, order: impl Into<MultiIndex>) -> Self {
        Deriv {
            unknown,
            order: order.into(),
        }
    }

    /// u^i_{α+β}, the semigroup action on U.
    pub fn shifted(&self, by: &MultiIndex) -> Deriv {
        Deriv {
            unknown: self.unknown,
            order: self.order.plus(by),
        }
    }

    /// Shift by e_k, with `k` zero-based.
    pub fn bumped(&self, k: usize) -> Deriv {
        Deriv {
            unknown: self.unknown,
            order: self.order.bumped(k),
        }
    }

    pub fn to_poly(&self) -> DiffPoly {
        DiffPoly::var(Var::U(self.clone()))
    }
}

impl fmt::Display for Deriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u[{},{}]", self.unknown, self.order)
    }
}

/// A generator of the polynomial fragment: x_j (1-based) or u^i_α.
///
/// Sort order: x₁ < x₂ < … < every u, and among derivative variables higher
/// total order first (then higher unknown, then lexicographically larger α).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X(u32),
    U(Deriv),
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Var::X(a), Var::X(b)) => a.cmp(b),
            (Var::X(_), Var::U(_)) => Ordering::Less,
            (Var::U(_), Var::X(_)) => Ordering::Greater,
            (Var::U(a), Var::U(b)) => (b.order.order(), b.unknown, &b.order).cmp(&(
                a.order.order(),
                a.unknown,
                &a.order,
            )),
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(j) => write!(f, "x{j}"),
            Var::U(d) => d.fmt(f),
        }
    }
}

impl From<Deriv> for Var {
    fn from(d: Deriv) -> Self {
        Var::U(d)
    }
}

/// A power product of variables with positive exponents.
///
/// Ordered graded-lexicographically, with earlier variables (x before u) more
/// significant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial::power(v, 1)
    }

    pub fn power(v: Var, e: u32) -> Self {
        let mut map = BTreeMap::new();
        if e > 0 {
            map.insert(v, e);
        }
        Monomial(map)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, u32)> {
        self.0.iter().map(|(v, &e)| (v, e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map = self.0.clone();
        for (v, e) in &other.0 {
            *map.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(map)
    }

    /// Divide by `v^e`; `None` if `v` occurs with a smaller power.
    pub fn div_power(&self, v: &Var, e: u32) -> Option<Monomial> {
        let have = self.exponent(v);
        if have < e {
            return None;
        }
        let mut map = self.0.clone();
        if have == e {
            map.remove(v);
        } else {
            map.insert(v.clone(), have - e);
        }
        Some(Monomial(map))
    }

    /// Split off every power of `v`: `self = v^e · rest`.
    pub fn split_off(&self, v: &Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        let rest = self.div_power(v, e).expect("exponent read back");
        (e, rest)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut a = self.0.iter();
            let mut b = other.0.iter();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                        // `va` is absent from `other`, and it is the more
                        // significant variable.
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(eb) {
                            Ordering::Equal => continue,
                            ord => return ord,
                        },
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A finitely supported ℚ-linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        DiffPoly::monomial(c, Monomial::one())
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    pub fn var(v: Var) -> Self {
        DiffPoly::monomial(Rational::one(), Monomial::var(v))
    }

    pub fn x(j: u32) -> Self {
        DiffPoly::var(Var::X(j))
    }

    pub fn u(unknown: u32, order: impl Into<MultiIndex>) -> Self {
        Deriv::new(unknown, order).to_poly()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = DiffPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending display order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant term, or `None` if `self` depends on some variable.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        let mut out = DiffPoly::one();
        for _ in 0..e {
            out = DiffPoly::mul(&out, self);
        }
        out
    }

    /// ∂f/∂v for a single variable.
    pub fn partial(&self, v: &Var) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let rest = m.div_power(v, 1).expect("exponent checked");
            out.add_term(rest, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// The total derivative D_i, with `i` the 1-based direction of x_i:
    /// D_i f = ∂f/∂x_i + Σ (∂f/∂u^j_α) u^j_{α+e_i}.
    pub fn total_derivative(&self, i: usize) -> DiffPoly {
        assert!(i >= 1, "directions are 1-based");
        let k = i - 1;
        let xi = Var::X(i as u32);
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (v, e) in m.iter() {
                let rest = m.div_power(v, 1).expect("variable of this monomial");
                let factor = c * Rational::from_integer(BigInt::from(e));
                match v {
                    Var::X(_) if *v == xi => out.add_term(rest, factor),
                    Var::X(_) => {}
                    Var::U(d) => {
                        let shifted = Monomial::var(Var::U(d.bumped(k)));
                        out.add_term(rest.mul(&shifted), factor);
                    }
                }
            }
        }
        out
    }

    /// D^a = D₁^{a₁} ∘ ⋯ ∘ Dₙ^{aₙ}, applied in ascending direction order.
    pub fn total_derivative_multi(&self, a: &MultiIndex) -> DiffPoly {
        let mut out = self.clone();
        for (k, &times) in a.entries().iter().enumerate() {
            for _ in 0..times {
                if out.is_zero() {
                    return out;
                }
                out = out.total_derivative(k + 1);
            }
        }
        out
    }

    /// Replace every occurrence of `v` by `g`.
    pub fn substitute(&self, v: &Var, g: &DiffPoly) -> DiffPoly {
        let mut powers: Vec<DiffPoly> = vec![DiffPoly::one()];
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            while powers.len() <= e as usize {
                let next = powers.last().expect("nonempty").mul(g);
                powers.push(next);
            }
            for (pm, pc) in &powers[e as usize].terms {
                out.add_term(pm.mul(&rest), pc * c);
            }
        }
        out
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.keys().cloned())
            .collect()
    }

    /// The derivative variables occurring in `self`; empty iff `self ∈ K[X]`.
    pub fn support_derivs(&self) -> BTreeSet<Deriv> {
        self.terms
            .keys()
            .flat_map(|m| m.0.keys())
            .filter_map(|v| match v {
                Var::U(d) => Some(d.clone()),
                Var::X(_) => None,
            })
            .collect()
    }

    /// Highest derivative order present, if any derivative occurs.
    pub fn max_order(&self) -> Option<u32> {
        self.support_derivs().iter().map(|d| d.order.order()).max()
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&format_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_rational(&abs))?;
            }
        }
        Ok(())
    }
}

/// "p" or "p/q" in lowest terms.
pub fn format_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parse "p" or "p/q" (decimal-free, optional leading '-' on p).
pub fn parse_rational(s: &str) -> Option<Rational> {
    fn int_part(t: &str, signed: bool) -> Option<BigInt> {
        let digits = if signed {
            t.strip_prefix('-').unwrap_or(t)
        } else {
            t
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        t.parse().ok()
    }
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (int_part(p, true)?, int_part(q, false)?),
        None => (int_part(s, true)?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for &DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: &DiffPoly) -> DiffPoly {
                DiffPoly::$method(self, rhs)
            }
        }
        impl $tr for DiffPoly {
            type Output = DiffPoly;
            fn $method(self, rhs: DiffPoly) -> DiffPoly {
                DiffPoly::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly::neg(self)
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly::neg(&self)
    }
}
