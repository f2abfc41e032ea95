//! Syzygies of a list of leading derivatives.
//!
//! An operator polynomial Σ c_μ X^μ acts on a derivative by shifting it and on
//! a differential polynomial as Σ c_μ D^μ. A module vector carries one
//! operator polynomial per equation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{format_rational, Deriv, DiffPoly, Rational};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::normal::SolvedSystem;
use crate::oracle::linalg::{Echelon, SparseVec};

/// Σ c_μ X^μ with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OperatorPoly(BTreeMap<MultiIndex, Rational>);

impl OperatorPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(mu: MultiIndex, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(mu, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.0.iter()
    }

    pub fn coeff(&self, mu: &MultiIndex) -> Rational {
        self.0.get(mu).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.keys().map(MultiIndex::order).max()
    }

    pub fn add_term(&mut self, mu: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(mu.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&mu);
        }
    }

    pub fn add(&self, other: &OperatorPoly) -> OperatorPoly {
        let mut out = self.clone();
        for (mu, c) in &other.0 {
            out.add_term(mu.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> OperatorPoly {
        if c.is_zero() {
            return Self::zero();
        }
        OperatorPoly(self.0.iter().map(|(m, v)| (m.clone(), v * c)).collect())
    }

    pub fn mul(&self, other: &OperatorPoly) -> OperatorPoly {
        let mut out = Self::zero();
        for (a, c) in &self.0 {
            for (b, d) in &other.0 {
                out.add_term(a.plus(b), c * d);
            }
        }
        out
    }

    /// Σ c_μ D^μ f.
    pub fn apply(&self, f: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (mu, c) in &self.0 {
            out = &out + &f.total_derivative_multi(mu).scale(c);
        }
        out
    }
}

impl fmt::Display for OperatorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, (mu, c)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "X^{mu}")?;
            } else {
                write!(f, "{}*X^{mu}", format_rational(c))?;
            }
        }
        Ok(())
    }
}

/// (d₁, …, d_k): one operator polynomial per equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleVector(Vec<OperatorPoly>);

impl ModuleVector {
    pub fn zero(k: usize) -> Self {
        ModuleVector(vec![OperatorPoly::zero(); k])
    }

    /// c·X^μ e_pos.
    pub fn term(k: usize, pos: usize, mu: MultiIndex, c: Rational) -> Self {
        let mut v = Self::zero(k);
        v.0[pos].add_term(mu, c);
        v
    }

    pub fn from_components(components: Vec<OperatorPoly>) -> Self {
        ModuleVector(components)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[OperatorPoly] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(OperatorPoly::is_zero)
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.iter().filter_map(OperatorPoly::degree).max()
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        ModuleVector(self.0.iter().zip(&other.0).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> ModuleVector {
        ModuleVector(self.0.iter().map(|p| p.scale(c)).collect())
    }

    /// Left multiplication p·d.
    pub fn mul_operator(&self, p: &OperatorPoly) -> ModuleVector {
        ModuleVector(self.0.iter().map(|d| p.mul(d)).collect())
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// τ_ij = X^{shift_i} e_i − X^{shift_j} e_j for leads of one unknown at
/// positions i < j (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tau {
    pub i: usize,
    pub j: usize,
    pub shift_i: MultiIndex,
    pub shift_j: MultiIndex,
}

impl Tau {
    pub fn vector(&self, k: usize) -> ModuleVector {
        let one = Rational::one();
        ModuleVector::term(k, self.i, self.shift_i.clone(), one.clone()).add(&ModuleVector::term(
            k,
            self.j,
            self.shift_j.clone(),
            -one,
        ))
    }

    /// max(|shift_i|, |shift_j|): the degree of the vector.
    pub fn degree(&self) -> u32 {
        self.shift_i.order().max(self.shift_j.order())
    }
}

fn check_leads(leads: &[Deriv]) -> Result<()> {
    let mut seen = BTreeSet::new();
    let n = leads.first().map(|d| d.order.len());
    for d in leads {
        if let Some(n) = n {
            if d.order.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: d.order.len(),
                });
            }
        }
        if !seen.insert(d) {
            return Err(Error::DuplicateLead(d.clone()));
        }
    }
    Ok(())
}

pub fn tau_generators(leads: &[Deriv]) -> Result<Vec<Tau>> {
    check_leads(leads)?;
    let mut out = Vec::new();
    for (i, a) in leads.iter().enumerate() {
        for (j, b) in leads.iter().enumerate().skip(i + 1) {
            if a.unknown == b.unknown {
                out.push(Tau {
                    i,
                    j,
                    shift_i: a.order.diamond(&b.order)?,
                    shift_j: b.order.diamond(&a.order)?,
                });
            }
        }
    }
    Ok(out)
}

/// Σ_i d_i · leads_i under the shift action, as a ℚ-combination of
/// derivatives with zero coefficients dropped.
pub fn module_apply(d: &ModuleVector, leads: &[Deriv]) -> Result<BTreeMap<Deriv, Rational>> {
    if d.len() != leads.len() {
        return Err(Error::LengthMismatch {
            expected: leads.len(),
            found: d.len(),
        });
    }
    let mut out: BTreeMap<Deriv, Rational> = BTreeMap::new();
    for (p, lead) in d.0.iter().zip(leads) {
        for (mu, c) in p.terms() {
            let v = Deriv::new(lead.unknown, lead.order.add(mu)?);
            *out.entry(v).or_insert_with(Rational::zero) += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Σ_i Σ_ν a_{i,ν} D^ν f_i with f_i = lead_i + tail_i.
pub fn operator_apply(d: &ModuleVector, sys: &SolvedSystem) -> Result<DiffPoly> {
    if d.len() != sys.len() {
        return Err(Error::LengthMismatch {
            expected: sys.len(),
            found: d.len(),
        });
    }
    let mut out = DiffPoly::zero();
    for (p, eq) in d.0.iter().zip(sys.equations()) {
        for (mu, _) in p.terms() {
            if mu.len() != sys.ambient().n {
                return Err(Error::LengthMismatch {
                    expected: sys.ambient().n,
                    found: mu.len(),
                });
            }
        }
        if !p.is_zero() {
            out = &out + &p.apply(&eq.to_poly());
        }
    }
    Ok(out)
}

/// A slice syzygy written as Σ p_t τ_t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyCertificate {
    pub syzygy: ModuleVector,
    /// (index into the τ list, cofactor p_t)
    pub combination: Vec<(usize, OperatorPoly)>,
}

impl SyzygyCertificate {
    /// Expands Σ p_t τ_t exactly and compares with the syzygy.
    pub fn verify(&self, taus: &[Tau]) -> bool {
        let k = self.syzygy.len();
        let mut sum = ModuleVector::zero(k);
        for (t, p) in &self.combination {
            match taus.get(*t) {
                Some(tau) => sum = sum.add(&tau.vector(k).mul_operator(p)),
                None => return false,
            }
        }
        sum == self.syzygy
    }
}

#[derive(Clone, Debug)]
pub struct SyzygyOracleReport {
    pub degree_bound: u32,
    pub taus: Vec<Tau>,
    /// Dimension of the space of module vectors of degree ≤ the bound.
    pub slice_dimension: usize,
    /// A basis of the syzygies inside that space.
    pub basis: Vec<ModuleVector>,
    pub certificates: Vec<SyzygyCertificate>,
    /// Basis syzygies that could not be written through the τ set within
    /// the bound.
    pub failures: Vec<ModuleVector>,
}

impl SyzygyOracleReport {
    pub fn certified(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Computes every syzygy whose components have degree ≤ `degree_bound` by
/// exact linear algebra, then expresses each one as a combination of the τ
/// generators with cofactors that keep every term inside the bound.
pub fn syzygy_oracle(leads: &[Deriv], degree_bound: u32) -> Result<SyzygyOracleReport> {
    let taus = tau_generators(leads)?;
    let k = leads.len();
    let n = leads.first().map_or(0, |d| d.order.len());

    // Coordinates (position, μ) of the slice.
    let mut coords: Vec<(usize, MultiIndex)> = Vec::new();
    let mut coord_index: HashMap<(usize, MultiIndex), usize> = HashMap::new();
    if n > 0 {
        for pos in 0..k {
            for mu in MultiIndex::all_up_to(n, degree_bound) {
                coord_index.insert((pos, mu.clone()), coords.len());
                coords.push((pos, mu));
            }
        }
    }

    // The map X^μ e_pos ↦ u^{q}_{α_pos + μ}.
    let mut images: HashMap<Deriv, usize> = HashMap::new();
    let mut kernel = Echelon::new();
    for (pos, mu) in &coords {
        let image = leads[*pos].shifted(mu);
        let next = images.len();
        let row = *images.entry(image).or_insert(next);
        kernel.push(&SparseVec::from([(row, Rational::one())]));
    }
    let basis: Vec<ModuleVector> = kernel
        .kernel()
        .iter()
        .map(|v| {
            let mut out = ModuleVector::zero(k);
            for (c, val) in v {
                let (pos, mu) = &coords[*c];
                out.0[*pos].add_term(mu.clone(), val.clone());
            }
            out
        })
        .collect();

    // Columns X^ν τ_t kept inside the slice.
    let mut span = Echelon::new();
    let mut products: Vec<(usize, MultiIndex)> = Vec::new();
    for (t, tau) in taus.iter().enumerate() {
        if tau.degree() > degree_bound {
            continue;
        }
        for nu in MultiIndex::all_up_to(n, degree_bound - tau.degree()) {
            let col = SparseVec::from([
                (coord_index[&(tau.i, nu.plus(&tau.shift_i))], Rational::one()),
                (coord_index[&(tau.j, nu.plus(&tau.shift_j))], -Rational::one()),
            ]);
            span.push(&col);
            products.push((t, nu));
        }
    }

    let mut certificates = Vec::new();
    let mut failures = Vec::new();
    for syz in &basis {
        let mut target = SparseVec::new();
        for (pos, p) in syz.0.iter().enumerate() {
            for (mu, c) in p.terms() {
                target.insert(coord_index[&(pos, mu.clone())], c.clone());
            }
        }
        let Some(coeffs) = span.solve(&target) else {
            failures.push(syz.clone());
            continue;
        };
        let mut cofactors: BTreeMap<usize, OperatorPoly> = BTreeMap::new();
        for (col, c) in coeffs {
            let (t, nu) = &products[col];
            cofactors.entry(*t).or_default().add_term(nu.clone(), c);
        }
        let cert = SyzygyCertificate {
            syzygy: syz.clone(),
            combination: cofactors.into_iter().filter(|(_, p)| !p.is_zero()).collect(),
        };
        if cert.verify(&taus) {
            certificates.push(cert);
        } else {
            failures.push(syz.clone());
        }
    }

    Ok(SyzygyOracleReport {
        degree_bound,
        taus,
        slice_dimension: coords.len(),
        basis,
        certificates,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, Ambient};
    use crate::normal::SolvedForm;
    use crate::ranking::Ranking;
    use crate::sample::Sampler;
    use proptest::prelude::*;
    use rand::Rng;

    fn d<const N: usize>(i: u32, a: [u32; N]) -> Deriv {
        Deriv::new(i, a)
    }

    fn mi<const N: usize>(a: [u32; N]) -> MultiIndex {
        a.into()
    }

    #[test]
    fn tau_examples() {
        let taus = tau_generators(&[d(1, [2, 0]), d(1, [0, 1])]).unwrap();
        assert_eq!(
            taus,
            vec![Tau {
                i: 0,
                j: 1,
                shift_i: mi([0, 1]),
                shift_j: mi([2, 0])
            }]
        );
        assert!(tau_generators(&[d(1, [1, 0]), d(2, [0, 1])]).unwrap().is_empty());
        assert!(matches!(
            tau_generators(&[d(1, [1, 0]), d(1, [1, 0])]),
            Err(Error::DuplicateLead(_))
        ));
    }

    #[test]
    fn module_apply_examples() {
        let leads = [d(1, [2, 0]), d(1, [0, 1])];
        let tau = tau_generators(&leads).unwrap()[0].vector(2);
        assert!(module_apply(&tau, &leads).unwrap().is_empty());
        let e1 = ModuleVector::term(2, 0, mi([0, 0]), int(1));
        assert_eq!(
            module_apply(&e1, &leads).unwrap(),
            BTreeMap::from([(d(1, [2, 0]), int(1))])
        );
        let shift = ModuleVector::term(1, 0, mi([1, 0]), int(1));
        assert_eq!(
            module_apply(&shift, &[d(1, [0, 0])]).unwrap(),
            BTreeMap::from([(d(1, [1, 0]), int(1))])
        );
        assert!(matches!(
            module_apply(&e1, &leads[..1]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    fn sys(eqs: Vec<(Deriv, DiffPoly)>) -> SolvedSystem {
        let eqs = eqs
            .into_iter()
            .map(|(l, t)| SolvedForm::new(l, t).unwrap())
            .collect();
        SolvedSystem::new(Ambient::new(2, 1).unwrap(), Ranking::Orderly, eqs).unwrap()
    }

    #[test]
    fn operator_apply_examples() {
        let h1 = DiffPoly::x(1) * DiffPoly::u(1, [0, 0]);
        let h2 = DiffPoly::x(2).pow(2);
        let s = sys(vec![(d(1, [1, 0]), h1.clone()), (d(1, [0, 1]), h2.clone())]);
        let tau = tau_generators(&s.leads()).unwrap()[0].vector(2);
        assert_eq!(
            operator_apply(&tau, &s).unwrap(),
            h1.total_derivative(2) - h2.total_derivative(1)
        );
        assert!(operator_apply(&ModuleVector::zero(2), &s).unwrap().is_zero());

        let heat = sys(vec![
            (d(1, [2, 0]), -DiffPoly::u(1, [0, 1])),
            (d(1, [0, 2]), DiffPoly::zero()),
        ]);
        let tau = tau_generators(&heat.leads()).unwrap()[0].vector(2);
        assert_eq!(operator_apply(&tau, &heat).unwrap(), -DiffPoly::u(1, [0, 3]));
    }

    #[test]
    fn oracle_examples() {
        let leads = [d(1, [2, 0]), d(1, [0, 1])];
        let report = syzygy_oracle(&leads, 3).unwrap();
        assert!(report.certified());
        assert!(!report.basis.is_empty());
        for syz in &report.basis {
            assert!(module_apply(syz, &leads).unwrap().is_empty());
            assert!(syz.degree().unwrap() <= 3);
        }

        let distinct = syzygy_oracle(&[d(1, [1, 0]), d(2, [0, 1]), d(3, [0, 0])], 4).unwrap();
        assert!(distinct.basis.is_empty() && distinct.certified());
        let single = syzygy_oracle(&[d(1, [1, 1])], 4).unwrap();
        assert!(single.basis.is_empty());
        assert!(syzygy_oracle(&[], 2).unwrap().basis.is_empty());
    }

    #[test]
    fn cross_shift_syzygy_is_a_multiple_of_tau() {
        // (X^β, −X^α) for leads u_α, u_β equals X^{min(α,β)} τ₁₂.
        let (a, b) = (mi([2, 1]), mi([1, 3]));
        let leads = [Deriv::new(1, a.clone()), Deriv::new(1, b.clone())];
        let dvec = ModuleVector::term(2, 0, b.clone(), int(1))
            .add(&ModuleVector::term(2, 1, a.clone(), int(-1)));
        assert!(module_apply(&dvec, &leads).unwrap().is_empty());
        let tau = tau_generators(&leads).unwrap()[0].vector(2);
        let via_tau = tau.mul_operator(&OperatorPoly::monomial(mi([1, 1]), int(1)));
        assert_eq!(via_tau, dvec);
        let report = syzygy_oracle(&leads, 4).unwrap();
        assert!(report.certified());
        assert!(report.basis.iter().all(|v| v.degree() <= Some(4)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn taus_are_syzygies_and_cancel_the_top(seed in any::<u64>()) {
            let mut s = Sampler::new(seed);
            let n = s.rng().gen_range(1..=3);
            let amb = Ambient::new(n, 2).unwrap();
            let system = s.solvable_system(&amb, &Ranking::Orderly, 4, 3, false);
            let leads = system.leads();
            for tau in tau_generators(&leads).unwrap() {
                let v = tau.vector(leads.len());
                prop_assert!(module_apply(&v, &leads).unwrap().is_empty());
                let top = Deriv::new(
                    leads[tau.i].unknown,
                    leads[tau.i].order.lcm(&leads[tau.j].order).unwrap(),
                );
                let combo = operator_apply(&v, &system).unwrap();
                prop_assert!(!combo.support_derivs().contains(&top));
            }
        }

        #[test]
        fn factorization_through_tau(seed in any::<u64>()) {
            let mut s = Sampler::new(seed);
            let n = s.rng().gen_range(1..=3);
            let a = s.multi_index(n, 3);
            let mut b = s.multi_index(n, 3);
            if b == a {
                b = b.bumped(0);
            }
            // μ + α = η + β = γ for some γ ≥ max(α, β).
            let gamma = a.lcm(&b).unwrap().plus(&s.multi_index(n, 2));
            let mu = a.divides_into(&gamma).unwrap();
            let eta = b.divides_into(&gamma).unwrap();
            let leads = [Deriv::new(1, a.clone()), Deriv::new(1, b.clone())];
            let tau = &tau_generators(&leads).unwrap()[0];
            let sigma = a.lcm(&b).unwrap().divides_into(&gamma).unwrap();
            let lhs = ModuleVector::term(2, 0, mu, int(1))
                .add(&ModuleVector::term(2, 1, eta, int(-1)));
            let rhs = tau.vector(2).mul_operator(&OperatorPoly::monomial(sigma, int(1)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn oracle_certifies_random_lead_sets(seed in any::<u64>()) {
            let mut s = Sampler::new(seed);
            let n = s.rng().gen_range(1..=3);
            let m = s.rng().gen_range(1..=2);
            let k = s.rng().gen_range(1..=5);
            let amb = Ambient::new(n, m).unwrap();
            let leads = s.distinct_derivs(&amb, k, 2);
            let bound = s.rng().gen_range(0..=3);
            let report = syzygy_oracle(&leads, bound).unwrap();
            prop_assert!(report.certified());
            for syz in &report.basis {
                prop_assert!(module_apply(syz, &leads).unwrap().is_empty());
            }
        }
    }
}
