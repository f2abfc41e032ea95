//! Brute-force certificates for bounded ideal membership.
//!
//! Membership of a target in the ideal generated by finitely many
//! polynomials is decided within explicit bounds: cofactors range over
//! monomials of bounded degree in the variables that occur. A certificate is
//! a list of cofactors; a refusal only says nothing was found within bounds.

pub mod linalg;

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use crate::algebra::{DiffPoly, Monomial, Var};
use crate::multiindex::MultiIndex;
use crate::normal::SolvedSystem;
use crate::ranking::ClassKey;
use linalg::{Echelon, SparseVec};

/// D^shift f_eq.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prolongation {
    pub eq: usize,
    pub shift: MultiIndex,
    pub poly: DiffPoly,
}

/// Every D^β f_i with |β| + |order of lead_i| ≤ `order_bound`.
pub fn prolong(sys: &SolvedSystem, order_bound: u32) -> Vec<Prolongation> {
    let n = sys.ambient().n;
    let mut out = Vec::new();
    for (eq, form) in sys.equations().iter().enumerate() {
        let lead_order = form.lead().order.order();
        if lead_order > order_bound {
            continue;
        }
        let f = form.to_poly();
        for shift in MultiIndex::all_up_to(n, order_bound - lead_order) {
            let poly = f.total_derivative_multi(&shift);
            out.push(Prolongation { eq, shift, poly });
        }
    }
    out
}

/// The prolongations whose class is at most `class`.
pub fn prolong_below(sys: &SolvedSystem, order_bound: u32, class: &ClassKey) -> Vec<Prolongation> {
    prolong(sys, order_bound)
        .into_iter()
        .filter(|p| sys.ranking().class_of(&p.poly) <= *class)
        .collect()
}

#[derive(Clone, Debug)]
pub struct MembershipInstance {
    pub target: DiffPoly,
    pub generators: Vec<DiffPoly>,
    /// Total degree cap for cofactor monomials.
    pub cofactor_degree: u32,
    /// Derivatives of higher order are not used in cofactors.
    pub order_bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub cofactors: Vec<DiffPoly>,
}

impl Certificate {
    /// Σ q_i g_i == target, by exact expansion.
    pub fn verify(&self, inst: &MembershipInstance) -> bool {
        if self.cofactors.len() != inst.generators.len() {
            return false;
        }
        let mut sum = DiffPoly::zero();
        for (q, g) in self.cofactors.iter().zip(&inst.generators) {
            if !q.is_zero() {
                sum = &sum + &(q * g);
            }
        }
        sum == inst.target
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Certified(Certificate),
    RefusedAtBounds { columns: usize },
}

impl Membership {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Membership::Certified(c) => Some(c),
            Membership::RefusedAtBounds { .. } => None,
        }
    }
}

fn var_order(v: &Var) -> u32 {
    match v {
        Var::X(_) => 0,
        Var::U(d) => d.order.order(),
    }
}

/// All monomials of total degree ≤ `degree` in `vars`.
fn monomials_up_to(vars: &[Var], degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::one(), 0usize)];
    for _ in 0..degree {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (k, v) in vars.iter().enumerate().skip(*start) {
                let grown = m.mul(&Monomial::var(v.clone()));
                out.push(grown.clone());
                next.push((grown, k));
            }
        }
        frontier = next;
    }
    out
}

pub fn membership(inst: &MembershipInstance) -> Membership {
    let k = inst.generators.len();
    if inst.target.is_zero() {
        return Membership::Certified(Certificate {
            cofactors: vec![DiffPoly::zero(); k],
        });
    }
    let mut vars: BTreeSet<Var> = inst.target.variables();
    for g in &inst.generators {
        vars.extend(g.variables());
    }
    let vars: Vec<Var> = vars
        .into_iter()
        .filter(|v| var_order(v) <= inst.order_bound)
        .collect();
    let cofactor_monomials = monomials_up_to(&vars, inst.cofactor_degree);

    let mut rows: HashMap<Monomial, usize> = HashMap::new();
    let mut row_of = |m: Monomial| {
        let next = rows.len();
        *rows.entry(m).or_insert(next)
    };
    let mut echelon = Echelon::new();
    let mut columns: Vec<(usize, Monomial)> = Vec::new();
    for (i, g) in inst.generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        for m in &cofactor_monomials {
            let mut col = SparseVec::new();
            for (gm, c) in g.terms() {
                col.insert(row_of(gm.mul(m)), c.clone());
            }
            echelon.push(&col);
            columns.push((i, m.clone()));
        }
    }
    let mut target = SparseVec::new();
    for (m, c) in inst.target.terms() {
        target.insert(row_of(m.clone()), c.clone());
    }
    let Some(coeffs) = echelon.solve(&target) else {
        return Membership::RefusedAtBounds {
            columns: columns.len(),
        };
    };
    let mut cofactors = vec![DiffPoly::zero(); k];
    for (col, c) in coeffs {
        if c.is_zero() {
            continue;
        }
        let (i, m) = &columns[col];
        cofactors[*i].add_term(m.clone(), c);
    }
    Membership::Certified(Certificate { cofactors })
}
