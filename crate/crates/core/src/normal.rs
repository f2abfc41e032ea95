//! Solved forms, conditional solvability, and division with remainder.
//!
//! An equation is stored as `lead + tail` and read as the rewrite rule
//! `lead → -tail`. Reduction against a system rewrites principal derivatives
//! (shifts of some lead) until only parametric derivatives remain.

use std::collections::{BTreeSet, HashMap};

use crate::algebra::{Ambient, Deriv, DiffPoly, Var};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::ranking::{AuditConfig, ClassKey, Ranking};

pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// f = lead + tail, with the tail independent of the lead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedForm {
    lead: Deriv,
    tail: DiffPoly,
}

impl SolvedForm {
    pub fn new(lead: Deriv, tail: DiffPoly) -> Result<Self> {
        if tail.contains_var(&Var::U(lead.clone())) {
            return Err(Error::LeadInTail(lead));
        }
        Ok(SolvedForm { lead, tail })
    }

    pub fn lead(&self) -> &Deriv {
        &self.lead
    }

    pub fn tail(&self) -> &DiffPoly {
        &self.tail
    }

    pub fn to_poly(&self) -> DiffPoly {
        &self.lead.to_poly() + &self.tail
    }
}

/// Outcome of the class test `[tail] ≺ [lead]` for one equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvabilityIssue {
    pub index: usize,
    pub lead_class: ClassKey,
    pub tail_class: ClassKey,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solvability {
    pub violations: Vec<SolvabilityIssue>,
}

impl Solvability {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One rewrite v ↦ D^shift(-tail_eq).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub eq: usize,
    pub shift: MultiIndex,
    pub eliminated: Deriv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub remainder: DiffPoly,
    pub trace: Vec<Step>,
}

impl Reduction {
    /// Highest order of any eliminated derivative.
    pub fn max_order(&self) -> u32 {
        self.trace
            .iter()
            .map(|s| s.eliminated.order.order())
            .max()
            .unwrap_or(0)
    }
}

/// A finite collection S of solved forms with pairwise distinct leads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedSystem {
    ambient: Ambient,
    ranking: Ranking,
    equations: Vec<SolvedForm>,
}

impl SolvedSystem {
    /// Validates shapes and lead distinctness. Weight rankings must also pass
    /// a bounded compatibility audit before they are accepted.
    pub fn new(ambient: Ambient, ranking: Ranking, equations: Vec<SolvedForm>) -> Result<Self> {
        ranking.check_ambient(&ambient)?;
        if !ranking.is_builtin() {
            let cfg = AuditConfig {
                exhaustive_order: 4,
                samples: 2_000,
                ..AuditConfig::default()
            };
            let report = ranking.audit(&ambient, &cfg)?;
            if let Some(c) = report.counterexamples.first() {
                return Err(Error::RankingRejected(c.to_string()));
            }
        }
        let mut seen = BTreeSet::new();
        for eq in &equations {
            ambient.check_deriv(&eq.lead)?;
            ambient.check_poly(&eq.tail)?;
            if !seen.insert(eq.lead.clone()) {
                return Err(Error::DuplicateLead(eq.lead.clone()));
            }
        }
        Ok(SolvedSystem {
            ambient,
            ranking,
            equations,
        })
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn equations(&self) -> &[SolvedForm] {
        &self.equations
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn leads(&self) -> Vec<Deriv> {
        self.equations.iter().map(|e| e.lead.clone()).collect()
    }

    /// The system with equation `k` removed.
    pub fn without(&self, k: usize) -> SolvedSystem {
        let mut equations = self.equations.clone();
        equations.remove(k);
        SolvedSystem {
            ambient: self.ambient,
            ranking: self.ranking.clone(),
            equations,
        }
    }

    pub(crate) fn with_equations(&self, equations: Vec<SolvedForm>) -> SolvedSystem {
        SolvedSystem {
            ambient: self.ambient,
            ranking: self.ranking.clone(),
            equations,
        }
    }

    pub fn check_conditionally_solvable(&self) -> Solvability {
        let violations = self
            .equations
            .iter()
            .enumerate()
            .filter_map(|(index, eq)| {
                let lead_class = self.ranking.class_of_deriv(&eq.lead);
                let tail_class = self.ranking.class_of(&eq.tail);
                (tail_class >= lead_class).then_some(SolvabilityIssue {
                    index,
                    lead_class,
                    tail_class,
                })
            })
            .collect();
        Solvability { violations }
    }

    fn require_solvable(&self) -> Result<()> {
        let check = self.check_conditionally_solvable();
        if !check.holds() {
            return Err(Error::NotConditionallySolvable {
                equations: check.violations.iter().map(|v| v.index).collect(),
            });
        }
        Ok(())
    }

    /// If `v` lies in the orbit of some lead, the equation and shift that
    /// reach it: the smallest |shift|, ties broken lexicographically.
    pub fn find_principal(&self, v: &Deriv) -> Option<(usize, MultiIndex)> {
        self.equations
            .iter()
            .enumerate()
            .filter(|(_, eq)| eq.lead.unknown == v.unknown)
            .filter_map(|(k, eq)| eq.lead.order.divides_into(&v.order).map(|s| (k, s)))
            .min_by(|(_, a), (_, b)| (a.order(), a).cmp(&(b.order(), b)))
    }

    pub fn is_principal(&self, v: &Deriv) -> bool {
        self.find_principal(v).is_some()
    }

    /// Rewrite `f` modulo the orbit of the system until no principal
    /// derivative remains, eliminating the ranking-greatest one first.
    pub fn reduce(&self, f: &DiffPoly, max_steps: usize) -> Result<Reduction> {
        self.require_solvable()?;
        self.ambient.check_poly(f)?;
        let mut current = f.clone();
        let mut trace = Vec::new();
        let mut replacements: HashMap<(usize, MultiIndex), DiffPoly> = HashMap::new();
        loop {
            let next = current
                .support_derivs()
                .into_iter()
                .filter_map(|d| self.find_principal(&d).map(|hit| (d, hit)))
                .max_by(|(a, _), (b, _)| self.ranking.total_cmp(a, b));
            let Some((v, (eq, shift))) = next else {
                break;
            };
            if trace.len() >= max_steps {
                return Err(Error::StepLimit {
                    steps: trace.len(),
                    last: current,
                });
            }
            let replacement = replacements
                .entry((eq, shift.clone()))
                .or_insert_with(|| self.equations[eq].tail.neg().total_derivative_multi(&shift));
            current = current.substitute(&Var::U(v.clone()), replacement);
            trace.push(Step {
                eq,
                shift,
                eliminated: v,
            });
        }
        Ok(Reduction {
            remainder: current,
            trace,
        })
    }

    /// Reduce every tail against the other equations. Leads are unchanged and
    /// the generated differential ideal is preserved.
    pub fn autoreduce(&self, max_steps: usize) -> Result<SolvedSystem> {
        self.require_solvable()?;
        let mut equations = Vec::with_capacity(self.len());
        for (k, eq) in self.equations.iter().enumerate() {
            let others = self.without(k);
            let tail = others.reduce(&eq.tail, max_steps)?.remainder;
            equations.push(SolvedForm::new(eq.lead.clone(), tail)?);
        }
        Ok(self.with_equations(equations))
    }
}

/// Remainder of `f` on division by a normalized set: substitute
/// `lead ↦ -tail` for every member. The order of substitution is irrelevant.
pub fn divide_by_normalized(f: &DiffPoly, set: &[SolvedForm]) -> Result<DiffPoly> {
    check_normalized(set)?;
    let mut out = f.clone();
    for form in set {
        out = out.substitute(&Var::U(form.lead.clone()), &form.tail.neg());
    }
    Ok(out)
}

pub fn check_normalized(set: &[SolvedForm]) -> Result<()> {
    let mut leads = BTreeSet::new();
    for form in set {
        if !leads.insert(Var::U(form.lead.clone())) {
            return Err(Error::NotNormalized(format!("lead {} repeats", form.lead)));
        }
    }
    for form in set {
        if let Some(bad) = form.tail.variables().intersection(&leads).next() {
            return Err(Error::NotNormalized(format!(
                "tail of {} mentions lead {bad}",
                form.lead
            )));
        }
    }
    Ok(())
}
