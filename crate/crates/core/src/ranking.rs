//! Rankings of derivative variables and the class function they induce.
//!
//! A ranking assigns every u^i_α a key; equal keys form one block U_γ and keys
//! are compared lexicographically. The built-in rankings have injective keys,
//! so their blocks are singletons. Weight rankings may merge derivatives into
//! coarser blocks. Downstream algorithms require the two compatibility axioms
//! for the shift action u^i_α ↦ u^i_{α+e_k}:
//!
//! * (a) u ≺ v implies shift_k(u) ≺ shift_k(v);
//! * (b) u ≺ shift_k(u).
//!
//! Both built-ins satisfy them by construction; [`Ranking::audit`] checks any
//! ranking on a bounded range plus random samples.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;

use crate::algebra::{Ambient, Deriv, DiffPoly};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::sample::Sampler;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ranking {
    /// Total order |α|, then unknown index, then α lexicographically.
    Orderly,
    /// Unknown index, then |α|, then α lexicographically.
    Elimination,
    /// Rows of linear functionals on (i, α₁, …, αₙ), compared in turn.
    Weighted(Vec<Vec<i64>>),
}

/// Identifies a block Φ_γ. `Base` is the bottom class of K[X].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKey {
    Base,
    Block(Vec<i64>),
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKey::Base => f.write_str("base"),
            ClassKey::Block(k) => write!(f, "{k:?}"),
        }
    }
}

/// The ranking-greatest derivative of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leader {
    pub deriv: Deriv,
    /// Set when other derivatives of the polynomial share the top block;
    /// `deriv` is then the lexicographically largest of them.
    pub block_tie: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    /// Shifts preserve strict order, axiom (a).
    PreservesOrder,
    /// Shifts strictly increase, axiom (b).
    IncreasesUnderShift,
    /// Shifts map one block into one block.
    PreservesBlocks,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::PreservesOrder => "a",
            Axiom::IncreasesUnderShift => "b",
            Axiom::PreservesBlocks => "blocks",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub axiom: Axiom,
    pub u: Deriv,
    /// The second derivative for the pairwise axioms.
    pub v: Option<Deriv>,
    /// 1-based shift direction.
    pub direction: usize,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.v {
            Some(v) => write!(
                f,
                "axiom ({}) fails for {} and {} under shift e{}",
                self.axiom.name(),
                self.u,
                v,
                self.direction
            ),
            None => write!(
                f,
                "axiom ({}) fails for {} under shift e{}",
                self.axiom.name(),
                self.u,
                self.direction
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditConfig {
    /// Every derivative of order ≤ this bound is checked exhaustively.
    pub exhaustive_order: u32,
    pub samples: usize,
    /// Random samples draw derivatives up to this order.
    pub sample_order: u32,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            exhaustive_order: 5,
            samples: 10_000,
            sample_order: 12,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub exhaustive_checks: usize,
    pub sampled_checks: usize,
    pub violations: usize,
    /// The first few counterexamples, verbatim.
    pub counterexamples: Vec<Counterexample>,
}

impl AuditReport {
    pub const KEPT_COUNTEREXAMPLES: usize = 16;

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn record(&mut self, c: Counterexample) {
        self.violations += 1;
        if self.counterexamples.len() < Self::KEPT_COUNTEREXAMPLES {
            self.counterexamples.push(c);
        }
    }
}

impl Ranking {
    pub fn name(&self) -> &'static str {
        match self {
            Ranking::Orderly => "orderly",
            Ranking::Elimination => "elimination",
            Ranking::Weighted(_) => "weights",
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, Ranking::Weighted(_))
    }

    /// Shape validation for weight rows: each needs n + 1 entries.
    pub fn check_ambient(&self, amb: &Ambient) -> Result<()> {
        if let Ranking::Weighted(rows) = self {
            if rows.is_empty() {
                return Err(Error::Structural("weight ranking has no rows".into()));
            }
            for row in rows {
                if row.len() != amb.n + 1 {
                    return Err(Error::LengthMismatch {
                        expected: amb.n + 1,
                        found: row.len(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn key(&self, d: &Deriv) -> Vec<i64> {
        let alpha = d.order.entries().iter().map(|&e| e as i64);
        let ord = d.order.order() as i64;
        let i = d.unknown as i64;
        match self {
            Ranking::Orderly => [ord, i].into_iter().chain(alpha).collect(),
            Ranking::Elimination => [i, ord].into_iter().chain(alpha).collect(),
            Ranking::Weighted(rows) => rows
                .iter()
                .map(|row| {
                    row[0] * i
                        + row[1..]
                            .iter()
                            .zip(d.order.entries())
                            .map(|(w, &e)| w * e as i64)
                            .sum::<i64>()
                })
                .collect(),
        }
    }

    /// Block comparison: `Equal` means same block.
    pub fn compare(&self, u: &Deriv, v: &Deriv) -> Ordering {
        self.key(u).cmp(&self.key(v))
    }

    pub fn compare_checked(&self, amb: &Ambient, u: &Deriv, v: &Deriv) -> Result<Ordering> {
        amb.check_deriv(u)?;
        amb.check_deriv(v)?;
        self.check_ambient(amb)?;
        Ok(self.compare(u, v))
    }

    /// Block comparison refined by lexicographic (i, α); a total order.
    pub fn total_cmp(&self, u: &Deriv, v: &Deriv) -> Ordering {
        self.compare(u, v).then_with(|| u.cmp(v))
    }

    pub fn class_of_deriv(&self, d: &Deriv) -> ClassKey {
        ClassKey::Block(self.key(d))
    }

    /// The block of 𝓕̂ containing `f`, or `Base` for elements of K[X].
    pub fn class_of(&self, f: &DiffPoly) -> ClassKey {
        f.support_derivs()
            .iter()
            .map(|d| self.class_of_deriv(d))
            .max()
            .unwrap_or(ClassKey::Base)
    }

    pub fn leading_derivative(&self, f: &DiffPoly) -> Option<Leader> {
        let support = f.support_derivs();
        let top = support.iter().max_by(|a, b| self.total_cmp(a, b))?.clone();
        let block_tie = support
            .iter()
            .any(|d| *d != top && self.compare(d, &top) == Ordering::Equal);
        Some(Leader {
            deriv: top,
            block_tie,
        })
    }

    fn check_single(&self, report: &mut AuditReport, u: &Deriv, k: usize) {
        if self.compare(u, &u.bumped(k)) != Ordering::Less {
            report.record(Counterexample {
                axiom: Axiom::IncreasesUnderShift,
                u: u.clone(),
                v: None,
                direction: k + 1,
            });
        }
    }

    fn check_pair(&self, report: &mut AuditReport, u: &Deriv, v: &Deriv, k: usize) {
        let before = self.compare(u, v);
        let after = self.compare(&u.bumped(k), &v.bumped(k));
        let axiom = match before {
            Ordering::Equal if after != Ordering::Equal => Axiom::PreservesBlocks,
            Ordering::Less if after != Ordering::Less => Axiom::PreservesOrder,
            Ordering::Greater if after != Ordering::Greater => Axiom::PreservesOrder,
            _ => return,
        };
        report.record(Counterexample {
            axiom,
            u: u.clone(),
            v: Some(v.clone()),
            direction: k + 1,
        });
    }

    /// Check the compatibility axioms for the generators e_1..e_n: all
    /// derivatives up to `exhaustive_order`, then `samples` random draws.
    /// Since the action is generated by e_1..e_n, generator checks suffice.
    pub fn audit(&self, amb: &Ambient, cfg: &AuditConfig) -> Result<AuditReport> {
        self.check_ambient(amb)?;
        let mut report = AuditReport::default();
        let derivs = amb.derivs_up_to(cfg.exhaustive_order);
        for k in 0..amb.n {
            for u in &derivs {
                self.check_single(&mut report, u, k);
                report.exhaustive_checks += 1;
            }
            for (a, u) in derivs.iter().enumerate() {
                for v in &derivs[a + 1..] {
                    self.check_pair(&mut report, u, v, k);
                    report.exhaustive_checks += 1;
                }
            }
        }
        let mut sampler = Sampler::new(cfg.seed);
        for _ in 0..cfg.samples {
            let u = sampler.deriv(amb, cfg.sample_order);
            let v = sampler.deriv(amb, cfg.sample_order);
            let k = sampler.rng().gen_range(0..amb.n);
            self.check_single(&mut report, &u, k);
            self.check_pair(&mut report, &u, &v, k);
            report.sampled_checks += 1;
        }
        Ok(report)
    }
}

/// shift_k(u) with a 1-based direction.
pub fn shift(u: &Deriv, direction: usize) -> Deriv {
    u.shifted(&MultiIndex::unit(u.order.len(), direction - 1))
}
