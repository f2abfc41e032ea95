//! Compatibility checks along the τ pairs, the passivity verdict, and the
//! bounded description of the quotient by the orbit ideal.

use std::collections::BTreeMap;

use crate::algebra::{Ambient, Deriv, DiffPoly};
use crate::error::{Error, Result};
use crate::normal::{
    check_normalized, Solvability, SolvedForm, SolvedSystem, Step, DEFAULT_MAX_STEPS,
};
use crate::ranking::{ClassKey, Ranking};
use crate::syzygy::{operator_apply, tau_generators, Tau};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Highest derivative order enumerated by the census and the normalized
    /// slice.
    pub order_bound: u32,
    /// Cofactor degree used by oracle cross-checks.
    pub degree_bound: u32,
    pub max_steps: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            order_bound: 6,
            degree_bound: 3,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairStatus {
    Satisfied,
    Obstructed,
    Inconsistent,
}

impl PairStatus {
    pub fn name(self) -> &'static str {
        match self {
            PairStatus::Satisfied => "satisfied",
            PairStatus::Obstructed => "obstructed",
            PairStatus::Inconsistent => "inconsistent",
        }
    }

    fn of_remainder(r: &DiffPoly) -> Self {
        if r.is_zero() {
            PairStatus::Satisfied
        } else if r.support_derivs().is_empty() {
            PairStatus::Inconsistent
        } else {
            PairStatus::Obstructed
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityResult {
    pub tau: Tau,
    /// D^{shift_i} f_i − D^{shift_j} f_j
    pub combination: DiffPoly,
    pub class_bound: ClassKey,
    pub remainder: DiffPoly,
    pub trace: Vec<Step>,
    pub status: PairStatus,
}

/// Forms the τ combination, confirms the shared top derivative cancels, and
/// reduces what is left.
pub fn check_pair(sys: &SolvedSystem, tau: &Tau, bounds: &Bounds) -> Result<CompatibilityResult> {
    let combination = operator_apply(&tau.vector(sys.len()), sys)?;
    let (a, b) = (&sys.equations()[tau.i], &sys.equations()[tau.j]);
    let top = Deriv::new(a.lead().unknown, a.lead().order.lcm(&b.lead().order)?);
    if combination.support_derivs().contains(&top) {
        return Err(Error::Structural(format!(
            "pair ({}, {}) leaves {top} uncancelled",
            tau.i, tau.j
        )));
    }
    let class_bound = sys.ranking().class_of(&combination);
    let reduction = sys.reduce(&combination, bounds.max_steps)?;
    let status = PairStatus::of_remainder(&reduction.remainder);
    Ok(CompatibilityResult {
        tau: tau.clone(),
        combination,
        class_bound,
        remainder: reduction.remainder,
        trace: reduction.trace,
        status,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Passive,
    NotPassive,
    Inconsistent,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Passive => "passive",
            Verdict::NotPassive => "not-passive",
            Verdict::Inconsistent => "inconsistent",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Passive => 0,
            Verdict::NotPassive => 2,
            Verdict::Inconsistent => 3,
        }
    }
}

/// Principal and parametric derivatives up to an order bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub order_bound: u32,
    pub principal: Vec<Deriv>,
    pub parametric: Vec<Deriv>,
    /// Number of parametric derivatives of each total order.
    pub counts: BTreeMap<u32, usize>,
}

pub fn quotient_census(sys: &SolvedSystem, order_bound: u32) -> Census {
    let mut counts: BTreeMap<u32, usize> = (0..=order_bound).map(|k| (k, 0)).collect();
    let (principal, parametric): (Vec<Deriv>, Vec<Deriv>) = sys
        .ambient()
        .derivs_up_to(order_bound)
        .into_iter()
        .partition(|d| sys.is_principal(d));
    for d in &parametric {
        *counts.entry(d.order.order()).or_default() += 1;
    }
    Census {
        order_bound,
        principal,
        parametric,
        counts,
    }
}

/// The normalized generators v − Φ(v) for every principal v within the
/// order bound, where Φ is reduction by the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedSlice {
    pub order_bound: u32,
    pub forms: Vec<SolvedForm>,
    /// Violations of the bounded form of "leads = orbit of the leads".
    pub issues: Vec<String>,
}

impl NormalizedSlice {
    pub fn certified(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn normalized_slice(sys: &SolvedSystem, bounds: &Bounds) -> Result<NormalizedSlice> {
    let mut forms = Vec::new();
    let mut issues = Vec::new();
    for v in sys.ambient().derivs_up_to(bounds.order_bound) {
        let Some((eq, shift)) = sys.find_principal(&v) else {
            continue;
        };
        let tail = sys
            .reduce(
                &sys.equations()[eq].tail().total_derivative_multi(&shift),
                bounds.max_steps,
            )?
            .remainder;
        if let Some(bad) = tail.support_derivs().into_iter().find(|d| sys.is_principal(d)) {
            issues.push(format!("tail of {v} contains principal {bad}"));
        }
        match SolvedForm::new(v.clone(), tail) {
            Ok(f) => forms.push(f),
            Err(e) => issues.push(e.to_string()),
        }
    }
    if let Err(e) = check_normalized(&forms) {
        issues.push(e.to_string());
    }
    for form in &forms {
        if !sys.is_principal(form.lead()) {
            issues.push(format!("lead {} is not in the orbit", form.lead()));
        }
    }
    let census = quotient_census(sys, bounds.order_bound);
    if census.principal.len() != forms.len() {
        issues.push(format!(
            "{} principal derivatives but {} normalized leads",
            census.principal.len(),
            forms.len()
        ));
    }
    Ok(NormalizedSlice {
        order_bound: bounds.order_bound,
        forms,
        issues,
    })
}

/// What happened to an equation whose lead repeats an earlier one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coincidence {
    /// Position of the retained equation in the raw input.
    pub kept: usize,
    /// Position of the equation with the same lead.
    pub other: usize,
    pub lead: Deriv,
    /// Reduced difference of the two equations; zero means a plain duplicate.
    pub relation: DiffPoly,
    pub status: PairStatus,
}

#[derive(Clone, Debug)]
pub struct CoincidenceAnalysis {
    pub system: SolvedSystem,
    pub coincidences: Vec<Coincidence>,
}

impl CoincidenceAnalysis {
    pub fn verdict(&self) -> Option<Verdict> {
        let worst = self.coincidences.iter().map(|c| c.status).max()?;
        match worst {
            PairStatus::Satisfied => None,
            PairStatus::Obstructed => Some(Verdict::NotPassive),
            PairStatus::Inconsistent => Some(Verdict::Inconsistent),
        }
    }
}

/// Keeps the first equation for each lead. The difference with each later
/// equation of the same lead is reduced against the kept system and reported.
pub fn coincident_lead_analysis(
    ambient: Ambient,
    ranking: Ranking,
    raw: Vec<SolvedForm>,
    bounds: &Bounds,
) -> Result<CoincidenceAnalysis> {
    let mut first: BTreeMap<Deriv, usize> = BTreeMap::new();
    let mut kept = Vec::new();
    let mut repeats = Vec::new();
    for (pos, form) in raw.iter().enumerate() {
        match first.get(form.lead()) {
            Some(&k) => repeats.push((k, pos)),
            None => {
                first.insert(form.lead().clone(), pos);
                kept.push(form.clone());
            }
        }
    }
    let system = SolvedSystem::new(ambient, ranking, kept)?;
    let solvable = system.check_conditionally_solvable().holds();
    let mut coincidences = Vec::new();
    for (k, pos) in repeats {
        let diff = raw[pos].tail() - raw[k].tail();
        let relation = if solvable {
            system.reduce(&diff, bounds.max_steps)?.remainder
        } else {
            diff
        };
        coincidences.push(Coincidence {
            kept: k,
            other: pos,
            lead: raw[k].lead().clone(),
            status: PairStatus::of_remainder(&relation),
            relation,
        });
    }
    Ok(CoincidenceAnalysis {
        system,
        coincidences,
    })
}

#[derive(Clone, Debug)]
pub struct PassivityReport {
    pub verdict: Verdict,
    pub solvability: Solvability,
    /// The least lead class; absent for an empty system.
    pub theta: Option<ClassKey>,
    pub pairs: Vec<CompatibilityResult>,
    pub coincidences: Vec<Coincidence>,
    /// Present when the verdict is passive.
    pub census: Option<Census>,
    pub slice: Option<NormalizedSlice>,
}

pub fn theta(sys: &SolvedSystem) -> Option<ClassKey> {
    sys.equations()
        .iter()
        .map(|e| sys.ranking().class_of_deriv(e.lead()))
        .min()
}

pub fn is_passive(sys: &SolvedSystem, bounds: &Bounds) -> Result<PassivityReport> {
    let solvability = sys.check_conditionally_solvable();
    let theta = theta(sys);
    let mut report = PassivityReport {
        verdict: Verdict::NotPassive,
        solvability,
        theta,
        pairs: Vec::new(),
        coincidences: Vec::new(),
        census: None,
        slice: None,
    };
    if !report.solvability.holds() {
        return Ok(report);
    }
    for tau in tau_generators(&sys.leads())? {
        report.pairs.push(check_pair(sys, &tau, bounds)?);
    }
    report.verdict = match report.pairs.iter().map(|p| p.status).max() {
        None | Some(PairStatus::Satisfied) => Verdict::Passive,
        Some(PairStatus::Obstructed) => Verdict::NotPassive,
        Some(PairStatus::Inconsistent) => Verdict::Inconsistent,
    };
    if report.verdict == Verdict::Passive {
        report.census = Some(quotient_census(sys, bounds.order_bound));
        report.slice = Some(normalized_slice(sys, bounds)?);
    }
    Ok(report)
}

/// Coincident-lead analysis followed by the passivity test. Information from
/// repeated leads can only worsen the verdict.
pub fn analyze(
    ambient: Ambient,
    ranking: Ranking,
    raw: Vec<SolvedForm>,
    bounds: &Bounds,
) -> Result<PassivityReport> {
    let analysis = coincident_lead_analysis(ambient, ranking, raw, bounds)?;
    let mut report = is_passive(&analysis.system, bounds)?;
    if let Some(v) = analysis.verdict() {
        if v == Verdict::Inconsistent || report.verdict == Verdict::Passive {
            report.verdict = v;
            report.census = None;
            report.slice = None;
        }
    }
    report.coincidences = analysis.coincidences;
    Ok(report)
}
