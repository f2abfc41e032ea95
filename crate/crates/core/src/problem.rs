//! Problem files: an ambient, a ranking, solved-form equations and bounds.
//!
//! ```json
//! {
//!   "n": 2, "m": 1,
//!   "ranking": "orderly",
//!   "equations": [{"lead": ["u", 1, [2, 0]], "tail": [{"c": "-1", "m": [[["u", 1, [0, 1]], 1]]}]}],
//!   "bounds": {"order_bound": 6, "degree_bound": 3, "max_steps": 100000}
//! }
//! ```

use serde_json::{json, Map, Value};

use crate::algebra::Ambient;
use crate::error::{Error, Result};
use crate::json;
use crate::normal::{SolvedForm, SolvedSystem};
use crate::passivity::{self, Bounds, PassivityReport};
use crate::ranking::Ranking;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub ambient: Ambient,
    pub ranking: Ranking,
    /// As written; leads may repeat.
    pub equations: Vec<SolvedForm>,
    pub bounds: Bounds,
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::parse(path, format!("unknown key \"{k}\""))),
        None => Ok(()),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::parse(path, format!("missing key \"{key}\"")))
}

fn located(e: Error, path: &str) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::parse(path, other.to_string()),
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            let message = e.to_string();
            let message = message.split(" at line ").next().unwrap_or_default().to_string();
            Error::parse(format!("line {}, column {}", e.line(), e.column()), message)
        })?;
        Self::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::parse("$", "expected an object"))?;
        check_keys(obj, &["n", "m", "ranking", "equations", "bounds"], "$")?;
        let n = json::parse_u32(required(obj, "n", "$")?, "$.n")? as usize;
        let m = json::parse_u32(required(obj, "m", "$")?, "$.m")?;
        let ambient = Ambient::new(n, m).map_err(|e| located(e, "$"))?;
        let ranking = match obj.get("ranking") {
            Some(v) => json::parse_ranking(v, "$.ranking")?,
            None => Ranking::Orderly,
        };
        ranking
            .check_ambient(&ambient)
            .map_err(|e| located(e, "$.ranking"))?;

        let mut equations = Vec::new();
        let eqs = required(obj, "equations", "$")?
            .as_array()
            .ok_or_else(|| Error::parse("$.equations", "expected an array"))?;
        for (k, eq) in eqs.iter().enumerate() {
            let path = format!("$.equations[{k}]");
            let eq = eq
                .as_object()
                .ok_or_else(|| Error::parse(&path, "expected an object"))?;
            check_keys(eq, &["lead", "tail"], &path)?;
            let lpath = format!("{path}.lead");
            let lead = json::parse_deriv(required(eq, "lead", &path)?, &lpath)?;
            ambient.check_deriv(&lead).map_err(|e| located(e, &lpath))?;
            let tpath = format!("{path}.tail");
            let tail = match eq.get("tail") {
                Some(t) => json::parse_poly(t, &tpath)?,
                None => crate::algebra::DiffPoly::zero(),
            };
            ambient.check_poly(&tail).map_err(|e| located(e, &tpath))?;
            equations.push(SolvedForm::new(lead, tail).map_err(|e| located(e, &tpath))?);
        }

        let mut bounds = Bounds::default();
        if let Some(b) = obj.get("bounds") {
            let b = b
                .as_object()
                .ok_or_else(|| Error::parse("$.bounds", "expected an object"))?;
            check_keys(b, &["order_bound", "degree_bound", "max_steps"], "$.bounds")?;
            if let Some(v) = b.get("order_bound") {
                bounds.order_bound = json::parse_u32(v, "$.bounds.order_bound")?;
            }
            if let Some(v) = b.get("degree_bound") {
                bounds.degree_bound = json::parse_u32(v, "$.bounds.degree_bound")?;
            }
            if let Some(v) = b.get("max_steps") {
                bounds.max_steps = json::parse_u32(v, "$.bounds.max_steps")? as usize;
            }
        }
        Ok(ProblemFile {
            ambient,
            ranking,
            equations,
            bounds,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.ambient.n,
            "m": self.ambient.m,
            "ranking": json::ranking(&self.ranking),
            "equations": self.equations.iter().map(json::solved_form).collect::<Vec<_>>(),
            "bounds": {
                "order_bound": self.bounds.order_bound,
                "degree_bound": self.bounds.degree_bound,
                "max_steps": self.bounds.max_steps,
            },
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    /// The system with distinct leads; repeated leads are an error here.
    pub fn system(&self) -> Result<SolvedSystem> {
        SolvedSystem::new(self.ambient, self.ranking.clone(), self.equations.clone())
    }

    /// Coincident-lead analysis followed by the passivity test.
    pub fn analyze(&self) -> Result<PassivityReport> {
        passivity::analyze(
            self.ambient,
            self.ranking.clone(),
            self.equations.clone(),
            &self.bounds,
        )
    }
}
