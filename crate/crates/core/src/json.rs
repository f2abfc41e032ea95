//! JSON encodings of polynomials, derivatives, traces and reports.
//!
//! Variables are `["x", j]` or `["u", i, [α…]]`; a polynomial is a list of
//! `{"c": "p/q", "m": [[variable, exponent], …]}` terms in descending order.
//! Decoders report failures with a JSON path.

use serde_json::{json, Map, Value};

use crate::algebra::{format_rational, parse_rational, Deriv, DiffPoly, Monomial, Var};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::normal::{Solvability, SolvedForm, Step};
use crate::passivity::{
    Census, Coincidence, CompatibilityResult, NormalizedSlice, PassivityReport,
};
use crate::ranking::{AuditReport, ClassKey, Counterexample, Ranking};
use crate::syzygy::Tau;

pub fn multi_index(a: &MultiIndex) -> Value {
    json!(a.entries())
}

pub fn deriv(d: &Deriv) -> Value {
    json!(["u", d.unknown, d.order.entries()])
}

pub fn var(v: &Var) -> Value {
    match v {
        Var::X(j) => json!(["x", j]),
        Var::U(d) => deriv(d),
    }
}

pub fn poly(p: &DiffPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| {
                let factors: Vec<Value> = m.iter().map(|(v, e)| json!([var(v), e])).collect();
                json!({"c": format_rational(c), "m": factors})
            })
            .collect(),
    )
}

pub fn class_key(k: &ClassKey) -> Value {
    match k {
        ClassKey::Base => json!("base"),
        ClassKey::Block(key) => json!(key),
    }
}

pub fn ranking(r: &Ranking) -> Value {
    match r {
        Ranking::Weighted(rows) => json!({ "weights": rows }),
        builtin => json!(builtin.name()),
    }
}

pub fn trace(steps: &[Step]) -> Value {
    Value::Array(
        steps
            .iter()
            .map(|s| json!({"eq": s.eq, "shift": multi_index(&s.shift), "eliminated": deriv(&s.eliminated)}))
            .collect(),
    )
}

pub fn taus(taus: &[Tau]) -> Value {
    Value::Array(
        taus.iter()
            .map(|t| {
                json!({
                    "i": t.i,
                    "j": t.j,
                    "shift_i": multi_index(&t.shift_i),
                    "shift_j": multi_index(&t.shift_j),
                })
            })
            .collect(),
    )
}

pub fn solved_form(f: &SolvedForm) -> Value {
    json!({"lead": deriv(f.lead()), "tail": poly(f.tail())})
}

pub fn solvability(s: &Solvability) -> Value {
    let violations: Vec<Value> = s
        .violations
        .iter()
        .map(|v| {
            json!({
                "eq": v.index,
                "lead_class": class_key(&v.lead_class),
                "tail_class": class_key(&v.tail_class),
            })
        })
        .collect();
    json!({"holds": s.holds(), "violations": violations})
}

pub fn compatibility(r: &CompatibilityResult) -> Value {
    json!({
        "i": r.tau.i,
        "j": r.tau.j,
        "shift_i": multi_index(&r.tau.shift_i),
        "shift_j": multi_index(&r.tau.shift_j),
        "status": r.status.name(),
        "class_bound": class_key(&r.class_bound),
        "combination": poly(&r.combination),
        "remainder": poly(&r.remainder),
        "trace": trace(&r.trace),
    })
}

pub fn coincidence(c: &Coincidence) -> Value {
    json!({
        "kept": c.kept,
        "other": c.other,
        "lead": deriv(&c.lead),
        "status": c.status.name(),
        "relation": poly(&c.relation),
    })
}

pub fn census(c: &Census) -> Value {
    let counts: Map<String, Value> = c
        .counts
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    json!({
        "order_bound": c.order_bound,
        "principal": c.principal.iter().map(deriv).collect::<Vec<_>>(),
        "parametric": c.parametric.iter().map(deriv).collect::<Vec<_>>(),
        "counts": counts,
    })
}

pub fn slice(s: &NormalizedSlice) -> Value {
    json!({
        "order_bound": s.order_bound,
        "size": s.forms.len(),
        "certified": s.certified(),
        "issues": s.issues,
    })
}

pub fn report(r: &PassivityReport) -> Value {
    json!({
        "verdict": r.verdict.name(),
        "solvability": solvability(&r.solvability),
        "theta": r.theta.as_ref().map_or(Value::Null, class_key),
        "pairs": r.pairs.iter().map(compatibility).collect::<Vec<_>>(),
        "coincidences": r.coincidences.iter().map(coincidence).collect::<Vec<_>>(),
        "census": r.census.as_ref().map_or(Value::Null, census),
        "normalized_slice": r.slice.as_ref().map_or(Value::Null, slice),
    })
}

pub fn counterexample(c: &Counterexample) -> Value {
    json!({
        "axiom": c.axiom.name(),
        "u": deriv(&c.u),
        "v": c.v.as_ref().map_or(Value::Null, deriv),
        "direction": c.direction,
        "message": c.to_string(),
    })
}

pub fn audit(r: &Ranking, report: &AuditReport, exhaustive_order: u32) -> Value {
    json!({
        "ranking": ranking(r),
        "passed": report.passed(),
        "exhaustive_order": exhaustive_order,
        "exhaustive_checks": report.exhaustive_checks,
        "sampled_checks": report.sampled_checks,
        "violations": report.violations,
        "counterexamples": report.counterexamples.iter().map(counterexample).collect::<Vec<_>>(),
    })
}

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::parse(path, message)
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

pub fn parse_u32(v: &Value, path: &str) -> Result<u32> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| err(path, "expected a non-negative integer"))
}

pub fn parse_multi_index(v: &Value, path: &str) -> Result<MultiIndex> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(k, e)| parse_u32(e, &format!("{path}[{k}]")))
        .collect::<Result<Vec<_>>>()
        .map(MultiIndex::new)
}

pub fn parse_deriv(v: &Value, path: &str) -> Result<Deriv> {
    match as_array(v, path)?.as_slice() {
        [tag, i, a] if tag == "u" => Ok(Deriv::new(
            parse_u32(i, &format!("{path}[1]"))?,
            parse_multi_index(a, &format!("{path}[2]"))?,
        )),
        _ => Err(err(path, "expected [\"u\", i, [α…]]")),
    }
}

pub fn parse_var(v: &Value, path: &str) -> Result<Var> {
    match as_array(v, path)?.as_slice() {
        [tag, j] if tag == "x" => Ok(Var::X(parse_u32(j, &format!("{path}[1]"))?)),
        [tag, _, _] if tag == "u" => Ok(Var::U(parse_deriv(v, path)?)),
        _ => Err(err(path, "expected [\"x\", j] or [\"u\", i, [α…]]")),
    }
}

pub fn parse_poly(v: &Value, path: &str) -> Result<DiffPoly> {
    let mut out = DiffPoly::zero();
    for (k, term) in as_array(v, path)?.iter().enumerate() {
        let tpath = format!("{path}[{k}]");
        let obj = term
            .as_object()
            .ok_or_else(|| err(&tpath, "expected an object with keys \"c\" and \"m\""))?;
        if let Some(extra) = obj.keys().find(|k| *k != "c" && *k != "m") {
            return Err(err(&tpath, format!("unknown key \"{extra}\"")));
        }
        let cpath = format!("{tpath}.c");
        let c = obj
            .get("c")
            .and_then(Value::as_str)
            .ok_or_else(|| err(&cpath, "expected a rational string such as \"-3/4\""))?;
        let c = parse_rational(c).ok_or_else(|| err(&cpath, format!("invalid rational \"{c}\"")))?;
        let mpath = format!("{tpath}.m");
        let factors = as_array(obj.get("m").unwrap_or(&Value::Null), &mpath)?;
        let mut pairs = Vec::new();
        for (f, factor) in factors.iter().enumerate() {
            let fpath = format!("{mpath}[{f}]");
            match as_array(factor, &fpath)?.as_slice() {
                [var, e] => pairs.push((
                    parse_var(var, &format!("{fpath}[0]"))?,
                    parse_u32(e, &format!("{fpath}[1]"))?,
                )),
                _ => return Err(err(&fpath, "expected [variable, exponent]")),
            }
        }
        out.add_term(Monomial::from_pairs(pairs), c);
    }
    Ok(out)
}

pub fn parse_ranking(v: &Value, path: &str) -> Result<Ranking> {
    match v {
        Value::String(s) if s == "orderly" => Ok(Ranking::Orderly),
        Value::String(s) if s == "elimination" => Ok(Ranking::Elimination),
        Value::Object(obj) if obj.len() == 1 && obj.contains_key("weights") => {
            let wpath = format!("{path}.weights");
            let rows = as_array(&obj["weights"], &wpath)?
                .iter()
                .enumerate()
                .map(|(r, row)| {
                    let rpath = format!("{wpath}[{r}]");
                    as_array(row, &rpath)?
                        .iter()
                        .enumerate()
                        .map(|(c, x)| {
                            x.as_i64()
                                .ok_or_else(|| err(&format!("{rpath}[{c}]"), "expected an integer"))
                        })
                        .collect::<Result<Vec<i64>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if rows.is_empty() {
                return Err(err(&wpath, "at least one weight row is required"));
            }
            Ok(Ranking::Weighted(rows))
        }
        _ => Err(err(
            path,
            "expected \"orderly\", \"elimination\" or {\"weights\": [[…], …]}",
        )),
    }
}
