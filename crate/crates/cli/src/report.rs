//! Reports: a fixed envelope (`schema_version`, `command`, `input`,
//! `warnings`) plus a flat payload. JSON keys come out sorted because
//! `serde_json::Map` is ordered; rationals print as `a/b` and operators in the
//! input grammar.

use dfstab_core::ore::{ore_mul, OreOp};
use dfstab_core::stability::{ChainReport, NormalForm, SindReport, StepCase};
use dfstab_core::RatFun;
use serde_json::{json, Map, Value};

use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub input: Value,
    pub warnings: Vec<String>,
    payload: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, input: Value) -> Self {
        Report {
            command: command.to_string(),
            input,
            warnings: Vec::new(),
            payload: Map::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.payload.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.payload.get(key)
    }

    pub fn to_json(&self) -> Value {
        let mut m = self.payload.clone();
        m.insert("schema_version".into(), SCHEMA_VERSION.into());
        m.insert("command".into(), self.command.clone().into());
        m.insert("input".into(), self.input.clone());
        m.insert("warnings".into(), self.warnings.clone().into());
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json().to_string(),
            Format::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut out = format!("{} (schema {SCHEMA_VERSION})\n", self.command);
        if let Some(Value::Array(steps)) = self.payload.get("steps") {
            // chains read better as one line per operator
            let orders = self.payload["orders"].as_array().cloned().unwrap_or_default();
            out += &format!(
                "L_0: ord={}, case=input, op={}\n",
                orders[0],
                text_of(&self.payload["base"])
            );
            for (i, s) in steps.iter().enumerate() {
                out += &format!(
                    "L_{}: ord={}, case={}, op={}\n",
                    i + 1,
                    orders[i + 1],
                    text_of(&s["case"]),
                    text_of(&s["operator"])
                );
            }
            for (k, v) in &self.payload {
                if !matches!(k.as_str(), "steps" | "orders" | "base") {
                    out += &format!("{k}: {}\n", text_of(v));
                }
            }
        } else {
            for (k, v) in &self.payload {
                out += &format!("{k}: {}\n", text_of(v));
            }
        }
        for w in &self.warnings {
            out += &format!("warning: {w}\n");
        }
        out
    }
}

fn text_of(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn opt_string<T: ToString>(x: Option<&T>) -> Value {
    x.map_or(Value::Null, |x| x.to_string().into())
}

pub(crate) fn chain_payload(r: &mut Report, chain: &ChainReport) {
    let steps: Vec<Value> = chain
        .steps
        .iter()
        .map(|s| {
            json!({
                "operator": s.operator.to_string(),
                "case": s.case.to_string(),
                "certificate_l": opt_string(s.certificate_l.as_ref()),
                "certificate_H": opt_string(s.certificate_h.as_ref()),
            })
        })
        .collect();
    r.set("base", chain.base.to_string());
    r.set("steps", steps);
    r.set("orders", chain.orders.clone());
    r.set("verified_identity", chain.verified_identity);
}

/// Rechecks one step from its parts: `delta0` must be `prev*D`; `delta1`
/// needs `l prev + D H = 1` and `next` the monic form of `(1/l)(1 - H D)`.
pub fn step_certificate_holds(
    prev: &OreOp,
    case: StepCase,
    l: Option<&RatFun>,
    h: Option<&OreOp>,
    next: &OreOp,
) -> bool {
    match (case, l, h) {
        (StepCase::Delta0, None, None) => *next == ore_mul(prev, &OreOp::d()),
        (StepCase::Delta1, Some(l), Some(h)) => {
            let Ok(inv) = l.inv() else { return false };
            let bezout = &prev.scale_left(l) + &ore_mul(&OreOp::d(), h);
            let integral = (&OreOp::one() - &ore_mul(h, &OreOp::d())).scale_left(&inv);
            bezout.is_one() && integral.monic().is_ok_and(|m| m == *next)
        }
        _ => false,
    }
}

pub(crate) fn certificates_hold(chain: &ChainReport) -> bool {
    chain.operators().zip(&chain.steps).all(|(prev, s)| {
        step_certificate_holds(
            prev,
            s.case,
            s.certificate_l.as_ref(),
            s.certificate_h.as_ref(),
            &s.operator,
        )
    })
}

pub(crate) fn sind_payload(r: &mut Report, s: &SindReport) {
    let witnesses: Map<String, Value> = s
        .witnesses
        .iter()
        .map(|(deg, (p, y))| (deg.to_string(), json!({ "p": p.to_string(), "y": y.to_string() })))
        .collect();
    r.set("operator", s.operator.to_string());
    r.set("B", s.b);
    r.set("missing_degrees", s.missing_degrees.clone());
    r.set("sind", s.sind);
    r.set("witnesses", Value::Object(witnesses));
    r.warnings = s.warnings.clone();
}

pub(crate) fn normal_form(nf: &NormalForm) -> Value {
    let h = nf.h().to_string();
    match nf {
        NormalForm::Zero { .. } => json!({ "kind": "zero", "h": h }),
        NormalForm::Constant { alpha, .. } => json!({ "kind": "constant", "h": h, "alpha": alpha.to_string() }),
        NormalForm::OnePole { beta, c, .. } => {
            json!({ "kind": "one_pole", "h": h, "beta": beta.to_string(), "c": c.to_string() })
        }
        NormalForm::Other { g, .. } => json!({ "kind": "other", "h": h, "g": g.to_string() }),
    }
}
