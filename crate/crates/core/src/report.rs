//! JSON reports (schema `dualcheck-report/1`) and their text rendering.

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::guards::Guards;
use crate::primality::{Verdict, Witness};
use crate::text::{render, Document};

pub const SCHEMA: &str = "dualcheck-report/1";

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_hex(text: &str) -> String {
    hex(&Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureInfo {
    pub reference: String,
    pub name: String,
    pub kind: crate::text::StructureKind,
    pub size: usize,
    /// SHA-256 of the canonical document text.
    pub sha256: String,
}

impl StructureInfo {
    pub fn new(reference: &str, doc: &Document) -> Self {
        StructureInfo {
            reference: reference.to_string(),
            name: doc.name.clone(),
            kind: doc.kind(),
            size: doc.structure.len(),
            sha256: sha256_hex(&render(doc)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub guards: Guards,
    pub structures: Vec<StructureInfo>,
    pub result: Value,
}

impl Report {
    pub fn new(command: Vec<String>, guards: &Guards) -> Self {
        Report {
            schema: SCHEMA,
            command,
            guards: guards.clone(),
            structures: Vec::new(),
            result: Value::Null,
        }
    }

    /// The JSON value with `digest` (SHA-256 of everything except timing)
    /// and `timing_ms`.
    pub fn finish(&self, timing_ms: f64) -> Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        let digest = sha256_hex(&v.to_string());
        let obj = v.as_object_mut().expect("object");
        obj.insert("digest".into(), Value::String(digest));
        obj.insert("timing_ms".into(), json!(timing_ms));
        v
    }
}

/// The digest a finished report should carry.
pub fn recompute_digest(finished: &Value) -> String {
    let mut v = finished.clone();
    if let Some(obj) = v.as_object_mut() {
        obj.remove("digest");
        obj.remove("timing_ms");
    }
    sha256_hex(&v.to_string())
}

/// The verdict as JSON, plus `named_witness` with element names from the
/// documents the indices refer to. `docs[i]` names member `i`.
pub fn verdict_json(verdict: &Verdict, docs: &[&Document]) -> Value {
    let mut v = serde_json::to_value(verdict).expect("verdicts serialize");
    if let Some(w) = &verdict.witness {
        if let Some(named) = name_witness(w, docs) {
            v.as_object_mut()
                .expect("object")
                .insert("named_witness".into(), named);
        }
    }
    v
}

fn name(doc: Option<&&Document>, i: usize) -> Value {
    match doc {
        Some(d) if i < d.names.len() => Value::String(d.names[i].clone()),
        _ => json!(i),
    }
}

fn name_witness(w: &Witness, docs: &[&Document]) -> Option<Value> {
    match w {
        Witness::BadSubuniverse {
            left,
            right,
            members,
            classification,
            ..
        } => {
            let (l, r) = (docs.get(*left), docs.get(*right));
            let pair = |p: (usize, usize)| json!([name(l, p.0), name(r, p.1)]);
            let mut out = Map::new();
            out.insert("members".into(), Value::Array(members.iter().map(|&p| pair(p)).collect()));
            if let Some(v) = &classification.violation {
                out.insert("missing_pair".into(), pair(v.missing));
                out.insert("clash".into(), json!([pair(v.clash.0), pair(v.clash.1)]));
            }
            Some(Value::Object(out))
        }
        Witness::Monotone { member, refutation } => {
            let d = docs.get(*member);
            Some(json!({
                "low": name(d, refutation.low),
                "high": name(d, refutation.high),
                "reason": "every term operation is order-preserving, so τ(low, low, high) = high and τ(low, high, high) = low cannot both hold",
            }))
        }
        Witness::Congruence { blocks } => {
            let d = docs.first();
            let mut classes: Vec<Vec<Value>> = Vec::new();
            for (i, &b) in blocks.iter().enumerate() {
                if classes.len() <= b {
                    classes.resize(b + 1, Vec::new());
                }
                classes[b].push(name(d, i));
            }
            Some(json!({ "classes": classes }))
        }
        _ => None,
    }
}

/// Text rendering of a JSON value: one `key: value` per line, nested values
/// indented.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array() || is_flat(i)) => {
            let parts: Vec<String> = items.iter().map(|i| scalar(i).unwrap_or_default()).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn is_flat(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.iter().all(|i| !i.is_object() && (!i.is_array() || is_flat(i))))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, x, indent + 1);
                    }
                }
            }
        }
        Value::String(s) => {
            for line in s.lines() {
                out.push_str(&format!("{pad}{line}\n"));
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_ignores_timing() {
        let mut r = Report::new(vec!["check".into()], &Guards::default());
        r.result = json!({"outcome": "yes"});
        let a = r.finish(1.0);
        let b = r.finish(2.0);
        assert_eq!(a["digest"], b["digest"]);
        assert_eq!(recompute_digest(&a), a["digest"].as_str().unwrap());
        assert_eq!(
            sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn text_rendering() {
        let v = json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": true}]});
        assert_eq!(render_text(&v), "a: 1\nb:\n  c: [1, 2]\nd:\n  -\n    e: true\n");
    }
}
