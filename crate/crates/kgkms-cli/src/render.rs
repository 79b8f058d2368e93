//! Float normalization and the human-readable rendering of report documents.

use serde_json::{Number, Value};
use std::fmt::Write;

/// Rounds every non-integer number to 15 significant digits so that reports
/// are byte-identical across runs and platforms.
pub fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
            Number::from_f64(r).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, round_floats(x))).collect()),
        other => other,
    }
}

fn num(v: &Value) -> String {
    match v.as_f64() {
        Some(x) => format!("{x:.15}").trim_end_matches('0').trim_end_matches('.').to_string(),
        None => v.to_string(),
    }
}

fn vector(v: &Value) -> String {
    let parts: Vec<String> = v.as_array().map(|a| a.iter().map(num).collect()).unwrap_or_default();
    format!("({})", parts.join(", "))
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array().map(|a| a.iter().filter_map(Value::as_str).collect()).unwrap_or_default()
}

fn range(b: &Value) -> String {
    match b["kind"].as_str() {
        Some("above") => format!("beta > {}", num(&b["from"])),
        Some("point") => format!("beta = {}", num(&b["at"])),
        Some("between") => format!("{} < beta < {}", num(&b["from"]), num(&b["to"])),
        _ => b.to_string(),
    }
}

fn graph(out: &mut String, g: &Value) {
    let names = strings(&g["vertices"]);
    let _ = writeln!(out, "graph: {} vertices ({}), {} colours", names.len(), names.join(", "), g["k"]);
    if let Some(d) = g["disclaimer"].as_str() {
        let _ = writeln!(out, "note: {d}");
    }
}

/// Plain-text rendering of a (rounded) report document.
pub fn text(doc: &Value) -> String {
    let mut out = String::new();
    if let Some(e) = doc.get("error") {
        let _ = write!(out, "error [{} exit {}]: {}", e["kind"].as_str().unwrap_or("?"), e["code"], e["message"].as_str().unwrap_or(""));
        return out;
    }
    graph(&mut out, &doc["graph"]);
    match doc["command"].as_str() {
        Some("validate") => {
            let ss = &doc["sinks_sources"];
            let _ = writeln!(out, "valid");
            for (key, label) in [("sources", "sources"), ("sinks", "sinks"), ("absolute_sources", "absolute sources")] {
                let idx: Vec<String> = ss[key].as_array().map(|a| a.iter().map(Value::to_string).collect()).unwrap_or_default();
                let _ = writeln!(out, "{label}: [{}]", idx.join(", "));
            }
        }
        Some("report") => report(&mut out, doc),
        Some("verify") => {
            for c in doc["checks"].as_array().into_iter().flatten() {
                let status = c["status"].as_str().unwrap_or("?").to_uppercase();
                let _ = writeln!(out, "{status}  {} (value {}, tolerance {})", c["name"].as_str().unwrap_or(""), num(&c["value"]), num(&c["tolerance"]));
            }
            for n in strings(&doc["notices"]) {
                let _ = writeln!(out, "notice: {n}");
            }
            for n in strings(&doc["conditions"]) {
                let _ = writeln!(out, "condition: {n}");
            }
            let _ = write!(out, "{} failed", doc["failed"]);
        }
        _ => out.push_str(&doc.to_string()),
    }
    out.trim_end().to_string()
}

fn report(out: &mut String, doc: &Value) {
    let names = strings(&doc["graph"]["vertices"]);
    for c in doc["components"].as_array().into_iter().flatten() {
        let kind = if c["trivial"] == Value::Bool(true) { "trivial" } else { "nontrivial" };
        let _ = writeln!(out, "component {{{}}}: {kind}", strings(&c["vertices"]).join(", "));
    }
    let order: Vec<&str> = doc["ordering"]["order"]
        .as_array()
        .into_iter()
        .flatten()
        .filter_map(|i| i.as_u64().and_then(|i| names.get(i as usize).copied()))
        .collect();
    let _ = writeln!(out, "vertex order: {}", order.join(", "));
    let rho: Vec<String> = doc["spectral"]["rho"].as_array().into_iter().flatten().map(|r| num(&r["value"])).collect();
    let _ = writeln!(out, "spectral radii: ({})", rho.join(", "));
    let _ = writeln!(out, "dynamics r = {}", vector(&doc["dynamics"]["r"]));
    let p = &doc["phase_report"];
    let _ = writeln!(out, "case: {}", p["case"].as_str().unwrap_or("?"));
    if !p["beta_c"].is_null() {
        let _ = writeln!(out, "second critical point: {}", num(&p["beta_c"]));
    }
    for reg in p["regimes"].as_array().into_iter().flatten() {
        let dim = reg["dimension"].as_u64().map_or("undetermined".to_string(), |d| d.to_string());
        let _ = writeln!(out, "{}: {} [dimension {dim}]", range(&reg["beta"]), reg["description"].as_str().unwrap_or(""));
        for st in reg["states"].as_array().into_iter().flatten() {
            let _ = writeln!(out, "  {}: m = {}", st["label"].as_str().unwrap_or(""), vector(&st["m"]));
        }
        for c in strings(&reg["conditions"]) {
            let _ = writeln!(out, "  condition: {c}");
        }
    }
    for c in strings(&p["conditions"]) {
        let _ = writeln!(out, "condition: {c}");
    }
    for n in strings(&p["notes"]) {
        let _ = writeln!(out, "note: {n}");
    }
    if p["incomplete"] == Value::Bool(true) {
        let _ = writeln!(out, "classification incomplete");
    }
}
