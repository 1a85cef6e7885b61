//! Plain-text rendering of a report, derived from its JSON form.

use std::fmt::Write;

use serde_json::Value;

use crate::cli::run::ReportDocument;

/// Renders the report's JSON value; nothing is recomputed.
pub fn render_text(report: &ReportDocument) -> String {
    let doc = serde_json::to_value(report).expect("reports serialise");
    let mut out = String::new();
    let s = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let _ = writeln!(
        out,
        "{} {} {} spec={}",
        s(&doc["tool"]),
        s(&doc["version"]),
        s(&doc["command"]),
        s(&doc["spec"]["name"])
    );
    if let Value::Object(params) = &doc["parameters"] {
        let line: Vec<String> = params.iter().map(|(k, v)| format!("{k}={}", s(v))).collect();
        let _ = writeln!(out, "parameters: {}", line.join(" "));
    }
    for r in doc["results"].as_array().into_iter().flatten() {
        let status = s(&r["status"]).to_uppercase();
        let _ = write!(out, "[{status}] {} {}", s(&r["task"]), s(&r["subject"]));
        if let Some(ms) = r.get("elapsed_ms") {
            let _ = write!(out, " ({} ms)", s(ms));
        }
        out.push('\n');
        if let Value::Object(ev) = &r["evidence"] {
            for (k, v) in ev {
                match v {
                    Value::String(text) if text.contains('\n') => {
                        let _ = writeln!(out, "    {k}:");
                        for line in text.lines() {
                            let _ = writeln!(out, "      {line}");
                        }
                    }
                    Value::Object(_) => {}
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        let _ = writeln!(out, "    {k}: [{} entries]", items.len());
                    }
                    other => {
                        let _ = writeln!(out, "    {k}: {}", s(other));
                    }
                }
            }
        }
    }
    let sum = &doc["summary"];
    let _ = writeln!(
        out,
        "summary: pass={} fail={} unknown={} skipped={} exit={}",
        sum["pass"], sum["fail"], sum["unknown"], sum["skipped"], doc["exit_code"]
    );
    out
}
