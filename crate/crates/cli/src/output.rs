//! JSON and TSV rendering of job results.

use std::fmt::Write;

use serde_json::{json, Value};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn surface_label(v: &Value) -> String {
    let s = &v["surface"];
    format!("S({},{},{},{},{})", cell(&s["d1"]), cell(&s["d2"]), cell(&s["n1"]), cell(&s["n2"]), cell(&s["r"]))
}

/// Header and rows for one result.
fn tsv_block(v: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    let strs = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match v["task"].as_str().unwrap_or_default() {
        "delta" => (
            strs(&["d", "p", "k", "delta"]),
            vec![["d", "p", "k", "delta"].iter().map(|k| cell(&v[*k])).collect()],
        ),
        "cohomology" => {
            let d = v["divisor"].as_array().cloned().unwrap_or_default();
            let h = v["h"].as_array().cloned().unwrap_or_default();
            let mut row = vec![surface_label(v)];
            row.extend(d.iter().chain(&h).map(cell));
            row.push(cell(&v["chi"]));
            row.push(cell(&v["method"]));
            let flags: Vec<String> = v["flags"].as_array().map(|f| f.iter().map(cell).collect()).unwrap_or_default();
            row.push(flags.join(","));
            (
                strs(&["surface", "a", "b", "alpha", "beta", "h0", "h1", "h2", "chi", "method", "flags"]),
                vec![row],
            )
        }
        "covering" => {
            let rows = v["table"]
                .as_array()
                .map(|t| {
                    t.iter()
                        .map(|r| {
                            let mut row = vec![cell(&r["k"])];
                            row.extend(r["uvw"].as_array().into_iter().flatten().map(cell));
                            row.push(cell(&r["h1"]));
                            row
                        })
                        .collect()
                })
                .unwrap_or_default();
            (strs(&["k", "u", "v", "w", "h1"]), rows)
        }
        _ => {
            let rows = v
                .as_object()
                .into_iter()
                .flatten()
                .filter(|(k, _)| *k != "task")
                .map(|(k, x)| vec![k.clone(), cell(x)])
                .collect();
            (strs(&["key", "value"]), rows)
        }
    }
}

/// Renders results in input order. A batch in JSON is wrapped as
/// `{"results":[…]}`; failures appear in place as `{"error":{…}}`. In TSV a
/// header is printed whenever it differs from the previous one and failures
/// become `#` comment lines.
pub fn render(results: &[Result<Value, Failure>], format: Format, batch: bool) -> String {
    let as_json = |r: &Result<Value, Failure>| match r {
        Ok(v) => v.clone(),
        Err(f) => json!({"error": {"exit_code": f.code, "message": f.message}}),
    };
    match format {
        Format::Json => {
            let v = if batch || results.len() != 1 {
                json!({"results": results.iter().map(as_json).collect::<Vec<_>>()})
            } else {
                as_json(&results[0])
            };
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let mut out = String::new();
            let mut last: Option<Vec<String>> = None;
            for r in results {
                match r {
                    Ok(v) => {
                        let (header, rows) = tsv_block(v);
                        if last.as_ref() != Some(&header) {
                            let _ = writeln!(out, "{}", header.join("\t"));
                            last = Some(header);
                        }
                        for row in rows {
                            let _ = writeln!(out, "{}", row.join("\t"));
                        }
                    }
                    Err(f) => {
                        let _ = writeln!(out, "# error (exit {}): {}", f.code, f.message.replace('\n', " "));
                    }
                }
            }
            out
        }
    }
}
