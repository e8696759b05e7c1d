//! Text, JSON and CSV renderings of command results.

use std::fmt::Write;

use serde_json::{json, Value};

use super::Format;
use crate::verify::CriterionOutcome;

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv_table<S: AsRef<str>>(header: &[&str], rows: impl IntoIterator<Item = Vec<S>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.iter().map(AsRef::as_ref)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}

fn items(v: &Value, field: &str) -> Vec<Value> {
    v[field].as_array().cloned().unwrap_or_default()
}

fn s(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn theta_text(key: &Value) -> String {
    items(key, "theta")
        .iter()
        .map(|r| {
            r.as_array()
                .map(|xs| xs.iter().map(s).collect::<Vec<_>>().join(","))
                .unwrap_or_default()
        })
        .collect::<Vec<_>>()
        .join(";")
}

fn key_text(key: &Value) -> String {
    format!("{}/{}/{}:{}", key["p"], key["n"], key["m"], theta_text(key))
}

fn params_text(v: &Value) -> String {
    let p = &v["params"];
    format!("p={} n={} m={}", p["p"], p["n"], p["m"])
}

fn group_text(g: &Value) -> String {
    let gens: Vec<String> = items(g, "generators").iter().map(s).collect();
    let gens = if gens.is_empty() {
        "()".to_string()
    } else {
        gens.join(", ")
    };
    format!("order {} generated by {gens}", g["order"])
}

pub fn key_list(v: &Value, f: Format) -> String {
    let keys = items(v, "keys");
    match f {
        Format::Json => pretty(v),
        Format::Csv => csv_table(
            &["p", "n", "m", "theta"],
            keys.iter()
                .map(|k| vec![s(&k["p"]), s(&k["n"]), s(&k["m"]), theta_text(k)]),
        ),
        Format::Text => {
            let mut out = format!("# {}: {} keys\n", params_text(v), v["count"]);
            if !v["group"].is_null() {
                let _ = writeln!(out, "# invariant under the group of {}", group_text(&v["group"]));
            }
            for k in &keys {
                out.push_str(&key_text(k));
                out.push('\n');
            }
            out
        }
    }
}

pub fn orbit_report(v: &Value, f: Format) -> String {
    let orbits = items(v, "orbits");
    match f {
        Format::Json => pretty(v),
        Format::Csv => csv_table(
            &["rep", "size", "members"],
            orbits.iter().map(|o| {
                let members: Vec<String> = items(o, "members").iter().map(s).collect();
                vec![s(&o["rep"]), s(&o["size"]), members.join(" ")]
            }),
        ),
        Format::Text => {
            let mut out = format!("# {}\n", params_text(v));
            if !v["q"].is_null() {
                let _ = writeln!(out, "# Q: {}", group_text(&v["q"]));
            }
            let _ = writeln!(out, "# acting group: {}", group_text(&v["group"]));
            let keys: u64 = orbits.iter().filter_map(|o| o["size"].as_u64()).sum();
            let _ = writeln!(out, "# {} orbits on {keys} keys", v["count"]);
            for o in &orbits {
                let _ = writeln!(out, "{}\t{}", s(&o["rep"]), o["size"]);
            }
            out
        }
    }
}

pub fn model(v: &Value, f: Format) -> String {
    match f {
        Format::Json => pretty(v),
        Format::Csv => csv_table(
            &["key", "kind", "model"],
            [vec![s(&v["key"]), s(&v["kind"]), s(&v["text"])]],
        ),
        Format::Text => format!("{}\n", s(&v["text"])),
    }
}

pub fn jacobian(v: &Value, f: Format) -> String {
    let lines = items(v, "lines");
    match f {
        Format::Json => pretty(v),
        Format::Csv => csv_table(
            &["line", "genus", "fixed_count", "model"],
            lines
                .iter()
                .map(|l| vec![s(&l["line"]), s(&l["genus"]), s(&l["fixed_count"]), s(&l["model"])]),
        ),
        Format::Text => {
            let mut out = format!("# {}\n", s(&v["key"]));
            for l in &lines {
                let _ = writeln!(
                    out,
                    "{}\tgenus {}\tfixed {}\t{}",
                    s(&l["line"]),
                    l["genus"],
                    l["fixed_count"],
                    s(&l["model"])
                );
            }
            let _ = writeln!(out, "# genus sum {} of total {}", v["genus_sum"], v["total_genus"]);
            out
        }
    }
}

pub fn table(v: &Value, f: Format) -> String {
    let rows = items(v, "rows");
    match f {
        Format::Json => pretty(v),
        Format::Csv => csv_table(
            &["p", "keys", "orbits"],
            rows.iter().map(|r| vec![s(&r["p"]), s(&r["keys"]), s(&r["orbits"])]),
        ),
        Format::Text => {
            let mut out = format!("# n={} m={}\n# p\tkeys\torbits\n", v["n"], v["m"]);
            for r in &rows {
                let _ = writeln!(out, "{}\t{}\t{}", r["p"], r["keys"], r["orbits"]);
            }
            out
        }
    }
}

pub fn verify(outcomes: &[CriterionOutcome], f: Format) -> String {
    match f {
        Format::Json => pretty(&Value::Array(
            outcomes
                .iter()
                .map(|o| {
                    json!({
                        "id": o.id, "title": o.title, "passed": o.passed,
                        "detail": o.detail, "seconds": o.elapsed.as_secs_f64(),
                    })
                })
                .collect(),
        )),
        Format::Csv => csv_table(
            &["id", "status", "title", "detail"],
            outcomes.iter().map(|o| {
                vec![
                    o.id.to_string(),
                    if o.passed { "PASS" } else { "FAIL" }.to_string(),
                    o.title.to_string(),
                    o.detail.clone(),
                ]
            }),
        ),
        Format::Text => outcomes.iter().map(|o| format!("{o}\n")).collect(),
    }
}
