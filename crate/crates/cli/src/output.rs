//! Record assembly and serialization: JSONL for single commands, CSV
//! for sweeps. Keys inside a record are emitted sorted, so identical
//! runs produce identical bytes.

use serde_json::{Map, Value};

use crate::Ctx;

/// One experiment record. Body keys land at the top level next to the
/// bookkeeping fields.
pub fn record(ctx: &Ctx, command: &str, params: Value, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), command.into());
    map.insert("seed".into(), ctx.seed.into());
    map.insert("preset".into(), ctx.constants.preset.clone().into());
    map.insert("constants".into(), ctx.constants.as_json());
    map.insert("params".into(), params);
    if let Value::Object(extra) = body {
        for (k, v) in extra {
            map.insert(k, v);
        }
    }
    map.insert("wall_ms".into(), Value::Null);
    Value::Object(map)
}

/// Fill `wall_ms` when timing was requested; reports stay byte-stable
/// otherwise.
pub fn stamp(ctx: &Ctx, rec: &mut Value, started: std::time::Instant) {
    if ctx.timings {
        if let Value::Object(map) = rec {
            map.insert(
                "wall_ms".into(),
                Value::from(started.elapsed().as_secs_f64() * 1e3),
            );
        }
    }
}

pub fn to_jsonl(records: &[Value]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

/// Flatten nested objects into dotted column names.
fn flatten_into(prefix: &str, value: &Value, row: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_into(&key, v, row);
            }
        }
        Value::Null => row.push((prefix.to_string(), String::new())),
        Value::String(s) => row.push((prefix.to_string(), s.clone())),
        other => row.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Rows share a header built from the union of flattened keys. Missing
/// fields serialize as empty cells.
pub fn to_csv(records: &[Value]) -> String {
    let flats: Vec<Vec<(String, String)>> = records
        .iter()
        .map(|r| {
            let mut row = Vec::new();
            flatten_into("", r, &mut row);
            row
        })
        .collect();
    let mut columns: Vec<String> = Vec::new();
    for row in &flats {
        for (k, _) in row {
            if !columns.contains(k) {
                columns.push(k.clone());
            }
        }
    }
    columns.sort();
    let mut out = columns.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in &flats {
        let line: Vec<String> = columns
            .iter()
            .map(|col| {
                row.iter()
                    .find(|(k, _)| k == col)
                    .map(|(_, v)| csv_escape(v))
                    .unwrap_or_default()
            })
            .collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_flattens_and_pads() {
        let recs = vec![
            json!({"a": 1, "nested": {"x": "s"}, "gap": null}),
            json!({"a": 2, "extra": true}),
        ];
        let csv = to_csv(&recs);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "a,extra,gap,nested.x");
        assert_eq!(lines.next().unwrap(), "1,,,s");
        assert_eq!(lines.next().unwrap(), "2,true,,");
    }

    #[test]
    fn csv_escapes_commas_and_quotes() {
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
        assert_eq!(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_escape("plain"), "plain");
    }
}
