//! JSON output by default; `--pretty` renders the same data as aligned text.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;
use serde_json::Value;

pub struct Emitter {
    pretty: bool,
}

impl Emitter {
    pub fn new(pretty: bool) -> Self {
        Self { pretty }
    }

    pub fn emit<T: Serialize>(&self, value: &T) -> Result<()> {
        self.emit_with(value, |v| v)
    }

    /// Like `emit`, with `table` reshaping the value before the pretty rendering.
    pub fn emit_with<T: Serialize>(&self, value: &T, table: impl FnOnce(Value) -> Value) -> Result<()> {
        let v = serde_json::to_value(value)?;
        let text = if self.pretty { render(&table(v)) } else { serde_json::to_string(&v)? };
        let mut stdout = std::io::stdout().lock();
        writeln!(stdout, "{text}")?;
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => if *b { "yes" } else { "no" }.into(),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            let parts: Vec<String> = items.iter().map(cell).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

pub fn render(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            map.iter().map(|(k, v)| format!("{k:<width$}  {}", cell(v))).collect::<Vec<_>>().join("\n")
        }
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_object) => table(rows),
        other => cell(other),
    }
}

/// Columns in first-seen key order across all rows.
fn table(rows: &[Value]) -> String {
    let mut cols: Vec<String> = Vec::new();
    for row in rows {
        for k in row.as_object().expect("object rows").keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> =
        rows.iter().map(|row| cols.iter().map(|c| row.get(c).map_or("-".into(), cell)).collect()).collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).max().unwrap_or(0).max(c.len()))
        .collect();
    let line = |items: &[String]| {
        items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    let mut out = vec![line(&cols)];
    out.extend(cells.iter().map(|r| line(r)));
    out.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn object_and_table() {
        assert_eq!(render(&json!({"a": 1, "bb": [1, 2], "c": null})), "a   1\nbb  [1, 2]\nc   -");
        let t = render(&json!([{"r": 1, "ok": true}, {"r": 10, "ok": false}]));
        assert_eq!(t, " r   ok\n 1  yes\n10   no");
    }
}
