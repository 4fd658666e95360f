use serde::Deserialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Plain,
}

/// Rows with fixed columns, rendered as CSV, a JSON array of objects with
/// the same fields, or an aligned plain table.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "nan".into(),
        other => other.to_string(),
    }
}

/// A float cell; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&r.iter().map(cell).collect::<Vec<_>>().join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let arr: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let obj = self.columns.iter().zip(r).map(|(k, v)| (k.to_string(), v.clone())).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Array(arr)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Plain => {
                let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
                let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
                for r in &cells {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.len());
                    }
                }
                let line = |items: Vec<&str>| {
                    let parts: Vec<String> = items.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                    parts.join("  ").trim_end().to_string() + "\n"
                };
                let mut out = line(self.columns.clone());
                for r in &cells {
                    out.push_str(&line(r.iter().map(|s| s.as_str()).collect()));
                }
                out
            }
        }
    }
}
