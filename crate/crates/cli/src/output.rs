//! CSV and JSON artifacts sharing one payload: metadata, column tolerances
//! and rows.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A column name with the tolerance its values were validated against
/// (`None` for exact or informational columns).
pub struct Column {
    pub name: &'static str,
    pub tol: Option<f64>,
}

pub const fn col(name: &'static str, tol: Option<f64>) -> Column {
    Column { name, tol }
}

pub struct Artifact {
    pub command: &'static str,
    pub seed: u64,
    pub meta: Vec<(&'static str, String)>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Value>>,
    pub notes: Vec<String>,
}

impl Artifact {
    pub fn new(command: &'static str, seed: u64, columns: Vec<Column>) -> Self {
        Self {
            command,
            seed,
            meta: Vec::new(),
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &'static str, value: impl ToString) {
        self.meta.push((key, value.to_string()));
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(&self.json()).expect("serializable payload");
                s.push('\n');
                s
            }
        }
    }

    fn tolerance_line(&self) -> String {
        self.columns
            .iter()
            .map(|c| match c.tol {
                Some(t) => format!("{}={t:e}", c.name),
                None => format!("{}=exact", c.name),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command: {}", self.command);
        let _ = writeln!(out, "# seed: {}", self.seed);
        let _ = writeln!(out, "# version: {}", env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "# tolerance: {}", self.tolerance_line());
        let names: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
        let _ = writeln!(out, "{}", names.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(csv_cell).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        for note in &self.notes {
            let _ = writeln!(out, "# {note}");
        }
        out
    }

    fn json(&self) -> Value {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert((*k).to_string(), Value::String(v.clone()));
        }
        let tolerances: Map<String, Value> = self
            .columns
            .iter()
            .map(|c| (c.name.to_string(), c.tol.map_or(Value::Null, |t| json!(t))))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.name.to_string(), v.clone()))
                        .collect(),
                )
            })
            .collect();
        json!({
            "command": self.command,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
            "meta": meta,
            "tolerance": tolerances,
            "rows": rows,
            "notes": self.notes,
        })
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Artifact {
        let mut a = Artifact::new("demo", 7, vec![col("p", None), col("value", Some(1e-3))]);
        a.meta("restarts", 3);
        a.row(vec![json!(3), json!(1.5)]);
        a.row(vec![json!(5), Value::Null]);
        a.notes.push("bound: 2".into());
        a
    }

    #[test]
    fn csv_layout() {
        let s = sample().render(Format::Csv);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# command: demo");
        assert_eq!(lines[1], "# seed: 7");
        assert!(lines[2].starts_with("# version: "));
        assert_eq!(lines[3], "# restarts: 3");
        assert_eq!(lines[4], "# tolerance: p=exact value=1e-3");
        assert_eq!(lines[5], "p,value");
        assert_eq!(lines[6], "3,1.5");
        assert_eq!(lines[7], "5,");
        assert_eq!(lines[8], "# bound: 2");
    }

    #[test]
    fn json_mirrors_csv() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v["command"], "demo");
        assert_eq!(v["seed"], 7);
        assert_eq!(v["meta"]["restarts"], "3");
        assert_eq!(v["tolerance"]["value"], 1e-3);
        assert_eq!(v["rows"][0]["value"], 1.5);
        assert!(v["rows"][1]["value"].is_null());
    }
}
