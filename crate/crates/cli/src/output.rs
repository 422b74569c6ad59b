use crate::config::RunConfig;
use crate::svg::Series;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// A table entry: a number, a missing number (failed point) or a label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Number(Option<f64>),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(Some(x))
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Number(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Everything a command produces. All numbers are dimensionless with L = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub config: RunConfig,
    pub columns: Vec<String>,
    pub data: Vec<Vec<Cell>>,
    pub diagnostics: Map<String, Value>,
    pub warnings: Vec<String>,
    pub version: String,
    /// Curves for SVG output; not serialized.
    #[serde(skip)]
    pub plot: Option<Plot>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl ResultEnvelope {
    pub fn new(config: &RunConfig, columns: &[&str]) -> Self {
        Self {
            config: config.clone(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            data: Vec::new(),
            diagnostics: Map::new(),
            warnings: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            plot: None,
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.data.push(row);
    }

    pub fn diagnostic(&mut self, key: &str, value: impl Into<Value>) {
        self.diagnostics.insert(key.to_string(), value.into());
    }

    /// Header row, then one line per row; numbers with 17 significant digits,
    /// failed points left empty.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.data {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Number(Some(x)) => format!("{x:.16e}"),
                    Cell::Number(None) => String::new(),
                    Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("envelope serializes");
        s.push('\n');
        s
    }
}

/// JSON has no NaN or infinity; such values become null.
pub fn finite(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::Null
    }
}
