use serde_json::{Map, Value};

use super::Output;
use crate::tree::Node;

/// Significant digits in every printed number.
pub const SIGNIFICANT_DIGITS: usize = 10;

/// Formats `v` with ten significant digits, trailing zeros removed but at
/// least one digit after the point: `1.0`, `1.414213562`, `0.6035533906`.
pub fn format_number(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0.0".into();
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (SIGNIFICANT_DIGITS as i64 - 1 - magnitude).max(1) as usize;
    let mut s = format!("{v:.decimals$}");
    while s.ends_with('0') && !s.ends_with(".0") {
        s.pop();
    }
    if s == "-0.0" {
        s = "0.0".into();
    }
    s
}

fn rounded(v: f64) -> Value {
    format_number(v)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

#[derive(Clone, Debug)]
pub enum Cell {
    Empty,
    Int(i64),
    Num(f64),
    Str(String),
    Node(Node),
    Ints(Vec<i64>),
    Nums(Vec<f64>),
    Strs(Vec<String>),
    Nodes(Vec<Node>),
}

impl Cell {
    fn csv(&self) -> String {
        let join = |v: Vec<String>| v.join(";");
        match self {
            Cell::Empty => String::new(),
            Cell::Int(i) => i.to_string(),
            Cell::Num(v) => format_number(*v),
            Cell::Str(s) => escape(s),
            Cell::Node(n) => n.to_cli_string(),
            Cell::Ints(v) => join(v.iter().map(|i| i.to_string()).collect()),
            Cell::Nums(v) => join(v.iter().map(|x| format_number(*x)).collect()),
            Cell::Strs(v) => escape(&join(v.clone())),
            Cell::Nodes(v) => join(v.iter().map(|n| n.to_cli_string()).collect()),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Empty => Value::Null,
            Cell::Int(i) => Value::from(*i),
            Cell::Num(v) => rounded(*v),
            Cell::Str(s) => Value::from(s.as_str()),
            Cell::Node(n) => Value::from(n.to_bit_string()),
            Cell::Ints(v) => Value::from(v.clone()),
            Cell::Nums(v) => Value::Array(v.iter().map(|x| rounded(*x)).collect()),
            Cell::Strs(v) => Value::from(v.clone()),
            Cell::Nodes(v) => {
                Value::Array(v.iter().map(|n| Value::from(n.to_bit_string())).collect())
            }
        }
    }
}

fn escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Column-ordered rows rendered as CSV or as a JSON array of objects.
#[derive(Clone, Debug)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(headers: I) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<I: IntoIterator<Item = Cell>>(&mut self, row: I) {
        let row: Vec<Cell> = row.into_iter().collect();
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    pub fn render(&self, output: Output) -> String {
        match output {
            Output::Csv => {
                let mut s = self.headers.join(",");
                s.push('\n');
                for row in &self.rows {
                    s.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                    s.push('\n');
                }
                s
            }
            Output::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .headers
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut s =
                    serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}
