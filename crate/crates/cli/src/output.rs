use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Fixed-column table; every row has one cell per column.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, digits: usize) -> String {
        match format {
            Format::Csv => self.to_csv(digits),
            Format::Json => self.to_json(digits),
        }
    }

    fn to_csv(&self, digits: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => format_sig(*v, digits),
                    Cell::Int(v) => v.to_string(),
                    Cell::Text(s) => csv_escape(s),
                    Cell::Empty => String::new(),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn to_json(&self, digits: usize) -> String {
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Cell::Num(v) => round_sig(*v, digits)
                            .and_then(Number::from_f64)
                            .map_or_else(|| Value::String(format_sig(*v, digits)), Value::Number),
                        Cell::Int(v) => Value::Number((*v).into()),
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Empty => Value::Null,
                    };
                    m.insert(name.clone(), v);
                }
                Value::Object(m)
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&Value::Array(records)).expect("plain JSON values");
        out.push('\n');
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn round_sig(v: f64, digits: usize) -> Option<f64> {
    if !v.is_finite() {
        return None;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().ok()
}

/// `v` rounded to `digits` significant digits, printed in the shortest form
/// that reads back to the rounded value. Plain notation for magnitudes in
/// `[1e-5, 1e15)`, exponent notation otherwise.
pub fn format_sig(v: f64, digits: usize) -> String {
    let Some(r) = round_sig(v, digits) else {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    };
    if r == 0.0 {
        return "0".into();
    }
    let mag = r.abs();
    if (1e-5..1e15).contains(&mag) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(std::f64::consts::PI, 12), "3.14159265359");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(2.0, 12), "2");
        assert_eq!(format_sig(-0.0, 12), "0");
        assert_eq!(format_sig(1.234e-16, 3), "1.23e-16");
        assert_eq!(format_sig(f64::INFINITY, 12), "inf");
        assert_eq!(format_sig(2.0 / 3.0, 4), "0.6667");
    }

    #[test]
    fn csv_and_json_shapes() {
        let mut t = Table::new(["a", "b", "c"]);
        t.push(vec![1.5.into(), "x,y".into(), Cell::Empty]);
        assert_eq!(t.render(Format::Csv, 12), "a,b,c\n1.5,\"x,y\",\n");
        let v: Value = serde_json::from_str(&t.render(Format::Json, 12)).unwrap();
        assert_eq!(v[0]["a"], 1.5);
        assert_eq!(v[0]["c"], Value::Null);
    }
}
