//! CSV tables with a `#`-prefixed metadata header.
//!
//! ```text
//! # tikpoly: 0.1.0
//! # experiment: fig1
//! spec,L,N,lambda,...
//! chebyshev1,10,500,0.0000000000000000e0,...
//! ```
//!
//! Floats are written with 17 significant digits, so they read back bit-exact.

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Float(v) => Some(*v),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn parse(s: &str) -> Cell {
        if s.is_empty() {
            Cell::Missing
        } else if let Ok(i) = s.parse::<i64>() {
            Cell::Int(i)
        } else if let Ok(v) = s.parse::<f64>() {
            Cell::Float(v)
        } else {
            Cell::Text(s.to_string())
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
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
        v.map_or(Cell::Missing, Into::into)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.add_meta(key, value);
        self
    }

    /// Values may not contain line breaks; multi-line values become repeated keys.
    pub fn add_meta(&mut self, key: &str, value: impl Into<String>) {
        for line in value.into().lines() {
            self.meta.push((key.to_string(), line.to_string()));
        }
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn meta_values<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.meta.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .with_context(|| format!("no column `{name}` (have {})", self.columns.join(", ")))
    }

    /// A numeric column; non-numeric cells become NaN.
    pub fn floats(&self, name: &str) -> Result<Vec<f64>> {
        let i = self.column(name)?;
        Ok(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        out.push_str(std::str::from_utf8(&w.into_inner()?)?);
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut meta = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else { break };
            body_start += line.len();
            let rest = rest.trim_end_matches(['\n', '\r']);
            let rest = rest.strip_prefix(' ').unwrap_or(rest);
            match rest.split_once(": ") {
                Some((k, v)) => meta.push((k.to_string(), v.to_string())),
                None => meta.push((rest.trim_end_matches(':').to_string(), String::new())),
            }
        }
        let mut reader = csv::ReaderBuilder::new().from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> = reader
            .headers()
            .context("missing CSV header row")?
            .iter()
            .map(String::from)
            .collect();
        if columns.is_empty() || columns.iter().all(|c| c.is_empty()) {
            bail!("missing CSV header row");
        }
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.with_context(|| format!("malformed CSV row {}", i + 1))?;
            rows.push(record.iter().map(Cell::parse).collect());
        }
        Ok(Self { meta, columns, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let mut t = Table::new(&["spec", "L", "lambda", "err"])
            .with_meta("tikpoly", "0.1.0")
            .with_meta("config", "a = 1\nb = \"x: y\"");
        t.push(vec!["jacobi(1,2)".into(), 8usize.into(), 0.1.into(), Cell::Missing]);
        t.push(vec![
            "legendre".into(),
            9usize.into(),
            libm::pow(10.0, -0.7).into(),
            1e-300.into(),
        ]);
        let text = t.to_csv().unwrap();
        assert!(text.contains("\"jacobi(1,2)\""));
        assert!(text.contains("1.0000000000000001e-1"));
        let back = Table::parse(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.meta_values("config").count(), 2);
        assert_eq!(back.to_csv().unwrap(), text);
    }

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.0), "0.0000000000000000e0");
        assert_eq!(format_float(-2.5), "-2.5000000000000000e0");
        assert_eq!(format_float(f64::NAN), "nan");
        for v in [0.1, 1.0 / 3.0, 6.365742658552915e-75, f64::MAX] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(Table::parse("# only: meta\n").is_err());
        assert!(Table::parse("x,y\n1,2,3\n").is_err());
    }
}
