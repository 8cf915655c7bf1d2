//! Minimal SVG line charts rendered from a [`Table`] alone.
//!
//! A table carries its plots as metadata lines such as
//!
//! ```text
//! # plot: x=L y=uniform_error,l2_error group=lambda logy=true
//! ```
//!
//! so figures can be regenerated from the CSV file without rerunning anything.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};

use crate::table::{Cell, Table};

const WIDTH: f64 = 820.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 230.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const DASHES: [&str; 4] = ["", "6,4", "2,3", "8,3,2,3"];

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x: String,
    pub y: Vec<String>,
    pub group: Option<String>,
    pub logx: bool,
    pub logy: bool,
}

impl PlotSpec {
    pub fn new(x: &str, y: &[&str]) -> Self {
        Self {
            x: x.into(),
            y: y.iter().map(|s| s.to_string()).collect(),
            group: None,
            logx: false,
            logy: false,
        }
    }

    pub fn group(mut self, column: &str) -> Self {
        self.group = Some(column.into());
        self
    }

    pub fn logx(mut self) -> Self {
        self.logx = true;
        self
    }

    pub fn logy(mut self) -> Self {
        self.logy = true;
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = Self::new("", &[]);
        for token in text.split_whitespace() {
            let (k, v) = token
                .split_once('=')
                .with_context(|| format!("bad plot token `{token}`"))?;
            match k {
                "x" => spec.x = v.into(),
                "y" => spec.y = v.split(',').map(String::from).collect(),
                "group" => spec.group = Some(v.into()),
                "logx" => spec.logx = v == "true",
                "logy" => spec.logy = v == "true",
                _ => bail!("unknown plot key `{k}`"),
            }
        }
        if spec.x.is_empty() || spec.y.is_empty() {
            bail!("plot spec `{text}` needs x= and y=");
        }
        Ok(spec)
    }
}

impl std::fmt::Display for PlotSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x={} y={}", self.x, self.y.join(","))?;
        if let Some(g) = &self.group {
            write!(f, " group={g}")?;
        }
        write!(f, " logx={} logy={}", self.logx, self.logy)
    }
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
    dash: usize,
}

fn group_label(cell: &Cell) -> String {
    match cell {
        Cell::Int(i) => i.to_string(),
        Cell::Float(v) => format!("{v}"),
        Cell::Text(s) => s.clone(),
        Cell::Missing => "-".into(),
    }
}

fn collect_series(table: &Table, spec: &PlotSpec) -> Result<Vec<Series>> {
    let xs = table.floats(&spec.x)?;
    let group_col = spec.group.as_deref().map(|g| table.column(g)).transpose()?;
    let mut groups: Vec<String> = Vec::new();
    let keys: Vec<String> = table
        .rows
        .iter()
        .map(|r| group_col.map_or(String::new(), |g| group_label(&r[g])))
        .collect();
    for k in &keys {
        if !groups.contains(k) {
            groups.push(k.clone());
        }
    }
    let usable = |v: f64, log: bool| v.is_finite() && (!log || v > 0.0);
    let mut series = Vec::new();
    for (yi, y) in spec.y.iter().enumerate() {
        let ys = table.floats(y)?;
        for g in &groups {
            let points: Vec<(f64, f64)> = xs
                .iter()
                .zip(&ys)
                .zip(&keys)
                .filter(|(_, k)| *k == g)
                .map(|((&x, &y), _)| (x, y))
                .filter(|&(x, y)| usable(x, spec.logx) && usable(y, spec.logy))
                .collect();
            let label = match &spec.group {
                Some(col) => format!("{y} ({col}={g})"),
                None => y.clone(),
            };
            series.push(Series {
                label,
                points,
                dash: yi % DASHES.len(),
            });
        }
    }
    Ok(series)
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let t = |v: f64| if log { v.log10() } else { v };
        let (mut lo, mut hi) = values
            .map(t)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if hi - lo < 1e-300 {
            let pad = if log { 0.5 } else { lo.abs().max(1.0) * 0.5 };
            (lo, hi) = (lo - pad, hi + pad);
        }
        if log {
            (lo, hi) = (lo.floor(), hi.ceil());
        }
        Self { lo, hi, log }
    }

    fn unit(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        (t - self.lo) / (self.hi - self.lo)
    }

    /// Tick positions in data units with their labels.
    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let decades = (self.hi - self.lo) as i64;
            let stride = ((decades + 9) / 10).max(1);
            return (self.lo as i64..=self.hi as i64)
                .filter(|e| (e - self.lo as i64) % stride == 0)
                .map(|e| (10f64.powi(e as i32), format!("1e{e}")))
                .collect();
        }
        let raw = (self.hi - self.lo) / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let decimals = (-step.log10().floor()).max(0.0) as usize;
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last)
            .map(|k| {
                let v = k as f64 * step;
                (v, format!("{v:.decimals$}"))
            })
            .collect()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders one chart.
pub fn render(table: &Table, spec: &PlotSpec, title: &str) -> Result<String> {
    let series = collect_series(table, spec)?;
    let xaxis = Axis::fit(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)), spec.logx);
    let yaxis = Axis::fit(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)), spec.logy);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + xaxis.unit(x) * pw;
    let py = |y: f64| TOP + (1.0 - yaxis.unit(y)) * ph;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#)?;
    writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + pw / 2.0,
        escape(title)
    )?;
    writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>"##
    )?;
    for (v, label) in xaxis.ticks() {
        let x = px(v);
        writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/>"##,
            TOP + ph
        )?;
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
            TOP + ph + 16.0
        )?;
    }
    for (v, label) in yaxis.ticks() {
        let y = py(v);
        writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##,
            LEFT + pw
        )?;
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#,
            LEFT - 6.0,
            y + 4.0
        )?;
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 18.0,
        escape(&spec.x)
    )?;
    for (i, series) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let dash = DASHES[series.dash];
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(r#" stroke-dasharray="{dash}""#)
        };
        if !series.points.is_empty() {
            let pts: Vec<String> = series
                .points
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash_attr} points="{}"/>"#,
                pts.join(" ")
            )?;
        }
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = LEFT + pw + 12.0;
        writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.5"{dash_attr}/>"#,
            lx + 24.0
        )?;
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 30.0,
            ly + 4.0,
            escape(&series.label)
        )?;
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// One chart per `plot` metadata line, titled by the `title` entry.
pub fn render_all(table: &Table) -> Result<Vec<String>> {
    let title = table.meta_value("title").unwrap_or("");
    table
        .meta_values("plot")
        .map(|p| render(table, &PlotSpec::parse(p)?, title))
        .collect()
}
