//! Experiment families. Each run returns its artifacts in memory; the caller
//! decides where they go.

use anyhow::{bail, Context, Result};
use tikpoly::barycentric::BarycentricData;
use tikpoly::fit::fit;
use tikpoly::metrics::{
    default_l2_rule, default_uniform_grid, l2_error, lambda_sweep, report_for, sample, uniform_error, ErrorReport,
};
use tikpoly::quadrature::gauss_rule;
use tikpoly::signals::{add_noise, NoiseKind, NoiseSpec};

use crate::config::{ExperimentConfig, ExperimentId, NoiseModel};
use crate::names;
use crate::svg::{self, PlotSpec};
use crate::table::{Cell, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Points of the equispaced grid for the pointwise curves of fig4/fig5.
pub const DENSE_GRID_POINTS: usize = 2001;
pub const REPORT_COLUMNS: [&str; 8] = [
    "spec",
    "L",
    "N",
    "lambda",
    "seed",
    "snr_db",
    "uniform_error",
    "l2_error",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

impl Artifact {
    pub fn is_csv(&self) -> bool {
        self.file_name.ends_with(".csv")
    }
}

pub fn report_row(r: &ErrorReport) -> Vec<Cell> {
    vec![
        r.spec.name().into(),
        r.degree.into(),
        r.n.into(),
        r.lambda.into(),
        r.seed.into(),
        r.snr_db.into(),
        r.uniform_error.into(),
        r.l2_error.into(),
    ]
}

/// Header shared by every experiment table: version, seed and the full config.
fn table_for(config: &ExperimentConfig, columns: &[&str], title: String) -> Result<Table> {
    let mut t = Table::new(columns)
        .with_meta("tikpoly", VERSION)
        .with_meta("experiment", config.experiment.to_string())
        .with_meta("seed", config.seed.to_string());
    t.add_meta("config", config.to_toml_string()?);
    t.add_meta("title", title);
    Ok(t)
}

/// The CSV plus one SVG per plot, each rendered from the CSV text.
fn emit(stem: &str, table: &Table, out: &mut Vec<Artifact>) -> Result<()> {
    let csv = table.to_csv()?;
    let svgs = svg::render_all(&Table::parse(&csv)?)?;
    out.push(Artifact {
        file_name: format!("{stem}.csv"),
        contents: csv,
    });
    for (i, contents) in svgs.into_iter().enumerate() {
        let file_name = if i == 0 {
            format!("{stem}.svg")
        } else {
            format!("{stem}_{}.svg", i + 1)
        };
        out.push(Artifact { file_name, contents });
    }
    Ok(())
}

/// Noise for grid cell `stream` under the config's model.
pub fn noise_for(config: &ExperimentConfig, stream: u64) -> Result<Option<NoiseSpec>> {
    let spec = match config.noise {
        NoiseModel::None => return Ok(None),
        NoiseModel::Additive => NoiseSpec::additive(config.snr_db, config.seed)?,
        NoiseModel::Multiplicative => {
            let c = *config
                .amplitudes
                .first()
                .context("multiplicative noise needs an amplitude")?;
            NoiseSpec::multiplicative(c, config.seed)?
        }
    };
    Ok(Some(spec.with_stream(stream)))
}

/// `(L, N)` cells with `L <= N`, in row-major order.
pub fn cells(config: &ExperimentConfig) -> Result<Vec<(usize, usize)>> {
    let cells: Vec<_> = config
        .degrees()
        .into_iter()
        .flat_map(|l| config.ns().into_iter().map(move |n| (l, n)))
        .filter(|(l, n)| l <= n)
        .collect();
    if cells.is_empty() {
        bail!("no (L, N) pair with L <= N in the configured ranges");
    }
    Ok(cells)
}

pub fn run(config: &ExperimentConfig) -> Result<Vec<Artifact>> {
    config.validate()?;
    match config.experiment {
        ExperimentId::Fig1 => run_grid(config, "L"),
        ExperimentId::Fig2 => run_grid(config, "N"),
        ExperimentId::Custom => {
            let x = if config.degrees().len() >= config.ns().len() {
                "L"
            } else {
                "N"
            };
            run_grid(config, x)
        }
        ExperimentId::Fig3 => run_fig3(config),
        ExperimentId::Fig4 | ExperimentId::Fig5 | ExperimentId::Fig45 => run_fig45(config),
        ExperimentId::Sweep => run_sweep(config),
    }
}

pub fn run_fig1(config: &ExperimentConfig) -> Result<Vec<Artifact>> {
    run_grid(config, "L")
}

pub fn run_fig2(config: &ExperimentConfig) -> Result<Vec<Artifact>> {
    run_grid(config, "N")
}

/// Errors over an `(L, N)` grid for every λ; all λ of a cell share one noise draw.
fn run_grid(config: &ExperimentConfig, x: &str) -> Result<Vec<Artifact>> {
    let spec = names::basis(&config.basis)?;
    let grid = default_uniform_grid();
    let cells = cells(config)?;
    let mut out = Vec::new();
    for name in &config.functions {
        let f = names::function(name)?;
        let mut table = table_for(config, &REPORT_COLUMNS, format!("{name}: errors vs {x}"))?;
        table.add_meta(
            "plot",
            PlotSpec::new(x, &["uniform_error", "l2_error"])
                .group("lambda")
                .logy()
                .to_string(),
        );
        for (index, &(l, n)) in cells.iter().enumerate() {
            let noise = noise_for(config, index as u64)?;
            let rule = gauss_rule(spec, n + 1)?;
            let samples = sample(&rule, f, noise.as_ref())?;
            for &lambda in &config.lambdas {
                let p = fit(&rule, l, lambda, &samples)?;
                table.push(report_row(&report_for(f, &p, &rule, &grid, noise.as_ref())?));
            }
        }
        emit(&format!("{}_{name}", config.experiment), &table, &mut out)?;
    }
    Ok(out)
}

/// Barycentric interpolation at `N + 1` Gauss nodes, clean and noisy.
pub fn run_fig3(config: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let spec = names::basis(&config.basis)?;
    let grid = default_uniform_grid();
    let mut out = Vec::new();
    for name in &config.functions {
        let f = names::function(name)?;
        for noisy in [false, true] {
            let label = if noisy { "noisy" } else { "clean" };
            let mut table = table_for(
                config,
                &REPORT_COLUMNS,
                format!("{name}: barycentric errors vs N ({label})"),
            )?;
            table.add_meta(
                "plot",
                PlotSpec::new("N", &["uniform_error", "l2_error"])
                    .group("lambda")
                    .logy()
                    .to_string(),
            );
            for (index, n) in config.ns().into_iter().enumerate() {
                let noise = if noisy { noise_for(config, index as u64)? } else { None };
                let rule = gauss_rule(spec, n + 1)?;
                let samples = sample(&rule, f, noise.as_ref())?;
                let l2_rule = default_l2_rule(&rule, n)?;
                let base = BarycentricData::from_gauss(&rule, samples.into_values(), 0.0)?;
                for &lambda in &config.lambdas {
                    let d = base.with_lambda(lambda)?;
                    let p = |x: f64| {
                        d.interp_barycentric(x)
                            .expect("denominator cannot vanish for Gauss weights")
                    };
                    table.push(report_row(&ErrorReport {
                        spec,
                        degree: n,
                        n,
                        lambda,
                        seed: noise.map(|s| s.seed()),
                        snr_db: noise.and_then(|s| match s.kind() {
                            NoiseKind::AdditiveWhiteSnr { snr_db } => Some(snr_db),
                            NoiseKind::MultiplicativeUniform { .. } => None,
                        }),
                        uniform_error: uniform_error(f, p, &grid)?,
                        l2_error: l2_error(f, p, &l2_rule),
                        grid_size: grid.len(),
                        rule_size: l2_rule.len(),
                    }));
                }
            }
            emit(&format!("fig3_{name}_{label}"), &table, &mut out)?;
        }
    }
    Ok(out)
}

/// The data variants of fig4/fig5: name and the noise (or constant factor) applied.
fn variants(config: &ExperimentConfig) -> Result<Vec<(String, Variant)>> {
    let mut v = vec![("true".to_string(), Variant::Factor(1.0))];
    for &c in &config.scale_factors {
        v.push((format!("scaled{c}"), Variant::Factor(c)));
    }
    for &c in &config.amplitudes {
        let stream = v.len() as u64;
        v.push((
            format!("mult{c}"),
            Variant::Noise(NoiseSpec::multiplicative(c, config.seed)?.with_stream(stream)),
        ));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy)]
enum Variant {
    Factor(f64),
    Noise(NoiseSpec),
}

/// Classical and Tikhonov interpolants of perturbed data on a dense grid.
///
/// Tikhonov uses the first configured λ.
pub fn run_fig45(config: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let spec = names::basis(&config.basis)?;
    let n = config.n_min;
    let lambda = config.lambdas[0];
    let rule = gauss_rule(spec, n + 1)?;
    let dense: Vec<f64> = (0..DENSE_GRID_POINTS)
        .map(|k| -1.0 + 2.0 * k as f64 / (DENSE_GRID_POINTS - 1) as f64)
        .collect();
    let variants = variants(config)?;
    let mut out = Vec::new();
    let mut summary = table_for(
        config,
        &[
            "function",
            "variant",
            "N",
            "lambda",
            "uniform_classical",
            "uniform_tikhonov",
        ],
        format!("classical and Tikhonov interpolants in {} points", n + 1),
    )?;
    for name in &config.functions {
        let f = names::function(name)?;
        let clean = sample(&rule, f, None)?;
        let mut columns = vec!["j", "x", "f"];
        columns.extend(variants.iter().map(|(v, _)| v.as_str()));
        let mut samples_table = table_for(config, &columns, format!("{name}: sampled data"))?;
        let y: Vec<&str> = columns[2..].to_vec();
        samples_table.add_meta("plot", PlotSpec::new("x", &y).to_string());
        let mut data = Vec::new();
        for (label, variant) in &variants {
            let values = match variant {
                Variant::Factor(c) => clean.values().iter().map(|v| c * v).collect(),
                Variant::Noise(s) => add_noise(&clean, s)?.into_values(),
            };
            let classical = BarycentricData::from_gauss(&rule, values, 0.0)?;
            let tikhonov = classical.with_lambda(lambda)?;
            let mut table = table_for(
                config,
                &["x", "f", "classical", "tikhonov", "err_classical", "err_tikhonov"],
                format!("{name}, {label} data, lambda = {lambda}"),
            )?;
            table.add_meta("plot", PlotSpec::new("x", &["f", "classical", "tikhonov"]).to_string());
            table.add_meta(
                "plot",
                PlotSpec::new("x", &["err_classical", "err_tikhonov"])
                    .logy()
                    .to_string(),
            );
            let (mut worst_c, mut worst_t) = (0.0f64, 0.0f64);
            for &x in &dense {
                let fx = f(x);
                let c = classical.interp_barycentric(x)?;
                let t = tikhonov.interp_barycentric(x)?;
                worst_c = worst_c.max((c - fx).abs());
                worst_t = worst_t.max((t - fx).abs());
                table.push(vec![
                    x.into(),
                    fx.into(),
                    c.into(),
                    t.into(),
                    (c - fx).abs().into(),
                    (t - fx).abs().into(),
                ]);
            }
            summary.push(vec![
                name.as_str().into(),
                label.as_str().into(),
                n.into(),
                lambda.into(),
                worst_c.into(),
                worst_t.into(),
            ]);
            emit(&format!("{}_{name}_{label}", config.experiment), &table, &mut out)?;
            data.push(classical.values().to_vec());
        }
        for (j, &x) in rule.nodes().iter().enumerate() {
            let mut row: Vec<Cell> = vec![j.into(), x.into(), clean.values()[j].into()];
            row.extend(data.iter().map(|d| Cell::from(d[j])));
            samples_table.push(row);
        }
        emit(
            &format!("{}_{name}_samples", config.experiment),
            &samples_table,
            &mut out,
        )?;
    }
    emit(&format!("{}_summary", config.experiment), &summary, &mut out)?;
    Ok(out)
}

/// Errors against λ for each cell, with the minimizing λ recorded in the header.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<Artifact>> {
    let spec = names::basis(&config.basis)?;
    let grid = default_uniform_grid();
    let cells = cells(config)?;
    let mut out = Vec::new();
    for name in &config.functions {
        let f = names::function(name)?;
        let mut table = table_for(config, &REPORT_COLUMNS, format!("{name}: errors vs lambda"))?;
        let mut plot = PlotSpec::new("lambda", &["uniform_error", "l2_error"]).logx().logy();
        if cells.len() > 1 {
            plot = plot.group("L");
        }
        table.add_meta("plot", plot.to_string());
        for (index, &(l, n)) in cells.iter().enumerate() {
            let noise = noise_for(config, index as u64)?;
            let sweep = lambda_sweep(spec, l, n, f, noise.as_ref(), &config.lambdas, &grid)?;
            table.add_meta(
                "best",
                format!(
                    "L={l} N={n} uniform_lambda={} l2_lambda={}",
                    sweep.best_uniform_lambda(),
                    sweep.best_l2_lambda()
                ),
            );
            for r in &sweep.reports {
                table.push(report_row(r));
            }
        }
        emit(&format!("sweep_{name}"), &table, &mut out)?;
    }
    Ok(out)
}
