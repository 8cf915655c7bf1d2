//! Command-line surface.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use tikpoly::barycentric::BarycentricData;
use tikpoly::fit::{fit, SampleVector};
use tikpoly::metrics::{default_uniform_grid, lambda_sweep};
use tikpoly::quadrature::gauss_rule;
use tikpoly::signals::NoiseSpec;

use crate::config::{ExperimentConfig, ExperimentId, NoiseModel, Scale};
use crate::experiments::{self, report_row, Artifact, REPORT_COLUMNS, VERSION};
use crate::names;
use crate::svg;
use crate::table::Table;

#[derive(Debug, Parser)]
#[command(
    name = "tikpoly",
    version,
    about = "Tikhonov regularized polynomial approximation and interpolation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment family and write CSV and SVG files.
    Run(RunArgs),
    /// Print the Gauss rule of a basis.
    QuadratureDump(QuadratureArgs),
    /// Fit a degree-L approximant from N+1 Gauss samples and print its coefficients.
    Fit(FitArgs),
    /// Evaluate the regularized barycentric interpolant.
    Interp(InterpArgs),
    /// Errors over a list of λ values.
    Sweep(SweepArgs),
    /// Redraw the SVG files of an emitted CSV.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub experiment: Option<ExperimentId>,
    /// Default sizes when no config is given.
    #[arg(long, value_enum, default_value = "full")]
    pub scale: Scale,
    #[arg(long)]
    pub basis: Option<String>,
    /// Degree range `a`, `a:b` or `a:b:step`.
    #[arg(long = "L")]
    pub l: Option<String>,
    /// Rule size range, `N + 1` points each.
    #[arg(long = "N")]
    pub n: Option<String>,
    /// Comma-separated λ values (`10^e` allowed) or `standard`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, value_enum)]
    pub noise: Option<NoiseModel>,
    #[arg(long = "snr-db", allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated function names.
    #[arg(long = "fn")]
    pub functions: Option<String>,
    /// Print the effective config and exit.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Debug, Args)]
pub struct QuadratureArgs {
    #[arg(long, default_value = "chebyshev1")]
    pub basis: String,
    #[arg(long)]
    pub points: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Sample source: a named function or a CSV of `(x, f(x))` pairs.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    #[arg(long = "fn")]
    pub function: Option<String>,
    #[arg(long)]
    pub data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, default_value = "chebyshev1")]
    pub basis: String,
    #[arg(long = "L")]
    pub l: usize,
    /// Defaults to the number of data rows minus one.
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda: String,
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InterpArgs {
    #[arg(long, default_value = "chebyshev1")]
    pub basis: String,
    /// Interpolate at N+1 Gauss nodes (with `--fn`).
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda: String,
    #[command(flatten)]
    pub source: Source,
    /// Comma-separated evaluation points.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid")]
    pub at: Option<String>,
    /// Number of equispaced evaluation points on [-1, 1].
    #[arg(long, default_value_t = 201)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "chebyshev1")]
    pub basis: String,
    #[arg(long = "L")]
    pub l: usize,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long = "fn", default_value = "f1")]
    pub function: String,
    #[arg(long, default_value = "standard", allow_hyphen_values = true)]
    pub lambda: String,
    /// Additive noise level; noise-free when absent.
    #[arg(long = "snr-db", allow_negative_numbers = true)]
    pub snr_db: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub csv: PathBuf,
    /// Output directory; defaults to the CSV's directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(a) => run(a),
        Command::QuadratureDump(a) => write_output(a.out.as_deref(), &quadrature_dump(&a)?.to_csv()?),
        Command::Fit(a) => write_output(a.out.as_deref(), &fit_table(&a)?.to_csv()?),
        Command::Interp(a) => write_output(a.out.as_deref(), &interp_table(&a)?.to_csv()?),
        Command::Sweep(a) => write_output(a.out.as_deref(), &sweep_table(&a)?.to_csv()?),
        Command::Plot(a) => plot(&a),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// The config a `run` invocation resolves to.
pub fn effective_config(a: &RunArgs) -> Result<ExperimentConfig> {
    let mut c = match (&a.config, a.experiment) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(id)) => ExperimentConfig::defaults(id, a.scale),
        (None, None) => bail!("give --config PATH or --experiment ID"),
    };
    if let Some(id) = a.experiment {
        if id != c.experiment {
            bail!("--experiment {id} contradicts config experiment {}", c.experiment);
        }
    }
    if let Some(b) = &a.basis {
        c.basis = b.clone();
    }
    if let Some(r) = &a.l {
        (c.l_min, c.l_max, c.l_step) = names::range(r)?;
    }
    if let Some(r) = &a.n {
        (c.n_min, c.n_max, c.n_step) = names::range(r)?;
    }
    if let Some(l) = &a.lambda {
        c.lambdas = names::lambda_list(l)?;
    }
    if let Some(m) = a.noise {
        c.noise = m;
    }
    if let Some(s) = a.snr_db {
        c.snr_db = s;
    }
    if let Some(s) = a.seed {
        c.seed = s;
    }
    if let Some(o) = &a.out {
        c.out = o.display().to_string();
    }
    if let Some(f) = &a.functions {
        c.functions = f.split(',').map(|s| s.trim().to_string()).collect();
    }
    c.validate()?;
    Ok(c)
}

pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for a in artifacts {
        let path = dir.join(&a.file_name);
        fs::write(&path, &a.contents).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn run(a: RunArgs) -> Result<()> {
    let config = effective_config(&a)?;
    if a.print_config {
        return write_output(None, &config.to_toml_string()?);
    }
    let artifacts = experiments::run(&config)?;
    let dir = PathBuf::from(&config.out);
    write_artifacts(&dir, &artifacts)?;
    for art in &artifacts {
        eprintln!("wrote {}", dir.join(&art.file_name).display());
    }
    Ok(())
}

fn subcommand_table(columns: &[&str], command: &str) -> Table {
    Table::new(columns)
        .with_meta("tikpoly", VERSION)
        .with_meta("command", command)
}

pub fn quadrature_dump(a: &QuadratureArgs) -> Result<Table> {
    let spec = names::basis(&a.basis)?;
    let rule = gauss_rule(spec, a.points)?;
    let mut t = subcommand_table(&["index", "node", "weight"], "quadrature-dump")
        .with_meta("spec", spec.name())
        .with_meta("points", a.points.to_string());
    for (j, (x, w)) in rule.iter().enumerate() {
        t.push(vec![j.into(), x.into(), w.into()]);
    }
    Ok(t)
}

/// `(x, f(x))` pairs from the first two columns of a CSV file.
pub fn read_pairs(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let t = Table::parse(&text).with_context(|| format!("in {}", path.display()))?;
    if t.columns.len() < 2 {
        bail!("{}: need two columns x, f(x)", path.display());
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (i, row) in t.rows.iter().enumerate() {
        match (row[0].as_f64(), row[1].as_f64()) {
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() => {
                xs.push(x);
                ys.push(y);
            }
            _ => bail!("{}: row {} is not a pair of finite numbers", path.display(), i + 1),
        }
    }
    if xs.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    Ok((xs, ys))
}

pub fn fit_table(a: &FitArgs) -> Result<Table> {
    let spec = names::basis(&a.basis)?;
    let lambda = names::lambda(&a.lambda)?;
    let (rule, samples) = match (&a.source.function, &a.source.data) {
        (Some(name), _) => {
            let n = a.n.context("--N is required with --fn")?;
            let rule = gauss_rule(spec, n + 1)?;
            let samples = SampleVector::from_fn(&rule, names::function(name)?)?;
            (rule, samples)
        }
        (None, Some(path)) => {
            let (xs, ys) = read_pairs(path)?;
            if let Some(n) = a.n {
                if n + 1 != xs.len() {
                    bail!("--N {n} needs {} data rows, file has {}", n + 1, xs.len());
                }
            }
            let rule = gauss_rule(spec, xs.len())?;
            for (j, (&x, &node)) in xs.iter().zip(rule.nodes()).enumerate() {
                if (x - node).abs() > 1e-12 {
                    bail!(
                        "row {}: x = {x} is not the Gauss node {node} of {spec} with {} points (dump them with quadrature-dump)",
                        j + 1,
                        xs.len()
                    );
                }
            }
            (rule, SampleVector::new(ys)?)
        }
        (None, None) => bail!("give --fn NAME or --data CSV"),
    };
    let p = fit(&rule, a.l, lambda, &samples)?;
    let mut t = subcommand_table(&["l", "coefficient"], "fit")
        .with_meta("spec", spec.name())
        .with_meta("L", a.l.to_string())
        .with_meta("N", rule.n().to_string())
        .with_meta("lambda", crate::table::format_float(lambda));
    if let Some(f) = &a.source.function {
        t.add_meta("fn", f.clone());
    }
    for (l, &b) in p.coefficients().iter().enumerate() {
        t.push(vec![l.into(), b.into()]);
    }
    Ok(t)
}

pub fn interp_table(a: &InterpArgs) -> Result<Table> {
    let lambda = names::lambda(&a.lambda)?;
    let mut t = subcommand_table(&["x", "p"], "interp").with_meta("lambda", crate::table::format_float(lambda));
    let data = match (&a.source.function, &a.source.data) {
        (Some(name), _) => {
            let spec = names::basis(&a.basis)?;
            let n = a.n.context("--N is required with --fn")?;
            let rule = gauss_rule(spec, n + 1)?;
            let values = SampleVector::from_fn(&rule, names::function(name)?)?.into_values();
            t.add_meta("spec", spec.name());
            t.add_meta("N", n.to_string());
            t.add_meta("fn", name.clone());
            BarycentricData::from_gauss(&rule, values, lambda)?
        }
        (None, Some(path)) => {
            let (xs, ys) = read_pairs(path)?;
            let mut pairs: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
            pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
            let (xs, ys) = pairs.into_iter().unzip();
            BarycentricData::from_nodes(xs, ys, lambda)?
        }
        (None, None) => bail!("give --fn NAME or --data CSV"),
    };
    let points: Vec<f64> = match &a.at {
        Some(list) => list
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .with_context(|| format!("bad point `{s}` in --at"))
            })
            .collect::<Result<_>>()?,
        None => {
            if a.grid < 2 {
                bail!("--grid needs at least 2 points");
            }
            (0..a.grid)
                .map(|k| -1.0 + 2.0 * k as f64 / (a.grid - 1) as f64)
                .collect()
        }
    };
    for x in points {
        t.push(vec![x.into(), data.interp_barycentric(x)?.into()]);
    }
    Ok(t)
}

pub fn sweep_table(a: &SweepArgs) -> Result<Table> {
    let spec = names::basis(&a.basis)?;
    let f = names::function(&a.function)?;
    let lambdas = names::lambda_list(&a.lambda)?;
    let noise = a.snr_db.map(|s| NoiseSpec::additive(s, a.seed)).transpose()?;
    let sweep = lambda_sweep(spec, a.l, a.n, f, noise.as_ref(), &lambdas, &default_uniform_grid())?;
    let mut t = subcommand_table(&REPORT_COLUMNS, "sweep")
        .with_meta("fn", a.function.clone())
        .with_meta("seed", a.seed.to_string())
        .with_meta(
            "best_uniform_lambda",
            crate::table::format_float(sweep.best_uniform_lambda()),
        )
        .with_meta("best_l2_lambda", crate::table::format_float(sweep.best_l2_lambda()))
        .with_meta("title", format!("{}: errors vs lambda", a.function))
        .with_meta(
            "plot",
            svg::PlotSpec::new("lambda", &["uniform_error", "l2_error"])
                .logx()
                .logy()
                .to_string(),
        );
    for r in &sweep.reports {
        t.push(report_row(r));
    }
    Ok(t)
}

fn plot(a: &PlotArgs) -> Result<()> {
    let text = fs::read_to_string(&a.csv).with_context(|| format!("cannot read {}", a.csv.display()))?;
    let table = Table::parse(&text).with_context(|| format!("in {}", a.csv.display()))?;
    let svgs = svg::render_all(&table)?;
    if svgs.is_empty() {
        bail!("{} has no `# plot:` header lines", a.csv.display());
    }
    let stem = a
        .csv
        .file_stem()
        .context("CSV path has no file name")?
        .to_string_lossy();
    let dir = match &a.out {
        Some(d) => d.clone(),
        None => a.csv.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    let artifacts: Vec<Artifact> = svgs
        .into_iter()
        .enumerate()
        .map(|(i, contents)| Artifact {
            file_name: if i == 0 {
                format!("{stem}.svg")
            } else {
                format!("{stem}_{}.svg", i + 1)
            },
            contents,
        })
        .collect();
    write_artifacts(&dir, &artifacts)
}
