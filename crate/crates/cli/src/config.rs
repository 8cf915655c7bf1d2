//! Experiment configuration files.
//!
//! A config is a flat TOML table. Only `experiment` is required; every other
//! key falls back to the defaults of that experiment at the chosen `scale`.
//! Unknown keys are rejected.
//!
//! ```toml
//! experiment = "fig1"
//! scale = "desk"
//! basis = "chebyshev1"
//! functions = ["f1", "f2"]
//! l_min = 10
//! l_max = 200
//! l_step = 10
//! n_min = 200
//! n_max = 200
//! n_step = 1
//! lambdas = [0.0, 0.19952623149688797]
//! noise = "additive"
//! snr_db = 5.0
//! seed = 1
//! out = "results/fig1"
//! ```

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::names;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig45,
    Sweep,
    Custom,
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig45 => "fig45",
            Self::Sweep => "sweep",
            Self::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// `full` runs the original problem sizes; `desk` shrinks them to run in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Full,
    Desk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    None,
    Additive,
    Multiplicative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub scale: Scale,
    pub basis: String,
    pub functions: Vec<String>,
    pub l_min: usize,
    pub l_max: usize,
    pub l_step: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub n_step: usize,
    pub lambdas: Vec<f64>,
    pub noise: NoiseModel,
    pub snr_db: f64,
    /// `c` values of the `(1 + c r)` data variants.
    pub amplitudes: Vec<f64>,
    /// Constant factors of the scaled data variants.
    pub scale_factors: Vec<f64>,
    pub seed: u64,
    pub out: String,
}

fn tikhonov_lambda() -> f64 {
    libm::pow(10.0, -0.7)
}

impl ExperimentConfig {
    pub fn defaults(experiment: ExperimentId, scale: Scale) -> Self {
        let full = scale == Scale::Full;
        let mut c = Self {
            experiment,
            scale,
            basis: "chebyshev1".into(),
            functions: vec!["f1".into(), "f2".into()],
            l_min: 10,
            l_max: 500,
            l_step: 10,
            n_min: 500,
            n_max: 500,
            n_step: 1,
            lambdas: vec![0.0, tikhonov_lambda()],
            noise: NoiseModel::Additive,
            snr_db: 5.0,
            amplitudes: vec![0.3, 0.4],
            scale_factors: vec![1.2],
            seed: 1,
            out: format!("results/{experiment}"),
        };
        match experiment {
            ExperimentId::Fig1 => {
                if !full {
                    (c.l_max, c.n_min, c.n_max) = (200, 200, 200);
                }
            }
            ExperimentId::Fig2 => {
                let (l, n_max, step) = if full { (500, 2000, 50) } else { (100, 400, 20) };
                (c.l_min, c.l_max, c.l_step) = (l, l, 1);
                (c.n_min, c.n_max, c.n_step) = (l, n_max, step);
            }
            ExperimentId::Fig3 => {
                c.functions = vec!["f3".into()];
                (c.n_min, c.n_max, c.n_step) = (20, if full { 1000 } else { 400 }, 20);
                (c.l_min, c.l_max, c.l_step) = (c.n_min, c.n_max, c.n_step);
            }
            ExperimentId::Fig4 | ExperimentId::Fig5 | ExperimentId::Fig45 => {
                c.functions = match experiment {
                    ExperimentId::Fig4 => vec!["f1".into()],
                    ExperimentId::Fig5 => vec!["f1-plus-sin10x".into()],
                    _ => vec!["f1".into(), "f1-plus-sin10x".into()],
                };
                (c.l_min, c.l_max, c.l_step) = (60, 60, 1);
                (c.n_min, c.n_max, c.n_step) = (60, 60, 1);
                c.lambdas = vec![tikhonov_lambda()];
                c.noise = NoiseModel::Multiplicative;
            }
            ExperimentId::Sweep => {
                c.functions = vec!["f1".into()];
                let (l, n) = if full { (200, 500) } else { (100, 200) };
                (c.l_min, c.l_max, c.l_step) = (l, l, 1);
                (c.n_min, c.n_max, c.n_step) = (n, n, 1);
                c.lambdas = tikpoly::metrics::standard_lambda_grid();
            }
            ExperimentId::Custom => {
                c.functions = vec!["f1".into()];
                let n = if full { 200 } else { 100 };
                (c.l_max, c.n_min, c.n_max) = (n, n, n);
                c.lambdas = vec![0.0, 0.2];
                c.noise = NoiseModel::None;
            }
        }
        c
    }

    /// Parses a config file's text, filling missing keys from the experiment defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let user: toml::Table = toml::from_str(text).context("config is not valid TOML")?;
        let experiment: ExperimentId = user
            .get("experiment")
            .context("config must set `experiment`")?
            .clone()
            .try_into()
            .context("bad `experiment`")?;
        let scale: Scale = match user.get("scale") {
            Some(v) => v.clone().try_into().context("bad `scale` (expected full or desk)")?,
            None => Scale::Full,
        };
        let defaults = Self::defaults(experiment, scale);
        let mut merged = toml::Table::try_from(&defaults)?;
        for (key, value) in user {
            if !merged.contains_key(&key) {
                bail!("unknown config key `{key}`");
            }
            merged.insert(key, value);
        }
        let config: Self = merged.try_into().context("bad config value")?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        names::basis(&self.basis)?;
        if self.functions.is_empty() {
            bail!("`functions` is empty");
        }
        for f in &self.functions {
            names::function(f)?;
        }
        if self.l_min > self.l_max || self.l_step == 0 {
            bail!("empty degree range l_min..=l_max step l_step");
        }
        if self.n_min > self.n_max || self.n_step == 0 {
            bail!("empty N range n_min..=n_max step n_step");
        }
        if self.lambdas.is_empty() {
            bail!("`lambdas` is empty");
        }
        if let Some(l) = self.lambdas.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            bail!("λ must be finite and nonnegative, got {l}");
        }
        if !self.snr_db.is_finite() {
            bail!("`snr_db` must be finite");
        }
        if let Some(c) = self.amplitudes.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
            bail!("amplitudes must be finite and nonnegative, got {c}");
        }
        if let Some(c) = self.scale_factors.iter().find(|c| !c.is_finite()) {
            bail!("scale factors must be finite, got {c}");
        }
        if self.seed > i64::MAX as u64 {
            bail!("`seed` must fit in a signed 64-bit integer");
        }
        Ok(())
    }

    pub fn degrees(&self) -> Vec<usize> {
        (self.l_min..=self.l_max).step_by(self.l_step).collect()
    }

    pub fn ns(&self) -> Vec<usize> {
        (self.n_min..=self.n_max).step_by(self.n_step).collect()
    }
}
