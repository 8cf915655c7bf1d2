//! Error estimation, λ sweeps and empirical checks of the error bounds.
//!
//! The uniform error is a maximum over a finite grid, the `L2` error a Gauss
//! quadrature sum. Both are estimates: the `L2` value is exact only when
//! `(f - p)^2` is a polynomial of degree at most `2M - 1` for an `M`-point rule.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::basis::BasisSpec;
use crate::fit::{continuum_limit_fit, continuum_reference_points, default_lebesgue_grid, fit, lebesgue_constant};
use crate::fit::{RegularizedApproximant, SampleVector};
use crate::quadrature::{gauss_rule, QuadratureRule};
use crate::signals::{add_noise, NoiseKind, NoiseSpec};
use crate::{Error, Result};

/// Equispaced points in [`default_uniform_grid`].
pub const UNIFORM_GRID_EQUISPACED: usize = 10001;
/// Chebyshev extreme points in [`default_uniform_grid`].
pub const UNIFORM_GRID_CHEBYSHEV: usize = 2001;
/// From this `N` on, the fitting rule itself estimates the `L2` error.
pub const L2_REUSE_THRESHOLD: usize = 512;
/// Inflation applied to the `E_L` and `‖p*‖` surrogates.
pub const SURROGATE_FACTOR: f64 = 4.0;
/// A bound check passes when `rhs - lhs >= -BOUND_TOLERANCE`.
pub const BOUND_TOLERANCE: f64 = 1e-9;
/// Minimum size of the reference rule behind the bound surrogates.
pub const SURROGATE_REFERENCE_POINTS: usize = 512;

/// Errors of one fit plus what is needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub spec: BasisSpec,
    pub degree: usize,
    pub n: usize,
    pub lambda: f64,
    pub seed: Option<u64>,
    pub snr_db: Option<f64>,
    pub uniform_error: f64,
    pub l2_error: f64,
    pub grid_size: usize,
    pub rule_size: usize,
}

/// `max_x |f(x) - p(x)|` over the grid.
pub fn uniform_error<F, P>(f: F, p: P, grid: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
{
    if grid.is_empty() {
        return Err(Error::Empty("grid"));
    }
    Ok(grid.iter().map(|&x| (f(x) - p(x)).abs()).fold(0.0, f64::max))
}

/// `(Σ_j ω_j (f(x_j) - p(x_j))^2)^{1/2}`
pub fn l2_error<F, P>(f: F, p: P, rule: &QuadratureRule) -> f64
where
    F: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
{
    weighted_l2_error(f, p, rule.nodes(), rule.weights())
}

/// [`l2_error`] over explicit node and weight slices in any order.
pub fn weighted_l2_error<F, P>(f: F, p: P, nodes: &[f64], weights: &[f64]) -> f64
where
    F: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
{
    let sum: f64 = nodes
        .iter()
        .zip(weights)
        .map(|(&x, w)| {
            let d = f(x) - p(x);
            w * d * d
        })
        .sum();
    libm::sqrt(sum)
}

/// 10001 equispaced points and 2001 Chebyshev extreme points on `[-1, 1]`, ascending.
pub fn default_uniform_grid() -> Vec<f64> {
    let eq = (UNIFORM_GRID_EQUISPACED - 1) as f64;
    let ch = (UNIFORM_GRID_CHEBYSHEV - 1) as f64;
    let mut grid: Vec<f64> = (0..UNIFORM_GRID_EQUISPACED)
        .map(|k| -1.0 + 2.0 * k as f64 / eq)
        .chain((0..UNIFORM_GRID_CHEBYSHEV).map(|k| -libm::cos(k as f64 * PI / ch)))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

/// Rule for the `L2` estimate of a degree-`L` fit on `fitting`.
///
/// For `N >= 512` this is the fitting rule. Otherwise it is a fresh Gauss
/// rule of the same weight with `max(N + 1, 2L + 2)` points.
pub fn default_l2_rule(fitting: &QuadratureRule, degree: usize) -> Result<QuadratureRule> {
    if fitting.n() >= L2_REUSE_THRESHOLD {
        return Ok(fitting.clone());
    }
    let points = fitting.len().max(2 * degree + 2);
    if points == fitting.len() {
        return Ok(fitting.clone());
    }
    gauss_rule(fitting.spec(), points)
}

/// λ = 10^{-2}, 10^{-1.9}, ..., 10^{-0.1}, 1.
pub fn standard_lambda_grid() -> Vec<f64> {
    (0..=20).map(|k| libm::pow(10.0, (k as f64 - 20.0) / 10.0)).collect()
}

fn snr_of(noise: Option<&NoiseSpec>) -> Option<f64> {
    match noise.map(|n| n.kind()) {
        Some(NoiseKind::AdditiveWhiteSnr { snr_db }) => Some(snr_db),
        _ => None,
    }
}

/// Samples of `f` at the rule's nodes, with noise applied when given.
pub fn sample<F: Fn(f64) -> f64>(rule: &QuadratureRule, f: F, noise: Option<&NoiseSpec>) -> Result<SampleVector> {
    let clean = SampleVector::from_fn(rule, f)?;
    match noise {
        Some(n) => add_noise(&clean, n),
        None => Ok(clean),
    }
}

/// Uniform and `L2` errors of a fitted approximant against the clean `f`.
pub fn report_for<F: Fn(f64) -> f64>(
    f: F,
    approx: &RegularizedApproximant,
    fitting: &QuadratureRule,
    grid: &[f64],
    noise: Option<&NoiseSpec>,
) -> Result<ErrorReport> {
    let l2_rule = default_l2_rule(fitting, approx.degree())?;
    Ok(ErrorReport {
        spec: fitting.spec(),
        degree: approx.degree(),
        n: fitting.n(),
        lambda: approx.lambda(),
        seed: noise.map(|n| n.seed()),
        snr_db: snr_of(noise),
        uniform_error: uniform_error(&f, |x| approx.evaluate(x), grid)?,
        l2_error: l2_error(&f, |x| approx.evaluate(x), &l2_rule),
        grid_size: grid.len(),
        rule_size: l2_rule.len(),
    })
}

/// One report per λ, all from the same (possibly noisy) samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub reports: Vec<ErrorReport>,
    /// Index into `reports` of the smallest uniform error (first on ties).
    pub best_uniform: usize,
    /// Index into `reports` of the smallest `L2` error (first on ties).
    pub best_l2: usize,
}

impl SweepResult {
    pub fn best_uniform_lambda(&self) -> f64 {
        self.reports[self.best_uniform].lambda
    }

    pub fn best_l2_lambda(&self) -> f64 {
        self.reports[self.best_l2].lambda
    }
}

fn argmin(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Fits degree `L` on `N + 1` Gauss points for every λ in `lambdas`.
pub fn lambda_sweep<F: Fn(f64) -> f64>(
    spec: BasisSpec,
    degree: usize,
    n: usize,
    f: F,
    noise: Option<&NoiseSpec>,
    lambdas: &[f64],
    grid: &[f64],
) -> Result<SweepResult> {
    if lambdas.is_empty() {
        return Err(Error::Empty("lambda list"));
    }
    let rule = gauss_rule(spec, n + 1)?;
    let samples = sample(&rule, &f, noise)?;
    let reports = lambdas
        .iter()
        .map(|&lambda| {
            let approx = fit(&rule, degree, lambda, &samples)?;
            report_for(&f, &approx, &rule, grid, noise)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        best_uniform: argmin(reports.iter().map(|r| r.uniform_error)),
        best_l2: argmin(reports.iter().map(|r| r.l2_error)),
        reports,
    })
}

/// Outcome of one inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`
    pub slack: f64,
    pub passed: bool,
}

impl BoundCheck {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            lhs,
            rhs,
            slack,
            passed: slack >= -BOUND_TOLERANCE,
        }
    }
}

/// Right-hand-side ingredients shared by all four bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub lambda: f64,
    /// `V = ∫ w`
    pub mass: f64,
    /// Upper surrogate for `E_L(f)`.
    pub best_error: f64,
    /// Surrogate for `‖p*‖_{L2}`.
    pub best_l2_norm: f64,
    /// Surrogate for `‖p*‖_∞`.
    pub best_sup_norm: f64,
    /// `‖f - f^ε‖_∞`; the operator only sees the nodes, so the nodal maximum suffices.
    pub noise_sup: f64,
    /// `Λ_{λ,L}` on a grid.
    pub lebesgue: f64,
}

/// Which `E_L` coefficient to use in the `L2` bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum L2BoundForm {
    /// `√V (1 + 1/(1+λ)) E_L`, as the triangle-inequality argument yields.
    Derived,
    /// `(1 + 1/(1+λ)) E_L`, dropping `√V`. Weaker than `Derived` when `V > 1`.
    WithoutMass,
}

fn l2_rhs(inputs: &BoundInputs, noise_sup: f64, form: L2BoundForm) -> f64 {
    let shrink = 1.0 / (1.0 + inputs.lambda);
    let root_v = libm::sqrt(inputs.mass);
    let e_coefficient = match form {
        L2BoundForm::Derived => root_v * (1.0 + shrink),
        L2BoundForm::WithoutMass => 1.0 + shrink,
    };
    root_v * shrink * noise_sup + e_coefficient * inputs.best_error + inputs.lambda * shrink * inputs.best_l2_norm
}

/// `‖U_λ f - f‖_{L2} <= c E_L + λ/(1+λ) ‖p*‖_{L2}` for noise-free data.
pub fn bound_check_l2(l2_err: f64, inputs: &BoundInputs, form: L2BoundForm) -> BoundCheck {
    BoundCheck::new(l2_err, l2_rhs(inputs, 0.0, form))
}

/// `‖U_λ f^ε - f‖_{L2} <= √V/(1+λ) ‖f - f^ε‖_∞ + c E_L + λ/(1+λ) ‖p*‖_{L2}`.
pub fn bound_check_l2_noise(l2_err: f64, inputs: &BoundInputs, form: L2BoundForm) -> BoundCheck {
    BoundCheck::new(l2_err, l2_rhs(inputs, inputs.noise_sup, form))
}

fn uniform_rhs(inputs: &BoundInputs, noise_sup: f64) -> f64 {
    let shrink = 1.0 / (1.0 + inputs.lambda);
    inputs.lebesgue * noise_sup
        + (1.0 + inputs.lebesgue) * inputs.best_error
        + inputs.lambda * shrink * inputs.best_sup_norm
}

/// `‖U_λ f - f‖_∞ <= (1 + Λ_{λ,L}) E_L + λ/(1+λ) ‖p*‖_∞`.
pub fn bound_check_uniform(uniform_err: f64, inputs: &BoundInputs) -> BoundCheck {
    BoundCheck::new(uniform_err, uniform_rhs(inputs, 0.0))
}

/// `‖U_λ f^ε - f‖_∞ <= Λ_{λ,L} ‖f^ε - f‖_∞ + (1 + Λ_{λ,L}) E_L + λ/(1+λ) ‖p*‖_∞`.
pub fn bound_check_uniform_noise(uniform_err: f64, inputs: &BoundInputs) -> BoundCheck {
    BoundCheck::new(uniform_err, uniform_rhs(inputs, inputs.noise_sup))
}

/// Surrogates for `E_L(f)`, `‖p*‖_{L2}` and `‖p*‖_∞`.
///
/// Uses the degree-`L` truncated orthonormal expansion (λ = 0, large
/// reference rule) in place of the unknown best approximation, with every
/// quantity multiplied by [`SURROGATE_FACTOR`].
pub fn best_approximation_surrogates<F: Fn(f64) -> f64>(
    spec: BasisSpec,
    degree: usize,
    f: F,
    grid: &[f64],
) -> Result<(f64, f64, f64)> {
    let points = continuum_reference_points(degree).max(SURROGATE_REFERENCE_POINTS);
    let truncation = continuum_limit_fit(spec, degree, 0.0, &f, points)?;
    let e = uniform_error(&f, |x| truncation.evaluate(x), grid)?;
    let sup = grid.iter().map(|&x| truncation.evaluate(x).abs()).fold(0.0, f64::max);
    Ok((
        SURROGATE_FACTOR * e,
        SURROGATE_FACTOR * truncation.l2_norm(),
        SURROGATE_FACTOR * sup,
    ))
}

/// All bound checks for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub clean: ErrorReport,
    pub noisy: ErrorReport,
    pub l2_clean: BoundCheck,
    pub l2_noisy: BoundCheck,
    pub uniform_clean: BoundCheck,
    pub uniform_noisy: BoundCheck,
    /// The noisy `L2` check in the [`L2BoundForm::WithoutMass`] form, for reference.
    pub l2_noisy_without_mass: BoundCheck,
}

impl BoundReport {
    pub fn all_passed(&self) -> bool {
        [self.l2_clean, self.l2_noisy, self.uniform_clean, self.uniform_noisy]
            .iter()
            .all(|c| c.passed)
    }
}

/// Fits clean and noisy samples of `f` and checks all four bounds.
pub fn verify_bounds<F: Fn(f64) -> f64>(
    spec: BasisSpec,
    degree: usize,
    n: usize,
    lambda: f64,
    f: F,
    noise: &NoiseSpec,
) -> Result<BoundReport> {
    let rule = gauss_rule(spec, n + 1)?;
    let grid = default_uniform_grid();
    let clean_samples = sample(&rule, &f, None)?;
    let noisy_samples = add_noise(&clean_samples, noise)?;
    let clean_fit = fit(&rule, degree, lambda, &clean_samples)?;
    let noisy_fit = fit(&rule, degree, lambda, &noisy_samples)?;
    let clean = report_for(&f, &clean_fit, &rule, &grid, None)?;
    let noisy = report_for(&f, &noisy_fit, &rule, &grid, Some(noise))?;

    let (best_error, best_l2_norm, best_sup_norm) = best_approximation_surrogates(spec, degree, &f, &grid)?;
    let noise_sup = clean_samples
        .values()
        .iter()
        .zip(noisy_samples.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let lebesgue = lebesgue_constant(&rule, degree, lambda, &default_lebesgue_grid(&rule))?;
    let inputs = BoundInputs {
        lambda,
        mass: spec.mass(),
        best_error,
        best_l2_norm,
        best_sup_norm,
        noise_sup,
        lebesgue,
    };
    Ok(BoundReport {
        l2_clean: bound_check_l2(clean.l2_error, &inputs, L2BoundForm::Derived),
        l2_noisy: bound_check_l2_noise(noisy.l2_error, &inputs, L2BoundForm::Derived),
        uniform_clean: bound_check_uniform(clean.uniform_error, &inputs),
        uniform_noisy: bound_check_uniform_noise(noisy.uniform_error, &inputs),
        l2_noisy_without_mass: bound_check_l2_noise(noisy.l2_error, &inputs, L2BoundForm::WithoutMass),
        inputs,
        clean,
        noisy,
    })
}
