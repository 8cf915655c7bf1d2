//! Tikhonov-regularized least squares in Gauss points.
//!
//! Minimizing `Σ_j ω_j (Σ_l β_l Φ̃_l(x_j) - f_j)^2 + λ Σ_l β_l^2` leads to the
//! normal equations `(AᵀWA + λI) β = AᵀW f`. With a Gauss rule and `L <= N`,
//! `AᵀWA = I`, so
//!
//! ```text
//! β_l = 1/(1 + λ) Σ_j ω_j Φ̃_l(x_j) f(x_j)
//! ```
//!
//! [`fit`] computes exactly that sum. [`normal_equations_oracle`] builds and
//! solves the dense system instead and exists to cross-check it.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::basis::{BasisSpec, OrthonormalBasis};
use crate::quadrature::{gauss_rule, QuadratureRule};
use crate::{Error, Result};

/// Number of Chebyshev-spaced points in [`default_lebesgue_grid`].
pub const LEBESGUE_GRID_POINTS: usize = 2001;

/// Samples `f(x_0), ..., f(x_N)` aligned with a rule's nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVector {
    values: Vec<f64>,
}

impl SampleVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { values })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(rule: &QuadratureRule, f: F) -> Result<Self> {
        Self::new(rule.nodes().iter().map(|&x| f(x)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// `p(x) = Σ_{l<=L} β_l Φ̃_l(x)` together with how it was obtained.
#[derive(Debug, Clone)]
pub struct RegularizedApproximant {
    basis: OrthonormalBasis,
    lambda: f64,
    coefficients: Vec<f64>,
    rule_points: usize,
}

impl RegularizedApproximant {
    /// Rebuilds an approximant from stored coefficients.
    pub fn from_coefficients(spec: BasisSpec, lambda: f64, coefficients: Vec<f64>, rule_points: usize) -> Result<Self> {
        check_lambda(lambda)?;
        if coefficients.is_empty() {
            return Err(Error::Empty("coefficient vector"));
        }
        if let Some(i) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let basis = OrthonormalBasis::new(spec, coefficients.len() - 1)?;
        Ok(Self {
            basis,
            lambda,
            coefficients,
            rule_points,
        })
    }

    pub fn spec(&self) -> BasisSpec {
        self.basis.spec()
    }

    /// Polynomial degree `L`.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Size `N + 1` of the quadrature rule the coefficients came from.
    pub fn rule_points(&self) -> usize {
        self.rule_points
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        self.basis.sum_series(&self.coefficients, x)
    }

    pub fn evaluate_many(&self, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.evaluate(x)).collect()
    }

    /// Discrete `L2` norm `‖β‖_2`, equal to the continuous weighted norm by orthonormality.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.coefficients.iter().map(|c| c * c).sum())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidLambda(lambda));
    }
    Ok(())
}

fn check_fit_inputs(rule: &QuadratureRule, degree: usize, lambda: f64, samples: &SampleVector) -> Result<()> {
    check_lambda(lambda)?;
    if samples.len() != rule.len() {
        return Err(Error::LengthMismatch {
            expected: rule.len(),
            got: samples.len(),
        });
    }
    if degree > rule.n() {
        return Err(Error::DegreeTooHigh { degree, n: rule.n() });
    }
    Ok(())
}

/// Closed-form regularized coefficients in a single pass over the nodes.
pub fn fit(
    rule: &QuadratureRule,
    degree: usize,
    lambda: f64,
    samples: &SampleVector,
) -> Result<RegularizedApproximant> {
    check_fit_inputs(rule, degree, lambda, samples)?;
    let basis = OrthonormalBasis::new(rule.spec(), degree)?;
    let mut coefficients = vec![0.0; degree + 1];
    let mut values = vec![0.0; degree + 1];
    for ((x, w), f) in rule.iter().zip(samples.values()) {
        basis.eval_into(x, &mut values);
        let wf = w * f;
        for (c, v) in coefficients.iter_mut().zip(&values) {
            *c += wf * v;
        }
    }
    let shrink = 1.0 + lambda;
    coefficients.iter_mut().for_each(|c| *c /= shrink);
    Ok(RegularizedApproximant {
        basis,
        lambda,
        coefficients,
        rule_points: rule.len(),
    })
}

/// Solves `(AᵀWA + λI) β = AᵀW f` densely by Cholesky.
pub fn normal_equations_oracle(
    rule: &QuadratureRule,
    degree: usize,
    lambda: f64,
    samples: &SampleVector,
) -> Result<Vec<f64>> {
    check_fit_inputs(rule, degree, lambda, samples)?;
    let m = degree + 1;
    let design = design_matrix(rule, degree)?;
    let mut gram = vec![0.0; m * m];
    let mut rhs = vec![0.0; m];
    for (j, ((_, w), f)) in rule.iter().zip(samples.values()).enumerate() {
        let row = &design[j * m..(j + 1) * m];
        for a in 0..m {
            rhs[a] += row[a] * w * f;
            for b in 0..=a {
                gram[a * m + b] += row[a] * w * row[b];
            }
        }
    }
    for a in 0..m {
        gram[a * m + a] += lambda;
        for b in 0..a {
            gram[b * m + a] = gram[a * m + b];
        }
    }
    cholesky_solve(&mut gram, m, &mut rhs)?;
    Ok(rhs)
}

/// Row-major `(N+1) x (L+1)` matrix of `Φ̃_l(x_j)`.
fn design_matrix(rule: &QuadratureRule, degree: usize) -> Result<Vec<f64>> {
    let basis = OrthonormalBasis::new(rule.spec(), degree)?;
    let m = degree + 1;
    let mut a = vec![0.0; rule.len() * m];
    for (j, &x) in rule.nodes().iter().enumerate() {
        basis.eval_into(x, &mut a[j * m..(j + 1) * m]);
    }
    Ok(a)
}

/// In-place Cholesky of a dense SPD matrix followed by the two triangular solves.
fn cholesky_solve(a: &mut [f64], n: usize, b: &mut [f64]) -> Result<()> {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite(j));
        }
        let d = libm::sqrt(d);
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= a[k * n + i] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    Ok(())
}

/// `max |AᵀWA - I|`.
pub fn gram_matrix_residual(rule: &QuadratureRule, degree: usize) -> Result<f64> {
    if degree > rule.n() {
        return Err(Error::DegreeTooHigh { degree, n: rule.n() });
    }
    let m = degree + 1;
    let design = design_matrix(rule, degree)?;
    let mut gram = vec![0.0; m * m];
    for (j, w) in rule.weights().iter().enumerate() {
        let row = &design[j * m..(j + 1) * m];
        for a in 0..m {
            let wa = w * row[a];
            for b in a..m {
                gram[a * m + b] += wa * row[b];
            }
        }
    }
    let mut worst = 0.0f64;
    for a in 0..m {
        for b in a..m {
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((gram[a * m + b] - target).abs());
        }
    }
    Ok(worst)
}

/// Smallest reference rule accepted by [`continuum_limit_fit`] for degree `L`: `4L + 16`.
pub fn continuum_reference_points(degree: usize) -> usize {
    4 * degree + 16
}

/// Approximates the `N → ∞` limit `p_{L,∞}` whose coefficients are
/// `∫ w Φ̃_l f / (1 + λ)`, using a large Gauss rule of the same weight.
pub fn continuum_limit_fit<F: Fn(f64) -> f64>(
    spec: BasisSpec,
    degree: usize,
    lambda: f64,
    f: F,
    ref_points: usize,
) -> Result<RegularizedApproximant> {
    let min = continuum_reference_points(degree);
    if ref_points < min {
        return Err(Error::TooSmall {
            what: "continuum reference rule",
            min,
            got: ref_points,
        });
    }
    let rule = gauss_rule(spec, ref_points)?;
    let samples = SampleVector::from_fn(&rule, f)?;
    fit(&rule, degree, lambda, &samples)
}

/// Grid estimate of the operator sup-norm
/// `max_x Σ_j ω_j |K_L(x, x_j)| / (1 + λ)`.
///
/// This is a lower bound of the Lebesgue constant that converges under grid refinement.
pub fn lebesgue_constant(rule: &QuadratureRule, degree: usize, lambda: f64, grid: &[f64]) -> Result<f64> {
    check_lambda(lambda)?;
    if grid.is_empty() {
        return Err(Error::Empty("grid"));
    }
    if let Some(&x) = grid.iter().find(|x| !(**x >= -1.0 && **x <= 1.0)) {
        return Err(Error::OutOfDomain(x));
    }
    if degree > rule.n() {
        return Err(Error::DegreeTooHigh { degree, n: rule.n() });
    }
    let m = degree + 1;
    let design = design_matrix(rule, degree)?;
    let basis = OrthonormalBasis::new(rule.spec(), degree)?;
    let mut phi = vec![0.0; m];
    let mut worst = 0.0f64;
    for &x in grid {
        basis.eval_into(x, &mut phi);
        let mut total = 0.0;
        for (j, w) in rule.weights().iter().enumerate() {
            let row = &design[j * m..(j + 1) * m];
            let kernel: f64 = row.iter().zip(&phi).map(|(a, b)| a * b).sum();
            total += w * kernel.abs();
        }
        worst = worst.max(total);
    }
    Ok(worst / (1.0 + lambda))
}

/// `2001` Chebyshev extreme points `cos(kπ/2000)` merged with the rule's nodes, ascending.
pub fn default_lebesgue_grid(rule: &QuadratureRule) -> Vec<f64> {
    let last = (LEBESGUE_GRID_POINTS - 1) as f64;
    let mut grid: Vec<f64> = (0..LEBESGUE_GRID_POINTS)
        .map(|k| -libm::cos(k as f64 * PI / last))
        .chain(rule.nodes().iter().copied())
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn specs() -> [BasisSpec; 2] {
        [BasisSpec::chebyshev1(), BasisSpec::legendre()]
    }

    #[test]
    fn constant_samples() {
        for spec in specs() {
            let rule = gauss_rule(spec, 9).unwrap();
            let s = SampleVector::from_fn(&rule, |_| 1.0).unwrap();
            let p = fit(&rule, 3, 0.5, &s).unwrap();
            let v = spec.mass();
            assert_relative_eq!(p.coefficients()[0], v.sqrt() / 1.5, max_relative = 1e-14);
            for c in &p.coefficients()[1..] {
                assert!(c.abs() < 1e-14);
            }
            for x in [-1.0, -0.2, 0.6, 1.0] {
                assert_relative_eq!(p.evaluate(x), 1.0 / 1.5, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn basis_function_samples() {
        for spec in specs() {
            let rule = gauss_rule(spec, 7).unwrap();
            let basis = OrthonormalBasis::new(spec, 2).unwrap();
            let s = SampleVector::from_fn(&rule, |x| basis.eval_single(2, x)).unwrap();
            let p = fit(&rule, 4, 0.0, &s).unwrap();
            let oracle = normal_equations_oracle(&rule, 4, 0.0, &s).unwrap();
            let expected = [0.0, 0.0, 1.0, 0.0, 0.0];
            for l in 0..5 {
                assert!((p.coefficients()[l] - expected[l]).abs() < 1e-14);
                assert!((oracle[l] - expected[l]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn oracle_scalar_case() {
        let rule = gauss_rule(BasisSpec::legendre(), 6).unwrap();
        let s = SampleVector::from_fn(&rule, libm::exp).unwrap();
        let lambda = 0.3;
        let beta = normal_equations_oracle(&rule, 0, lambda, &s).unwrap();
        // Solved by hand: (Σ ω_j/V + λ) β = Σ ω_j f_j / √V, and Σ ω_j = V.
        let num: f64 = rule.iter().zip(s.values()).map(|((_, w), f)| w * f).sum();
        let expected = num / 2f64.sqrt() / (1.0 + lambda);
        assert_relative_eq!(beta[0], expected, max_relative = 1e-14);
        // ∫ e^x / √2 = (e - 1/e)/√2
        assert_relative_eq!(
            beta[0],
            (1f64.exp() - (-1f64).exp()) / 2f64.sqrt() / 1.3,
            max_relative = 1e-12
        );
    }

    #[test]
    fn scaling_law_is_exact() {
        let rule = gauss_rule(BasisSpec::chebyshev1(), 21).unwrap();
        let s = SampleVector::from_fn(&rule, |x| libm::sin(3.0 * x) + x * x).unwrap();
        let p0 = fit(&rule, 20, 0.0, &s).unwrap();
        for lambda in [1e-2, libm::pow(10.0, -0.7), 1.0, 7.5] {
            let p = fit(&rule, 20, lambda, &s).unwrap();
            for (a, b) in p.coefficients().iter().zip(p0.coefficients()) {
                assert!((a - b / (1.0 + lambda)).abs() <= 1e-13 * b.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn precondition_errors() {
        let rule = gauss_rule(BasisSpec::legendre(), 5).unwrap();
        let s = SampleVector::from_fn(&rule, |x| x).unwrap();
        assert!(matches!(fit(&rule, 5, 0.0, &s), Err(Error::DegreeTooHigh { .. })));
        assert!(matches!(fit(&rule, 2, -1.0, &s), Err(Error::InvalidLambda(_))));
        assert!(matches!(fit(&rule, 2, f64::NAN, &s), Err(Error::InvalidLambda(_))));
        let short = SampleVector::new(vec![1.0; 4]).unwrap();
        assert!(matches!(fit(&rule, 2, 0.0, &short), Err(Error::LengthMismatch { .. })));
        assert!(matches!(
            SampleVector::new(vec![1.0, f64::INFINITY]),
            Err(Error::NonFinite(1))
        ));
        assert!(normal_equations_oracle(&rule, 5, 0.0, &s).is_err());
        assert!(gram_matrix_residual(&rule, 5).is_err());
    }

    #[test]
    fn gram_identity() {
        let cheb = gauss_rule(BasisSpec::chebyshev1(), 33).unwrap();
        assert!(gram_matrix_residual(&cheb, 32).unwrap() < 1e-12);
        let leg = gauss_rule(BasisSpec::legendre(), 17).unwrap();
        assert!(gram_matrix_residual(&leg, 16).unwrap() < 1e-12);
        let r0 = gram_matrix_residual(&leg, 0).unwrap();
        let sum: f64 = leg.weights().iter().sum();
        assert!((r0 - (sum / 2.0 - 1.0).abs()).abs() < 1e-15);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = vec![1.0, 2.0, 2.0, 1.0];
        let mut b = vec![1.0, 1.0];
        assert_eq!(cholesky_solve(&mut a, 2, &mut b), Err(Error::NotPositiveDefinite(1)));
    }

    #[test]
    fn continuum_limit_of_polynomial() {
        // f = 3 Φ̃_0 - Φ̃_3 + 0.5 Φ̃_5
        for spec in specs() {
            let basis = OrthonormalBasis::new(spec, 5).unwrap();
            let f = |x: f64| {
                let v = basis.eval(5, x);
                3.0 * v[0] - v[3] + 0.5 * v[5]
            };
            let p = continuum_limit_fit(spec, 8, 0.0, f, continuum_reference_points(8)).unwrap();
            let expected = [3.0, 0.0, 0.0, -1.0, 0.0, 0.5, 0.0, 0.0, 0.0];
            for (c, e) in p.coefficients().iter().zip(expected) {
                assert!((c - e).abs() < 1e-10);
            }
            let pl = continuum_limit_fit(spec, 8, 0.25, f, 100).unwrap();
            for (a, b) in pl.coefficients().iter().zip(p.coefficients()) {
                assert!((a * 1.25 - b).abs() < 1e-13);
            }
        }
        assert!(matches!(
            continuum_limit_fit(BasisSpec::legendre(), 8, 0.0, |x| x, 47),
            Err(Error::TooSmall { min: 48, .. })
        ));
    }

    #[test]
    fn lebesgue_examples() {
        let rule = gauss_rule(BasisSpec::legendre(), 12).unwrap();
        let grid = default_lebesgue_grid(&rule);
        assert_eq!(grid.len(), LEBESGUE_GRID_POINTS + 12);
        let l0 = lebesgue_constant(&rule, 0, 0.0, &grid).unwrap();
        assert!((l0 - 1.0).abs() < 1e-14);
        let base = lebesgue_constant(&rule, 11, 0.0, &grid).unwrap();
        for lambda in [1e-2, 0.5, 1.0] {
            let reg = lebesgue_constant(&rule, 11, lambda, &grid).unwrap();
            assert!((reg * (1.0 + lambda) - base).abs() <= 1e-13 * base);
        }
        assert!(lebesgue_constant(&rule, 3, 0.0, &[]).is_err());
        assert!(lebesgue_constant(&rule, 3, 0.0, &[1.5]).is_err());
    }

    #[test]
    fn chebyshev_interpolation_lebesgue_grows_logarithmically() {
        let mut values = Vec::new();
        for n in [8usize, 16, 32, 64] {
            let rule = gauss_rule(BasisSpec::chebyshev1(), n + 1).unwrap();
            let grid = default_lebesgue_grid(&rule);
            values.push(lebesgue_constant(&rule, n, 0.0, &grid).unwrap());
        }
        // Λ_N ≈ (2/π) ln(N + 1) + 0.96: increasing, with per-doubling increments
        // bounded by (2/π) ln 2 ≈ 0.441.
        let step_bound = 2.0 / PI * core::f64::consts::LN_2 + 1e-3;
        for w in values.windows(2) {
            assert!(w[1] > w[0]);
            assert!(w[1] - w[0] < step_bound, "{values:?}");
        }
        for (v, n) in values.iter().zip([8.0f64, 16.0, 32.0, 64.0]) {
            let model = 2.0 / PI * libm::log(n + 1.0);
            assert!(*v - model > 0.9 && *v - model < 1.1, "{values:?}");
        }
    }
}
