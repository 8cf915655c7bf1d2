//! Gauss quadrature rules for Jacobi weights.
//!
//! `N + 1` nodes are the zeros of `Φ_{N+1}`; the rule integrates every
//! polynomial of degree `<= 2N + 1` exactly against `w`. Rules come from
//! Golub–Welsch on the Jacobi matrix, except Chebyshev-1st which has the
//! closed form `x_j = cos((2j+1)π/(2N+2))`, `ω_j = π/(N+1)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::basis::{recurrence_coefficients, BasisSpec, OrthonormalBasis};
use crate::tridiag::ql_implicit;
use crate::{Error, Result};

/// Nodes closer than this are treated as an eigensolver breakdown.
pub const MIN_NODE_SEPARATION: f64 = 1e-14;

/// Nodes strictly increasing in `(-1, 1)` with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    spec: BasisSpec,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of points, `N + 1`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The index `N` (one less than the number of points).
    pub fn n(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// The `points`-point Gauss rule for `spec`.
pub fn gauss_rule(spec: BasisSpec, points: usize) -> Result<QuadratureRule> {
    if spec.is_chebyshev1() {
        if points == 0 {
            return Err(Error::TooSmall {
                what: "quadrature points",
                min: 1,
                got: 0,
            });
        }
        return Ok(chebyshev1_rule(points));
    }
    golub_welsch(spec, points)
}

/// Closed-form Gauss–Chebyshev rule of the first kind, ascending.
fn chebyshev1_rule(points: usize) -> QuadratureRule {
    let n = points - 1;
    let denom = 2.0 * (n as f64 + 1.0);
    // sin((2j - N)π / (2N + 2)) = -cos((2j + 1)π / (2N + 2)); the sine form
    // is exactly odd, so the rule is symmetric to the bit and 0 is exact.
    let nodes = (0..points)
        .map(|j| libm::sin((2.0 * j as f64 - n as f64) * PI / denom))
        .collect();
    QuadratureRule {
        spec: BasisSpec::chebyshev1(),
        nodes,
        weights: vec![PI / points as f64; points],
    }
}

/// Golub–Welsch: nodes are the eigenvalues of the Jacobi matrix and
/// `ω_j = V · (first eigenvector component)^2`.
///
/// The eigenvector for `x_j` is `(Φ̃_0(x_j), ..., Φ̃_N(x_j))` up to
/// normalization, so its squared first component times `V` is
/// `1 / Σ_k Φ̃_k(x_j)^2`. Weights are formed that way from the recurrence
/// rather than from accumulated rotations, which lose a few digits at large N.
/// Each eigenvalue gets one Newton step on `Φ̃_{N+1}` first.
///
/// Used for every spec except Chebyshev-1st, where it remains available as
/// a cross-check of the closed form.
pub fn golub_welsch(spec: BasisSpec, points: usize) -> Result<QuadratureRule> {
    if points == 0 {
        return Err(Error::TooSmall {
            what: "quadrature points",
            min: 1,
            got: 0,
        });
    }
    let table = recurrence_coefficients(spec, points)?;
    let mut diag = table.alpha().to_vec();
    let mut offdiag: Vec<f64> = table.beta()[1..].iter().map(|&b| libm::sqrt(b)).collect();
    offdiag.push(0.0);
    ql_implicit(&mut diag, &mut offdiag, None)?;

    // One extra recurrence step gives Φ̃_{N+1}, whose zeros the nodes are.
    let basis = OrthonormalBasis::new(spec, points)?;
    let mut values = vec![0.0; points];
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .map(|&x0| {
            let (p, dp) = basis.eval_with_derivative(points, x0);
            let x = if dp != 0.0 { x0 - p / dp } else { x0 };
            basis.eval_into(x, &mut values);
            let norm2: f64 = values.iter().map(|v| v * v).sum();
            (x, 1.0 / norm2)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    if spec.is_symmetric() {
        // Enforce the reflection symmetry the exact rule has.
        for j in 0..points / 2 {
            let k = points - 1 - j;
            let x = 0.5 * (pairs[k].0 - pairs[j].0);
            let w = 0.5 * (pairs[k].1 + pairs[j].1);
            pairs[j] = (-x, w);
            pairs[k] = (x, w);
        }
        if points % 2 == 1 {
            pairs[points / 2].0 = 0.0;
        }
    }

    let (nodes, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    validate_nodes(&nodes)?;
    Ok(QuadratureRule { spec, nodes, weights })
}

fn validate_nodes(nodes: &[f64]) -> Result<()> {
    for (i, &x) in nodes.iter().enumerate() {
        if !(x > -1.0 && x < 1.0) {
            return Err(Error::OutOfDomain(x));
        }
        if i > 0 && x - nodes[i - 1] < MIN_NODE_SEPARATION {
            return Err(Error::DuplicateNodes {
                i: i - 1,
                j: i,
                xi: nodes[i - 1],
                xj: x,
            });
        }
    }
    Ok(())
}

/// `max_{l <= degree} |Σ_j ω_j Φ̃_l(x_j) - √V δ_{l0}|`.
pub fn exactness_residual(rule: &QuadratureRule, degree: usize) -> Result<f64> {
    let basis = OrthonormalBasis::new(rule.spec, degree)?;
    let mut sums = vec![0.0; degree + 1];
    let mut values = vec![0.0; degree + 1];
    for (x, w) in rule.iter() {
        basis.eval_into(x, &mut values);
        for (s, v) in sums.iter_mut().zip(&values) {
            *s += w * v;
        }
    }
    let root_mass = libm::sqrt(rule.spec.mass());
    Ok(sums
        .iter()
        .enumerate()
        .map(|(l, s)| if l == 0 { (s - root_mass).abs() } else { s.abs() })
        .fold(0.0, f64::max))
}
