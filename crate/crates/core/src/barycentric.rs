//! Barycentric interpolation in the regularized setting.
//!
//! With `L = N` the regularized fit on Gauss points is the ordinary
//! interpolant scaled by `1/(1 + λ)`. Both barycentric forms therefore carry
//! a single extra factor:
//!
//! ```text
//! first form   p(x) = ℓ(x)/(1 + λ) Σ_j Ω_j f_j / (x - x_j)
//! second form  p(x) = Σ_j Ω_j f_j / (x - x_j)  /  ((1 + λ) Σ_j Ω_j / (x - x_j))
//! ```
//!
//! where `ℓ(x) = Π_k (x - x_k)` and `Ω_j = 1 / Π_{k≠j} (x_j - x_k)`.

use alloc::vec::Vec;

use crate::basis::OrthonormalBasis;
use crate::quadrature::QuadratureRule;
use crate::{Error, Result};

/// Above this many intervals, products over the nodes are accumulated as logarithms.
pub const LOG_PRODUCT_THRESHOLD: usize = 512;

/// Barycentric weights stored as `Ω_j = values[j] · exp(log_scale)`.
///
/// The second form ignores `log_scale`. The first form needs it, because
/// `ℓ(x)` is not rescaled.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricWeights {
    values: Vec<f64>,
    log_scale: f64,
}

impl BarycentricWeights {
    pub fn new(values: Vec<f64>, log_scale: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("barycentric weights"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if !log_scale.is_finite() {
            return Err(Error::NonFinite(values.len()));
        }
        Ok(Self { values, log_scale })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `Ω_j` with the scale applied; may overflow for large node sets.
    pub fn to_absolute(&self) -> Vec<f64> {
        let s = libm::exp(self.log_scale);
        self.values.iter().map(|v| v * s).collect()
    }

    /// Same weights times `c`, which must be positive.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            log_scale: self.log_scale - libm::log(c),
        }
    }
}

/// `-Σ_{k≠j} ln|x_j - x_k|` and the sign of the product.
fn log_inverse_product(nodes: &[f64], j: usize) -> (f64, f64) {
    let xj = nodes[j];
    let mut log = 0.0;
    let mut sign = 1.0;
    for (k, &xk) in nodes.iter().enumerate() {
        if k != j {
            let d = xj - xk;
            log -= libm::log(d.abs());
            if d < 0.0 {
                sign = -sign;
            }
        }
    }
    (log, sign)
}

fn check_distinct(nodes: &[f64]) -> Result<()> {
    if nodes.len() < 2 {
        return Err(Error::TooSmall {
            what: "barycentric nodes",
            min: 2,
            got: nodes.len(),
        });
    }
    if let Some(i) = nodes.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    for j in 0..nodes.len() {
        for k in j + 1..nodes.len() {
            if nodes[j] == nodes[k] {
                return Err(Error::DuplicateNodes {
                    i: j,
                    j: k,
                    xi: nodes[j],
                    xj: nodes[k],
                });
            }
        }
    }
    Ok(())
}

/// `Ω_j = 1 / Π_{k≠j}(x_j - x_k)` by direct products, `O(N^2)`.
///
/// Up to [`LOG_PRODUCT_THRESHOLD`] intervals the values are exact products with
/// `log_scale = 0`. Beyond it they are formed from log magnitudes and
/// normalized to `max |Ω_j| = 1`.
pub fn weights_product(nodes: &[f64]) -> Result<BarycentricWeights> {
    check_distinct(nodes)?;
    let n = nodes.len() - 1;
    if n <= LOG_PRODUCT_THRESHOLD {
        let values = (0..nodes.len())
            .map(|j| {
                let p: f64 = nodes
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &xk)| nodes[j] - xk)
                    .product();
                1.0 / p
            })
            .collect();
        return BarycentricWeights::new(values, 0.0);
    }
    let logs: Vec<(f64, f64)> = (0..nodes.len()).map(|j| log_inverse_product(nodes, j)).collect();
    let top = logs.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let values = logs.iter().map(|&(l, s)| s * libm::exp(l - top)).collect();
    BarycentricWeights::new(values, top)
}

/// `Ω_j ∝ ω_j Φ̃_N(x_j)` from a Gauss rule in `O(N)` beyond the basis evaluation.
///
/// Values are normalized to `max |Ω_j| = 1`. The scale is fixed by one exact
/// product at the largest entry, so the first form stays usable.
pub fn weights_gauss(rule: &QuadratureRule) -> Result<BarycentricWeights> {
    if rule.len() < 2 {
        return Err(Error::TooSmall {
            what: "barycentric nodes",
            min: 2,
            got: rule.len(),
        });
    }
    let n = rule.n();
    let basis = OrthonormalBasis::new(rule.spec(), n)?;
    let raw: Vec<f64> = rule.iter().map(|(x, w)| w * basis.eval_single(n, x)).collect();
    let (reference, peak) = raw
        .iter()
        .enumerate()
        .map(|(j, v)| (j, v.abs()))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    if peak == 0.0 {
        return Err(Error::ZeroWeight(0));
    }
    let (log_scale, _) = log_inverse_product(rule.nodes(), reference);
    BarycentricWeights::new(raw.iter().map(|v| v / peak).collect(), log_scale)
}

/// Nodes, weights and samples for barycentric evaluation.
#[derive(Debug, Clone)]
pub struct BarycentricData {
    nodes: Vec<f64>,
    weights: BarycentricWeights,
    values: Vec<f64>,
    lambda: f64,
}

impl BarycentricData {
    /// Validates ordering, sign alternation and finiteness.
    pub fn new(nodes: Vec<f64>, weights: BarycentricWeights, values: Vec<f64>, lambda: f64) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::TooSmall {
                what: "barycentric nodes",
                min: 2,
                got: nodes.len(),
            });
        }
        for len in [weights.len(), values.len()] {
            if len != nodes.len() {
                return Err(Error::LengthMismatch {
                    expected: nodes.len(),
                    got: len,
                });
            }
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidLambda(lambda));
        }
        if let Some(i) = nodes.iter().chain(&values).position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i % nodes.len()));
        }
        for (i, w) in nodes.windows(2).enumerate() {
            if !(w[0] < w[1]) {
                return Err(Error::DuplicateNodes {
                    i,
                    j: i + 1,
                    xi: w[0],
                    xj: w[1],
                });
            }
        }
        if let Some(i) = weights.values().iter().position(|&w| w == 0.0) {
            return Err(Error::ZeroWeight(i));
        }
        if let Some(i) = weights.values().windows(2).position(|w| !(w[0] * w[1] < 0.0)) {
            return Err(Error::SignPattern(i));
        }
        Ok(Self {
            nodes,
            weights,
            values,
            lambda,
        })
    }

    /// Gauss nodes with [`weights_gauss`].
    pub fn from_gauss(rule: &QuadratureRule, values: Vec<f64>, lambda: f64) -> Result<Self> {
        let weights = weights_gauss(rule)?;
        Self::new(rule.nodes().to_vec(), weights, values, lambda)
    }

    /// Arbitrary increasing nodes with [`weights_product`].
    pub fn from_nodes(nodes: Vec<f64>, values: Vec<f64>, lambda: f64) -> Result<Self> {
        let weights = weights_product(&nodes)?;
        Self::new(nodes, weights, values, lambda)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &BarycentricWeights {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same data with another regularization parameter.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.nodes.clone(), self.weights.clone(), self.values.clone(), lambda)
    }

    fn node_hit(&self, x: f64) -> Option<f64> {
        self.nodes
            .binary_search_by(|n| n.total_cmp(&x))
            .ok()
            .map(|j| self.values[j] / (1.0 + self.lambda))
    }

    fn uses_logs(&self) -> bool {
        self.nodes.len() - 1 > LOG_PRODUCT_THRESHOLD || self.weights.log_scale != 0.0
    }

    /// First (modified Lagrange) form.
    pub fn interp_modified_lagrange(&self, x: f64) -> f64 {
        if let Some(v) = self.node_hit(x) {
            return v;
        }
        let sum: f64 = self
            .nodes
            .iter()
            .zip(self.weights.values())
            .zip(&self.values)
            .map(|((xj, w), f)| w * f / (x - xj))
            .sum();
        let shrink = 1.0 + self.lambda;
        if !self.uses_logs() {
            let ell: f64 = self.nodes.iter().map(|xk| x - xk).product();
            return ell * sum / shrink;
        }
        if sum == 0.0 {
            return 0.0;
        }
        let (log_ell, sign_ell) = self.nodes.iter().fold((0.0, 1.0), |(l, s), xk| {
            let d = x - xk;
            (l + libm::log(d.abs()), if d < 0.0 { -s } else { s })
        });
        let magnitude = libm::exp(log_ell + self.weights.log_scale + libm::log(sum.abs()));
        sign_ell * libm::copysign(magnitude, sum) / shrink
    }

    /// Second (true barycentric) form; independent of the weights' common scale.
    pub fn interp_barycentric(&self, x: f64) -> Result<f64> {
        if let Some(v) = self.node_hit(x) {
            return Ok(v);
        }
        let (mut num, mut den) = (0.0, 0.0);
        for ((xj, w), f) in self.nodes.iter().zip(self.weights.values()).zip(&self.values) {
            let t = w / (x - xj);
            num += t * f;
            den += t;
        }
        if den == 0.0 {
            return Err(Error::DegenerateDenominator(x));
        }
        Ok(num / ((1.0 + self.lambda) * den))
    }
}

/// Free-function form of [`BarycentricData::interp_modified_lagrange`].
pub fn interp_modified_lagrange(data: &BarycentricData, x: f64) -> f64 {
    data.interp_modified_lagrange(x)
}

/// Free-function form of [`BarycentricData::interp_barycentric`].
pub fn interp_barycentric(data: &BarycentricData, x: f64) -> Result<f64> {
    data.interp_barycentric(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisSpec;
    use crate::quadrature::gauss_rule;
    use alloc::vec;
    use core::f64::consts::PI;

    #[test]
    fn product_examples() {
        let w = weights_product(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(w.values(), &[0.5, -1.0, 0.5]);
        assert_eq!(w.log_scale(), 0.0);
        let w = weights_product(&[-1.0, 1.0]).unwrap();
        assert_eq!(w.values(), &[-0.5, 0.5]);
        assert!(matches!(
            weights_product(&[0.0, 0.5, 0.0]),
            Err(Error::DuplicateNodes { .. })
        ));
        assert!(weights_product(&[0.3]).is_err());
    }

    #[test]
    fn chebyshev_gauss_weights_closed_form() {
        for points in [2usize, 5, 30, 101] {
            let rule = gauss_rule(BasisSpec::chebyshev1(), points).unwrap();
            let w = weights_gauss(&rule).unwrap();
            let n = points - 1;
            // Nodes ascend as sin((2j - N)π/(2N + 2)), i.e. the reverse of the
            // usual cosine ordering, so the index is mirrored.
            let expected: Vec<f64> = (0..points)
                .map(|j| {
                    let jj = n - j;
                    let s = if jj % 2 == 0 { 1.0 } else { -1.0 };
                    s * libm::sin((2 * jj + 1) as f64 * PI / (2 * points) as f64)
                })
                .collect();
            let ratio = w.values()[0] / expected[0];
            for (a, b) in w.values().iter().zip(&expected) {
                assert!((a - ratio * b).abs() < 1e-10, "{points}");
            }
        }
    }

    #[test]
    fn gauss_route_matches_product_route_with_scale() {
        for spec in [BasisSpec::chebyshev1(), BasisSpec::legendre()] {
            let rule = gauss_rule(spec, 41).unwrap();
            let g = weights_gauss(&rule).unwrap().to_absolute();
            let p = weights_product(rule.nodes()).unwrap().to_absolute();
            for (a, b) in g.iter().zip(&p) {
                assert!((a / b - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn parabola_through_three_points() {
        let d = BarycentricData::from_nodes(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], 0.0).unwrap();
        assert!((d.interp_modified_lagrange(0.5) - 0.25).abs() < 1e-15);
        assert!((d.interp_barycentric(0.5).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(d.interp_barycentric(0.0).unwrap(), 0.0);
        assert_eq!(d.interp_modified_lagrange(1.0), 1.0);
    }

    #[test]
    fn constants_are_reproduced_scaled() {
        let rule = gauss_rule(BasisSpec::legendre(), 17).unwrap();
        for lambda in [0.0, 0.1, 2.0] {
            let d = BarycentricData::from_nodes(rule.nodes().to_vec(), vec![1.0; 17], lambda).unwrap();
            for x in [-1.0, -0.77, 0.013, 0.5, 1.0] {
                let expected = 1.0 / (1.0 + lambda);
                assert!((d.interp_modified_lagrange(x) - expected).abs() < 1e-12);
                assert!((d.interp_barycentric(x).unwrap() - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn validation() {
        let w = weights_product(&[-1.0, 0.0, 1.0]).unwrap();
        let bad = BarycentricWeights::new(vec![0.5, 1.0, 0.5], 0.0).unwrap();
        assert!(matches!(
            BarycentricData::new(vec![-1.0, 0.0, 1.0], bad, vec![0.0; 3], 0.0),
            Err(Error::SignPattern(0))
        ));
        assert!(matches!(
            BarycentricData::new(vec![-1.0, 1.0, 0.0], w.clone(), vec![0.0; 3], 0.0),
            Err(Error::DuplicateNodes { .. })
        ));
        assert!(matches!(
            BarycentricData::new(vec![-1.0, 0.0, 1.0], w.clone(), vec![0.0; 2], 0.0),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            BarycentricData::new(vec![-1.0, 0.0, 1.0], w, vec![0.0; 3], -0.5),
            Err(Error::InvalidLambda(_))
        ));
        let zero = BarycentricWeights::new(vec![0.5, 0.0, 0.5], 0.0).unwrap();
        assert!(matches!(
            BarycentricData::new(vec![-1.0, 0.0, 1.0], zero, vec![0.0; 3], 0.0),
            Err(Error::ZeroWeight(1))
        ));
    }

    #[test]
    fn large_node_sets_use_logs() {
        let rule = gauss_rule(BasisSpec::chebyshev1(), 801).unwrap();
        let p = weights_product(rule.nodes()).unwrap();
        assert!(p.log_scale() > 0.0);
        let peak = p.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert_eq!(peak, 1.0);
        let g = weights_gauss(&rule).unwrap();
        for (a, b) in g.values().iter().zip(p.values()) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!((g.log_scale() - p.log_scale()).abs() < 1e-10 * p.log_scale());
        let values: Vec<f64> = rule.nodes().iter().map(|x| libm::cos(3.0 * x)).collect();
        let d = BarycentricData::new(rule.nodes().to_vec(), g, values, 0.25).unwrap();
        for x in [-0.999, -0.3, 0.1234, 0.8] {
            let expected = libm::cos(3.0 * x) / 1.25;
            assert!((d.interp_modified_lagrange(x) - expected).abs() < 1e-9);
            assert!((d.interp_barycentric(x).unwrap() - expected).abs() < 1e-12);
        }
    }
}
