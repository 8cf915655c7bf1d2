//! Orthonormal Jacobi polynomials on `[-1, 1]`.
//!
//! The weight is `w(x) = (1 - x)^a (1 + x)^b`. Monic recurrence coefficients
//! come from the closed-form Jacobi expressions; evaluation runs the
//! orthonormal form of the three-term recurrence,
//!
//! ```text
//! sqrt(b_{k+1}) p_{k+1}(x) = (x - a_k) p_k(x) - sqrt(b_k) p_{k-1}(x),  p_0 = 1/sqrt(V)
//! ```
//!
//! which keeps values `O(1)` on the interval even at high degree.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Below this separation `cd_kernel_quotient` declines to evaluate.
pub const CD_QUOTIENT_THRESHOLD: f64 = 1e-3;

/// Jacobi weight `(1 - x)^a (1 + x)^b` identifying an orthonormal family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    jacobi_a: f64,
    jacobi_b: f64,
}

impl BasisSpec {
    pub fn new(jacobi_a: f64, jacobi_b: f64) -> Result<Self> {
        if !(jacobi_a.is_finite() && jacobi_b.is_finite() && jacobi_a > -1.0 && jacobi_b > -1.0) {
            return Err(Error::InvalidSpec {
                a: jacobi_a,
                b: jacobi_b,
            });
        }
        Ok(Self { jacobi_a, jacobi_b })
    }

    /// Chebyshev polynomials of the first kind, `w(x) = 1/sqrt(1 - x^2)`.
    pub const fn chebyshev1() -> Self {
        Self {
            jacobi_a: -0.5,
            jacobi_b: -0.5,
        }
    }

    /// Legendre polynomials, `w(x) = 1`.
    pub const fn legendre() -> Self {
        Self {
            jacobi_a: 0.0,
            jacobi_b: 0.0,
        }
    }

    pub fn jacobi_a(&self) -> f64 {
        self.jacobi_a
    }

    pub fn jacobi_b(&self) -> f64 {
        self.jacobi_b
    }

    pub fn is_chebyshev1(&self) -> bool {
        self.jacobi_a == -0.5 && self.jacobi_b == -0.5
    }

    pub fn is_legendre(&self) -> bool {
        self.jacobi_a == 0.0 && self.jacobi_b == 0.0
    }

    pub fn is_symmetric(&self) -> bool {
        self.jacobi_a == self.jacobi_b
    }

    /// `V = 2^(a+b+1) Γ(a+1) Γ(b+1) / Γ(a+b+2)`, computed through log-gamma.
    pub fn mass(&self) -> f64 {
        if self.is_chebyshev1() {
            return core::f64::consts::PI;
        }
        if self.is_legendre() {
            return 2.0;
        }
        let (a, b) = (self.jacobi_a, self.jacobi_b);
        libm::exp(
            (a + b + 1.0) * core::f64::consts::LN_2 + libm::lgamma(a + 1.0) + libm::lgamma(b + 1.0)
                - libm::lgamma(a + b + 2.0),
        )
    }

    /// The weight function itself. Infinite at an endpoint with a negative exponent.
    pub fn weight(&self, x: f64) -> f64 {
        libm::pow(1.0 - x, self.jacobi_a) * libm::pow(1.0 + x, self.jacobi_b)
    }

    /// Short name used in file headers: `chebyshev1`, `legendre` or `jacobi(a,b)`.
    pub fn name(&self) -> alloc::string::String {
        alloc::format!("{self}")
    }
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_chebyshev1() {
            f.write_str("chebyshev1")
        } else if self.is_legendre() {
            f.write_str("legendre")
        } else {
            write!(f, "jacobi({},{})", self.jacobi_a, self.jacobi_b)
        }
    }
}

/// Monic recurrence `π_{k+1}(x) = (x - a_k) π_k(x) - b_k π_{k-1}(x)`; `b_0` holds the mass `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl RecurrenceTable {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Diagonal coefficients `a_k`.
    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    /// Off-diagonal coefficients `b_k`, with `b_0 = V`.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }
}

/// First `n` monic Jacobi recurrence coefficients.
pub fn recurrence_coefficients(spec: BasisSpec, n: usize) -> Result<RecurrenceTable> {
    BasisSpec::new(spec.jacobi_a, spec.jacobi_b)?;
    if n == 0 {
        return Err(Error::TooSmall {
            what: "recurrence length",
            min: 1,
            got: 0,
        });
    }
    let (a, b) = (spec.jacobi_a, spec.jacobi_b);
    let ab = a + b;
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        let ak = if a == b {
            0.0
        } else if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        let bk = match k {
            0 => spec.mass(),
            // The general expression is 0/0 at k = 1 when a + b = -1.
            1 => 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab)),
            _ => 4.0 * kf * (kf + a) * (kf + b) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0)),
        };
        alpha.push(ak);
        beta.push(bk);
    }
    Ok(RecurrenceTable { alpha, beta })
}

/// Precomputed orthonormal recurrence through degree `max_degree`.
///
/// Reused by the fitting and kernel code so the coefficient table is built once.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    spec: BasisSpec,
    alpha: Vec<f64>,
    sqrt_beta: Vec<f64>,
}

impl OrthonormalBasis {
    pub fn new(spec: BasisSpec, max_degree: usize) -> Result<Self> {
        let table = recurrence_coefficients(spec, max_degree + 1)?;
        Ok(Self::from_table(spec, &table))
    }

    pub fn from_table(spec: BasisSpec, table: &RecurrenceTable) -> Self {
        Self {
            spec,
            alpha: table.alpha.clone(),
            sqrt_beta: table.beta.iter().map(|&b| libm::sqrt(b)).collect(),
        }
    }

    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn max_degree(&self) -> usize {
        self.alpha.len() - 1
    }

    /// `sqrt(b_k)`; for `k >= 1` this is the leading-coefficient ratio `‖π_k‖ / ‖π_{k-1}‖`.
    pub fn sqrt_beta(&self, k: usize) -> f64 {
        self.sqrt_beta[k]
    }

    /// Writes `Φ̃_0(x) ..= Φ̃_{out.len()-1}(x)` into `out`.
    ///
    /// Panics if `out.len() > max_degree + 1`.
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        let n = out.len();
        assert!(n <= self.alpha.len(), "degree beyond precomputed table");
        if n == 0 {
            return;
        }
        out[0] = 1.0 / self.sqrt_beta[0];
        if n == 1 {
            return;
        }
        out[1] = (x - self.alpha[0]) * out[0] / self.sqrt_beta[1];
        for k in 1..n - 1 {
            out[k + 1] = ((x - self.alpha[k]) * out[k] - self.sqrt_beta[k] * out[k - 1]) / self.sqrt_beta[k + 1];
        }
    }

    pub fn eval(&self, degree: usize, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; degree + 1];
        self.eval_into(x, &mut out);
        out
    }

    /// `Φ̃_degree(x)` alone, without storing the lower degrees.
    pub fn eval_single(&self, degree: usize, x: f64) -> f64 {
        assert!(degree < self.alpha.len(), "degree beyond precomputed table");
        let mut prev = 0.0;
        let mut cur = 1.0 / self.sqrt_beta[0];
        for k in 0..degree {
            let beta_term = if k == 0 { 0.0 } else { self.sqrt_beta[k] * prev };
            let next = ((x - self.alpha[k]) * cur - beta_term) / self.sqrt_beta[k + 1];
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `(Φ̃_degree(x), Φ̃'_degree(x))` by the differentiated recurrence.
    pub fn eval_with_derivative(&self, degree: usize, x: f64) -> (f64, f64) {
        assert!(degree < self.alpha.len(), "degree beyond precomputed table");
        let (mut p_prev, mut d_prev) = (0.0, 0.0);
        let (mut p, mut d) = (1.0 / self.sqrt_beta[0], 0.0);
        for k in 0..degree {
            let sb = if k == 0 { 0.0 } else { self.sqrt_beta[k] };
            let p_next = ((x - self.alpha[k]) * p - sb * p_prev) / self.sqrt_beta[k + 1];
            let d_next = ((x - self.alpha[k]) * d + p - sb * d_prev) / self.sqrt_beta[k + 1];
            p_prev = p;
            d_prev = d;
            p = p_next;
            d = d_next;
        }
        (p, d)
    }

    /// `Σ_{l<=degree} β_l Φ̃_l(x)` in one recurrence sweep.
    pub fn sum_series(&self, coefficients: &[f64], x: f64) -> f64 {
        let n = coefficients.len();
        if n == 0 {
            return 0.0;
        }
        assert!(n <= self.alpha.len(), "degree beyond precomputed table");
        let mut prev = 0.0;
        let mut cur = 1.0 / self.sqrt_beta[0];
        let mut acc = coefficients[0] * cur;
        for k in 0..n - 1 {
            let beta_term = if k == 0 { 0.0 } else { self.sqrt_beta[k] * prev };
            let next = ((x - self.alpha[k]) * cur - beta_term) / self.sqrt_beta[k + 1];
            prev = cur;
            cur = next;
            acc += coefficients[k + 1] * cur;
        }
        acc
    }

    /// Christoffel–Darboux kernel `K_L(x, y)` by direct summation.
    pub fn kernel(&self, degree: usize, x: f64, y: f64) -> f64 {
        let px = self.eval(degree, x);
        let py = self.eval(degree, y);
        px.iter().zip(&py).map(|(a, b)| a * b).sum()
    }

    /// Christoffel–Darboux quotient form; needs `max_degree >= degree + 1`.
    pub fn kernel_quotient(&self, degree: usize, x: f64, y: f64) -> f64 {
        let px = self.eval(degree + 1, x);
        let py = self.eval(degree + 1, y);
        self.sqrt_beta[degree + 1] * (px[degree + 1] * py[degree] - px[degree] * py[degree + 1]) / (x - y)
    }
}

/// `Φ̃_0(x) ..= Φ̃_{l_max}(x)`.
pub fn eval_orthonormal(spec: BasisSpec, l_max: usize, x: f64) -> Result<Vec<f64>> {
    Ok(OrthonormalBasis::new(spec, l_max)?.eval(l_max, x))
}

/// `K_L(x, y) = Σ_{l<=L} Φ̃_l(x) Φ̃_l(y)`.
pub fn cd_kernel(spec: BasisSpec, degree: usize, x: f64, y: f64) -> Result<f64> {
    Ok(OrthonormalBasis::new(spec, degree)?.kernel(degree, x, y))
}

/// The same kernel through the Christoffel–Darboux quotient. Returns `None`
/// when `|x - y| < CD_QUOTIENT_THRESHOLD`, where the quotient loses accuracy.
pub fn cd_kernel_quotient(spec: BasisSpec, degree: usize, x: f64, y: f64) -> Result<Option<f64>> {
    let basis = OrthonormalBasis::new(spec, degree + 1)?;
    if (x - y).abs() < CD_QUOTIENT_THRESHOLD {
        return Ok(None);
    }
    Ok(Some(basis.kernel_quotient(degree, x, y)))
}
