#![cfg_attr(not(feature = "std"), no_std)]

//! Tikhonov-regularized least-squares polynomial approximation on `[-1, 1]`
//! with data sampled at Gauss quadrature points.
//!
//! With `N + 1` Gauss nodes of a Jacobi weight and an orthonormal basis of
//! degree `L <= N`, the discrete Gram matrix is the identity, so the
//! regularized normal equations collapse to a diagonal system and every
//! coefficient has the closed form
//!
//! ```text
//! beta_l = 1/(1 + lambda) * sum_j w_j * phi_l(x_j) * f(x_j)
//! ```
//!
//! For `L = N` the same polynomial is produced by both barycentric
//! interpolation formulas with a single extra factor `1/(1 + lambda)`.
//!
//! The crate is `no_std` (with `alloc`); transcendental functions come from
//! `libm` so results are bit-identical across platforms.
//!
//! ```
//! use tikpoly::{basis::BasisSpec, quadrature::gauss_rule, fit::{fit, SampleVector}};
//!
//! let rule = gauss_rule(BasisSpec::chebyshev1(), 33).unwrap();
//! let samples = SampleVector::from_fn(&rule, |x| x * x).unwrap();
//! let approx = fit(&rule, 8, 0.5, &samples).unwrap();
//! assert!((approx.evaluate(0.3) - 0.09 / 1.5).abs() < 1e-13);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod barycentric;
pub mod basis;
mod error;
pub mod fit;
pub mod metrics;
pub mod quadrature;
pub mod signals;
mod tridiag;

pub use error::{Error, Result};
