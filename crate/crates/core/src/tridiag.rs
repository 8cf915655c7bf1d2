//! Symmetric tridiagonal eigenproblem by implicit-shift QL.
//!
//! Optionally accumulates the first row of the eigenvector matrix; nothing
//! else of the eigenvectors is kept, so the cost stays `O(n^2)`.

use crate::{Error, Result};

pub(crate) const MAX_ITERATIONS: usize = 50;

/// On entry `diag` holds the diagonal and `offdiag[i]` the coupling between
/// rows `i` and `i + 1` (`offdiag[n - 1]` is ignored). On exit `diag` holds
/// the unsorted eigenvalues and, when given, `first_row[k]` the first
/// component of the unit eigenvector for `diag[k]`.
pub(crate) fn ql_implicit(diag: &mut [f64], offdiag: &mut [f64], mut first_row: Option<&mut [f64]>) -> Result<()> {
    let n = diag.len();
    debug_assert_eq!(offdiag.len(), n);
    if n == 0 {
        return Ok(());
    }
    if let Some(z) = first_row.as_deref_mut() {
        debug_assert_eq!(z.len(), n);
        z.iter_mut().for_each(|v| *v = 0.0);
        z[0] = 1.0;
    }
    offdiag[n - 1] = 0.0;

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if offdiag[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_ITERATIONS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: MAX_ITERATIONS,
                });
            }

            // Wilkinson-type shift from the leading 2x2 block.
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * offdiag[l]);
            let mut r = libm::hypot(g, 1.0);
            g = diag[m] - diag[l] + offdiag[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * offdiag[i];
                let b = c * offdiag[i];
                r = libm::hypot(f, g);
                offdiag[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    offdiag[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;

                if let Some(z) = first_row.as_deref_mut() {
                    let t = z[i + 1];
                    z[i + 1] = s * z[i] + c * t;
                    z[i] = c * z[i] - s * t;
                }
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            offdiag[l] = g;
            offdiag[m] = 0.0;
        }
    }
    Ok(())
}
