//! Name lookups shared by configs and flags.

use anyhow::{anyhow, bail, Context, Result};
use tikpoly::basis::BasisSpec;
use tikpoly::signals;

pub const FUNCTION_NAMES: [&str; 4] = ["f1", "f2", "f3", "f1-plus-sin10x"];

pub fn function(name: &str) -> Result<fn(f64) -> f64> {
    Ok(match name {
        "f1" => signals::f1,
        "f2" => signals::f2,
        "f3" => signals::f3,
        "f1-plus-sin10x" => signals::f1_plus_sin10x,
        _ => bail!(
            "unknown function `{name}` (expected one of {})",
            FUNCTION_NAMES.join(", ")
        ),
    })
}

/// `chebyshev1`, `legendre` or `jacobi(a,b)`.
pub fn basis(name: &str) -> Result<BasisSpec> {
    let name = name.trim();
    match name {
        "chebyshev1" => return Ok(BasisSpec::chebyshev1()),
        "legendre" => return Ok(BasisSpec::legendre()),
        _ => {}
    }
    let inner = name
        .strip_prefix("jacobi(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| anyhow!("unknown basis `{name}` (expected chebyshev1, legendre or jacobi(a,b))"))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| anyhow!("basis `{name}`: expected two parameters jacobi(a,b)"))?;
    let a: f64 = a
        .trim()
        .parse()
        .with_context(|| format!("basis `{name}`: bad parameter a"))?;
    let b: f64 = b
        .trim()
        .parse()
        .with_context(|| format!("basis `{name}`: bad parameter b"))?;
    Ok(BasisSpec::new(a, b)?)
}

/// A λ value: a decimal number or `10^e`.
pub fn lambda(text: &str) -> Result<f64> {
    let text = text.trim();
    let value = match text.strip_prefix("10^") {
        Some(e) => {
            let e: f64 = e.parse().with_context(|| format!("bad exponent in λ `{text}`"))?;
            libm::pow(10.0, e)
        }
        None => text.parse().with_context(|| format!("bad λ `{text}`"))?,
    };
    if !(value.is_finite() && value >= 0.0) {
        bail!("λ must be finite and nonnegative, got `{text}`");
    }
    Ok(value)
}

/// A λ list: comma-separated values, or `standard` for the 21-point grid.
pub fn lambda_list(text: &str) -> Result<Vec<f64>> {
    if text.trim() == "standard" {
        return Ok(tikpoly::metrics::standard_lambda_grid());
    }
    text.split(',').map(lambda).collect()
}

/// `a`, `a:b` or `a:b:step`, inclusive.
pub fn range(text: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| -> Result<usize> { s.trim().parse().with_context(|| format!("bad range `{text}`")) };
    let r = match parts.as_slice() {
        [a] => (num(a)?, num(a)?, 1),
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, s] => (num(a)?, num(b)?, num(s)?),
        _ => bail!("bad range `{text}` (expected a, a:b or a:b:step)"),
    };
    if r.0 > r.1 || r.2 == 0 {
        bail!("empty range `{text}`");
    }
    Ok(r)
}
