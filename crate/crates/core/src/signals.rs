//! Test functions and noise models.
//!
//! Noise is drawn from ChaCha8 (`rand_chacha`), seeded with
//! `seed_from_u64(seed)` and positioned with `set_stream(stream)`. Normal
//! variates come from `rand_distr::StandardNormal` and uniform ones from
//! `rand::distr::Open01`. Everything is computed through `libm`, so a
//! `(spec, seed, stream)` triple gives the same bits on every platform.

use core::f64::consts::PI;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::fit::SampleVector;
use crate::{Error, Result};

/// `|x| + x/2 - x^2`
pub fn f1(x: f64) -> f64 {
    x.abs() + 0.5 * x - x * x
}

/// `Ai(40 x)`
pub fn f2(x: f64) -> f64 {
    airy_ai(40.0 * x)
}

/// `tanh(20 sin 12x) + 0.02 e^{3x} sin 300x`
pub fn f3(x: f64) -> f64 {
    libm::tanh(20.0 * libm::sin(12.0 * x)) + 0.02 * libm::exp(3.0 * x) * libm::sin(300.0 * x)
}

/// `f1(x) + sin 10x`
pub fn f1_plus_sin10x(x: f64) -> f64 {
    f1(x) + libm::sin(10.0 * x)
}

/// `|t|` beyond which the asymptotic expansions replace the Maclaurin series.
pub const AIRY_SWITCH: f64 = 8.0;

/// Airy function of the first kind.
///
/// Uses the Maclaurin series in double-double arithmetic for `|t| <= 8`
/// (the two series cancel heavily as `t` grows), and the decaying or
/// oscillatory asymptotic expansion beyond.
pub fn airy_ai(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.abs() <= AIRY_SWITCH {
        airy_series(t)
    } else if t > 0.0 {
        airy_decaying(t)
    } else {
        airy_oscillatory(-t)
    }
}

#[derive(Clone, Copy, Debug)]
struct Dd(f64, f64);

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd(s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd(s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd(p, libm::fma(a, b, -p))
}

impl Dd {
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.0, o.0);
        let t = two_sum(self.1, o.1);
        let s = quick_two_sum(s.0, s.1 + t.0);
        quick_two_sum(s.0, s.1 + t.1)
    }

    fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.0, o.0);
        quick_two_sum(p.0, p.1 + (self.0 * o.1 + self.1 * o.0))
    }

    fn div_f64(self, d: f64) -> Dd {
        let q = self.0 / d;
        let p = two_prod(q, d);
        let r = (self.0 - p.0 - p.1 + self.1) / d;
        quick_two_sum(q, r)
    }
}

// Ai(0) = 3^{-2/3}/Γ(2/3) and -Ai'(0) = 3^{-1/3}/Γ(1/3), each as hi + lo.
const AI0: Dd = Dd(0.3550280538878172, 2.05233632436212e-17);
const MINUS_AIP0: Dd = Dd(0.2588194037928068, -2.522243111610832e-17);
const SERIES_TOLERANCE: f64 = 1e-34;

/// `Ai(t) = Ai(0) f(t) + Ai'(0) g(t)` with
/// `f = Σ t^{3k}/(2·3)(5·6)...` and `g = Σ t^{3k+1}/(3·4)(6·7)...`.
fn airy_series(t: f64) -> f64 {
    let t2 = two_prod(t, t);
    let t3 = t2.mul(Dd(t, 0.0));
    let mut a = Dd(1.0, 0.0);
    let mut b = Dd(t, 0.0);
    let mut f = a;
    let mut g = b;
    let mut k = 0.0;
    loop {
        a = t3.mul(a).div_f64((3.0 * k + 2.0) * (3.0 * k + 3.0));
        b = t3.mul(b).div_f64((3.0 * k + 3.0) * (3.0 * k + 4.0));
        f = f.add(a);
        g = g.add(b);
        k += 1.0;
        let scale = f.0.abs().max(g.0.abs()).max(f64::MIN_POSITIVE);
        if a.0.abs().max(b.0.abs()) < SERIES_TOLERANCE * scale {
            break;
        }
    }
    AI0.mul(f).add(MINUS_AIP0.mul(g).neg()).0
}

/// `u_k = (2k+1)(2k+3)...(6k-1) / (216^k k!)`, by ratio.
fn u_ratio(k: f64) -> f64 {
    (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k)
}

/// Sums `Σ (-1)^k u_k / ζ^k` until the terms stop shrinking or are negligible.
fn decaying_sum(zeta: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 1.0;
    loop {
        let next = -term * u_ratio(k) / zeta;
        if next.abs() >= term.abs() || next.abs() < 1e-17 * sum.abs() {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    sum
}

fn airy_decaying(t: f64) -> f64 {
    let zeta = 2.0 / 3.0 * t * libm::sqrt(t);
    libm::exp(-zeta) / (2.0 * libm::sqrt(PI) * libm::sqrt(libm::sqrt(t))) * decaying_sum(zeta)
}

/// `Ai(-s)` for large `s`: even terms multiply `cos(ζ - π/4)`, odd ones `sin(ζ - π/4)`.
fn airy_oscillatory(s: f64) -> f64 {
    let zeta = 2.0 / 3.0 * s * libm::sqrt(s);
    let mut u = 1.0f64;
    let mut power = 1.0f64;
    let (mut even, mut odd) = (0.0f64, 0.0f64);
    let mut k = 0usize;
    loop {
        let term = u / power;
        let signed = if (k / 2).is_multiple_of(2) { term } else { -term };
        if k.is_multiple_of(2) {
            even += signed;
        } else {
            odd += signed;
        }
        k += 1;
        let next_u = u * u_ratio(k as f64);
        let next = next_u / (power * zeta);
        if next >= term || next < 1e-17 * even.abs().max(odd.abs()) {
            break;
        }
        u = next_u;
        power *= zeta;
    }
    let phase = zeta - PI / 4.0;
    (libm::cos(phase) * even + libm::sin(phase) * odd) / (libm::sqrt(PI) * libm::sqrt(libm::sqrt(s)))
}

/// Noise model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    /// Independent Gaussian noise at a given signal-to-noise ratio, where
    /// signal power is the mean square of the clean samples.
    AdditiveWhiteSnr { snr_db: f64 },
    /// All samples multiplied by `1 + c·r` with a single `r` uniform in `(0, 1)`.
    MultiplicativeUniform { amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    kind: NoiseKind,
    seed: u64,
    stream: u64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, seed: u64) -> Result<Self> {
        match kind {
            NoiseKind::AdditiveWhiteSnr { snr_db } if !snr_db.is_finite() => {
                return Err(Error::InvalidNoise("snr_db must be finite"));
            }
            NoiseKind::MultiplicativeUniform { amplitude } if !(amplitude.is_finite() && amplitude >= 0.0) => {
                return Err(Error::InvalidNoise("amplitude must be finite and nonnegative"));
            }
            _ => {}
        }
        Ok(Self { kind, seed, stream: 0 })
    }

    pub fn additive(snr_db: f64, seed: u64) -> Result<Self> {
        Self::new(NoiseKind::AdditiveWhiteSnr { snr_db }, seed)
    }

    pub fn multiplicative(amplitude: f64, seed: u64) -> Result<Self> {
        Self::new(NoiseKind::MultiplicativeUniform { amplitude }, seed)
    }

    /// Independent substream for the same seed, e.g. one per experiment cell.
    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Mean of squares.
pub fn signal_power(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64
}

/// Applies the noise model. Deterministic in `(noise, samples)`.
pub fn add_noise(samples: &SampleVector, noise: &NoiseSpec) -> Result<SampleVector> {
    let mut rng = noise.rng();
    let clean = samples.values();
    let noisy = match noise.kind {
        NoiseKind::AdditiveWhiteSnr { snr_db } => {
            let power = signal_power(clean);
            if !(power > 0.0) {
                return Err(Error::ZeroSignalPower);
            }
            let sigma = libm::sqrt(power / libm::pow(10.0, snr_db / 10.0));
            clean
                .iter()
                .map(|v| {
                    let z: f64 = rng.sample(StandardNormal);
                    v + sigma * z
                })
                .collect()
        }
        NoiseKind::MultiplicativeUniform { amplitude } => {
            let r: f64 = rng.sample(Open01);
            let factor = 1.0 + amplitude * r;
            clean.iter().map(|v| v * factor).collect()
        }
    };
    SampleVector::new(noisy)
}
