//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tikpoly::barycentric::{weights_gauss, weights_product, BarycentricData};
use tikpoly::basis::BasisSpec;
use tikpoly::fit::{
    continuum_limit_fit, default_lebesgue_grid, fit, gram_matrix_residual, lebesgue_constant, normal_equations_oracle,
    RegularizedApproximant, SampleVector,
};
use tikpoly::metrics::{default_l2_rule, default_uniform_grid, l2_error, sample, uniform_error, verify_bounds};
use tikpoly::quadrature::{exactness_residual, gauss_rule};
use tikpoly::signals::{f1, f3, NoiseSpec};
use tikpoly_cli::config::{ExperimentConfig, ExperimentId, Scale};
use tikpoly_cli::experiments;

type Outcome = Result<(bool, String), String>;

fn tikhonov_lambda() -> f64 {
    libm::pow(10.0, -0.7)
}

fn specs() -> [BasisSpec; 2] {
    [BasisSpec::chebyshev1(), BasisSpec::legendre()]
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gram_identity() -> Outcome {
    let mut worst = 0.0f64;
    for spec in specs() {
        for (l, n) in [(8, 8), (16, 32), (50, 50), (200, 200)] {
            let rule = gauss_rule(spec, n + 1).map_err(|e| e.to_string())?;
            worst = worst.max(gram_matrix_residual(&rule, l).map_err(|e| e.to_string())?);
        }
    }
    Ok((worst < 1e-11, format!("max |AᵀWA − I| = {worst:.2e} (< 1e-11)")))
}

/// The (L, N) × spec × λ matrix shared by the oracle and bound criteria.
fn matrix() -> Vec<(BasisSpec, usize, usize, f64)> {
    let mut m = Vec::new();
    for spec in specs() {
        for (l, n) in [(0, 4), (8, 8), (16, 32), (30, 40), (50, 50), (100, 120)] {
            for lambda in [0.0, 1e-2, tikhonov_lambda(), 1.0] {
                m.push((spec, l, n, lambda));
            }
        }
    }
    m
}

fn closed_form_vs_oracle() -> Outcome {
    let mut r = rng(2);
    let mut worst = 0.0f64;
    let configs = matrix();
    for &(spec, l, n, lambda) in &configs {
        let rule = gauss_rule(spec, n + 1).map_err(|e| e.to_string())?;
        let values: Vec<f64> = (0..=n).map(|_| r.random_range(-1.0..1.0)).collect();
        let samples = SampleVector::new(values).map_err(|e| e.to_string())?;
        let p = fit(&rule, l, lambda, &samples).map_err(|e| e.to_string())?;
        let oracle = normal_equations_oracle(&rule, l, lambda, &samples).map_err(|e| e.to_string())?;
        let scale = oracle.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = p
            .coefficients()
            .iter()
            .zip(&oracle)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        worst = worst.max(diff / scale);
    }
    Ok((
        worst < 1e-11 && configs.len() == 48,
        format!(
            "{} configurations, max relative gap {worst:.2e} (< 1e-11)",
            configs.len()
        ),
    ))
}

fn quadrature_exactness() -> Outcome {
    let mut worst = 0.0f64;
    let mut beyond = f64::INFINITY;
    for spec in specs() {
        for n in [4, 16, 64] {
            let rule = gauss_rule(spec, n + 1).map_err(|e| e.to_string())?;
            worst = worst.max(exactness_residual(&rule, 2 * n + 1).map_err(|e| e.to_string())?);
            if spec.is_legendre() {
                beyond = beyond.min(exactness_residual(&rule, 2 * n + 2).map_err(|e| e.to_string())?);
            }
        }
    }
    Ok((
        worst < 1e-11 && beyond > 1e-6,
        format!("residual to degree 2N+1 {worst:.2e} (< 1e-11), Legendre at 2N+2 ≥ {beyond:.2e} (> 1e-6)"),
    ))
}

fn formula_equivalence() -> Outcome {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for spec in specs() {
        for n in [16, 60, 200] {
            let rule = gauss_rule(spec, n + 1).map_err(|e| e.to_string())?;
            let samples = SampleVector::from_fn(&rule, f1).map_err(|e| e.to_string())?;
            for lambda in [0.0, tikhonov_lambda()] {
                let p = fit(&rule, n, lambda, &samples).map_err(|e| e.to_string())?;
                let d =
                    BarycentricData::from_gauss(&rule, samples.values().to_vec(), lambda).map_err(|e| e.to_string())?;
                let mut count = 0;
                while count < 500 {
                    let x: f64 = r.random_range(-1.0..=1.0);
                    if rule.nodes().contains(&x) {
                        continue;
                    }
                    count += 1;
                    let a = p.evaluate(x);
                    let b = d.interp_modified_lagrange(x);
                    let c = d.interp_barycentric(x).map_err(|e| e.to_string())?;
                    worst = worst.max((a - b).abs()).max((a - c).abs()).max((b - c).abs());
                }
            }
        }
    }
    Ok((worst < 1e-9, format!("max pairwise gap {worst:.2e} (< 1e-9)")))
}

fn weight_relation() -> Outcome {
    let mut worst = 0.0f64;
    for spec in specs() {
        for points in [8, 61, 257] {
            let rule = gauss_rule(spec, points).map_err(|e| e.to_string())?;
            let g = weights_gauss(&rule).map_err(|e| e.to_string())?;
            let p = weights_product(rule.nodes()).map_err(|e| e.to_string())?;
            let mut ratios: Vec<f64> = g.values().iter().zip(p.values()).map(|(a, b)| a / b).collect();
            let mut sorted = ratios.clone();
            sorted.sort_by(f64::total_cmp);
            let median = sorted[sorted.len() / 2];
            ratios.iter_mut().for_each(|q| *q = (*q / median - 1.0).abs());
            worst = ratios.into_iter().fold(worst, f64::max);
        }
    }
    Ok((
        worst < 1e-9,
        format!("max ratio deviation from median {worst:.2e} (< 1e-9)"),
    ))
}

fn lebesgue_scaling() -> Outcome {
    let mut worst = 0.0f64;
    for spec in specs() {
        for (l, n) in [(10, 20), (60, 60), (100, 150)] {
            let rule = gauss_rule(spec, n + 1).map_err(|e| e.to_string())?;
            let grid = default_lebesgue_grid(&rule);
            let base = lebesgue_constant(&rule, l, 0.0, &grid).map_err(|e| e.to_string())?;
            for lambda in [1e-2, tikhonov_lambda(), 1.0] {
                let v = lebesgue_constant(&rule, l, lambda, &grid).map_err(|e| e.to_string())?;
                worst = worst.max((v * (1.0 + lambda) / base - 1.0).abs());
            }
        }
    }
    Ok((worst < 1e-13, format!("max relative gap {worst:.2e} (< 1e-13)")))
}

fn projection_law() -> Outcome {
    let (l, n) = (30, 40);
    let spec = BasisSpec::chebyshev1();
    let rule = gauss_rule(spec, n + 1).map_err(|e| e.to_string())?;
    let grid: Vec<f64> = (0..1000).map(|k| -1.0 + 2.0 * k as f64 / 999.0).collect();
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let coefficients: Vec<f64> = (0..=l).map(|_| r.random_range(-1.0..1.0)).collect();
        let p = RegularizedApproximant::from_coefficients(spec, 0.0, coefficients, n + 1).map_err(|e| e.to_string())?;
        let samples = SampleVector::from_fn(&rule, |x| p.evaluate(x)).map_err(|e| e.to_string())?;
        for lambda in [1e-2, tikhonov_lambda(), 1.0] {
            let u = fit(&rule, l, lambda, &samples).map_err(|e| e.to_string())?;
            let gap = grid.iter().fold(0.0f64, |m, &x| {
                m.max((u.evaluate(x) - p.evaluate(x) / (1.0 + lambda)).abs())
            });
            worst = worst.max(gap);
        }
    }
    Ok((
        worst < 1e-9,
        format!("20 random p, max ‖U_λ p − p/(1+λ)‖∞ = {worst:.2e} (< 1e-9)"),
    ))
}

fn multiplicative_factor() -> Outcome {
    let lambda = tikhonov_lambda();
    let rule = gauss_rule(BasisSpec::chebyshev1(), 61).map_err(|e| e.to_string())?;
    let clean = SampleVector::from_fn(&rule, f1)
        .map_err(|e| e.to_string())?
        .into_values();
    let scaled: Vec<f64> = clean.iter().map(|v| 1.2 * v).collect();
    let classical = BarycentricData::from_gauss(&rule, clean, 0.0).map_err(|e| e.to_string())?;
    let tikhonov = BarycentricData::from_gauss(&rule, scaled, lambda).map_err(|e| e.to_string())?;
    let factor = 1.2 / (1.0 + lambda);
    let grid = default_uniform_grid();
    let (mut gap, mut err) = (0.0f64, 0.0f64);
    for &x in &grid {
        let t = tikhonov.interp_barycentric(x).map_err(|e| e.to_string())?;
        let c = classical.interp_barycentric(x).map_err(|e| e.to_string())?;
        gap = gap.max((t - factor * c).abs());
        err = err.max((t - f1(x)).abs());
    }
    let a = gap < 1e-10;
    let b = err < 5e-3;
    Ok((
        a && b,
        format!(
            "factor {factor:.9}: gap to scaled interpolant {gap:.2e} (< 1e-10) {}; uniform error vs f1 {err:.3e} (< 5e-3) {}",
            if a { "ok" } else { "FAILS" },
            if b { "ok" } else { "FAILS" }
        ),
    ))
}

fn error_plateau() -> Outcome {
    let n = 1000;
    let rule = gauss_rule(BasisSpec::chebyshev1(), n + 1).map_err(|e| e.to_string())?;
    let samples = sample(&rule, f3, None).map_err(|e| e.to_string())?;
    let l2_rule = default_l2_rule(&rule, n).map_err(|e| e.to_string())?;
    let errors = [tikhonov_lambda(), 0.0]
        .iter()
        .map(|&lambda| {
            let p = fit(&rule, n, lambda, &samples)?;
            Ok(l2_error(f3, |x| p.evaluate(x), &l2_rule))
        })
        .collect::<Result<Vec<f64>, tikpoly::Error>>()
        .map_err(|e| e.to_string())?;
    let (tik, classical) = (errors[0], errors[1]);
    Ok((
        (0.25..=0.35).contains(&tik) && classical < 1e-6,
        format!("N = 1000: Tikhonov L2 {tik:.4} (in [0.25, 0.35]), classical L2 {classical:.2e} (< 1e-6)"),
    ))
}

fn noise_reduction() -> Outcome {
    let n = 200;
    let rule = gauss_rule(BasisSpec::chebyshev1(), n + 1).map_err(|e| e.to_string())?;
    let l2_rule = default_l2_rule(&rule, n).map_err(|e| e.to_string())?;
    let mut wins = 0;
    let mut improvements = Vec::new();
    for seed in 1..=20 {
        let noise = NoiseSpec::additive(5.0, seed).map_err(|e| e.to_string())?;
        let samples = sample(&rule, f1, Some(&noise)).map_err(|e| e.to_string())?;
        let err = |lambda: f64| -> Result<f64, String> {
            let p = fit(&rule, n, lambda, &samples).map_err(|e| e.to_string())?;
            Ok(l2_error(f1, |x| p.evaluate(x), &l2_rule))
        };
        let (classical, tik) = (err(0.0)?, err(tikhonov_lambda())?);
        if tik < classical {
            wins += 1;
        }
        improvements.push(1.0 - tik / classical);
    }
    improvements.sort_by(f64::total_cmp);
    let median = 0.5 * (improvements[9] + improvements[10]);
    Ok((
        wins >= 17 && median >= 0.10,
        format!(
            "Tikhonov better in {wins}/20 (≥ 17), median improvement {:.1}% (≥ 10%)",
            100.0 * median
        ),
    ))
}

fn bound_verification() -> Outcome {
    let mut failures = Vec::new();
    let mut min_slack = f64::INFINITY;
    let configs = matrix();
    for (index, &(spec, l, n, lambda)) in configs.iter().enumerate() {
        let noise = NoiseSpec::additive(5.0, 11)
            .map_err(|e| e.to_string())?
            .with_stream(index as u64);
        let report = verify_bounds(spec, l, n, lambda, f1, &noise).map_err(|e| e.to_string())?;
        for c in [
            report.l2_clean,
            report.l2_noisy,
            report.uniform_clean,
            report.uniform_noisy,
        ] {
            min_slack = min_slack.min(c.slack);
        }
        if !report.all_passed() {
            failures.push(format!("{spec} L={l} N={n} λ={lambda}"));
        }
    }
    Ok((
        failures.is_empty(),
        format!(
            "{} configurations × 4 checks, min slack {min_slack:.3e} (≥ -1e-9){}",
            configs.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failures.join(", "))
            }
        ),
    ))
}

/// Reference rule for the continuum fit; far above the largest `N + 1` compared.
const CONTINUUM_POINTS: usize = 4096;

fn continuum_limit() -> Outcome {
    let (spec, l) = (BasisSpec::chebyshev1(), 20);
    let limit = continuum_limit_fit(spec, l, 0.0, f1, CONTINUUM_POINTS).map_err(|e| e.to_string())?;
    let grid = default_uniform_grid();
    let mut gaps = Vec::new();
    for n in [20, 40, 80, 160] {
        let rule = gauss_rule(spec, n + 1).map_err(|e| e.to_string())?;
        let samples = SampleVector::from_fn(&rule, f1).map_err(|e| e.to_string())?;
        let p = fit(&rule, l, 0.0, &samples).map_err(|e| e.to_string())?;
        gaps.push(uniform_error(|x| limit.evaluate(x), |x| p.evaluate(x), &grid).map_err(|e| e.to_string())?);
    }
    let decreasing = gaps.windows(2).all(|w| w[1] < w[0] || w[1] <= 1e-12);
    let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.2e}")).collect();
    Ok((decreasing, format!("gaps at N = 20, 40, 80, 160: {}", shown.join(", "))))
}

fn determinism() -> Outcome {
    let ids = [
        ExperimentId::Fig1,
        ExperimentId::Fig2,
        ExperimentId::Fig3,
        ExperimentId::Fig4,
        ExperimentId::Fig5,
        ExperimentId::Fig45,
        ExperimentId::Sweep,
        ExperimentId::Custom,
    ];
    let mut files = 0;
    for id in ids {
        let config = ExperimentConfig::defaults(id, Scale::Desk);
        let first = experiments::run(&config).map_err(|e| format!("{e:#}"))?;
        let reloaded = ExperimentConfig::from_toml_str(&config.to_toml_string().map_err(|e| e.to_string())?)
            .map_err(|e| format!("{e:#}"))?;
        let second = experiments::run(&reloaded).map_err(|e| format!("{e:#}"))?;
        if first != second {
            return Ok((false, format!("{id}: rerun differs")));
        }
        files += first.iter().filter(|a| a.is_csv()).count();
    }
    Ok((
        true,
        format!("8 desk experiments rerun from their serialized configs, {files} CSV files byte-identical"),
    ))
}

struct Criterion {
    number: u32,
    name: &'static str,
    budget_s: f64,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            number: 1,
            name: "Gram identity",
            budget_s: 5.0,
            check: gram_identity,
        },
        Criterion {
            number: 2,
            name: "closed form vs dense oracle",
            budget_s: 10.0,
            check: closed_form_vs_oracle,
        },
        Criterion {
            number: 3,
            name: "quadrature exactness",
            budget_s: 5.0,
            check: quadrature_exactness,
        },
        Criterion {
            number: 4,
            name: "formula equivalence",
            budget_s: 10.0,
            check: formula_equivalence,
        },
        Criterion {
            number: 5,
            name: "barycentric weight relation",
            budget_s: 10.0,
            check: weight_relation,
        },
        Criterion {
            number: 6,
            name: "Lebesgue scaling",
            budget_s: 10.0,
            check: lebesgue_scaling,
        },
        Criterion {
            number: 7,
            name: "regularized projection law",
            budget_s: 5.0,
            check: projection_law,
        },
        Criterion {
            number: 8,
            name: "multiplicative factor",
            budget_s: 2.0,
            check: multiplicative_factor,
        },
        Criterion {
            number: 9,
            name: "error plateau near 0.3",
            budget_s: 30.0,
            check: error_plateau,
        },
        Criterion {
            number: 10,
            name: "noise reduction trend",
            budget_s: 60.0,
            check: noise_reduction,
        },
        Criterion {
            number: 11,
            name: "bound verification",
            budget_s: 60.0,
            check: bound_verification,
        },
        Criterion {
            number: 12,
            name: "continuum limit",
            budget_s: 10.0,
            check: continuum_limit,
        },
        Criterion {
            number: 13,
            name: "determinism",
            budget_s: f64::INFINITY,
            check: determinism,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed().as_secs_f64();
        let in_budget = elapsed < c.budget_s;
        let (passed, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        let budget = if c.budget_s.is_finite() {
            format!(" of {}s", c.budget_s)
        } else {
            String::new()
        };
        let status = if passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status}  {}: {detail} [{elapsed:.2}s{budget}]",
            c.number, c.name
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
