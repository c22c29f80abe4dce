//! Runs the selected checks in parallel with per-check random streams.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::checks::{registry, Check};
use crate::config::SuiteConfig;
use crate::report::{CheckOutcome, Report};

/// Largest residual, with NaN propagated so it can never pass.
pub fn max_residual(residuals: &[f64]) -> f64 {
    residuals.iter().fold(0.0f64, |acc, &r| if r.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(r) })
}

fn run_one(index: usize, check: &Check, cfg: &SuiteConfig) -> (CheckOutcome, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let samples = check.samples_for(cfg.samples);
    let tol = cfg.tolerance(check.id, check.suite, check.tol);
    let start = Instant::now();
    let result = (check.run)(cfg.model, samples, &mut rng);
    let seconds = cfg.timings.then(|| start.elapsed().as_secs_f64());
    let (residuals, error) = match result {
        Ok(r) => (r, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let max = max_residual(&residuals);
    let pass = error.is_none() && max <= tol;
    let outcome = CheckOutcome {
        id: check.id.to_string(),
        suite: check.suite,
        anchor: check.anchor.to_string(),
        samples,
        max_residual: if error.is_some() { None } else { Some(max) },
        tol,
        pass,
        seconds,
        error,
    };
    (outcome, residuals)
}

/// Runs every applicable check of the configured suites.
pub fn run(cfg: &SuiteConfig) -> Report {
    let reg = registry();
    let selected: Vec<(usize, &Check)> = reg
        .iter()
        .enumerate()
        .filter(|(_, c)| cfg.suites.contains(&c.suite))
        .collect();
    let skipped = selected
        .iter()
        .filter(|(_, c)| !(c.applies)(cfg.model))
        .map(|(_, c)| c.id.to_string())
        .collect();
    let results: Vec<(CheckOutcome, Vec<f64>)> = selected
        .par_iter()
        .filter(|(_, c)| (c.applies)(cfg.model))
        .map(|&(i, c)| run_one(i, c, cfg))
        .collect();
    Report::build(cfg, results, skipped)
}
