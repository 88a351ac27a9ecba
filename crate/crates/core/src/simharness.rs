//! Monte Carlo level and power studies.
//!
//! Repetition `r` draws its data with seed `derive(master, GENERATE, r)` and
//! runs the test with seed `derive(master, TEST, r)`. Outcomes do not depend
//! on scheduling, and a longer study extends a shorter one with the same master seed.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::{generate, GeneratorSpec};
use crate::error::{Error, Result};
use crate::seeding::{derive_seed, rng_from_seed, tag};
use crate::testkit::{run_axial_symmetry_test, TestConfig};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySpec {
    /// `generator.seed` is ignored; every repetition derives its own.
    pub generator: GeneratorSpec,
    /// `config.seed` is ignored; every repetition derives its own.
    pub config: TestConfig,
    pub repetitions: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionOutcome {
    pub rep: usize,
    pub data_seed: u64,
    pub test_seed: u64,
    pub global_p: f64,
    pub reject: bool,
    pub candidate_p: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub generator: String,
    pub n: usize,
    pub alpha: f64,
    pub bootstrap: usize,
    pub repetitions: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub candidate_rejection_rates: Vec<f64>,
    pub mean_runtime_seconds: f64,
    pub outcomes: Vec<RepetitionOutcome>,
}

/// Wilson score interval for `k` successes out of `n` at 95% confidence.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub fn run_study(spec: &StudySpec) -> Result<StudyResult> {
    if spec.repetitions == 0 {
        return Err(Error::InvalidConfig("repetitions must be at least 1".into()));
    }
    spec.config.validate()?;
    spec.generator.kind.validate()?;

    let runs: Vec<(Result<RepetitionOutcome>, f64)> = (0..spec.repetitions)
        .into_par_iter()
        .map(|rep| {
            let started = Instant::now();
            let data_seed = derive_seed(spec.master_seed, &[tag::GENERATE, rep as u64]);
            let test_seed = derive_seed(spec.master_seed, &[tag::TEST, rep as u64]);
            let outcome = generate(&spec.generator, &mut rng_from_seed(data_seed))
                .and_then(|sample| {
                    let config = TestConfig {
                        seed: test_seed,
                        ..spec.config.clone()
                    };
                    run_axial_symmetry_test(&sample, &config)
                })
                .map(|report| RepetitionOutcome {
                    rep,
                    data_seed,
                    test_seed,
                    global_p: report.global_p,
                    reject: report.reject,
                    candidate_p: report.candidates.iter().map(|c| c.p_value).collect(),
                })
                .map_err(|e| Error::RepetitionFailed {
                    rep,
                    seed: test_seed,
                    message: e.to_string(),
                });
            (outcome, started.elapsed().as_secs_f64())
        })
        .collect();

    let mut outcomes = Vec::with_capacity(runs.len());
    let mut runtime = 0.0;
    for (outcome, secs) in runs {
        outcomes.push(outcome?);
        runtime += secs;
    }

    let alpha = spec.config.alpha;
    let rejections = outcomes.iter().filter(|o| o.reject).count();
    let d = spec.generator.kind.dim();
    let candidate_rejection_rates = (0..d)
        .map(|i| {
            let k = outcomes.iter().filter(|o| o.candidate_p[i] <= alpha).count();
            k as f64 / spec.repetitions as f64
        })
        .collect();
    let (wilson_low, wilson_high) = wilson_interval(rejections, spec.repetitions);

    Ok(StudyResult {
        generator: spec.generator.kind.name().to_string(),
        n: spec.generator.n,
        alpha,
        bootstrap: spec.config.bootstrap,
        repetitions: spec.repetitions,
        rejections,
        rejection_rate: rejections as f64 / spec.repetitions as f64,
        wilson_low,
        wilson_high,
        candidate_rejection_rates,
        mean_runtime_seconds: runtime / spec.repetitions as f64,
        outcomes,
    })
}

/// Header of the CSV summary written by [`summary_csv_row`].
pub const SUMMARY_CSV_HEADER: &str =
    "generator,n,alpha,bootstrap,repetitions,rejections,rejection_rate,wilson_low,wilson_high,candidate_rejection_rates,mean_runtime_seconds";

/// One CSV summary row; per-candidate rates are `;`-separated.
pub fn summary_csv_row(r: &StudyResult) -> String {
    let per: Vec<String> = r.candidate_rejection_rates.iter().map(|v| v.to_string()).collect();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        r.generator,
        r.n,
        r.alpha,
        r.bootstrap,
        r.repetitions,
        r.rejections,
        r.rejection_rate,
        r.wilson_low,
        r.wilson_high,
        per.join(";"),
        r.mean_runtime_seconds
    )
}
