//! End-to-end test of axial symmetry about an unspecified direction.
//!
//! 1. Draw one projection direction `h` (or take it from the config) and keep
//!    it for every candidate and every bootstrap replicate.
//! 2. Split the sample once into three balanced parts.
//! 3. Estimate the principal axes on the third part; each is a candidate.
//! 4. For each candidate compute the observed statistic and a bootstrap
//!    p-value under the smoothed law symmetrized about that candidate.
//! 5. The global p-value is the largest candidate p-value.
//!
//! Every random stream derives from `TestConfig::seed`, so reports are
//! reproducible independently of the rayon thread count.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{bootstrap_pvalue, default_bandwidth, symmetrize, KernelKind, KernelSpec, SmoothedLaw};
use crate::empirical::{candidate_axes, scaled_statistic, split_three};
use crate::error::{Error, Result};
use crate::geometry::{sample_unit_direction, UnitDirection};
use crate::sample::Sample;
use crate::seeding::{derive_seed, rng_for, rng_from_seed, tag};
use crate::spectral::{check_simple_spectrum, SpectrumCheck, DEFAULT_GAP_TOL};

/// Version string stamped into every report.
pub const REPORT_FORMAT_VERSION: &str = "axisym-report/1";

/// How the projection direction `h` is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", content = "value", rename_all = "snake_case")]
pub enum DirectionMode {
    #[default]
    Random,
    /// Renormalized before use.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "rule", content = "value", rename_all = "snake_case")]
pub enum BandwidthRule {
    /// `scale * n^(-0.9 min(1/4, 1/(d+2)))`, scale = average std. dev. of the atoms.
    #[default]
    Default,
    Fixed(f64),
}

/// Tuning choices of a single test run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestConfig {
    pub alpha: f64,
    pub bootstrap: usize,
    pub seed: u64,
    #[serde(default)]
    pub direction: DirectionMode,
    #[serde(default)]
    pub bandwidth: BandwidthRule,
    #[serde(default)]
    pub kernel: KernelKind,
    #[serde(default = "default_gap_tol")]
    pub h1_rel_tol: f64,
}

fn default_gap_tol() -> f64 {
    DEFAULT_GAP_TOL
}

impl Default for TestConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            bootstrap: 500,
            seed: 0,
            direction: DirectionMode::Random,
            bandwidth: BandwidthRule::Default,
            kernel: KernelKind::Gaussian,
            h1_rel_tol: DEFAULT_GAP_TOL,
        }
    }
}

impl TestConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.bootstrap == 0 {
            return Err(Error::InvalidConfig("bootstrap size must be at least 1".into()));
        }
        if let BandwidthRule::Fixed(b) = self.bandwidth {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "bandwidth must be finite and >= 0, got {b}"
                )));
            }
        }
        if self.h1_rel_tol.is_nan() || self.h1_rel_tol <= 0.0 {
            return Err(Error::InvalidConfig("h1_rel_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateResult {
    /// 0-based rank of the eigenvalue, largest first.
    pub index: usize,
    pub direction: UnitDirection,
    pub eigenvalue: f64,
    pub statistic: f64,
    pub p_value: f64,
    pub bootstrap: usize,
    pub bandwidth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub master: u64,
    pub direction: u64,
    pub split: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Timing {
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub format_version: String,
    pub n: usize,
    pub d: usize,
    pub config: TestConfig,
    pub seeds: Seeds,
    pub h: UnitDirection,
    pub split_sizes: [usize; 3],
    pub spectrum: SpectrumCheck,
    pub warnings: Vec<String>,
    pub candidates: Vec<CandidateResult>,
    pub global_p: f64,
    pub reject: bool,
    pub timing: Timing,
}

impl TestReport {
    /// Copy with timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            timing: Timing::default(),
            ..self.clone()
        }
    }
}

/// Largest candidate p-value.
pub fn global_pvalue(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::EmptyInput("no candidate p-values"));
    }
    Ok(p.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

fn resolve_direction(config: &TestConfig, d: usize) -> Result<UnitDirection> {
    match &config.direction {
        DirectionMode::Explicit(v) => {
            if v.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: v.len(),
                });
            }
            UnitDirection::new(v.clone())
        }
        DirectionMode::Random => {
            let mut rng = rng_from_seed(derive_seed(config.seed, &[tag::DIRECTION]));
            sample_unit_direction(d, &mut rng)
        }
    }
}

/// Run the full test on `sample`.
pub fn run_axial_symmetry_test(sample: &Sample, config: &TestConfig) -> Result<TestReport> {
    let started = Instant::now();
    config.validate()?;
    let n = sample.n();
    let d = sample.d();
    let min_n = 9.max(3 * (d + 1));
    if n < min_n {
        return Err(Error::InsufficientData(format!(
            "need at least {min_n} observations for d = {d}, got {n}"
        )));
    }

    let h = resolve_direction(config, d)?;
    let split_seed = derive_seed(config.seed, &[tag::SPLIT]);
    let split = split_three(n, &mut rng_from_seed(split_seed))?;
    let parts = split.apply(sample)?;
    let axes = candidate_axes(&parts.part3)?;
    let spectrum = check_simple_spectrum(&axes, config.h1_rel_tol);
    let mut warnings = Vec::new();
    if !spectrum.ok {
        warnings.push(format!(
            "relative eigengap {:.3e} is below {:.1e}; candidate axes are poorly identified",
            spectrum.gap, spectrum.rel_tol
        ));
    }

    let union = parts.comparison_union();
    let candidates = (0..d)
        .into_par_iter()
        .map(|index| {
            let axis = &axes.eigenvectors[index];
            let statistic = scaled_statistic(&parts, &h, axis)?;
            let sym = symmetrize(&union, axis)?;
            let bandwidth = match config.bandwidth {
                BandwidthRule::Default => default_bandwidth(n, d, sym.data_scale()),
                BandwidthRule::Fixed(b) => b,
            };
            let law = SmoothedLaw::new(&sym, KernelSpec::new(config.kernel, bandwidth)?)?;
            let replicates = (0..config.bootstrap)
                .into_par_iter()
                .map(|b| {
                    let mut rng = rng_for(config.seed, &[tag::BOOTSTRAP, index as u64, b as u64]);
                    law.replicate(n, index, &h, &mut rng)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(CandidateResult {
                index,
                direction: axis.clone(),
                eigenvalue: axes.eigenvalues[index],
                statistic,
                p_value: bootstrap_pvalue(statistic, &replicates)?,
                bootstrap: config.bootstrap,
                bandwidth,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let ps: Vec<f64> = candidates.iter().map(|c| c.p_value).collect();
    let global_p = global_pvalue(&ps)?;

    Ok(TestReport {
        format_version: REPORT_FORMAT_VERSION.to_string(),
        n,
        d,
        config: config.clone(),
        seeds: Seeds {
            master: config.seed,
            direction: derive_seed(config.seed, &[tag::DIRECTION]),
            split: split_seed,
        },
        h,
        split_sizes: split.sizes(),
        spectrum,
        warnings,
        candidates,
        global_p,
        reject: global_p <= config.alpha,
        timing: Timing {
            elapsed_seconds: started.elapsed().as_secs_f64(),
        },
    })
}
