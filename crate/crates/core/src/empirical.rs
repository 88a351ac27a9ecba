//! Three-way sample splitting, projected empirical CDFs and the split statistic.
//!
//! One third of the sample (`part3`) estimates the candidate axes; the other two
//! thirds are compared through their projections onto a fixed direction `h`,
//! the second one after reflection about the candidate axis. Each part is
//! centered at its own mean.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dot, reflect_into, UnitDirection};
use crate::sample::Sample;
use crate::spectral::{eigendecompose, mean_and_covariance, SpectralDecomposition};

/// Disjoint index sets of sizes `m, m, n - 2m` with `m = floor(n / 3)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
    pub part3: Vec<usize>,
}

impl SplitIndices {
    pub fn sizes(&self) -> [usize; 3] {
        [self.part1.len(), self.part2.len(), self.part3.len()]
    }

    pub fn total(&self) -> usize {
        self.part1.len() + self.part2.len() + self.part3.len()
    }

    /// Materialize the three parts of `sample`.
    pub fn apply(&self, sample: &Sample) -> Result<SplitParts> {
        if self.total() != sample.n() {
            return Err(Error::DimensionMismatch {
                expected: sample.n(),
                found: self.total(),
            });
        }
        Ok(SplitParts {
            part1: sample.select(&self.part1),
            part2: sample.select(&self.part2),
            part3: sample.select(&self.part3),
        })
    }
}

/// The three subsamples of a split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitParts {
    pub part1: Sample,
    pub part2: Sample,
    pub part3: Sample,
}

impl SplitParts {
    /// `part1` followed by `part2`: the two thirds used for symmetrization.
    pub fn comparison_union(&self) -> Sample {
        self.part1
            .concat(&self.part2)
            .expect("parts share the sample dimension")
    }
}

/// Random balanced three-way partition of `0..n`.
pub fn split_three<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SplitIndices> {
    if n < 9 {
        return Err(Error::SampleTooSmall(n));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let m = n / 3;
    let part3 = perm.split_off(2 * m);
    let part2 = perm.split_off(m);
    Ok(SplitIndices {
        part1: perm,
        part2,
        part3,
    })
}

/// Empirical CDF as a sorted list of values; `F(t) = #{v <= t} / count`.
#[derive(Debug, Clone, PartialEq)]
pub struct EcdfSteps {
    sorted: Vec<f64>,
}

impl EcdfSteps {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("ECDF of an empty sample"));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: pos, col: 0 });
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= t) as f64 / self.sorted.len() as f64
    }

    /// Sup-norm distance to `other`, evaluated at every breakpoint of either step function.
    pub fn sup_distance(&self, other: &EcdfSteps) -> f64 {
        let (a, b) = (&self.sorted, &other.sorted);
        let (na, nb) = (a.len(), b.len());
        let (mut i, mut j) = (0usize, 0usize);
        let mut best: u128 = 0;
        while i < na || j < nb {
            let t = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) => x.min(y),
                (Some(&x), None) => x,
                (None, Some(&y)) => y,
                (None, None) => unreachable!(),
            };
            while i < na && a[i] <= t {
                i += 1;
            }
            while j < nb && b[j] <= t {
                j += 1;
            }
            // |i/na - j/nb| with an exact integer numerator
            let lhs = i as u128 * nb as u128;
            let rhs = j as u128 * na as u128;
            best = best.max(lhs.abs_diff(rhs));
        }
        best as f64 / (na as u128 * nb as u128) as f64
    }
}

/// Two-sample Kolmogorov-Smirnov distance `sup_t |F_a(t) - F_b(t)|`.
pub fn ks_sup(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("ks_sup needs two nonempty samples"));
    }
    let fa = EcdfSteps::new(a.to_vec())?;
    let fb = EcdfSteps::new(b.to_vec())?;
    Ok(fa.sup_distance(&fb))
}

/// Projections `<x_j - mean(part1), h>` over `part1`.
pub(crate) fn centered_projections(part: &Sample, h: &[f64]) -> Vec<f64> {
    let mean = part.mean();
    let shift = dot(&mean, h);
    part.rows().map(|r| dot(r, h) - shift).collect()
}

/// Projections `<R_u(x_j - mean(part2)), h>` over `part2`.
pub(crate) fn reflected_projections(part: &Sample, h: &[f64], u: &[f64]) -> Vec<f64> {
    let mean = part.mean();
    let d = part.d();
    let mut centered = vec![0.0; d];
    let mut reflected = vec![0.0; d];
    part.rows()
        .map(|r| {
            for ((c, x), m) in centered.iter_mut().zip(r).zip(&mean) {
                *c = x - m;
            }
            reflect_into(u, &centered, &mut reflected);
            dot(&reflected, h)
        })
        .collect()
}

/// Sup distance between the `h`-projected ECDF of centered `part1` and that of
/// centered `part2` reflected about `u`.
pub fn g_hat(part1: &Sample, part2: &Sample, h: &UnitDirection, u: &UnitDirection) -> Result<f64> {
    let d = h.dim();
    for found in [part1.d(), part2.d(), u.dim()] {
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    let a = centered_projections(part1, h.coords());
    let b = reflected_projections(part2, h.coords(), u.coords());
    ks_sup(&a, &b)
}

/// Per-candidate observed statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateStatistic {
    /// `sqrt(n) * g_hat`, with `n` the full sample size.
    pub statistic: f64,
    pub direction: UnitDirection,
    pub eigenvalue: f64,
}

/// Eigendecomposition of the covariance of `part3`, rejecting degenerate cases.
pub(crate) fn candidate_axes(part3: &Sample) -> Result<SpectralDecomposition> {
    let d = part3.d();
    if part3.n() < d + 1 {
        return Err(Error::InsufficientData(format!(
            "axis-estimation part has {} rows, need at least d + 1 = {}",
            part3.n(),
            d + 1
        )));
    }
    let (_, cov) = mean_and_covariance(part3)?;
    if cov.max_abs() == 0.0 {
        return Err(Error::ZeroCovariance);
    }
    eigendecompose(&cov)
}

/// `sqrt(n) * g_hat(part1, part2, h, u)`.
pub(crate) fn scaled_statistic(parts: &SplitParts, h: &UnitDirection, u: &UnitDirection) -> Result<f64> {
    let n = parts.part1.n() + parts.part2.n() + parts.part3.n();
    Ok((n as f64).sqrt() * g_hat(&parts.part1, &parts.part2, h, u)?)
}

/// Candidate statistic for the `index`-th (0-based, decreasing eigenvalue)
/// principal axis of `part3`.
pub fn candidate_statistic(
    sample: &Sample,
    split: &SplitIndices,
    h: &UnitDirection,
    index: usize,
) -> Result<CandidateStatistic> {
    if h.dim() != sample.d() {
        return Err(Error::DimensionMismatch {
            expected: sample.d(),
            found: h.dim(),
        });
    }
    if index >= sample.d() {
        return Err(Error::InvalidConfig(format!(
            "candidate index {index} out of range for d = {}",
            sample.d()
        )));
    }
    let parts = split.apply(sample)?;
    let axes = candidate_axes(&parts.part3)?;
    let direction = axes.eigenvectors[index].clone();
    let statistic = scaled_statistic(&parts, h, &direction)?;
    Ok(CandidateStatistic {
        statistic,
        direction,
        eigenvalue: axes.eigenvalues[index],
    })
}
