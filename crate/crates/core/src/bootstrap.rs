//! Symmetrized, kernel-smoothed bootstrap law and bootstrap p-values.
//!
//! For a candidate axis `u`, the comparison two thirds of the sample are
//! reflected about the affine axis through their mean. The union of the
//! originals and their mirrors is exactly invariant under that reflection. The
//! bootstrap law is this uniform atom measure convolved with an isotropic
//! kernel of bandwidth `b`. Its covariance is `cov(atoms) + b^2 I`, so `u`
//! stays an eigenvector.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::empirical::{candidate_axes, scaled_statistic, split_three};
use crate::error::{Error, Result};
use crate::geometry::{sample_unit_direction, UnitDirection};
use crate::sample::Sample;
use crate::spectral::mean_and_covariance;

/// A subsample together with its mirror images about `center + span(axis)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizedSample {
    pub atoms: Sample,
    pub axis: UnitDirection,
    pub center: Vec<f64>,
}

impl SymmetrizedSample {
    /// Number of atoms (twice the subsample size).
    pub fn len(&self) -> usize {
        self.atoms.n()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.n() == 0
    }

    /// `sqrt(trace(cov(atoms)) / d)`, the average coordinate standard deviation.
    pub fn data_scale(&self) -> f64 {
        let n = self.atoms.n();
        let d = self.atoms.d();
        if n < 2 {
            return 0.0;
        }
        let (_, cov) = mean_and_covariance(&self.atoms).expect("at least two atoms");
        (cov.trace() / d as f64).max(0.0).sqrt()
    }
}

/// Union of `subsample` with its reflection about the axis through its mean.
/// Originals come first, mirrors follow in the same order.
pub fn symmetrize(subsample: &Sample, axis: &UnitDirection) -> Result<SymmetrizedSample> {
    let d = subsample.d();
    if axis.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: axis.dim(),
        });
    }
    let center = subsample.mean();
    let mirrored = subsample.map_rows(|x, out| {
        let mut shifted = vec![0.0; d];
        for ((s, xi), ci) in shifted.iter_mut().zip(x).zip(&center) {
            *s = xi - ci;
        }
        crate::geometry::reflect_into(axis.coords(), &shifted, out);
        for (o, ci) in out.iter_mut().zip(&center) {
            *o += ci;
        }
    });
    Ok(SymmetrizedSample {
        atoms: subsample.concat(&mirrored)?,
        axis: axis.clone(),
        center,
    })
}

/// Smoothing kernel family. Both have identity covariance at bandwidth 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    #[default]
    Gaussian,
    /// Compactly supported `exp(-1 / (1 - |z|^2))` on the unit ball, rescaled.
    Bump,
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "bump" => Ok(Self::Bump),
            other => Err(Error::InvalidConfig(format!("unknown kernel '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub bandwidth: f64,
}

impl KernelSpec {
    pub fn new(kind: KernelKind, bandwidth: f64) -> Result<Self> {
        if !(bandwidth >= 0.0 && bandwidth.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "bandwidth must be finite and non-negative, got {bandwidth}"
            )));
        }
        Ok(Self { kind, bandwidth })
    }
}

/// Exponent `0.9 * min(1/4, 1/(d + 2))` of the default bandwidth rule.
pub fn bandwidth_exponent(d: usize) -> f64 {
    0.9 * (0.25f64).min(1.0 / (d as f64 + 2.0))
}

/// `scale * n^(-alpha)` with `alpha = bandwidth_exponent(d)`.
pub fn default_bandwidth(n: usize, d: usize, scale: f64) -> f64 {
    scale * (n as f64).powf(-bandwidth_exponent(d))
}

/// Radial profile of the bump kernel in dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpProfile {
    /// Multiplier giving the unit-ball bump identity covariance.
    pub unit_cov_scale: f64,
    /// Upper bound on `r^(d-1) exp(-1/(1-r^2))` over `[0, 1)`.
    envelope: f64,
    d: usize,
}

fn bump_radial(d: usize, r: f64) -> f64 {
    if r >= 1.0 {
        return 0.0;
    }
    r.powi(d as i32 - 1) * (-1.0 / (1.0 - r * r)).exp()
}

/// Composite Simpson rule on `[0, 1]`.
fn simpson<F: Fn(f64) -> f64>(f: F, intervals: usize) -> f64 {
    let h = 1.0 / intervals as f64;
    let mut acc = f(0.0) + f(1.0);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(k as f64 * h);
    }
    acc * h / 3.0
}

impl BumpProfile {
    const GRID: usize = 8192;

    fn compute(d: usize) -> Self {
        let mass = simpson(|r| bump_radial(d, r), Self::GRID);
        let second = simpson(|r| r * r * bump_radial(d, r), Self::GRID);
        let mean_r2 = second / mass;
        let peak = (0..=Self::GRID)
            .map(|k| bump_radial(d, k as f64 / Self::GRID as f64))
            .fold(0.0, f64::max);
        Self {
            unit_cov_scale: (d as f64 / mean_r2).sqrt(),
            envelope: peak * 1.05,
            d,
        }
    }

    /// Cached profile for dimension `d`.
    pub fn for_dim(d: usize) -> Self {
        static CACHE: OnceLock<Mutex<HashMap<usize, BumpProfile>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("bump profile cache poisoned");
        *guard.entry(d).or_insert_with(|| Self::compute(d))
    }

    /// One draw with identity covariance.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        let r = loop {
            let r: f64 = rng.random();
            let y: f64 = rng.random::<f64>() * self.envelope;
            if y <= bump_radial(self.d, r) {
                break r;
            }
        };
        let dir = sample_unit_direction(self.d, rng).expect("d >= 2");
        let s = self.unit_cov_scale * r;
        for (o, u) in out.iter_mut().zip(dir.coords()) {
            *o = s * u;
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Noise {
    None,
    Gaussian,
    Bump(BumpProfile),
}

/// The smoothed symmetrized law, ready for repeated sampling.
#[derive(Debug, Clone)]
pub struct SmoothedLaw<'a> {
    sym: &'a SymmetrizedSample,
    bandwidth: f64,
    noise: Noise,
}

impl<'a> SmoothedLaw<'a> {
    pub fn new(sym: &'a SymmetrizedSample, kernel: KernelSpec) -> Result<Self> {
        let kernel = KernelSpec::new(kernel.kind, kernel.bandwidth)?;
        let noise = if kernel.bandwidth == 0.0 {
            Noise::None
        } else {
            match kernel.kind {
                KernelKind::Gaussian => Noise::Gaussian,
                KernelKind::Bump => Noise::Bump(BumpProfile::for_dim(sym.atoms.d())),
            }
        };
        Ok(Self {
            sym,
            bandwidth: kernel.bandwidth,
            noise,
        })
    }

    /// `n_out` i.i.d. draws: a uniformly chosen atom plus scaled kernel noise.
    pub fn draw<R: Rng + ?Sized>(&self, n_out: usize, rng: &mut R) -> Sample {
        let atoms = &self.sym.atoms;
        let d = atoms.d();
        let k = atoms.n();
        let mut data = vec![0.0; n_out * d];
        let mut z = vec![0.0; d];
        for row in data.chunks_exact_mut(d) {
            let j = rng.random_range(0..k);
            row.copy_from_slice(atoms.row(j));
            match self.noise {
                Noise::None => continue,
                Noise::Gaussian => z.iter_mut().for_each(|v| *v = rng.sample(StandardNormal)),
                Noise::Bump(profile) => profile.sample(rng, &mut z),
            }
            for (x, e) in row.iter_mut().zip(&z) {
                *x += self.bandwidth * e;
            }
        }
        Sample::from_flat_unchecked(data, d)
    }

    /// One bootstrap statistic for candidate `index`: draw `n` points, split,
    /// re-estimate the axis on the third block, and recompute the statistic.
    pub fn replicate<R: Rng + ?Sized>(&self, n: usize, index: usize, h: &UnitDirection, rng: &mut R) -> Result<f64> {
        let draws = self.draw(n, rng);
        let split = split_three(n, rng)?;
        let parts = split.apply(&draws)?;
        let axes = candidate_axes(&parts.part3)?;
        let u = axes
            .eigenvectors
            .get(index)
            .ok_or_else(|| Error::InvalidConfig(format!("candidate index {index} out of range")))?;
        scaled_statistic(&parts, h, u)
    }
}

/// Draw `n_out` points from the smoothed symmetrized law.
pub fn draw_smoothed<R: Rng + ?Sized>(
    sym: &SymmetrizedSample,
    kernel: KernelSpec,
    n_out: usize,
    rng: &mut R,
) -> Result<Sample> {
    if n_out == 0 {
        return Err(Error::InvalidConfig("n_out must be at least 1".into()));
    }
    Ok(SmoothedLaw::new(sym, kernel)?.draw(n_out, rng))
}

/// One bootstrap replicate of the candidate statistic.
pub fn bootstrap_replicate<R: Rng + ?Sized>(
    sym: &SymmetrizedSample,
    kernel: KernelSpec,
    n: usize,
    index: usize,
    h: &UnitDirection,
    rng: &mut R,
) -> Result<f64> {
    SmoothedLaw::new(sym, kernel)?.replicate(n, index, h, rng)
}

/// `(1 + #{T_b >= t_obs}) / (B + 1)`.
pub fn bootstrap_pvalue(t_obs: f64, replicates: &[f64]) -> Result<f64> {
    if replicates.is_empty() {
        return Err(Error::EmptyInput("no bootstrap replicates"));
    }
    let exceed = replicates.iter().filter(|&&t| t >= t_obs).count();
    Ok((1 + exceed) as f64 / (replicates.len() + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dot, reflect_affine};
    use crate::seeding::rng_from_seed;
    use crate::spectral::SquareMatrix;
    use proptest::prelude::*;
    use rand::Rng;

    fn gaussian(n: usize, sd: &[f64], seed: u64) -> Sample {
        let mut rng = rng_from_seed(seed);
        let data = (0..n * sd.len())
            .map(|k| sd[k % sd.len()] * rng.sample::<f64, _>(StandardNormal))
            .collect();
        Sample::from_flat(data, sd.len()).unwrap()
    }

    fn sorted_rows(s: &Sample) -> Vec<Vec<f64>> {
        let mut rows: Vec<Vec<f64>> = s.rows().map(|r| r.to_vec()).collect();
        rows.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        rows
    }

    #[test]
    fn symmetrize_examples() {
        let e1 = UnitDirection::basis(2, 0).unwrap();
        let one = Sample::from_rows(&[[1.0, 1.0]]).unwrap();
        let s = symmetrize(&one, &e1).unwrap();
        assert_eq!(s.center, vec![1.0, 1.0]);
        assert_eq!(s.atoms, Sample::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap());

        let two = Sample::from_rows(&[[0.0, 0.0], [0.0, 2.0]]).unwrap();
        let s = symmetrize(&two, &e1).unwrap();
        assert_eq!(s.center, vec![0.0, 1.0]);
        assert_eq!(
            s.atoms,
            Sample::from_rows(&[[0.0, 0.0], [0.0, 2.0], [0.0, 2.0], [0.0, 0.0]]).unwrap()
        );

        // already symmetric: the multiset is duplicated
        let sym = Sample::from_rows(&[[1.0, 1.0], [1.0, -1.0], [3.0, 0.0], [-1.0, 0.0]]).unwrap();
        let s = symmetrize(&sym, &e1).unwrap();
        let doubled = sym.concat(&sym).unwrap();
        assert_eq!(sorted_rows(&s.atoms), sorted_rows(&doubled));

        let e3 = UnitDirection::basis(3, 0).unwrap();
        assert!(symmetrize(&sym, &e3).is_err());
    }

    #[test]
    fn symmetrized_structure() {
        let x = gaussian(200, &[2.0, 1.0, 0.5], 11).map_rows(|r, o| {
            o[0] = r[0].exp();
            o[1] = r[1] + 0.3 * r[0] * r[0];
            o[2] = r[2] - 1.0;
        });
        let axis = UnitDirection::new(vec![0.4, -0.2, 0.9]).unwrap();
        let s = symmetrize(&x, &axis).unwrap();

        let mean = s.atoms.mean();
        for (m, c) in mean.iter().zip(&s.center) {
            assert!((m - c).abs() < 1e-10);
        }

        let image = s
            .atoms
            .map_rows(|r, o| o.copy_from_slice(&reflect_affine(&axis, &s.center, r).unwrap()));
        for (a, b) in sorted_rows(&image).iter().zip(sorted_rows(&s.atoms).iter()) {
            for (p, q) in a.iter().zip(b) {
                assert!((p - q).abs() < 1e-10);
            }
        }

        let (_, cov) = mean_and_covariance(&s.atoms).unwrap();
        let lead = crate::spectral::eigendecompose(&cov).unwrap().eigenvalues[0];
        let cu = cov.mul_vec(axis.coords());
        let q = dot(axis.coords(), &cu);
        let resid: f64 = cu
            .iter()
            .zip(axis.coords())
            .map(|(a, b)| (a - q * b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(resid <= 1e-8 * lead, "residual {resid}");
    }

    #[test]
    fn bandwidth_rule() {
        assert!((bandwidth_exponent(2) - 0.225).abs() < 1e-15);
        assert!((bandwidth_exponent(10) - 0.075).abs() < 1e-15);
        for d in 2..200 {
            let a = bandwidth_exponent(d);
            assert!(a > 0.0 && a < 0.25f64.min(1.0 / (d as f64 + 2.0)));
        }
        assert!((default_bandwidth(100, 2, 1.0) - 100f64.powf(-0.225)).abs() < 1e-15);
        assert!((default_bandwidth(100, 2, 3.0) - 3.0 * 100f64.powf(-0.225)).abs() < 1e-14);
    }

    #[test]
    fn zero_bandwidth_returns_atoms() {
        let x = gaussian(20, &[1.0, 1.0], 2);
        let s = symmetrize(&x, &UnitDirection::basis(2, 1).unwrap()).unwrap();
        let draws = draw_smoothed(
            &s,
            KernelSpec::new(KernelKind::Gaussian, 0.0).unwrap(),
            500,
            &mut rng_from_seed(4),
        )
        .unwrap();
        for r in draws.rows() {
            assert!(s.atoms.rows().any(|a| a == r));
        }
        assert!(KernelSpec::new(KernelKind::Gaussian, -1.0).is_err());
        assert!(draw_smoothed(
            &s,
            KernelSpec::new(KernelKind::Gaussian, 0.1).unwrap(),
            0,
            &mut rng_from_seed(4)
        )
        .is_err());
    }

    #[test]
    fn draws_are_deterministic() {
        let x = gaussian(30, &[1.0, 2.0], 3);
        let s = symmetrize(&x, &UnitDirection::basis(2, 0).unwrap()).unwrap();
        for kind in [KernelKind::Gaussian, KernelKind::Bump] {
            let k = KernelSpec::new(kind, 0.4).unwrap();
            let a = draw_smoothed(&s, k, 100, &mut rng_from_seed(8)).unwrap();
            let b = draw_smoothed(&s, k, 100, &mut rng_from_seed(8)).unwrap();
            assert_eq!(a, b);
        }
    }

    fn check_smoothing_covariance(kind: KernelKind) {
        let x = gaussian(150, &[2.0, 0.7], 21);
        let axis = UnitDirection::new(vec![0.6, 0.8]).unwrap();
        let s = symmetrize(&x, &axis).unwrap();
        let b = 0.8;
        let draws = draw_smoothed(&s, KernelSpec::new(kind, b).unwrap(), 100_000, &mut rng_from_seed(99)).unwrap();
        let (_, got) = mean_and_covariance(&draws).unwrap();
        let (_, atom_cov) = mean_and_covariance(&s.atoms).unwrap();
        let mut want = atom_cov.clone();
        for i in 0..2 {
            want.set(i, i, want.get(i, i) + b * b);
        }
        let scale = want.max_abs();
        for i in 0..2 {
            for j in 0..2 {
                let err = (got.get(i, j) - want.get(i, j)).abs() / scale;
                assert!(
                    err < 0.02,
                    "{kind:?} ({i},{j}): {} vs {}",
                    got.get(i, j),
                    want.get(i, j)
                );
            }
        }
    }

    #[test]
    fn gaussian_smoothing_adds_bandwidth_squared() {
        check_smoothing_covariance(KernelKind::Gaussian);
    }

    #[test]
    fn bump_smoothing_adds_bandwidth_squared() {
        check_smoothing_covariance(KernelKind::Bump);
    }

    #[test]
    fn bump_kernel_has_identity_covariance_and_compact_support() {
        for d in [2usize, 3, 6] {
            let p = BumpProfile::for_dim(d);
            let mut rng = rng_from_seed(d as u64);
            let mut z = vec![0.0; d];
            let mut second = SquareMatrix::zeros(d);
            let draws = 50_000;
            for _ in 0..draws {
                p.sample(&mut rng, &mut z);
                assert!(crate::geometry::norm(&z) < p.unit_cov_scale);
                for i in 0..d {
                    for j in 0..d {
                        second.set(i, j, second.get(i, j) + z[i] * z[j] / draws as f64);
                    }
                }
            }
            for i in 0..d {
                for j in 0..d {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (second.get(i, j) - want).abs() < 0.03,
                        "d={d} ({i},{j}) {}",
                        second.get(i, j)
                    );
                }
            }
        }
    }

    #[test]
    fn pvalue_examples() {
        let reps: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(bootstrap_pvalue(5.0, &reps).unwrap(), 7.0 / 11.0);
        assert_eq!(bootstrap_pvalue(11.0, &reps).unwrap(), 1.0 / 11.0);
        assert_eq!(bootstrap_pvalue(0.0, &reps).unwrap(), 1.0);
        assert!(bootstrap_pvalue(1.0, &[]).is_err());
    }

    #[test]
    fn replicate_bounds_and_determinism() {
        let x = gaussian(200, &[2.0, 1.0], 5);
        let s = symmetrize(&x, &UnitDirection::basis(2, 0).unwrap()).unwrap();
        let k = KernelSpec::new(KernelKind::Gaussian, 0.3).unwrap();
        let h = UnitDirection::new(vec![0.3, 0.7]).unwrap();
        for seed in 0..20 {
            let t = bootstrap_replicate(&s, k, 300, 1, &h, &mut rng_from_seed(seed)).unwrap();
            assert!((0.0..=300f64.sqrt()).contains(&t));
            assert_eq!(
                t,
                bootstrap_replicate(&s, k, 300, 1, &h, &mut rng_from_seed(seed)).unwrap()
            );
        }
        assert!(bootstrap_replicate(&s, k, 8, 0, &h, &mut rng_from_seed(0)).is_err());
    }

    proptest! {
        #[test]
        fn pvalue_is_anti_monotone(reps in prop::collection::vec(0.0f64..5.0, 1..50), a in 0.0f64..6.0, b in 0.0f64..6.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p_lo = bootstrap_pvalue(lo, &reps).unwrap();
            let p_hi = bootstrap_pvalue(hi, &reps).unwrap();
            prop_assert!(p_hi <= p_lo);
            prop_assert!(p_hi >= 1.0 / (reps.len() as f64 + 1.0) && p_lo <= 1.0);
        }
    }
}
