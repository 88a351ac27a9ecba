//! Seeded synthetic data for null and alternative scenarios.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{reflect_into, UnitDirection};
use crate::sample::Sample;
use crate::seeding::rng_from_seed;

/// Distribution family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `N(mean, diag(variances))`, variances strictly decreasing.
    /// Symmetric about every coordinate axis.
    Gaussian { mean: Vec<f64>, variances: Vec<f64> },
    /// The Gaussian above rotated by `angle` radians in the plane of the first two coordinates.
    RotatedGaussian {
        mean: Vec<f64>,
        variances: Vec<f64>,
        angle: f64,
    },
    /// Independent `(E1 - 1, s (E2 - 1))` with unit exponentials; no symmetry axis.
    SkewProduct { s: f64 },
    /// Uniform on the perimeter of a regular `k`-gon of circumradius `radius` centered at 0.
    PolygonUniform { k: usize, radius: f64 },
    /// `n/2` draws of `offset + scales * (E - 1)` together with their exact mirror
    /// images about `span(axis)`. Symmetric by construction.
    MirroredMixture {
        axis: Vec<f64>,
        offset: Vec<f64>,
        scales: Vec<f64>,
    },
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gaussian { .. } => "gaussian",
            Self::RotatedGaussian { .. } => "rotated_gaussian",
            Self::SkewProduct { .. } => "skew_product",
            Self::PolygonUniform { .. } => "polygon_uniform",
            Self::MirroredMixture { .. } => "mirrored_mixture",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Gaussian { variances, .. } | Self::RotatedGaussian { variances, .. } => variances.len(),
            Self::SkewProduct { .. } | Self::PolygonUniform { .. } => 2,
            Self::MirroredMixture { axis, .. } => axis.len(),
        }
    }

    /// Whether the law is axially symmetric about some direction.
    pub fn is_null(&self) -> bool {
        !matches!(self, Self::SkewProduct { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidGenerator(msg));
        match self {
            Self::Gaussian { mean, variances } | Self::RotatedGaussian { mean, variances, .. } => {
                if variances.len() < 2 {
                    return bad(format!("need at least 2 variances, got {}", variances.len()));
                }
                if mean.len() != variances.len() {
                    return bad(format!("mean has length {}, variances {}", mean.len(), variances.len()));
                }
                if variances.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return bad("variances must be positive and finite".into());
                }
                if variances.windows(2).any(|w| w[0] <= w[1]) {
                    return bad("variances must be strictly decreasing".into());
                }
                if mean.iter().any(|m| !m.is_finite()) {
                    return bad("mean must be finite".into());
                }
                if let Self::RotatedGaussian { angle, .. } = self {
                    if !angle.is_finite() {
                        return bad("angle must be finite".into());
                    }
                }
            }
            Self::SkewProduct { s } => {
                if !(*s > 0.0 && s.is_finite()) || *s == 1.0 {
                    return bad(format!("skew scale must be positive, finite and != 1, got {s}"));
                }
            }
            Self::PolygonUniform { k, radius } => {
                if *k < 3 {
                    return bad(format!("polygon needs k >= 3 vertices, got {k}"));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return bad(format!("radius must be positive, got {radius}"));
                }
            }
            Self::MirroredMixture { axis, offset, scales } => {
                UnitDirection::new(axis.clone()).map_err(|e| Error::InvalidGenerator(e.to_string()))?;
                if offset.len() != axis.len() || scales.len() != axis.len() {
                    return bad("axis, offset and scales must share one dimension".into());
                }
                if scales.iter().chain(offset).any(|v| !v.is_finite()) {
                    return bad("offset and scales must be finite".into());
                }
            }
        }
        Ok(())
    }

    pub fn default_gaussian() -> Self {
        Self::Gaussian {
            mean: vec![0.0, 0.0],
            variances: vec![4.0, 1.0],
        }
    }

    pub fn default_mirrored() -> Self {
        Self::MirroredMixture {
            axis: vec![1.0, 0.0],
            offset: vec![0.5, 0.8],
            scales: vec![1.0, 0.6],
        }
    }
}

/// A generator together with sample size and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    /// Generate using the spec's own seed.
    pub fn sample(&self) -> Result<Sample> {
        generate(self, &mut rng_from_seed(self.seed))
    }
}

fn gaussian_rows<R: Rng + ?Sized>(mean: &[f64], variances: &[f64], angle: f64, n: usize, rng: &mut R) -> Vec<f64> {
    let d = variances.len();
    let sds: Vec<f64> = variances.iter().map(|v| v.sqrt()).collect();
    let (s, c) = angle.sin_cos();
    let mut data = Vec::with_capacity(n * d);
    let mut z = vec![0.0; d];
    for _ in 0..n {
        for (zi, sd) in z.iter_mut().zip(&sds) {
            *zi = sd * rng.sample::<f64, _>(StandardNormal);
        }
        if angle != 0.0 {
            let (a, b) = (z[0], z[1]);
            z[0] = c * a - s * b;
            z[1] = s * a + c * b;
        }
        data.extend(z.iter().zip(mean).map(|(v, m)| v + m));
    }
    data
}

/// Draw `spec.n` observations using `rng`.
pub fn generate<R: Rng + ?Sized>(spec: &GeneratorSpec, rng: &mut R) -> Result<Sample> {
    spec.kind.validate()?;
    let n = spec.n;
    if n == 0 {
        return Err(Error::InvalidGenerator("n must be at least 1".into()));
    }
    let d = spec.kind.dim();
    let data = match &spec.kind {
        GeneratorKind::Gaussian { mean, variances } => gaussian_rows(mean, variances, 0.0, n, rng),
        GeneratorKind::RotatedGaussian { mean, variances, angle } => gaussian_rows(mean, variances, *angle, n, rng),
        GeneratorKind::SkewProduct { s } => {
            let mut data = Vec::with_capacity(2 * n);
            for _ in 0..n {
                let e1: f64 = rng.sample(Exp1);
                let e2: f64 = rng.sample(Exp1);
                data.push(e1 - 1.0);
                data.push(s * (e2 - 1.0));
            }
            data
        }
        GeneratorKind::PolygonUniform { k, radius } => {
            let vertex = |j: usize| {
                let t = TAU * (j % k) as f64 / *k as f64;
                [radius * t.cos(), radius * t.sin()]
            };
            let mut data = Vec::with_capacity(2 * n);
            for _ in 0..n {
                let edge = rng.random_range(0..*k);
                let t: f64 = rng.random();
                let (a, b) = (vertex(edge), vertex(edge + 1));
                data.push(a[0] + t * (b[0] - a[0]));
                data.push(a[1] + t * (b[1] - a[1]));
            }
            data
        }
        GeneratorKind::MirroredMixture { axis, offset, scales } => {
            if !n.is_multiple_of(2) {
                return Err(Error::InvalidGenerator(format!(
                    "mirrored_mixture needs an even n, got {n}"
                )));
            }
            let u = UnitDirection::new(axis.clone())?;
            let half = n / 2;
            let mut cloud = Vec::with_capacity(half * d);
            for _ in 0..half {
                for (o, s) in offset.iter().zip(scales) {
                    let e: f64 = rng.sample(Exp1);
                    cloud.push(o + s * (e - 1.0));
                }
            }
            let mut mirrors = vec![0.0; half * d];
            for (x, out) in cloud.chunks_exact(d).zip(mirrors.chunks_exact_mut(d)) {
                reflect_into(u.coords(), x, out);
            }
            cloud.extend(mirrors);
            cloud
        }
    };
    Sample::from_flat(data, d)
}
