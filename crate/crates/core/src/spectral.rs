//! Mean and covariance estimation, cyclic Jacobi eigendecomposition and the
//! simple-spectrum diagnostic.
//!
//! Eigenpairs are returned in decreasing eigenvalue order. Each eigenvector is
//! oriented so that its coordinate of largest magnitude is positive (ties go to
//! the lowest index). Reflections only see `u u^T`, so this orientation does not
//! change any statistic; it only makes reports and seeds reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::UnitDirection;
use crate::sample::Sample;

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const MAX_SWEEPS: usize = 100;

/// Default relative eigengap below which the spectrum is flagged as non-simple.
pub const DEFAULT_GAP_TOL: f64 = 1e-6;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    d: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(d: usize) -> Self {
        Self {
            d,
            data: vec![0.0; d * d],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.len();
        let mut data = Vec::with_capacity(d * d);
        for r in rows {
            let r = r.as_ref();
            if r.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { d, data })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.d + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.d + j] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.d)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.d).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `Q A Q^T`.
    pub fn conjugate(&self, q: &SquareMatrix) -> SquareMatrix {
        let d = self.d;
        let mut qa = SquareMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                qa.set(i, j, (0..d).map(|k| q.get(i, k) * self.get(k, j)).sum());
            }
        }
        let mut out = SquareMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.set(i, j, (0..d).map(|k| qa.get(i, k) * q.get(j, k)).sum());
            }
        }
        out
    }
}

/// Sample mean and covariance with divisor `n`. The covariance is exactly symmetric.
pub fn mean_and_covariance(sample: &Sample) -> Result<(Vec<f64>, SquareMatrix)> {
    let n = sample.n();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "covariance needs at least 2 rows, got {n}"
        )));
    }
    let d = sample.d();
    let mean = sample.mean();
    let mut cov = SquareMatrix::zeros(d);
    let mut centered = vec![0.0; d];
    for r in sample.rows() {
        for (c, (x, m)) in centered.iter_mut().zip(r.iter().zip(&mean)) {
            *c = x - m;
        }
        for i in 0..d {
            let ci = centered[i];
            for (j, cj) in centered.iter().enumerate().skip(i) {
                cov.data[i * d + j] += ci * cj;
            }
        }
    }
    let inv = 1.0 / n as f64;
    for i in 0..d {
        for j in i..d {
            let v = cov.get(i, j) * inv;
            cov.set(i, j, v);
            cov.set(j, i, v);
        }
    }
    Ok((mean, cov))
}

/// Ordered eigenvalues and orientation-canonical orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<UnitDirection>,
    pub min_relative_gap: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Flip `v` so its largest-magnitude coordinate is positive.
pub fn canonicalize_sign(v: &mut [f64]) {
    let mut best = 0;
    for (k, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = k;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
pub fn eigendecompose(matrix: &SquareMatrix) -> Result<SpectralDecomposition> {
    let d = matrix.dim();
    if d == 0 {
        return Err(Error::EmptyInput("empty matrix"));
    }
    let scale = matrix.max_abs();
    let mut asym = 0.0f64;
    for i in 0..d {
        for j in (i + 1)..d {
            asym = asym.max((matrix.get(i, j) - matrix.get(j, i)).abs());
        }
    }
    if asym > 1e-8 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric(asym));
    }
    if matrix.data.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }

    let mut a = matrix.clone();
    for i in 0..d {
        for j in (i + 1)..d {
            let v = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    let mut v = SquareMatrix::identity(d);

    let frob2: f64 = a.data.iter().map(|x| x * x).sum();
    let target = (f64::EPSILON * f64::EPSILON) * frob2;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..d)
            .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
            .map(|(i, j)| a.get(i, j) * a.get(i, j))
            .sum();
        if off <= target || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A <- J^T A J with J the (p, q) rotation
                for k in 0..d {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..d {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for k in 0..d {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a.get(j, j).total_cmp(&a.get(i, i)).then(i.cmp(&j)));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| a.get(k, k)).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..d).map(|r| v.get(r, k)).collect();
            let nrm = crate::geometry::norm(&col);
            col.iter_mut().for_each(|x| *x /= nrm);
            canonicalize_sign(&mut col);
            UnitDirection::from_unit_unchecked(col)
        })
        .collect();

    let lead = eigenvalues[0].max(f64::EPSILON);
    let min_relative_gap = eigenvalues
        .windows(2)
        .map(|w| (w[0] - w[1]) / lead)
        .fold(f64::INFINITY, f64::min);
    let min_relative_gap = if min_relative_gap.is_finite() {
        min_relative_gap.max(0.0)
    } else {
        0.0
    };

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
        min_relative_gap,
    })
}

/// Outcome of the simple-spectrum check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCheck {
    pub ok: bool,
    pub gap: f64,
    pub rel_tol: f64,
}

/// Flags eigengaps below `rel_tol`. Never fails; the caller decides severity.
pub fn check_simple_spectrum(decomp: &SpectralDecomposition, rel_tol: f64) -> SpectrumCheck {
    SpectrumCheck {
        ok: decomp.min_relative_gap >= rel_tol,
        gap: decomp.min_relative_gap,
        rel_tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dot;
    use proptest::prelude::*;

    fn rot2(theta: f64) -> SquareMatrix {
        let (s, c) = theta.sin_cos();
        SquareMatrix::from_rows(&[[c, -s], [s, c]]).unwrap()
    }

    /// Product of Givens rotations in every coordinate plane.
    fn rotation(d: usize, angles: &[f64]) -> SquareMatrix {
        let mut q = SquareMatrix::identity(d);
        let mut k = 0;
        for p in 0..d {
            for r in (p + 1)..d {
                let (s, c) = angles[k % angles.len()].sin_cos();
                k += 1;
                let mut g = SquareMatrix::identity(d);
                g.set(p, p, c);
                g.set(r, r, c);
                g.set(p, r, -s);
                g.set(r, p, s);
                let mut next = SquareMatrix::zeros(d);
                for i in 0..d {
                    for j in 0..d {
                        next.set(i, j, (0..d).map(|m| g.get(i, m) * q.get(m, j)).sum());
                    }
                }
                q = next;
            }
        }
        q
    }

    #[test]
    fn covariance_examples() {
        let s = Sample::from_rows(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0], [0.0, -2.0]]).unwrap();
        let (m, c) = mean_and_covariance(&s).unwrap();
        assert_eq!(m, vec![0.0, 0.0]);
        assert_eq!(c, SquareMatrix::diagonal(&[0.5, 2.0]));

        let same = Sample::from_rows(&[[3.0, -1.0], [3.0, -1.0], [3.0, -1.0]]).unwrap();
        let (m, c) = mean_and_covariance(&same).unwrap();
        assert_eq!(m, vec![3.0, -1.0]);
        assert_eq!(c, SquareMatrix::zeros(2));

        let one = Sample::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(matches!(mean_and_covariance(&one), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn diagonal_decomposition() {
        let dec = eigendecompose(&SquareMatrix::diagonal(&[0.5, 2.0])).unwrap();
        assert_eq!(dec.eigenvalues, vec![2.0, 0.5]);
        assert_eq!(dec.eigenvectors[0].coords(), &[0.0, 1.0]);
        assert_eq!(dec.eigenvectors[1].coords(), &[1.0, 0.0]);

        let id = eigendecompose(&SquareMatrix::identity(4)).unwrap();
        assert_eq!(id.eigenvalues, vec![1.0; 4]);
        assert_eq!(id.min_relative_gap, 0.0);
    }

    #[test]
    fn rotated_matches_closed_form() {
        for &theta in &[0.1, 0.7, 1.3, 2.9, -0.4] {
            let r = rot2(theta);
            let m = SquareMatrix::diagonal(&[3.0, 1.0]).conjugate(&r);
            // closed form for 2x2 symmetric [[a, b], [b, c]]
            let (a, b, c) = (m.get(0, 0), m.get(0, 1), m.get(1, 1));
            let mid = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            let dec = eigendecompose(&m).unwrap();
            assert!((dec.eigenvalues[0] - (mid + rad)).abs() < 1e-12);
            assert!((dec.eigenvalues[1] - (mid - rad)).abs() < 1e-12);
            for (k, v) in dec.eigenvectors.iter().enumerate() {
                let col = [r.get(0, k), r.get(1, k)];
                assert!((dot(v.coords(), &col).abs() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = SquareMatrix::from_rows(&[[1.0, 0.5], [0.4, 1.0]]).unwrap();
        assert!(matches!(eigendecompose(&m), Err(Error::NotSymmetric(_))));
        let ok = SquareMatrix::from_rows(&[[1.0, 0.5], [0.5 + 1e-12, 1.0]]).unwrap();
        assert!(eigendecompose(&ok).is_ok());
    }

    #[test]
    fn spectrum_check_examples() {
        let id = eigendecompose(&SquareMatrix::identity(2)).unwrap();
        let c = check_simple_spectrum(&id, 1e-6);
        assert!(!c.ok);
        assert_eq!(c.gap, 0.0);

        let d = eigendecompose(&SquareMatrix::diagonal(&[2.0, 1.0])).unwrap();
        let c = check_simple_spectrum(&d, 1e-6);
        assert!(c.ok);
        assert!((c.gap - 0.5).abs() < 1e-15);

        let near = eigendecompose(&SquareMatrix::diagonal(&[1.0 + 1e-9, 1.0])).unwrap();
        assert!(!check_simple_spectrum(&near, 1e-6).ok);
    }

    #[test]
    fn canonical_sign_rules() {
        let mut v = vec![0.1, -0.9, 0.3];
        canonicalize_sign(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.3]);
        let mut tie = vec![-0.5, 0.5];
        canonicalize_sign(&mut tie);
        assert_eq!(tie, vec![0.5, -0.5]);
        let mut again = tie.clone();
        canonicalize_sign(&mut again);
        assert_eq!(again, tie);
    }

    fn spd_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..7).prop_flat_map(|d| {
            (
                prop::collection::vec(0.01f64..10.0, d),
                prop::collection::vec(-3.2f64..3.2, d * (d - 1) / 2),
            )
        })
    }

    proptest! {
        #[test]
        fn decomposition_invariants((diag, angles) in spd_strategy(), other in prop::collection::vec(-3.2f64..3.2, 1..20)) {
            let d = diag.len();
            let q = rotation(d, &angles);
            let m = SquareMatrix::diagonal(&diag).conjugate(&q);
            let dec = eigendecompose(&m).unwrap();
            let lead = dec.eigenvalues[0];

            for w in dec.eigenvalues.windows(2) {
                prop_assert!(w[0] >= w[1]);
            }
            // orthonormality
            for i in 0..d {
                for j in 0..d {
                    let g = dot(dec.eigenvectors[i].coords(), dec.eigenvectors[j].coords());
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((g - want).abs() < 1e-8);
                }
            }
            // eigen-equation and reconstruction
            let mut recon = SquareMatrix::zeros(d);
            for (lam, v) in dec.eigenvalues.iter().zip(&dec.eigenvectors) {
                let mv = m.mul_vec(v.coords());
                for (a, b) in mv.iter().zip(v.coords()) {
                    prop_assert!((a - lam * b).abs() <= 1e-8 * lead);
                }
                for i in 0..d {
                    for j in 0..d {
                        recon.set(i, j, recon.get(i, j) + lam * v.coords()[i] * v.coords()[j]);
                    }
                }
            }
            let frob: f64 = (0..d).flat_map(|i| (0..d).map(move |j| (i, j)))
                .map(|(i, j)| (recon.get(i, j) - m.get(i, j)).powi(2)).sum::<f64>().sqrt();
            prop_assert!(frob <= 1e-8 * lead);

            // rotation equivariance of the spectrum
            let q2 = rotation(d, &other);
            let dec2 = eigendecompose(&m.conjugate(&q2)).unwrap();
            for (a, b) in dec.eigenvalues.iter().zip(&dec2.eigenvalues) {
                prop_assert!((a - b).abs() <= 1e-8 * lead.max(1.0));
            }

            // canonical orientation: largest-magnitude coordinate positive
            for v in &dec.eigenvectors {
                let mut w: Vec<f64> = v.coords().iter().map(|x| -x).collect();
                canonicalize_sign(&mut w);
                prop_assert_eq!(&w[..], v.coords());
            }
        }
    }
}
