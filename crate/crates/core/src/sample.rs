use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n x d` block of observations stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl Sample {
    /// Build from row-major storage. Requires `n >= 1`, `d >= 2` and finite entries.
    pub fn from_flat(data: Vec<f64>, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if data.is_empty() {
            return Err(Error::EmptyInput("sample has no rows"));
        }
        if !data.len().is_multiple_of(d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: data.len() % d,
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / d,
                col: pos % d,
            });
        }
        let n = data.len() / d;
        Ok(Self { data, n, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyInput("sample has no rows"))?;
        let d = first.as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * d);
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
        Self::from_flat(data, d)
    }

    /// Unchecked construction for internally generated, known-finite data.
    pub(crate) fn from_flat_unchecked(data: Vec<f64>, d: usize) -> Self {
        debug_assert!(d >= 1 && data.len().is_multiple_of(d));
        let n = data.len() / d;
        Self { data, n, d }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn row(&self, j: usize) -> &[f64] {
        &self.data[j * self.d..(j + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.d)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.data
    }

    /// Rows selected by `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Sample {
        let mut data = Vec::with_capacity(indices.len() * self.d);
        for &j in indices {
            data.extend_from_slice(self.row(j));
        }
        Sample::from_flat_unchecked(data, self.d)
    }

    /// Row-wise concatenation.
    pub fn concat(&self, other: &Sample) -> Result<Sample> {
        if other.d != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        data.extend_from_slice(&self.data);
        data.extend_from_slice(&other.data);
        Ok(Sample::from_flat_unchecked(data, self.d))
    }

    /// Apply `f` to each row, producing a new sample of the same shape.
    pub fn map_rows<F>(&self, mut f: F) -> Sample
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        let mut data = vec![0.0; self.data.len()];
        for (src, dst) in self.data.chunks_exact(self.d).zip(data.chunks_exact_mut(self.d)) {
            f(src, dst);
        }
        Sample::from_flat_unchecked(data, self.d)
    }

    /// Column means.
    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.d];
        for r in self.rows() {
            for (acc, v) in m.iter_mut().zip(r) {
                *acc += v;
            }
        }
        let inv = 1.0 / self.n as f64;
        m.iter_mut().for_each(|v| *v *= inv);
        m
    }

    pub fn scaled(&self, c: f64) -> Sample {
        Sample::from_flat_unchecked(self.data.iter().map(|v| v * c).collect(), self.d)
    }
}
