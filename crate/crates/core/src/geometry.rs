//! Reflections about axes, unit directions and projections.
//!
//! The reflection about the axis spanned by a unit vector `u` is the linear map
//! `x -> (2 u u^T - I) x`. It fixes `span(u)`, negates its orthogonal
//! complement and depends on `u` only through `u u^T`. It is evaluated here as
//! `2 <u, x> u - x` in `O(d)`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::Sample;

const MIN_NORM: f64 = 1e-8;

/// A unit vector in `R^d`, `d >= 2`. Represents an axis, so `u` and `-u` are
/// interchangeable for every reflection-based quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitDirection(Vec<f64>);

impl UnitDirection {
    /// Normalize `v`. Fails when `d < 2`, any entry is non-finite, or `||v|| < 1e-8`.
    pub fn new(v: Vec<f64>) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::DimensionTooSmall(v.len()));
        }
        if let Some(col) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: 0, col });
        }
        let norm = norm(&v);
        if norm < MIN_NORM {
            return Err(Error::DegenerateDirection(norm));
        }
        Ok(Self(v.into_iter().map(|x| x / norm).collect()))
    }

    /// Canonical basis vector `e_k` in `R^d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: k + 1,
            });
        }
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        Self::new(v)
    }

    /// Wrap a vector that is already unit-norm (eigenvectors, sampled directions).
    pub(crate) fn from_unit_unchecked(v: Vec<f64>) -> Self {
        debug_assert!((norm(&v) - 1.0).abs() < 1e-9);
        Self(v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }
}

impl AsRef<[f64]> for UnitDirection {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Writes `2 <u, x> u - x` into `out`. Lengths are assumed equal.
#[inline]
pub(crate) fn reflect_into(u: &[f64], x: &[f64], out: &mut [f64]) {
    let s = 2.0 * dot(u, x);
    for ((o, ui), xi) in out.iter_mut().zip(u).zip(x) {
        *o = s * ui - xi;
    }
}

/// Reflection of `x` about the axis `span(u)`.
pub fn reflect(u: &UnitDirection, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(u.dim(), x.len())?;
    let mut out = vec![0.0; x.len()];
    reflect_into(u.coords(), x, &mut out);
    Ok(out)
}

/// Reflection about the affine axis `center + span(u)`: `center + R_u(x - center)`.
pub fn reflect_affine(u: &UnitDirection, center: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    check_dim(u.dim(), x.len())?;
    check_dim(u.dim(), center.len())?;
    let shifted: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
    let mut out = vec![0.0; x.len()];
    reflect_into(u.coords(), &shifted, &mut out);
    out.iter_mut().zip(center).for_each(|(o, c)| *o += c);
    Ok(out)
}

/// Uniform draw on the unit sphere `S^{d-1}` via a normalized standard Gaussian vector.
pub fn sample_unit_direction<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<UnitDirection> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut v = vec![0.0; d];
    loop {
        v.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
        let nrm = norm(&v);
        if nrm >= 1e-300 {
            v.iter_mut().for_each(|x| *x /= nrm);
            return Ok(UnitDirection(v));
        }
    }
}

/// `<x_j, h>` for every row (no centering).
pub fn project(sample: &Sample, h: &UnitDirection) -> Result<Vec<f64>> {
    check_dim(h.dim(), sample.d())?;
    Ok(sample.rows().map(|r| dot(r, h.coords())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::rng_from_seed;
    use proptest::prelude::*;

    const EPS: f64 = 1e-12;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn reflect_examples() {
        let e1 = UnitDirection::basis(2, 0).unwrap();
        assert!(close(&reflect(&e1, &[1.0, 2.0]).unwrap(), &[1.0, -2.0], EPS));

        let u = UnitDirection::new(vec![1.0, 1.0]).unwrap();
        assert!(close(&reflect(&u, &[1.0, 0.0]).unwrap(), &[0.0, 1.0], EPS));

        let w = UnitDirection::new(vec![0.3, -1.2, 2.0]).unwrap();
        assert!(close(&reflect(&w, w.coords()).unwrap(), w.coords(), EPS));
    }

    #[test]
    fn reflect_dimension_mismatch() {
        let e1 = UnitDirection::basis(2, 0).unwrap();
        assert!(matches!(
            reflect(&e1, &[1.0, 2.0, 3.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(reflect_affine(&e1, &[0.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn reflect_affine_examples() {
        let e1 = UnitDirection::basis(2, 0).unwrap();
        assert!(close(
            &reflect_affine(&e1, &[1.0, 1.0], &[2.0, 3.0]).unwrap(),
            &[2.0, -1.0],
            EPS
        ));
        let c = [0.5, -3.0];
        assert!(close(&reflect_affine(&e1, &c, &c).unwrap(), &c, EPS));
        let x = [0.7, 0.1];
        assert_eq!(reflect_affine(&e1, &[0.0, 0.0], &x).unwrap(), reflect(&e1, &x).unwrap());
    }

    #[test]
    fn direction_construction() {
        assert!(matches!(
            UnitDirection::new(vec![1.0]),
            Err(Error::DimensionTooSmall(1))
        ));
        assert!(matches!(
            UnitDirection::new(vec![1e-9, 0.0]),
            Err(Error::DegenerateDirection(_))
        ));
        let u = UnitDirection::new(vec![0.6e-3, 0.8e-3]).unwrap();
        assert!(close(u.coords(), &[0.6, 0.8], EPS));
    }

    #[test]
    fn sphere_sampling() {
        assert!(sample_unit_direction(1, &mut rng_from_seed(0)).is_err());
        let a = sample_unit_direction(5, &mut rng_from_seed(9)).unwrap();
        let b = sample_unit_direction(5, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a, b);

        let mut rng = rng_from_seed(2024);
        let mut mean = [0.0; 3];
        let draws = 100_000;
        for _ in 0..draws {
            let u = sample_unit_direction(3, &mut rng).unwrap();
            assert!((norm(u.coords()) - 1.0).abs() <= EPS);
            for (m, x) in mean.iter_mut().zip(u.coords()) {
                *m += x / draws as f64;
            }
        }
        assert!(norm(&mean) < 0.02, "mean norm {}", norm(&mean));
    }

    #[test]
    fn project_examples() {
        let s = Sample::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        let e2 = UnitDirection::basis(2, 1).unwrap();
        assert_eq!(project(&s, &e2).unwrap(), vec![2.0, 4.0]);

        let h = UnitDirection::new(vec![0.2, -0.4, 0.9]).unwrap();
        let single = Sample::from_rows(&[h.coords().to_vec()]).unwrap();
        assert!((project(&single, &h).unwrap()[0] - 1.0).abs() < EPS);

        let diag = UnitDirection::new(vec![1.0, 1.0]).unwrap();
        let one = Sample::from_rows(&[[1.0, 1.0]]).unwrap();
        assert!((project(&one, &diag).unwrap()[0] - 2f64.sqrt()).abs() < EPS);

        let wrong = UnitDirection::basis(3, 0).unwrap();
        assert!(project(&s, &wrong).is_err());
    }

    fn vec_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..7).prop_flat_map(|d| {
            (
                prop::collection::vec(-10.0f64..10.0, d),
                prop::collection::vec(-10.0f64..10.0, d),
            )
        })
    }

    proptest! {
        #[test]
        fn reflection_properties((uv, x) in vec_strategy()) {
            prop_assume!(norm(&uv) > 1e-3);
            let u = UnitDirection::new(uv).unwrap();
            let rx = reflect(&u, &x).unwrap();
            let rrx = reflect(&u, &rx).unwrap();
            prop_assert!(close(&rrx, &x, 1e-10));
            prop_assert!((norm(&rx) - norm(&x)).abs() <= 1e-10);
            prop_assert_eq!(reflect(&u.negated(), &x).unwrap(), rx);

            // orthogonal component is negated
            let p = dot(u.coords(), &x);
            let v: Vec<f64> = x.iter().zip(u.coords()).map(|(a, b)| a - p * b).collect();
            let rv = reflect(&u, &v).unwrap();
            let neg: Vec<f64> = v.iter().map(|a| -a).collect();
            prop_assert!(close(&rv, &neg, 1e-10));
        }

        #[test]
        fn affine_reflection_is_involution((uv, x) in vec_strategy(), shift in -5.0f64..5.0) {
            prop_assume!(norm(&uv) > 1e-3);
            let u = UnitDirection::new(uv).unwrap();
            let c: Vec<f64> = x.iter().map(|v| v * 0.3 + shift).collect();
            let y = reflect_affine(&u, &c, &x).unwrap();
            let back = reflect_affine(&u, &c, &y).unwrap();
            prop_assert!(close(&back, &x, 1e-10));
            prop_assert!(close(&reflect_affine(&u, &c, &c).unwrap(), &c, 1e-10));
        }
    }
}
