//! Testing axial symmetry of a multivariate distribution about an unknown axis.
//!
//! A distribution is axially symmetric about `u` when `X - E[X]` has the same
//! law as its reflection `(2 u u^T - I)(X - E[X])`. Any such axis is an
//! eigenvector of the covariance matrix, so the principal axes are the only
//! candidates. The test:
//!
//! * splits the sample into three balanced parts,
//! * estimates the principal axes on one part,
//! * compares, along a fixed random direction `h`, the projected law of one
//!   part with the reflected projected law of another (a two-sample
//!   Kolmogorov-Smirnov distance),
//! * calibrates each candidate with a bootstrap drawn from a kernel-smoothed
//!   law made exactly symmetric about that candidate,
//! * rejects when the largest candidate p-value is at most `alpha`.
//!
//! ```no_run
//! use axisym::{datagen::{GeneratorKind, GeneratorSpec}, run_axial_symmetry_test, TestConfig};
//!
//! let data = GeneratorSpec { kind: GeneratorKind::default_gaussian(), n: 300, seed: 1 }
//!     .sample()
//!     .unwrap();
//! let report = run_axial_symmetry_test(&data, &TestConfig { seed: 7, ..TestConfig::default() }).unwrap();
//! println!("global p = {}, reject = {}", report.global_p, report.reject);
//! ```
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod bootstrap;
pub mod cli;
pub mod datagen;
pub mod empirical;
pub mod error;
pub mod geometry;
pub mod sample;
pub mod seeding;
pub mod simharness;
pub mod spectral;
pub mod testkit;

pub use error::{Error, Result};
pub use geometry::UnitDirection;
pub use sample::Sample;
pub use simharness::{run_study, StudyResult, StudySpec};
pub use testkit::{run_axial_symmetry_test, TestConfig, TestReport};
