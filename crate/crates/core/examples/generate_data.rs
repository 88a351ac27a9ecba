//! Every synthetic generator, written as CSV to a temporary directory.
//!
//! ```bash
//! cargo run -p axisym --example generate_data
//! ```

use axisym::cli::format_sample_csv;
use axisym::datagen::{GeneratorKind, GeneratorSpec};
use axisym::spectral::mean_and_covariance;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("axisym-generated");
    std::fs::create_dir_all(&dir)?;
    let kinds = [
        GeneratorKind::default_gaussian(),
        GeneratorKind::RotatedGaussian {
            mean: vec![0.0, 0.0],
            variances: vec![4.0, 1.0],
            angle: 0.5,
        },
        GeneratorKind::SkewProduct { s: 2.0 },
        GeneratorKind::PolygonUniform { k: 3, radius: 1.0 },
        GeneratorKind::default_mirrored(),
    ];
    for kind in kinds {
        let spec = GeneratorSpec { kind, n: 1000, seed: 1 };
        let sample = spec.sample()?;
        let (mean, cov) = mean_and_covariance(&sample)?;
        let path = dir.join(format!("{}.csv", spec.kind.name()));
        std::fs::write(&path, format_sample_csv(&sample, true))?;
        println!(
            "{:<17} null={:<5} mean {:>+.3?}  cov [{:.3} {:.3}; {:.3}]  -> {}",
            spec.kind.name(),
            spec.kind.is_null(),
            mean,
            cov.get(0, 0),
            cov.get(0, 1),
            cov.get(1, 1),
            path.display()
        );
    }
    Ok(())
}
