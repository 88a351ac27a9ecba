//! The symmetrized, kernel-smoothed bootstrap law and bootstrap p-values for
//! a single candidate axis.
//!
//! ```bash
//! cargo run --release -p axisym --example smoothed_bootstrap
//! ```

use axisym::bootstrap::{bootstrap_pvalue, default_bandwidth, symmetrize, KernelKind, KernelSpec, SmoothedLaw};
use axisym::datagen::{GeneratorKind, GeneratorSpec};
use axisym::empirical::{candidate_statistic, split_three};
use axisym::seeding::{rng_for, rng_from_seed};
use axisym::spectral::mean_and_covariance;
use axisym::UnitDirection;

fn main() -> axisym::Result<()> {
    let n = 300;
    let sample = GeneratorSpec {
        kind: GeneratorKind::default_gaussian(),
        n,
        seed: 1,
    }
    .sample()?;
    let split = split_three(n, &mut rng_from_seed(2))?;
    let h = UnitDirection::new(vec![0.6, 0.8])?;
    let index = 0;
    let observed = candidate_statistic(&sample, &split, &h, index)?;

    let parts = split.apply(&sample)?;
    let sym = symmetrize(&parts.comparison_union(), &observed.direction)?;
    let bandwidth = default_bandwidth(n, sample.d(), sym.data_scale());
    println!(
        "atoms: {}, center {:.3?}, bandwidth {bandwidth:.4}",
        sym.len(),
        sym.center
    );

    for kind in [KernelKind::Gaussian, KernelKind::Bump] {
        let law = SmoothedLaw::new(&sym, KernelSpec::new(kind, bandwidth)?)?;

        // cov(smoothed) = cov(atoms) + b^2 I
        let draws = law.draw(100_000, &mut rng_from_seed(3));
        let (_, smoothed) = mean_and_covariance(&draws)?;
        let (_, atoms) = mean_and_covariance(&sym.atoms)?;
        println!(
            "{kind:?}: cov diag {:.4?} vs atoms + b^2 {:.4?}",
            [smoothed.get(0, 0), smoothed.get(1, 1)],
            [
                atoms.get(0, 0) + bandwidth * bandwidth,
                atoms.get(1, 1) + bandwidth * bandwidth
            ]
        );

        let replicates = (0..499)
            .map(|b| law.replicate(n, index, &h, &mut rng_for(9, &[index as u64, b])))
            .collect::<axisym::Result<Vec<f64>>>()?;
        println!(
            "  T_obs = {:.3}, bootstrap p = {:.3}",
            observed.statistic,
            bootstrap_pvalue(observed.statistic, &replicates)?
        );
    }
    Ok(())
}
