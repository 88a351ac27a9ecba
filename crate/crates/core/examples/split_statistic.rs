//! The split-sample statistic: a three-way split, projected ECDFs, and the
//! sup distance between one part and the reflected other part.
//!
//! ```bash
//! cargo run -p axisym --example split_statistic
//! ```

use axisym::datagen::{GeneratorKind, GeneratorSpec};
use axisym::empirical::{candidate_statistic, g_hat, ks_sup, split_three};
use axisym::geometry::sample_unit_direction;
use axisym::seeding::rng_from_seed;

fn main() -> axisym::Result<()> {
    println!("ks_sup({{0, 1}}, {{0.5}}) = {}", ks_sup(&[0.0, 1.0], &[0.5])?);

    let mut rng = rng_from_seed(11);
    let h = sample_unit_direction(2, &mut rng)?;
    for kind in [GeneratorKind::default_gaussian(), GeneratorKind::SkewProduct { s: 2.0 }] {
        let name = kind.name();
        let n = 600;
        let sample = GeneratorSpec { kind, n, seed: 5 }.sample()?;
        let split = split_three(n, &mut rng)?;
        println!("{name}: split sizes {:?}, h = {:.3?}", split.sizes(), h.coords());
        for i in 0..sample.d() {
            let c = candidate_statistic(&sample, &split, &h, i)?;
            let parts = split.apply(&sample)?;
            let g = g_hat(&parts.part1, &parts.part2, &h, &c.direction)?;
            println!(
                "  candidate {i}: axis {:.3?}  lambda {:.3}  g_hat {:.3}  T = sqrt(n) g_hat = {:.3}",
                c.direction.coords(),
                c.eigenvalue,
                g,
                c.statistic
            );
        }
    }
    Ok(())
}
