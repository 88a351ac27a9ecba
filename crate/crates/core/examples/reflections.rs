//! Reflections about an axis, affine reflections, random directions and projections.
//!
//! ```bash
//! cargo run -p axisym --example reflections
//! ```

use axisym::geometry::{project, reflect, reflect_affine, sample_unit_direction};
use axisym::seeding::rng_from_seed;
use axisym::{Sample, UnitDirection};

fn main() -> axisym::Result<()> {
    let e1 = UnitDirection::basis(2, 0)?;
    let diag = UnitDirection::new(vec![1.0, 1.0])?;

    println!("R_e1 (1, 2)          = {:?}", reflect(&e1, &[1.0, 2.0])?);
    println!("R_diag (1, 0)        = {:?}", reflect(&diag, &[1.0, 0.0])?);
    println!(
        "S_e1,(1,1) (2, 3)    = {:?}",
        reflect_affine(&e1, &[1.0, 1.0], &[2.0, 3.0])?
    );

    // reflections are involutions and isometries
    let x = [0.3, -1.7];
    let back = reflect(&diag, &reflect(&diag, &x)?)?;
    println!("R_diag R_diag x      = {back:?}  (x = {x:?})");

    let mut rng = rng_from_seed(42);
    let h = sample_unit_direction(3, &mut rng)?;
    println!("random h in S^2      = {:?}", h.coords());

    let sample = Sample::from_rows(&[[1.0, 2.0, 0.0], [3.0, 4.0, 1.0]])?;
    println!("<x_j, h>             = {:?}", project(&sample, &h)?);
    Ok(())
}
