// Propagate the radial equation to r = 1 and compare the two boundary systems.

use itep::media::MediumProfile;
use itep::poly::PiecewisePoly;
use itep::radial_solver::{propagate, propagate_transformed, OdeSettings};
use num_complex::Complex64;

fn main() -> itep::Result<()> {
    // ε₁ = (1 + r)², γ₁ = 1 + r
    let profile = MediumProfile::new(
        PiecewisePoly::polynomial(vec![1.0, 2.0, 1.0]),
        PiecewisePoly::polynomial(vec![1.0, 1.0]),
        1.0,
        0.0,
    );
    let settings = OdeSettings::default();

    println!("k_re,k_im,y1_re,y1_im,dy1_re,dy1_im,log_scale");
    for k in [Complex64::new(5.0, 0.0), Complex64::new(40.0, 10.0), Complex64::new(0.0, 150.0)] {
        let t = propagate(&profile, k, &settings)?;
        let row: Vec<String> = t.csv_row().iter().map(|x| format!("{x:.6e}")).collect();
        println!("{}", row.join(","));
    }

    // y/y' does not depend on how the solution is normalized
    let k = Complex64::new(12.0, -3.0);
    let a = propagate(&profile, k, &settings)?;
    let b = propagate_transformed(&profile, k, &settings)?;
    println!("y/y' direct      {:.12}", a.ratio());
    println!("y/y' transformed {:.12}", b.ratio());
    println!("steps: {} vs {}", a.steps, b.steps);
    Ok(())
}
