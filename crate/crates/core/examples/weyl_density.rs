// Count eigenvalues in a narrow sector about the real axis and compare N/r
// with (A+B)/π.

use itep::determinant::{DetSettings, Transmission};
use itep::media::MediumProfile;
use itep::zero_finder::{sector_density, FinderOptions, Sector};

fn main() -> itep::Result<()> {
    let t = Transmission::new(MediumProfile::constant(3.0, 0.2, 1.0, 0.1), DetSettings::default())?;
    let predicted = t.constants.predicted_density();

    let near_real = Sector::symmetric(0.0, 0.2)?;
    let radii = [10.0, 20.0, 30.0];
    let counts = sector_density(&t, &near_real, &radii, 0.5, &FinderOptions::default())?;
    println!("{:>5} {:>5} {:>8}   (A+B)/π = {predicted:.4}", "r", "N", "N/r");
    for p in &counts.points {
        println!("{:>5} {:>5} {:>8.4}", p.r, p.count, p.density);
    }

    // away from the real axis zeros are sparse
    let upper = Sector::new(0.3, std::f64::consts::PI - 0.3)?;
    let off = sector_density(&t, &upper, &[30.0], 0.5, &FinderOptions::default())?;
    println!("sector (0.3, π − 0.3): N(30) = {}", off.points[0].count);
    Ok(())
}
