// Locate the transmission eigenvalues in a rectangle of the complex plane.

use itep::determinant::{DetSettings, Transmission};
use itep::media::MediumProfile;
use itep::zero_finder::{find_zeros, winding_count, FinderOptions, Rect};

fn main() -> itep::Result<()> {
    let t = Transmission::new(MediumProfile::constant(3.0, 0.2, 1.0, 0.1), DetSettings::default())?;
    let rect = Rect::new(0.5, 16.0, -2.0, 2.0)?;

    let set = find_zeros(&t, rect, &FinderOptions::default())?;
    println!("{} eigenvalues, contour winding {}", set.total_multiplicity(), set.region.winding);
    for r in &set.records {
        println!(
            "  {:>22.12}  m={} step={:.1e} {:<18} verified={:?}",
            r.k,
            r.multiplicity,
            r.residual,
            r.sector.as_str(),
            r.verified
        );
    }

    // the count over a sub-rectangle comes straight from the argument principle
    let lower = Rect::new(0.5, 16.0, -2.0, 0.0)?;
    println!("below the real axis: {}", winding_count(&t, lower, 16)?);
    Ok(())
}
