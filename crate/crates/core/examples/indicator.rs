// Growth of D along rays, and the partial reciprocal sums of its zeros.

use itep::determinant::{DetSettings, Transmission};
use itep::media::MediumProfile;
use itep::zero_finder::{find_zeros, indicator_estimate, reciprocal_sum, FinderOptions, Rect};
use std::f64::consts::PI;

fn main() -> itep::Result<()> {
    let t = Transmission::new(MediumProfile::constant(4.0, 0.2, 1.0, 0.1), DetSettings::default())?;
    let ab = t.constants.type_sum();
    let radii = [20.0, 100.0, 500.0];

    println!("type A+B = {ab}");
    for (name, theta) in [("π/2", PI / 2.0), ("−π/2", -PI / 2.0), ("π/4", PI / 4.0), ("0", 0.0)] {
        let est = indicator_estimate(&t, theta, &radii)?;
        let cols: Vec<String> = est.iter().map(|(r, h)| format!("h({r})={h:.4}")).collect();
        println!("θ = {name:>4}: {}   expected {:.4}", cols.join("  "), ab * theta.sin().abs());
    }

    // zeros come in pairs k, −k̄, so the partial sums of 1/k are purely imaginary
    // D(0) = 0 is not an eigenvalue, so search either side of it
    let mut zeros = vec![];
    for rect in [Rect::new(0.5, 20.0, -3.0, 3.0)?, Rect::new(-20.0, -0.5, -3.0, 3.0)?] {
        zeros.extend(find_zeros(&t, rect, &FinderOptions::default())?.records.iter().map(|r| r.k));
    }
    for (r, s) in reciprocal_sum(&zeros, &[5.0, 10.0, 15.0, 20.0])? {
        println!("δ({r}) = {s:.6}");
    }
    Ok(())
}
