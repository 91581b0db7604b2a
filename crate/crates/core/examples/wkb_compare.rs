// The two-exponential WKB form against the radial solver along a ray.

use itep::asymptotics::wkb_compare;
use itep::media::MediumProfile;
use itep::poly::PiecewisePoly;
use itep::radial_solver::OdeSettings;
use num_complex::Complex64;

fn main() -> itep::Result<()> {
    let profile = MediumProfile::new(
        PiecewisePoly::polynomial(vec![1.0, 2.0, 1.0]),
        PiecewisePoly::polynomial(vec![1.0, 1.0]),
        1.0,
        0.0,
    );
    let mut prev: Option<f64> = None;
    for m in [25.0, 50.0, 100.0, 200.0, 400.0] {
        let c = wkb_compare(&profile, 1.0, Complex64::from_polar(m, 0.3), &OdeSettings::default())?;
        // halving |k|⁻¹ should halve the error
        let ratio = prev.map(|p| format!("{:.3}", p / c.rel_error)).unwrap_or_default();
        println!("|k| = {m:>5}: relative error {:.4e} {ratio}", c.rel_error);
        prev = Some(c.rel_error);
    }
    Ok(())
}
