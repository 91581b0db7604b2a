// Evaluate D(k) along the real axis next to its sinh model, and the
// matching coefficients away from an eigenvalue.

use itep::determinant::{matching_coefficients, DetSettings, Transmission};
use itep::media::MediumProfile;
use itep::poly::PiecewisePoly;
use num_complex::Complex64;

fn main() -> itep::Result<()> {
    // ε₁(1) = ε₀, so the model is accurate to O(1/k²)
    let profile = MediumProfile::new(
        PiecewisePoly::polynomial(vec![4.0, 0.0, -3.0]),
        PiecewisePoly::constant(0.2),
        1.0,
        0.1,
    );
    let t = Transmission::new(profile.clone(), DetSettings::default())?;

    println!("{:>6} {:>24} {:>24} {:>10}", "k", "D(k)", "model", "|Δ|·k²");
    for k in [50.0, 100.0, 200.0, 400.0] {
        let k = Complex64::new(k, 0.0);
        let d = t.eval_d(k)?.to_complex();
        let m = t.sinh_model(k)?;
        println!("{:>6} {:>24.6e} {:>24.6e} {:>10.4}", k.re, d, m, (d - m).norm() * k.norm_sqr());
    }

    // far up the imaginary axis D is huge; the scaled form keeps it finite
    let d = t.eval_d(Complex64::new(0.0, 300.0))?;
    println!("D(300i) = {:.6e} · e^{:.3}", d.value, d.log_scale);

    let (c1, c2) = matching_coefficients(&profile, Complex64::new(7.0, 0.5), &DetSettings::default())?;
    println!("c₁ = {c1:.6e}, c₂ = {c2:.6e}");
    Ok(())
}
