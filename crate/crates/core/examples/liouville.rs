// Liouville frame of a lossless profile and the partial sums of the
// high-frequency expansion of the transformed solution.

use itep::asymptotics::{liouville_build, liouville_compare};
use itep::media::MediumProfile;
use itep::poly::PiecewisePoly;
use itep::radial_solver::OdeSettings;
use num_complex::Complex64;

fn main() -> itep::Result<()> {
    // n = (1 + r)⁴
    let profile = MediumProfile::new(
        PiecewisePoly::polynomial(vec![1.0, 4.0, 6.0, 4.0, 1.0]),
        PiecewisePoly::constant(0.0),
        1.0,
        0.0,
    );
    let frame = liouville_build(&profile)?;
    println!("B = {:.12} (exact 7/3)", frame.b);
    for r in [0.0, 0.25, 0.5, 1.0] {
        let xi = frame.xi_of_r(r);
        println!("r = {r:<4} ξ = {xi:.10}  p(ξ) = {:+.6}  Q(ξ) = {:+.6}", frame.p_of_xi(xi), frame.q_of_xi(xi)?);
    }

    let settings = OdeSettings::default().with_rel_tol(1e-13);
    println!("{:>5} {:>12} {:>12} {:>12}", "|k|", "order 1", "order 2", "order 3");
    for m in [20.0, 40.0, 80.0, 160.0] {
        let k = Complex64::from_polar(m, 0.3);
        let mut cols = vec![];
        for order in 1..=3 {
            cols.push(liouville_compare(&frame, frame.b, k, order, &settings)?.scaled_residual);
        }
        println!("{m:>5} {:>12.3e} {:>12.3e} {:>12.3e}", cols[0], cols[1], cols[2]);
    }
    Ok(())
}
