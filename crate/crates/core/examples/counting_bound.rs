// The lower bound e^{|Im z|} < C/δ · |sin z| away from the lattice πℤ.

use itep::asymptotics::{counting_bound_check, counting_constant, distance_to_pi_lattice};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() -> itep::Result<()> {
    println!("C = 2√(π²+4)/π = {:.6}", counting_constant());
    for (z, delta) in [(Complex64::new(PI / 2.0, 0.0), PI / 2.0), (Complex64::new(3.0, 4.0), 0.1)] {
        let c = counting_bound_check(z, delta)?;
        println!("z = {z}, δ = {delta:.4}: {:.4} < {:.4} {}", c.lhs, c.rhs, c.pass);
    }

    // the tightest ratio on a grid outside the δ-tubes
    let delta = 0.05;
    let mut tightest = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for i in 0..=400 {
        for j in 0..=400 {
            let z = Complex64::new(PI * i as f64 / 400.0, -10.0 + 0.05 * j as f64);
            if distance_to_pi_lattice(z) < delta {
                continue;
            }
            let c = counting_bound_check(z, delta)?;
            if c.rhs / c.lhs < tightest.0 {
                tightest = (c.rhs / c.lhs, z);
            }
        }
    }
    println!("smallest rhs/lhs = {:.4} at z = {:.4}", tightest.0, tightest.1);
    Ok(())
}
