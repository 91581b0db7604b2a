//! The counting-lemma bound `e^{|Im z|} < C/δ · |sin z|` away from πℤ.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `2√(π² + 4) / π`
pub fn counting_constant() -> f64 {
    2.0 * (PI * PI + 4.0).sqrt() / PI
}

/// Distance from `z` to the nearest multiple of π.
pub fn distance_to_pi_lattice(z: Complex64) -> f64 {
    let j = (z.re / PI).round();
    (z - j * PI).norm()
}

pub fn counting_bound_check(z: Complex64, delta: f64) -> Result<CountingCheck> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("δ = {delta} must be positive")));
    }
    let dist = distance_to_pi_lattice(z);
    if dist < delta {
        return Err(Error::Domain(format!("dist({z}, πℤ) = {dist} < δ = {delta}")));
    }
    let lhs = z.im.abs().exp();
    let rhs = counting_constant() / delta * z.sin().norm();
    Ok(CountingCheck { lhs, rhs, pass: lhs < rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_period() {
        let c = counting_bound_check(Complex64::new(PI / 2.0, 0.0), PI / 2.0).unwrap();
        assert_eq!(c.lhs, 1.0);
        assert!((c.rhs - 1.5094).abs() < 1e-3, "{}", c.rhs);
        assert!(c.pass);
    }

    #[test]
    fn off_axis_point() {
        let z = Complex64::new(3.0, 4.0);
        let d = PI - 3.0;
        assert!((distance_to_pi_lattice(z) - (d * d + 16.0).sqrt()).abs() < 1e-14);
        assert!(counting_bound_check(z, d).unwrap().pass);
    }

    #[test]
    fn precondition() {
        assert!(counting_bound_check(Complex64::new(PI + 0.01, 0.0), 0.05).is_err());
        assert!(counting_bound_check(Complex64::new(1.0, 0.0), 0.0).is_err());
    }
}
