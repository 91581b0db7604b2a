//! Muller's method on scaled function values.

use super::AnalyticFn;
use crate::scaled::Scaled;
use num_complex::Complex64;

const MAX_ITER: usize = 100;

/// Iterates from `center` with two auxiliary points `center ± h`. Returns the
/// root and the size of the final step.
pub(crate) fn refine<F: AnalyticFn + ?Sized>(f: &F, center: Complex64, h: f64, tol: f64) -> Option<(Complex64, f64)> {
    let mut x = [center + h, center - Complex64::new(0.0, h), center];
    let mut fx: Vec<Scaled> = Vec::with_capacity(3);
    for &z in &x {
        fx.push(f.eval(z).ok()?);
    }
    for _ in 0..MAX_ITER {
        let reference = fx[2].log_scale;
        let [f0, f1, f2] = [fx[0].rescaled_to(reference), fx[1].rescaled_to(reference), fx[2].rescaled_to(reference)];
        if f2 == Complex64::new(0.0, 0.0) {
            return Some((x[2], 0.0));
        }
        let q = (x[2] - x[1]) / (x[1] - x[0]);
        let a = q * f2 - q * (1.0 + q) * f1 + q * q * f0;
        let b = (2.0 * q + 1.0) * f2 - (1.0 + q) * (1.0 + q) * f1 + q * q * f0;
        let c = (1.0 + q) * f2;
        let disc = (b * b - 4.0 * a * c).sqrt();
        let den = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
        if den.norm() == 0.0 || !den.is_finite() {
            return None;
        }
        let dx = -(x[2] - x[1]) * 2.0 * c / den;
        if !dx.is_finite() {
            return None;
        }
        let next = x[2] + dx;
        let step = dx.norm();
        if step <= tol {
            return Some((next, step));
        }
        x = [x[1], x[2], next];
        fx = vec![fx[1], fx[2], f.eval(next).ok()?];
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Result;

    #[test]
    fn converges_to_cube_root() {
        let f = |z: Complex64| -> Result<Scaled> { Ok(Scaled::from_complex(z * z * z - 2.0)) };
        let (z, step) = refine(&f, Complex64::new(1.0, 0.1), 0.1, 1e-13).unwrap();
        assert!((z - Complex64::new(2f64.cbrt(), 0.0)).norm() < 1e-12);
        assert!(step <= 1e-13);
    }

    #[test]
    fn handles_large_scales() {
        let f = |z: Complex64| -> Result<Scaled> { Ok(Scaled::new((z - Complex64::new(0.3, 0.4)) * 1e-3, 900.0)) };
        let (z, _) = refine(&f, Complex64::new(0.2, 0.3), 0.05, 1e-12).unwrap();
        assert!((z - Complex64::new(0.3, 0.4)).norm() < 1e-12);
    }
}
