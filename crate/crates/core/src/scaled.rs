//! Complex numbers carried together with a natural-log scale factor.
//!
//! Solutions of the radial equation grow like `exp(|Im k| B)`, which overflows
//! `f64` long before the zero finder runs out of interesting territory. Every
//! quantity that can grow exponentially is therefore stored as a mantissa
//! `value` and an exponent `log_scale`, with the true number being
//! `value * exp(log_scale)`.

use num_complex::Complex64;
use std::ops::{Mul, Neg};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub value: Complex64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn new(value: Complex64, log_scale: f64) -> Self {
        Self { value, log_scale }
    }

    pub fn from_complex(value: Complex64) -> Self {
        Self::new(value, 0.0).normalized()
    }

    pub fn zero() -> Self {
        Self::new(Complex64::new(0.0, 0.0), 0.0)
    }

    /// Moves the magnitude of `value` into `log_scale` so that `|value| == 1`
    /// (zero is left alone).
    pub fn normalized(self) -> Self {
        let m = self.value.norm();
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        Self::new(self.value / m, self.log_scale + m.ln())
    }

    /// Natural log of the modulus. `-inf` for an exact zero.
    pub fn ln_abs(&self) -> f64 {
        self.value.norm().ln() + self.log_scale
    }

    pub fn arg(&self) -> f64 {
        self.value.arg()
    }

    /// Plain complex value; overflows to infinity for large scales.
    pub fn to_complex(&self) -> Complex64 {
        self.value * self.log_scale.exp()
    }

    /// Value expressed relative to `exp(reference)`.
    pub fn rescaled_to(&self, reference: f64) -> Complex64 {
        self.value * (self.log_scale - reference).exp()
    }

    pub fn add(&self, other: &Scaled) -> Scaled {
        let s = self.log_scale.max(other.log_scale);
        Scaled::new(self.rescaled_to(s) + other.rescaled_to(s), s).normalized()
    }

    pub fn sub(&self, other: &Scaled) -> Scaled {
        self.add(&-*other)
    }

    pub fn div(&self, other: &Scaled) -> Scaled {
        Scaled::new(self.value / other.value, self.log_scale - other.log_scale).normalized()
    }

    pub fn conj(&self) -> Scaled {
        Scaled::new(self.value.conj(), self.log_scale)
    }
}

impl Mul for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Scaled) -> Scaled {
        Scaled::new(self.value * rhs.value, self.log_scale + rhs.log_scale).normalized()
    }
}

impl Mul<Complex64> for Scaled {
    type Output = Scaled;
    fn mul(self, rhs: Complex64) -> Scaled {
        Scaled::new(self.value * rhs, self.log_scale).normalized()
    }
}

impl Neg for Scaled {
    type Output = Scaled;
    fn neg(self) -> Scaled {
        Scaled::new(-self.value, self.log_scale)
    }
}

/// `sin z` and `cos z` sharing the factor `exp(|Im z|)`:
/// returns `(s, c, |Im z|)` with `sin z = s e^{|Im z|}`, `cos z = c e^{|Im z|}`.
pub fn sin_cos_scaled(z: Complex64) -> (Complex64, Complex64, f64) {
    let i = Complex64::new(0.0, 1.0);
    let t = z.im.abs();
    // e^{iz} = e^{-Im z} e^{i Re z}; both exponents below are <= 0.
    let ep = Complex64::from_polar((-z.im - t).exp(), z.re);
    let em = Complex64::from_polar((z.im - t).exp(), -z.re);
    let s = (ep - em) / (2.0 * i);
    let c = (ep + em) / 2.0;
    (s, c, t)
}

/// Relative distance between two scaled numbers, `|a - b| / |b|`.
pub fn rel_diff(a: &Scaled, b: &Scaled) -> f64 {
    let s = b.log_scale;
    (a.rescaled_to(s) - b.value).norm() / b.value.norm()
}
