//! Leading-order WKB forms of `y(r; k)` and `y'(r; k)`.

use crate::error::{Error, Result};
use crate::media::{MediumProfile, DEFAULT_QUAD_TOL};
use crate::radial_solver::{propagate_to, OdeSettings};
use crate::scaled::Scaled;
use num_complex::Complex64;
use serde::Serialize;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WkbPrediction {
    pub y_pred: Scaled,
    pub dy_pred: Scaled,
    pub k: Complex64,
    pub r: f64,
}

/// ```text
/// y  ≈ [e^{ikB(r) − D(r)} − e^{−ikB(r) + D(r)}] / (2ik [ε₁(0)ε₁(r)]^{1/4})
/// y' ≈ ½ [ε₁(r)/ε₁(0)]^{1/4} [e^{ikB(r) − D(r)} + e^{−ikB(r) + D(r)}]
/// ```
/// with `B(r) = ∫₀ʳ √ε₁` and `D(r) = ½∫₀ʳ γ₁/√ε₁`.
pub fn wkb_trace(profile: &MediumProfile, r: f64, k: Complex64) -> Result<WkbPrediction> {
    if k.im == 0.0 {
        return Err(Error::Domain("WKB forms need Im k ≠ 0".into()));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::Domain(format!("radius {r} outside (0, 1]")));
    }
    let (b, d) = profile.phase_integrals(r, DEFAULT_QUAD_TOL)?;
    let (e0, er) = (profile.epsilon1_at(0.0), profile.epsilon1_at(r));
    let w = I * k * b - d;
    let s = w.re.abs();
    let plus = (w - s).exp();
    let minus = (-w - s).exp();
    let y = (plus - minus) / (2.0 * I * k * (e0 * er).powf(0.25));
    let dy = 0.5 * (er / e0).powf(0.25) * (plus + minus);
    Ok(WkbPrediction {
        y_pred: Scaled::new(y, s).normalized(),
        dy_pred: Scaled::new(dy, s).normalized(),
        k,
        r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WkbComparison {
    pub k: Complex64,
    pub exact: Complex64,
    pub predicted: Complex64,
    /// `|y − y_pred| / |y|`
    pub rel_error: f64,
    /// Common scale of `exact` and `predicted` (natural log).
    pub log_scale: f64,
}

pub fn wkb_compare(profile: &MediumProfile, r: f64, k: Complex64, settings: &OdeSettings) -> Result<WkbComparison> {
    let pred = wkb_trace(profile, r, k)?;
    let exact = propagate_to(profile, k, r, settings)?.y().normalized();
    let s = exact.log_scale;
    let (e, p) = (exact.value, pred.y_pred.rescaled_to(s));
    Ok(WkbComparison { k, exact: e, predicted: p, rel_error: (e - p).norm() / e.norm(), log_scale: s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PiecewisePoly;

    #[test]
    fn vacuum_recombines_to_sine() {
        let p = MediumProfile::constant(1.0, 0.0, 1.0, 0.0);
        for k in [Complex64::new(3.0, 0.5), Complex64::new(-7.0, -2.0)] {
            let w = wkb_trace(&p, 0.6, k).unwrap();
            let e = (k * 0.6).sin() / k;
            assert!((w.y_pred.to_complex() - e).norm() < 1e-13 * e.norm());
            assert!((w.dy_pred.to_complex() - (k * 0.6).cos()).norm() < 1e-13 * e.norm().max(1.0));
        }
    }

    #[test]
    fn real_axis_rejected() {
        let p = MediumProfile::constant(1.0, 0.0, 1.0, 0.0);
        assert!(wkb_trace(&p, 1.0, Complex64::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn prefactor_at_boundary() {
        // the e^{ikB − D} term alone carries 1 / (2ik [ε₁(0)ε₁(1)]^{1/4})
        let eps = PiecewisePoly::polynomial(vec![1.0, 0.0, 3.0]);
        let p = MediumProfile::new(eps, PiecewisePoly::constant(0.0), 1.0, 0.0);
        let k = Complex64::new(0.0, -30.0);
        let w = wkb_trace(&p, 1.0, k).unwrap();
        let (b, _) = p.phase_integrals(1.0, 1e-13).unwrap();
        let expect_ln = (I * k * b).re - (2.0 * k.norm() * 4f64.powf(0.25)).ln();
        assert!((w.y_pred.ln_abs() - expect_ln).abs() < 1e-10);
    }

    #[test]
    fn error_decays_like_one_over_k() {
        let p = MediumProfile::new(
            PiecewisePoly::polynomial(vec![1.0, 2.0, 1.0]),
            PiecewisePoly::polynomial(vec![1.0, 1.0]),
            1.0,
            0.0,
        );
        let dir = Complex64::from_polar(1.0, 0.3);
        let errs: Vec<f64> = [50.0, 100.0]
            .iter()
            .map(|&m| wkb_compare(&p, 1.0, dir * m, &OdeSettings::default()).unwrap().rel_error)
            .collect();
        let ratio = errs[0] / errs[1];
        assert!(ratio > 1.7 && ratio < 2.4, "{errs:?}");
    }
}
