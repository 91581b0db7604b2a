//! Initial-value propagation of `y'' + (k²ε₁(r) + ikγ₁(r)) y = 0` on [0, 1].
//!
//! The state `(y, y')` is complex and integrated with the Dormand–Prince 5(4)
//! embedded pair. Breakpoints of the profile are always step endpoints. When
//! the state grows (or decays) past `renorm_threshold` it is divided by its
//! max-norm and the logarithm of that norm is accumulated in `log_scale`, so
//! the trace stays O(1) for any `Im k`.

use crate::error::{Error, Result};
use crate::media::MediumProfile;
use crate::scaled::Scaled;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type State = [Complex64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub renorm_threshold: f64,
}

impl Default for OdeSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-11, abs_tol: 1e-13, max_steps: 200_000, renorm_threshold: 1e6 }
    }
}

impl OdeSettings {
    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, abs_tol: rel_tol * 1e-2, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 1e-14) {
            return Err(Error::InvalidSettings(format!("rel_tol {} < 1e-14", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidSettings("abs_tol must be positive".into()));
        }
        if self.max_steps < 1000 {
            return Err(Error::InvalidSettings(format!("max_steps {} < 1000", self.max_steps)));
        }
        if !(self.renorm_threshold > 1.0) {
            return Err(Error::InvalidSettings("renorm_threshold must exceed 1".into()));
        }
        Ok(())
    }
}

/// `(y(r), y'(r))` at the end point, with the shared log factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryTrace {
    pub y1: Complex64,
    pub dy1: Complex64,
    pub log_scale: f64,
    pub k: Complex64,
    /// Radius the trace refers to (1 for boundary traces).
    pub r: f64,
    /// Accepted integrator steps.
    pub steps: usize,
}

impl BoundaryTrace {
    pub fn y(&self) -> Scaled {
        Scaled::new(self.y1, self.log_scale)
    }

    pub fn dy(&self) -> Scaled {
        Scaled::new(self.dy1, self.log_scale)
    }

    /// `y / y'`, which is independent of normalization.
    pub fn ratio(&self) -> Complex64 {
        self.y1 / self.dy1
    }

    /// CSV row: k_re, k_im, y1_re, y1_im, dy1_re, dy1_im, log_scale.
    pub fn csv_row(&self) -> [f64; 7] {
        [self.k.re, self.k.im, self.y1.re, self.y1.im, self.dy1.re, self.dy1.im, self.log_scale]
    }
}

/// Integration segments between consecutive breakpoints of ε₁ and γ₁, with
/// the polynomial piece of each function active on the segment.
struct Segment {
    a: f64,
    b: f64,
    eps_piece: usize,
    gam_piece: usize,
}

fn segments(profile: &MediumProfile, start: f64, end: f64) -> Vec<Segment> {
    let mut cuts = vec![start];
    cuts.extend(profile.breakpoints().into_iter().filter(|&x| x > start && x < end));
    cuts.push(end);
    cuts.windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            Segment {
                a: w[0],
                b: w[1],
                eps_piece: profile.epsilon1.piece_of(mid),
                gam_piece: profile.gamma1.piece_of(mid),
            }
        })
        .collect()
}

/// `q(r) = k²ε₁(r) + ikγ₁(r)` on a known piece pair.
#[inline]
fn potential(profile: &MediumProfile, seg: &Segment, k: Complex64, r: f64) -> Complex64 {
    let e = &profile.epsilon1;
    let g = &profile.gamma1;
    let eps = crate::poly::horner(&e.coeffs[seg.eps_piece], r - e.breakpoints[seg.eps_piece]);
    let gam = crate::poly::horner(&g.coeffs[seg.gam_piece], r - g.breakpoints[seg.gam_piece]);
    k * k * eps + Complex64::new(0.0, 1.0) * k * gam
}

// Dormand–Prince 5(4) coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[inline]
fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += k[0] * (h * c);
        out[1] += k[1] * (h * c);
    }
    out
}

struct Outcome {
    state: State,
    log_scale: f64,
    steps: usize,
}

/// Adaptive DP45 over the segments. `rhs(seg, r, state)` is the vector field;
/// it must be linear in the state so that renormalization commutes with it.
fn integrate<F>(
    segs: &[Segment],
    mut y: State,
    mut h: f64,
    settings: &OdeSettings,
    rhs: F,
) -> Result<Outcome>
where
    F: Fn(&Segment, f64, &State) -> State,
{
    let mut log_scale = 0.0;
    let mut steps = 0usize;
    let mut attempts = 0usize;
    let thr = settings.renorm_threshold;
    for seg in segs {
        let mut r = seg.a;
        let mut k1 = rhs(seg, r, &y);
        while r < seg.b {
            if attempts >= settings.max_steps {
                return Err(Error::StepBudget { max_steps: settings.max_steps, r });
            }
            attempts += 1;
            let last = r + h >= seg.b;
            let hh = if last { seg.b - r } else { h };
            let k2 = rhs(seg, r + C2 * hh, &axpy(&y, &[(A21, &k1)], hh));
            let k3 = rhs(seg, r + C3 * hh, &axpy(&y, &[(A31, &k1), (A32, &k2)], hh));
            let k4 = rhs(seg, r + C4 * hh, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], hh));
            let k5 = rhs(
                seg,
                r + C5 * hh,
                &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], hh),
            );
            let k6 = rhs(
                seg,
                r + hh,
                &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], hh),
            );
            let y_new =
                axpy(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], hh);
            let r_new = if last { seg.b } else { r + hh };
            let k7 = rhs(seg, r_new, &y_new);
            let mut err = 0.0f64;
            for i in 0..2 {
                let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6
                    + k7[i] * E7)
                    * hh;
                let sc = settings.abs_tol + settings.rel_tol * y[i].norm().max(y_new[i].norm());
                err = err.max(e.norm() / sc);
            }
            if !err.is_finite() || !y_new[0].is_finite() || !y_new[1].is_finite() {
                if hh < 1e-14 {
                    return Err(Error::NonFinite { r });
                }
                h = 0.25 * hh;
                continue;
            }
            if err <= 1.0 {
                r = r_new;
                y = y_new;
                k1 = k7;
                steps += 1;
                let m = y[0].norm().max(y[1].norm());
                if m > thr || (m < 1.0 / thr && m > 0.0) {
                    let inv = 1.0 / m;
                    y[0] *= inv;
                    y[1] *= inv;
                    k1[0] *= inv;
                    k1[1] *= inv;
                    log_scale += m.ln();
                }
                let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // a truncated final step says nothing about the natural step size
                if !last || hh == h {
                    h = hh * grow;
                }
            } else {
                h = hh * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
        }
    }
    let m = y[0].norm().max(y[1].norm());
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::NonFinite { r: segs.last().map_or(0.0, |s| s.b) });
    }
    y[0] /= m;
    y[1] /= m;
    log_scale += m.ln();
    Ok(Outcome { state: y, log_scale, steps })
}

fn initial_step(profile: &MediumProfile, k: Complex64, span: f64) -> f64 {
    let eps = profile.sup_epsilon1().abs().sqrt();
    let omega = k.norm() * eps + 1.0;
    (0.05 / omega).min(span)
}

/// Propagates from r = 0 to r = 1.
pub fn propagate(profile: &MediumProfile, k: Complex64, settings: &OdeSettings) -> Result<BoundaryTrace> {
    propagate_to(profile, k, 1.0, settings)
}

/// Propagates `y(0) = 0, y'(0) = 1` from r = 0 to `r_end` ∈ (0, 1].
pub fn propagate_to(
    profile: &MediumProfile,
    k: Complex64,
    r_end: f64,
    settings: &OdeSettings,
) -> Result<BoundaryTrace> {
    settings.validate()?;
    if !(r_end > 0.0 && r_end <= 1.0) {
        return Err(Error::Domain(format!("end radius {r_end} outside (0, 1]")));
    }
    let segs = segments(profile, 0.0, r_end);
    let y0 = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    let out = integrate(&segs, y0, initial_step(profile, k, r_end), settings, |seg, r, s| {
        [s[1], -potential(profile, seg, k, r) * s[0]]
    })?;
    Ok(BoundaryTrace {
        y1: out.state[0],
        dy1: out.state[1],
        log_scale: out.log_scale,
        k,
        r: r_end,
        steps: out.steps,
    })
}

/// Regular solution `w` of `w'' + (2/r) w' + q(r) w = 0`, `w(0) = 1`, as a
/// power series on the first piece. Returns `(w(r0), w'(r0))`.
fn regular_series(profile: &MediumProfile, k: Complex64, r0: f64) -> State {
    let i = Complex64::new(0.0, 1.0);
    let e = &profile.epsilon1.coeffs[0];
    let g = &profile.gamma1.coeffs[0];
    let deg = e.len().max(g.len());
    let q: Vec<Complex64> = (0..deg)
        .map(|j| k * k * e.get(j).copied().unwrap_or(0.0) + i * k * g.get(j).copied().unwrap_or(0.0))
        .collect();
    let mut a: Vec<Complex64> = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let mut w = a[0];
    let mut dw = Complex64::new(0.0, 0.0);
    let mut small = 0;
    for m in 2..400usize {
        let mut s = Complex64::new(0.0, 0.0);
        for (j, qj) in q.iter().enumerate() {
            if j + 2 > m {
                break;
            }
            s += qj * a[m - 2 - j];
        }
        let am = -s / (m * (m + 1)) as f64;
        a.push(am);
        let term = am * r0.powi(m as i32);
        w += term;
        dw += am * (m as f64) * r0.powi(m as i32 - 1);
        if term.norm() <= 1e-18 * w.norm().max(1e-300) {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    [w, dw]
}

/// Boundary values of `Φ(r) = r w(r)`, where `w` is the regular solution of the
/// three-dimensional radial equation normalized by `w(0) = 1` (so `Φ'(0) = 1`).
///
/// This goes through a different equation than [`propagate`] (the singular
/// `w`-equation started from a Frobenius series), which makes it an
/// independent route to the same boundary data.
pub fn propagate_transformed(
    profile: &MediumProfile,
    k: Complex64,
    settings: &OdeSettings,
) -> Result<BoundaryTrace> {
    settings.validate()?;
    let first_break = profile
        .breakpoints()
        .into_iter()
        .find(|&b| b > 0.0)
        .unwrap_or(1.0);
    let qmax = k.norm() * k.norm() * profile.sup_epsilon1().abs()
        + k.norm() * profile.gamma1.max_abs();
    let r0 = (0.5 * first_break).min(0.5 / (1.0 + qmax.sqrt()));
    let start = regular_series(profile, k, r0);
    let segs = segments(profile, r0, 1.0);
    let out = integrate(&segs, start, initial_step(profile, k, 1.0 - r0), settings, |seg, r, s| {
        [s[1], -2.0 / r * s[1] - potential(profile, seg, k, r) * s[0]]
    })?;
    // Φ = r w, Φ' = w + r w' at r = 1
    let phi = out.state[0];
    let dphi = out.state[0] + out.state[1];
    let m = phi.norm().max(dphi.norm());
    Ok(BoundaryTrace {
        y1: phi / m,
        dy1: dphi / m,
        log_scale: out.log_scale + m.ln(),
        k,
        r: 1.0,
        steps: out.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// sin(μ)/μ, cos(μ) with μ² = k²c² + ikg.
    fn closed_form(c2: f64, g: f64, k: Complex64) -> (Complex64, Complex64) {
        let mu = (k * k * c2 + c(0.0, 1.0) * k * g).sqrt();
        (mu.sin() / mu, mu.cos())
    }

    #[test]
    fn vacuum_at_pi() {
        let p = MediumProfile::constant(1.0, 0.0, 1.0, 0.0);
        let t = propagate(&p, c(PI, 0.0), &OdeSettings::default()).unwrap();
        let y = t.y().to_complex();
        let dy = t.dy().to_complex();
        assert!(y.norm() < 1e-10, "{y}");
        assert!((dy - c(-1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn constant_coefficient_complex_k() {
        let p = MediumProfile::constant(1.0, 0.0, 1.0, 0.0);
        let k = c(2.0, 1.0);
        let t = propagate(&p, k, &OdeSettings::default()).unwrap();
        let y = t.y().to_complex();
        // sin(2+i)/(2+i)
        assert!((y - c(0.4634, -0.4763)).norm() < 1e-4, "{y}");
        let (ye, dye) = closed_form(1.0, 0.0, k);
        assert!((y - ye).norm() < 1e-10 * ye.norm());
        assert!((t.dy().to_complex() - dye).norm() < 1e-10 * dye.norm());
    }

    #[test]
    fn log_scale_tracks_growth() {
        let p = MediumProfile::constant(4.0, 0.0, 1.0, 0.0);
        let t = propagate(&p, c(0.0, 20.0), &OdeSettings::default()).unwrap();
        assert!((t.log_scale - 40.0).abs() < 3.0, "{}", t.log_scale);
        let m = t.y1.norm().max(t.dy1.norm());
        assert!((1e-2..=1e2).contains(&m));
    }

    #[test]
    fn rejects_bad_settings() {
        let p = MediumProfile::constant(1.0, 0.0, 1.0, 0.0);
        let s = OdeSettings { rel_tol: 1e-16, ..Default::default() };
        assert!(matches!(propagate(&p, c(1.0, 0.0), &s), Err(Error::InvalidSettings(_))));
        let s = OdeSettings { max_steps: 10, ..Default::default() };
        assert!(matches!(propagate(&p, c(1.0, 0.0), &s), Err(Error::InvalidSettings(_))));
    }

    #[test]
    fn step_budget_exhaustion_reports_radius() {
        let p = MediumProfile::constant(1.0, 0.0, 1.0, 0.0);
        let s = OdeSettings { max_steps: 1000, ..Default::default() };
        match propagate(&p, c(3000.0, 0.0), &s) {
            Err(Error::StepBudget { r, .. }) => assert!(r > 0.0 && r < 1.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn transformed_vacuum_at_pi() {
        let p = MediumProfile::constant(1.0, 0.0, 1.0, 0.0);
        let t = propagate_transformed(&p, c(PI, 0.0), &OdeSettings::default()).unwrap();
        // Φ = sin(πr)/π with Φ'(0) = 1
        assert!(t.y().to_complex().norm() < 1e-10);
        assert!((t.dy().to_complex() + 1.0).norm() < 1e-9);
    }

    #[test]
    fn transformed_matches_propagate_up_to_factor() {
        let p = MediumProfile::new(
            crate::poly::PiecewisePoly::polynomial(vec![2.0, 0.5, 1.0]),
            crate::poly::PiecewisePoly::polynomial(vec![0.3, 0.2]),
            1.0,
            0.1,
        );
        for k in [c(3.0, 0.5), c(11.0, -2.0), c(0.7, 4.0)] {
            let a = propagate(&p, k, &OdeSettings::default()).unwrap();
            let b = propagate_transformed(&p, k, &OdeSettings::default()).unwrap();
            assert!((a.ratio() - b.ratio()).norm() < 1e-9 * a.ratio().norm().max(1e-3));
            // Φ'(0) = y'(0) = 1, so the traces agree outright
            assert!(crate::scaled::rel_diff(&b.y(), &a.y()) < 1e-8);
        }
    }

    #[test]
    fn breakpoints_are_honoured() {
        // ε₁ = 1 on [0, 0.5), 4 on [0.5, 1]: piecewise-constant exact solution
        let eps = crate::poly::PiecewisePoly::new(vec![0.0, 0.5, 1.0], vec![vec![1.0], vec![4.0]])
            .unwrap();
        let p = MediumProfile::new(eps, crate::poly::PiecewisePoly::constant(0.0), 1.0, 0.0);
        let k = c(3.0, 0.2);
        let t = propagate(&p, k, &OdeSettings::default()).unwrap();
        let (y_half, dy_half) = ((k * 0.5).sin() / k, (k * 0.5).cos());
        let w = 2.0 * k;
        let y1 = y_half * (w * 0.5).cos() + dy_half * (w * 0.5).sin() / w;
        assert!((t.y().to_complex() - y1).norm() < 1e-10 * y1.norm());
    }
}
