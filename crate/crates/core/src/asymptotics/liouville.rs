//! Liouville normal form for lossless media and the Pöschel–Trubowitz sums.
//!
//! With `n = ε₁`, `ξ(r) = ∫₀ʳ √n` and `Z(ξ) = [n(0) n(r)]^{1/4} y(r)`, the
//! radial equation becomes `Z'' + (k² − p(ξ)) Z = 0`, `Z(0) = 0`, `Z'(0) = 1`,
//! where `p = n''/(4n²) − (5/16) n'²/n³`.

use crate::error::{Error, Result};
use crate::media::{ensure_c2, MediumProfile};
use crate::quadrature::{gauss_legendre, integrate_pieces};
use crate::radial_solver::{propagate_to, OdeSettings};
use crate::scaled::{sin_cos_scaled, Scaled};
use num_complex::Complex64;
use serde::Serialize;

pub const TABLE_POINTS: usize = 2048;
const QUAD_TOL: f64 = 1e-14;

/// Piecewise cubic Hermite interpolant with Fritsch–Carlson slope limiting.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl MonotoneCubic {
    /// `slopes` are the derivative values at the nodes; they are limited so
    /// the interpolant stays monotone on every interval.
    pub fn new(x: Vec<f64>, y: Vec<f64>, mut slopes: Vec<f64>) -> Result<Self> {
        if x.len() < 2 || x.len() != y.len() || x.len() != slopes.len() {
            return Err(Error::Domain("interpolation table size mismatch".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("interpolation nodes must increase".into()));
        }
        for i in 0..x.len() - 1 {
            let secant = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
            if secant == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let (a, b) = (slopes[i] / secant, slopes[i + 1] / secant);
            if a < 0.0 {
                slopes[i] = 0.0;
            }
            if b < 0.0 {
                slopes[i + 1] = 0.0;
            }
            let norm = (a * a + b * b).sqrt();
            if norm > 3.0 {
                let tau = 3.0 / norm;
                slopes[i] = tau * a * secant;
                slopes[i + 1] = tau * b * secant;
            }
        }
        Ok(Self { x, y, m: slopes })
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = self.x[1..n - 1].partition_point(|&v| v <= t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.m[i] + h01 * self.y[i + 1] + h11 * h * self.m[i + 1]
    }
}

#[derive(Debug, Clone)]
pub struct LiouvilleFrame {
    profile: MediumProfile,
    /// `ξ(r)` on a uniform r grid
    xi_of_r: MonotoneCubic,
    /// inverse map `r(ξ)`
    r_of_xi: MonotoneCubic,
    pub b: f64,
}

/// `n, n', n''` at `r`.
fn index_derivs(profile: &MediumProfile, r: f64) -> [f64; 3] {
    profile.epsilon1.eval3(r)
}

/// `p = n''/(4n²) − (5/16) n'²/n³` at `r`.
pub fn p_of_r(profile: &MediumProfile, r: f64) -> f64 {
    let [n, dn, ddn] = index_derivs(profile, r);
    ddn / (4.0 * n * n) - 5.0 / 16.0 * dn * dn / (n * n * n)
}

pub fn liouville_build(profile: &MediumProfile) -> Result<LiouvilleFrame> {
    if !profile.gamma1.is_identically_zero() {
        return Err(Error::Domain("the Liouville frame needs γ₁ ≡ 0".into()));
    }
    ensure_c2(profile)?;
    let bps = profile.breakpoints();
    let sqrt_n = |r: f64| profile.epsilon1.eval(r).sqrt();
    let m = TABLE_POINTS;
    let rs: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    let mut xis = vec![0.0; m];
    for i in 1..m {
        let inner: Vec<f64> = bps.iter().copied().filter(|&b| b > rs[i - 1] && b < rs[i]).collect();
        let cell = if inner.is_empty() {
            gauss_legendre(&sqrt_n, rs[i - 1], rs[i])
        } else {
            integrate_pieces(&sqrt_n, rs[i - 1], rs[i], &bps, QUAD_TOL)?
        };
        xis[i] = xis[i - 1] + cell;
    }
    let dxi: Vec<f64> = rs.iter().map(|&r| sqrt_n(r)).collect();
    let dr: Vec<f64> = dxi.iter().map(|v| 1.0 / v).collect();
    let b = xis[m - 1];
    Ok(LiouvilleFrame {
        profile: profile.clone(),
        xi_of_r: MonotoneCubic::new(rs.clone(), xis.clone(), dxi)?,
        r_of_xi: MonotoneCubic::new(xis, rs, dr)?,
        b,
    })
}

impl LiouvilleFrame {
    pub fn profile(&self) -> &MediumProfile {
        &self.profile
    }

    pub fn xi_of_r(&self, r: f64) -> f64 {
        self.xi_of_r.eval(r.clamp(0.0, 1.0))
    }

    pub fn r_of_xi(&self, xi: f64) -> f64 {
        self.r_of_xi.eval(xi.clamp(0.0, self.b)).clamp(0.0, 1.0)
    }

    pub fn p_of_xi(&self, xi: f64) -> f64 {
        p_of_r(&self.profile, self.r_of_xi(xi))
    }

    /// `Q(ξ) = ∫₀^ξ p`, integrated in r as `∫₀^{r(ξ)} p(r) √n(r) dr`.
    pub fn q_of_xi(&self, xi: f64) -> Result<f64> {
        let r = self.r_of_xi(xi);
        if r == 0.0 {
            return Ok(0.0);
        }
        let integrand = |s: f64| p_of_r(&self.profile, s) * self.profile.epsilon1.eval(s).sqrt();
        integrate_pieces(&integrand, 0.0, r, &self.profile.breakpoints(), QUAD_TOL)
    }

    /// Normalized `Z(ξ)` and `Z'(ξ) = dZ/dξ` from the radial solver at `r(ξ)`.
    pub fn normalized_solution(&self, xi: f64, k: Complex64, settings: &OdeSettings) -> Result<(Scaled, Scaled)> {
        let r = self.r_of_xi(xi);
        let t = propagate_to(&self.profile, k, r, settings)?;
        Ok(self.normalize_trace(r, t.y(), t.dy()))
    }

    fn normalize_trace(&self, r: f64, y: Scaled, dy: Scaled) -> (Scaled, Scaled) {
        let n0 = self.profile.epsilon1_at(0.0);
        let [n, dn, _] = index_derivs(&self.profile, r);
        let z = y * Complex64::new((n0 * n).powf(0.25), 0.0);
        // dZ/dξ = n(0)^{1/4} n^{-1/2} (¼ n^{-3/4} n' y + n^{1/4} y')
        let a = 0.25 * n.powf(-0.75) * dn;
        let c = n.powf(0.25);
        let dz = (y * Complex64::new(a, 0.0)).add(&(dy * Complex64::new(c, 0.0)));
        let dz = dz * Complex64::new(n0.powf(0.25) / n.sqrt(), 0.0);
        (z, dz)
    }
}

/// Partial sums of the Pöschel–Trubowitz expansions of `Z(ξ)` and `Z'(ξ)`:
///
/// ```text
/// Z  ≈ sin kξ/k − cos kξ·Q/(2k²) + sin kξ/(4k³)·[p(ξ) + p(0) − Q²/2]
/// Z' ≈ cos kξ + sin kξ·Q/(2k) + cos kξ/(4k²)·[p(0) − p(ξ) − Q²/2]
/// ```
pub fn pt_expansion(frame: &LiouvilleFrame, xi: f64, k: Complex64, order: u8) -> Result<(Scaled, Scaled)> {
    if !(1..=3).contains(&order) {
        return Err(Error::Domain(format!("order {order} not in 1..=3")));
    }
    if k == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("k = 0".into()));
    }
    let (s, c, t) = sin_cos_scaled(k * xi);
    let mut z = s / k;
    let mut dz = c;
    if order >= 2 {
        let q = frame.q_of_xi(xi)?;
        z -= c * q / (2.0 * k * k);
        dz += s * q / (2.0 * k);
        if order >= 3 {
            let (p, p0) = (frame.p_of_xi(xi), frame.p_of_xi(0.0));
            z += s / (4.0 * k * k * k) * (p + p0 - 0.5 * q * q);
            dz += c / (4.0 * k * k) * (p0 - p - 0.5 * q * q);
        }
    }
    Ok((Scaled::new(z, t).normalized(), Scaled::new(dz, t).normalized()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiouvilleSample {
    pub xi: f64,
    pub exact: Complex64,
    pub predicted: Complex64,
    pub rel_error: f64,
    /// Remainder with the growth `e^{|Im k| ξ}` divided out.
    pub scaled_residual: f64,
}

/// Compares the solver's normalized `Z(ξ)` with the order-`order` sum.
pub fn liouville_compare(
    frame: &LiouvilleFrame,
    xi: f64,
    k: Complex64,
    order: u8,
    settings: &OdeSettings,
) -> Result<LiouvilleSample> {
    let (z, _) = frame.normalized_solution(xi, k, settings)?;
    let (pred, _) = pt_expansion(frame, xi, k, order)?;
    let growth = (k * xi).im.abs();
    let (e, p) = (z.rescaled_to(growth), pred.rescaled_to(growth));
    Ok(LiouvilleSample {
        xi,
        exact: e,
        predicted: p,
        rel_error: (e - p).norm() / e.norm(),
        scaled_residual: (e - p).norm(),
    })
}
