//! Sector counts, ray growth rates and reciprocal sums of zero sets.

use super::{angle_from, find_zeros, AnalyticFn, EigenvalueRecord, FinderOptions, Rect};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};

/// Open angular sector `alpha < arg z < beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub alpha: f64,
    pub beta: f64,
}

impl Sector {
    pub fn new(alpha: f64, beta: f64) -> Result<Sector> {
        if !(beta > alpha && beta - alpha <= TAU) {
            return Err(Error::Domain(format!("bad sector ({alpha}, {beta})")));
        }
        Ok(Sector { alpha, beta })
    }

    /// `|arg z − center| < half_width`.
    pub fn symmetric(center: f64, half_width: f64) -> Result<Sector> {
        Sector::new(center - half_width, center + half_width)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let t = angle_from(z, self.alpha);
        t > 0.0 && t < self.beta - self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityPoint {
    pub r: f64,
    pub count: i64,
    pub density: f64,
}

/// Smallest rectangle containing `{r_min ≤ |z| ≤ r_max} ∩ sector`.
pub fn sector_bounding_box(sector: &Sector, r_min: f64, r_max: f64) -> Result<Rect> {
    let mut pts = vec![];
    for th in [sector.alpha, sector.beta] {
        pts.push(Complex64::from_polar(r_min, th));
        pts.push(Complex64::from_polar(r_max, th));
    }
    let first = (sector.alpha / FRAC_PI_2).ceil() as i64;
    let last = (sector.beta / FRAC_PI_2).floor() as i64;
    for m in first..=last {
        pts.push(Complex64::from_polar(r_max, m as f64 * FRAC_PI_2));
    }
    let re_min = pts.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let re_max = pts.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let im_min = pts.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    let im_max = pts.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    Rect::new(re_min, re_max, im_min, im_max)
}

#[derive(Debug, Clone)]
pub struct SectorCount {
    pub points: Vec<DensityPoint>,
    /// Zeros inside the sector with `r_min ≤ |k| ≤ max(r_values)`.
    pub zeros: Vec<EigenvalueRecord>,
}

/// Running counts `N(f, α, β, r)` and `N/r`. Zeros with `|k| < r_min` are
/// excluded, which keeps the contour away from the origin.
pub fn sector_density<F: AnalyticFn + ?Sized>(
    f: &F,
    sector: &Sector,
    r_values: &[f64],
    r_min: f64,
    opts: &FinderOptions,
) -> Result<SectorCount> {
    let r_max = r_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(r_max > r_min) || r_values.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Domain("radii must be positive and exceed r_min".into()));
    }
    let rect = sector_bounding_box(sector, r_min, r_max)?;
    let set = find_zeros(f, rect, opts)?;
    let zeros: Vec<EigenvalueRecord> = set
        .records
        .into_iter()
        .filter(|z| sector.contains(z.k) && z.k.norm() >= r_min && z.k.norm() <= r_max)
        .collect();
    let points = r_values
        .iter()
        .map(|&r| {
            let count = zeros.iter().filter(|z| z.k.norm() <= r).map(|z| z.multiplicity as i64).sum();
            DensityPoint { r, count, density: count as f64 / r }
        })
        .collect();
    Ok(SectorCount { points, zeros })
}

/// `(r, ln|f(r e^{iθ})| / r)` along a ray.
pub fn indicator_estimate<F: AnalyticFn + ?Sized>(f: &F, theta: f64, r_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    r_values
        .iter()
        .map(|&r| {
            let v = f.eval(Complex64::from_polar(r, theta))?;
            Ok((r, v.ln_abs() / r))
        })
        .collect()
}

/// Partial sums `δ(r) = Σ_{|a| < r} 1/a`.
pub fn reciprocal_sum(zeros: &[Complex64], r_values: &[f64]) -> Result<Vec<(f64, Complex64)>> {
    if let Some(z) = zeros.iter().find(|z| z.norm() < 1e-12) {
        return Err(Error::Domain(format!("zero {z} too close to the origin")));
    }
    Ok(r_values
        .iter()
        .map(|&r| (r, zeros.iter().filter(|z| z.norm() < r).map(|z| z.inv()).sum()))
        .collect())
}
