//! Leading-order locations of the zeros of `y(1; k)` and `y'(1; k)`.

use crate::error::{Error, Result};
use crate::media::{compute_constants, MediumProfile, SpectralConstants, DEFAULT_QUAD_TOL};
use crate::radial_solver::OdeSettings;
use crate::zero_finder::{find_zeros, BoundaryKind, BoundaryValueFn, FinderOptions, Rect};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// `(jπ − iD)/B` for Dirichlet, `((j − ½)π − iD)/B` for Neumann.
pub fn zero_asymptote(constants: &SpectralConstants, j: u32, which: BoundaryKind) -> Result<Complex64> {
    if j == 0 {
        return Err(Error::Domain("zero index starts at 1".into()));
    }
    if !(constants.B > 0.0) {
        return Err(Error::Domain("B must be positive".into()));
    }
    let jj = match which {
        BoundaryKind::Dirichlet => j as f64,
        BoundaryKind::Neumann => j as f64 - 0.5,
    };
    Ok(Complex64::new(jj * PI, -constants.D) / constants.B)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoteRow {
    pub j: u32,
    pub found: Complex64,
    pub predicted: Complex64,
    pub gap: f64,
    pub gap_times_j: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoteTable {
    pub rows: Vec<AsymptoteRow>,
    /// Largest `|Im|` over the zeros found in the search box.
    pub max_abs_im: f64,
    /// Number of zeros found in the search box.
    pub found: usize,
}

impl AsymptoteTable {
    pub fn max_gap_times_j(&self) -> f64 {
        self.rows.iter().map(|r| r.gap_times_j).fold(0.0, f64::max)
    }
}

/// Finds the zeros of `y(1; ·)` or `y'(1; ·)` with real parts between the
/// predicted ones for `j_lo − ½` and `j_hi + ½`, then pairs each index with
/// the nearest zero.
pub fn asymptote_convergence(
    profile: &MediumProfile,
    j_lo: u32,
    j_hi: u32,
    which: BoundaryKind,
    settings: &OdeSettings,
    opts: &FinderOptions,
) -> Result<AsymptoteTable> {
    if j_lo == 0 || j_hi < j_lo {
        return Err(Error::Domain(format!("bad index range {j_lo}..={j_hi}")));
    }
    let constants = compute_constants(profile, DEFAULT_QUAD_TOL)?;
    let f = BoundaryValueFn::new(profile.clone(), *settings, which)?;
    let spacing = PI / constants.B;
    let first = zero_asymptote(&constants, j_lo, which)?;
    let last = zero_asymptote(&constants, j_hi, which)?;
    let rect = Rect::new(
        first.re - 0.5 * spacing,
        last.re + 0.5 * spacing,
        first.im - 1.0 - spacing,
        first.im + 1.0 + spacing,
    )?;
    let zeros: Vec<Complex64> = find_zeros(&f, rect, opts)?.records.iter().map(|r| r.k).collect();
    let max_abs_im = zeros.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let mut rows = Vec::new();
    for j in j_lo..=j_hi {
        let predicted = zero_asymptote(&constants, j, which)?;
        let Some(found) = zeros.iter().copied().min_by(|a, b| (a - predicted).norm().total_cmp(&(b - predicted).norm()))
        else {
            return Err(Error::Domain("no zeros in the search box".into()));
        };
        let gap = (found - predicted).norm();
        rows.push(AsymptoteRow { j, found, predicted, gap, gap_times_j: gap * j as f64 });
    }
    Ok(AsymptoteTable { rows, max_abs_im, found: zeros.len() })
}

/// True when the two sorted sequences strictly alternate, starting with
/// whichever has the smaller first element.
pub fn interlaces(a: &[f64], b: &[f64]) -> bool {
    let mut all: Vec<(f64, u8)> = a.iter().map(|&x| (x, 0)).chain(b.iter().map(|&x| (x, 1))).collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    all.windows(2).all(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0)
}
