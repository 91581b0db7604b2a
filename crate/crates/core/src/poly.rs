//! Piecewise polynomials on [0, 1] with ascending local coefficients.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const MAX_DEGREE: usize = 5;

/// Evaluates `c0 + c1 t + ...` and its first two derivatives at `t`.
pub fn horner3(coeffs: &[f64], t: f64) -> [f64; 3] {
    let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
    for &c in coeffs.iter().rev() {
        ddp = ddp * t + 2.0 * dp;
        dp = dp * t + p;
        p = p * t + c;
    }
    [p, dp, ddp]
}

pub fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i as f64 * c)
        .collect()
}

/// Real roots of a polynomial on `[a, b]`, found by isolating monotone
/// stretches between the roots of the derivative and bisecting each.
pub fn real_roots_in(coeffs: &[f64], a: f64, b: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    match c.len() {
        0 | 1 => return Vec::new(),
        2 => {
            let x = -c[0] / c[1];
            return if x >= a && x <= b { vec![x] } else { Vec::new() };
        }
        _ => {}
    }
    let mut knots = vec![a];
    knots.extend(real_roots_in(&derivative(&c), a, b));
    knots.push(b);
    let mut roots: Vec<f64> = Vec::new();
    for w in knots.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (mut flo, fhi) = (horner(&c, lo), horner(&c, hi));
        if flo == 0.0 {
            if roots.last() != Some(&lo) {
                roots.push(lo);
            }
            continue;
        }
        if fhi == 0.0 {
            roots.push(hi);
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = horner(&c, mid);
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    roots
}

/// Piecewise polynomial on `breakpoints[0] = 0 < ... < breakpoints[m] = 1`.
/// `coeffs[i]` are ascending powers of `(r - breakpoints[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePoly {
    pub breakpoints: Vec<f64>,
    pub coeffs: Vec<Vec<f64>>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<f64>, coeffs: Vec<Vec<f64>>) -> Result<Self> {
        let p = Self { breakpoints, coeffs };
        p.check()?;
        Ok(p)
    }

    pub fn constant(c: f64) -> Self {
        Self { breakpoints: vec![0.0, 1.0], coeffs: vec![vec![c]] }
    }

    /// Single global polynomial in `r` on [0, 1].
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Self { breakpoints: vec![0.0, 1.0], coeffs: vec![coeffs] }
    }

    fn check(&self) -> Result<()> {
        let bp = &self.breakpoints;
        if bp.len() < 2 {
            return Err(Error::InvalidProfile("need at least two breakpoints".into()));
        }
        if bp[0] != 0.0 || *bp.last().unwrap() != 1.0 {
            return Err(Error::InvalidProfile("breakpoints must start at 0 and end at 1".into()));
        }
        if bp.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("breakpoints must be strictly increasing".into()));
        }
        if self.coeffs.len() != bp.len() - 1 {
            return Err(Error::InvalidProfile(format!(
                "{} breakpoints require {} coefficient lists, got {}",
                bp.len(),
                bp.len() - 1,
                self.coeffs.len()
            )));
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_empty() || c.len() > MAX_DEGREE + 1 {
                return Err(Error::InvalidProfile(format!(
                    "piece {i}: degree must be between 0 and {MAX_DEGREE}"
                )));
            }
            if c.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidProfile(format!("piece {i}: non-finite coefficient")));
            }
        }
        Ok(())
    }

    pub fn num_pieces(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the piece containing `r` (left-closed, last piece closed).
    pub fn piece_of(&self, r: f64) -> usize {
        let n = self.num_pieces();
        let idx = self.breakpoints[1..n].partition_point(|&b| b <= r);
        idx.min(n - 1)
    }

    /// Value and first two derivatives on a given piece.
    pub fn eval_piece(&self, piece: usize, r: f64) -> [f64; 3] {
        horner3(&self.coeffs[piece], r - self.breakpoints[piece])
    }

    pub fn eval3(&self, r: f64) -> [f64; 3] {
        self.eval_piece(self.piece_of(r), r)
    }

    pub fn eval(&self, r: f64) -> f64 {
        let i = self.piece_of(r);
        horner(&self.coeffs[i], r - self.breakpoints[i])
    }

    /// One-sided values at interior breakpoint `i` (1..m): (left, right).
    pub fn one_sided(&self, i: usize) -> ([f64; 3], [f64; 3]) {
        let b = self.breakpoints[i];
        (self.eval_piece(i - 1, b), self.eval_piece(i, b))
    }

    pub fn interior_breakpoints(&self) -> &[f64] {
        &self.breakpoints[1..self.breakpoints.len() - 1]
    }

    pub fn is_identically_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|&x| x == 0.0))
    }

    /// Exact minimum and maximum over [0, 1], with the arguments where they occur.
    pub fn extrema(&self) -> ((f64, f64), (f64, f64)) {
        let mut min = (f64::INFINITY, 0.0);
        let mut max = (f64::NEG_INFINITY, 0.0);
        for i in 0..self.num_pieces() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            let c = &self.coeffs[i];
            let mut cand = vec![0.0, b - a];
            cand.extend(real_roots_in(&derivative(c), 0.0, b - a));
            for t in cand {
                let v = horner(c, t);
                if v < min.0 {
                    min = (v, a + t);
                }
                if v > max.0 {
                    max = (v, a + t);
                }
            }
        }
        (min, max)
    }

    /// Pointwise linear combination `alpha * self + beta * other` on the merged grid.
    pub fn combine(&self, alpha: f64, other: &PiecewisePoly, beta: f64) -> PiecewisePoly {
        let mut grid: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .copied()
            .collect();
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup();
        let coeffs = grid
            .windows(2)
            .map(|w| {
                let a = w[0];
                let mid = 0.5 * (w[0] + w[1]);
                let mut out = vec![0.0; MAX_DEGREE + 1];
                for (poly, weight) in [(self, alpha), (other, beta)] {
                    let i = poly.piece_of(mid);
                    let shifted = shift(&poly.coeffs[i], a - poly.breakpoints[i]);
                    for (o, s) in out.iter_mut().zip(shifted) {
                        *o += weight * s;
                    }
                }
                while out.len() > 1 && *out.last().unwrap() == 0.0 {
                    out.pop();
                }
                out
            })
            .collect();
        PiecewisePoly { breakpoints: grid, coeffs }
    }

    pub fn scaled(&self, s: f64) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            coeffs: self.coeffs.iter().map(|c| c.iter().map(|x| s * x).collect()).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        let ((lo, _), (hi, _)) = self.extrema();
        lo.abs().max(hi.abs())
    }
}

/// Re-expands `sum c_j t^j` in the variable `u = t - d`, i.e. returns the
/// coefficients of `p(u + d)`.
pub fn shift(c: &[f64], d: f64) -> Vec<f64> {
    let n = c.len();
    let mut out = c.to_vec();
    // repeated synthetic division (Taylor shift)
    for i in 0..n {
        for j in (i..n - 1).rev() {
            out[j] += d * out[j + 1];
        }
    }
    out
}
