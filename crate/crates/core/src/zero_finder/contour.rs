//! Phase tracks along axis-parallel edges.
//!
//! A track stores samples of `arg f` and the scale-free `ln|f|` at increasing
//! positions along one edge, refined until consecutive raw phases differ by
//! less than π/2. The unwrapped phase is kept per sample, so the phase change
//! over any sub-interval is a difference of two stored numbers. Children of a
//! split rectangle reuse slices of their parent's tracks, which makes winding
//! additivity exact.

use super::AnalyticFn;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

const MAX_REFINE_ROUNDS: usize = 48;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample {
    pub pos: f64,
    pub arg: f64,
    pub phase: f64,
    pub mag: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct Track {
    pub horizontal: bool,
    pub level: f64,
    pub samples: Vec<Sample>,
}

pub(crate) fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

fn point(horizontal: bool, level: f64, pos: f64) -> Complex64 {
    if horizontal {
        Complex64::new(pos, level)
    } else {
        Complex64::new(level, pos)
    }
}

/// `(arg f, ln|f| − envelope)` at `z`.
pub(crate) fn probe<F: AnalyticFn + ?Sized>(f: &F, z: Complex64) -> Result<(f64, f64)> {
    let v = f.eval(z)?;
    Ok((v.arg(), v.ln_abs() - f.envelope(z)))
}

fn needs_split(a: &Sample, b: &Sample) -> bool {
    a.mag.is_finite() && b.mag.is_finite() && wrap(b.arg - a.arg).abs() >= PI / 2.0
}

impl Track {
    pub fn build<F: AnalyticFn + ?Sized>(
        f: &F,
        horizontal: bool,
        level: f64,
        lo: f64,
        hi: f64,
        n: usize,
    ) -> Result<Track> {
        let by_rate = (f.growth_rate() * (hi - lo).abs()).ceil();
        let n = n.max(2).max(if by_rate.is_finite() { by_rate as usize } else { 0 });
        let positions: Vec<f64> = (0..=n)
            .map(|i| if i == n { hi } else { lo + (hi - lo) * i as f64 / n as f64 })
            .collect();
        let mut samples = eval_many(f, horizontal, level, &positions)?;
        let min_gap = 1e-14 * lo.abs().max(hi.abs()).max(1.0);
        for _ in 0..MAX_REFINE_ROUNDS {
            let mids: Vec<f64> = samples
                .windows(2)
                .filter(|w| needs_split(&w[0], &w[1]))
                .map(|w| 0.5 * (w[0].pos + w[1].pos))
                .collect();
            if mids.is_empty() {
                let mut t = Track { horizontal, level, samples };
                t.unwrap_phase();
                return Ok(t);
            }
            if samples.windows(2).any(|w| needs_split(&w[0], &w[1]) && w[1].pos - w[0].pos < min_gap) {
                break;
            }
            let new = eval_many(f, horizontal, level, &mids)?;
            samples.extend(new);
            samples.sort_by(|a, b| a.pos.total_cmp(&b.pos));
        }
        Err(Error::PhaseTracking(format!(
            "edge at {} = {level} still jumps by more than π/2 after refinement",
            if horizontal { "im" } else { "re" }
        )))
    }

    fn unwrap_phase(&mut self) {
        let mut phase = self.samples[0].arg;
        self.samples[0].phase = phase;
        for i in 1..self.samples.len() {
            phase += wrap(self.samples[i].arg - self.samples[i - 1].arg);
            self.samples[i].phase = phase;
        }
    }

    /// Total phase change from the low to the high end.
    pub fn dphase(&self) -> f64 {
        self.samples[self.samples.len() - 1].phase - self.samples[0].phase
    }

    pub fn min_mag(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| if s.mag.is_nan() { f64::NEG_INFINITY } else { s.mag })
            .fold(f64::INFINITY, f64::min)
    }

    fn ensure_sample<F: AnalyticFn + ?Sized>(&mut self, f: &F, pos: f64) -> Result<()> {
        let i = self.samples.partition_point(|s| s.pos < pos);
        if i < self.samples.len() && self.samples[i].pos == pos {
            return Ok(());
        }
        let (arg, mag) = probe(f, point(self.horizontal, self.level, pos))?;
        let prev = &self.samples[i.saturating_sub(1).min(self.samples.len() - 1)];
        let phase = prev.phase + wrap(arg - prev.arg);
        self.samples.insert(i, Sample { pos, arg, phase, mag });
        Ok(())
    }

    /// Slice of the track between `lo` and `hi`, which must lie on the edge.
    pub fn sub<F: AnalyticFn + ?Sized>(&mut self, f: &F, lo: f64, hi: f64) -> Result<Track> {
        self.ensure_sample(f, lo)?;
        self.ensure_sample(f, hi)?;
        let samples = self.samples.iter().copied().filter(|s| s.pos >= lo && s.pos <= hi).collect();
        Ok(Track { horizontal: self.horizontal, level: self.level, samples })
    }

    pub fn mags(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.mag)
    }
}

fn eval_many<F: AnalyticFn + ?Sized>(f: &F, horizontal: bool, level: f64, positions: &[f64]) -> Result<Vec<Sample>> {
    positions
        .par_iter()
        .map(|&pos| {
            let (arg, mag) = probe(f, point(horizontal, level, pos))?;
            Ok(Sample { pos, arg, phase: 0.0, mag })
        })
        .collect()
}
