//! Zeros of analytic functions in rectangles and sectors.
//!
//! Counting uses the argument principle with adaptive phase tracking along
//! the contour. Regions with more than one zero are split recursively; the
//! cut lines are tracked once and shared by both neighbours. Simple zeros are
//! polished with Muller's method.

mod contour;
mod density;
mod handles;
mod muller;

pub use density::{indicator_estimate, reciprocal_sum, sector_bounding_box, sector_density, DensityPoint, Sector, SectorCount};
pub use handles::{BoundaryKind, BoundaryValueFn, WithEnvelope};

use crate::error::{Error, Result};
use crate::scaled::Scaled;
use contour::Track;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// A function that can be sampled on the complex plane.
///
/// `growth_rate` is the exponential type σ of `f` (0 when unknown). Boundary
/// guards measure `ln|f(z)| − σ|Im z|`, and edges are sampled at least once
/// per `1/σ` so the phase cannot alias between samples.
pub trait AnalyticFn: Sync {
    fn eval(&self, z: Complex64) -> Result<Scaled>;

    fn growth_rate(&self) -> f64 {
        0.0
    }

    fn envelope(&self, z: Complex64) -> f64 {
        self.growth_rate() * z.im.abs()
    }
}

impl<F> AnalyticFn for F
where
    F: Fn(Complex64) -> Result<Scaled> + Sync,
{
    fn eval(&self, z: Complex64) -> Result<Scaled> {
        self(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Rect> {
        let r = Rect { re_min, re_max, im_min, im_max };
        if !(re_max > re_min && im_max > im_min) || ![re_min, re_max, im_min, im_max].iter().all(|x| x.is_finite()) {
            return Err(Error::Domain(format!("degenerate rectangle {r:?}")));
        }
        Ok(r)
    }

    pub fn centered(z: Complex64, side: f64) -> Rect {
        let h = 0.5 * side;
        Rect { re_min: z.re - h, re_max: z.re + h, im_min: z.im - h, im_max: z.im + h }
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    fn expanded(&self, frac: f64) -> Rect {
        let (dx, dy) = (frac * self.width(), frac * self.height());
        Rect {
            re_min: self.re_min - dx,
            re_max: self.re_max + dx,
            im_min: self.im_min - dy,
            im_max: self.im_max + dy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchRegion {
    pub rect: Rect,
    pub winding: i64,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorTag {
    NearPositiveReal,
    NearNegativeReal,
    Other,
}

impl SectorTag {
    pub fn of(k: Complex64, half_angle: f64) -> SectorTag {
        if k.arg().abs() < half_angle {
            SectorTag::NearPositiveReal
        } else if (-k).arg().abs() < half_angle {
            SectorTag::NearNegativeReal
        } else {
            SectorTag::Other
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SectorTag::NearPositiveReal => "near_positive_real",
            SectorTag::NearNegativeReal => "near_negative_real",
            SectorTag::Other => "other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueRecord {
    pub k: Complex64,
    pub multiplicity: u32,
    /// Size of the last refinement step, an estimate of `|f/f'|` at `k`.
    pub residual: f64,
    pub sector: SectorTag,
    /// False for clusters that could not be separated or polished.
    pub resolved: bool,
    /// Winding of a tight box around `k` matched `multiplicity`; `None` when
    /// not checked.
    pub verified: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FinderOptions {
    pub refine_tol: f64,
    pub max_depth: usize,
    pub samples_per_edge: usize,
    pub sector_eps: f64,
    pub verify: bool,
}

impl Default for FinderOptions {
    fn default() -> Self {
        Self { refine_tol: 1e-10, max_depth: 40, samples_per_edge: 16, sector_eps: 0.2, verify: true }
    }
}

pub const GUARD_RATIO: f64 = 1e-3;
pub const GUARD_EXPANSION: f64 = 0.017;
pub const GUARD_ATTEMPTS: usize = 3;
pub const VERIFY_SIDE: f64 = 1e-6;
/// Cut positions tried, as offsets from the midpoint in units of the span.
/// They reach far enough from the centre that a cut clears a cluster of up
/// to four nearly coincident zeros sitting there.
const CUT_OFFSETS: [f64; GUARD_ATTEMPTS + 1] = [0.0, 0.07, -0.13, 0.19];

#[derive(Debug, Clone)]
pub struct ZeroSet {
    pub records: Vec<EigenvalueRecord>,
    /// Rectangle actually searched (after boundary perturbation).
    pub region: SearchRegion,
}

impl ZeroSet {
    pub fn total_multiplicity(&self) -> i64 {
        self.records.iter().map(|r| r.multiplicity as i64).sum()
    }
}

struct Node {
    rect: Rect,
    bottom: Track,
    right: Track,
    top: Track,
    left: Track,
    winding: i64,
    depth: usize,
}

fn winding_of(bottom: &Track, right: &Track, top: &Track, left: &Track) -> Result<i64> {
    let total = bottom.dphase() + right.dphase() - top.dphase() - left.dphase();
    let w = total / TAU;
    let n = w.round();
    if (w - n).abs() > 0.05 {
        return Err(Error::PhaseTracking(format!("non-integer winding {w}")));
    }
    Ok(n as i64)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.retain(|x| x.is_finite());
    if v.is_empty() {
        return f64::NEG_INFINITY;
    }
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

/// Threshold in scale-free log magnitude below which a contour is suspected
/// to pass through a zero.
fn guard_level(reference: f64) -> f64 {
    reference + GUARD_RATIO.ln()
}

fn track_rect<F: AnalyticFn + ?Sized>(f: &F, r: &Rect, n: usize) -> Result<[Track; 4]> {
    let (bottom, (right, (top, left))) = rayon::join(
        || Track::build(f, true, r.im_min, r.re_min, r.re_max, n),
        || {
            rayon::join(
                || Track::build(f, false, r.re_max, r.im_min, r.im_max, n),
                || {
                    rayon::join(
                        || Track::build(f, true, r.im_max, r.re_min, r.re_max, n),
                        || Track::build(f, false, r.re_min, r.im_min, r.im_max, n),
                    )
                },
            )
        },
    );
    Ok([bottom?, right?, top?, left?])
}

/// Tracks the boundary of `rect`, expanding it when the guard suspects a zero
/// on the contour.
fn root_node<F: AnalyticFn + ?Sized>(f: &F, rect: Rect, samples: usize) -> Result<Node> {
    let mut rect = rect;
    for attempt in 0..=GUARD_ATTEMPTS {
        match track_rect(f, &rect, samples) {
            Ok([bottom, right, top, left]) => {
                let node_tracks = [&bottom, &right, &top, &left];
                let min = node_tracks.iter().map(|t| t.min_mag()).fold(f64::INFINITY, f64::min);
                if min >= guard_level(reference_of(&node_tracks)) {
                    let winding = winding_of(&bottom, &right, &top, &left)?;
                    return Ok(Node { rect, bottom, right, top, left, winding, depth: 0 });
                }
            }
            // a zero on the contour stalls phase refinement next to it
            Err(Error::PhaseTracking(_)) => {}
            Err(e) => return Err(e),
        }
        if attempt < GUARD_ATTEMPTS {
            rect = rect.expanded(GUARD_EXPANSION);
        }
    }
    Err(Error::BoundaryZero { attempts: GUARD_ATTEMPTS })
}

/// Median scale-free log magnitude over a node's boundary.
fn reference_of(tracks: &[&Track; 4]) -> f64 {
    median(tracks.iter().flat_map(|t| t.mags()).collect())
}

/// Number of zeros inside `rect` counted with multiplicity.
pub fn winding_count<F: AnalyticFn + ?Sized>(f: &F, rect: Rect, samples_per_edge: usize) -> Result<i64> {
    Ok(root_node(f, rect, samples_per_edge)?.winding)
}

/// Splits a node across the given axis with a guarded cut line.
fn bisect<F: AnalyticFn + ?Sized>(f: &F, mut node: Node, vertical_cut: bool, samples: usize) -> Result<[Node; 2]> {
    let r = node.rect;
    let (lo, hi) = if vertical_cut { (r.re_min, r.re_max) } else { (r.im_min, r.im_max) };
    let span = hi - lo;
    let reference = reference_of(&[&node.bottom, &node.right, &node.top, &node.left]);
    let mut chosen = None;
    for off in CUT_OFFSETS {
        let cut = lo + span * (0.5 + off);
        let track = if vertical_cut {
            Track::build(f, false, cut, r.im_min, r.im_max, samples)
        } else {
            Track::build(f, true, cut, r.re_min, r.re_max, samples)
        };
        match track {
            Ok(t) if t.min_mag() >= guard_level(reference) => {
                chosen = Some((cut, t));
                break;
            }
            Ok(_) | Err(Error::PhaseTracking(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let (cut, mid) = chosen.ok_or(Error::BoundaryZero { attempts: GUARD_ATTEMPTS })?;
    let depth = node.depth + 1;
    let (a, b) = if vertical_cut {
        let left_rect = Rect { re_max: cut, ..r };
        let right_rect = Rect { re_min: cut, ..r };
        let a_bottom = node.bottom.sub(f, r.re_min, cut)?;
        let a_top = node.top.sub(f, r.re_min, cut)?;
        let b_bottom = node.bottom.sub(f, cut, r.re_max)?;
        let b_top = node.top.sub(f, cut, r.re_max)?;
        let wa = winding_of(&a_bottom, &mid, &a_top, &node.left)?;
        let wb = winding_of(&b_bottom, &node.right, &b_top, &mid)?;
        (
            Node { rect: left_rect, bottom: a_bottom, right: mid.clone(), top: a_top, left: node.left, winding: wa, depth },
            Node { rect: right_rect, bottom: b_bottom, right: node.right, top: b_top, left: mid, winding: wb, depth },
        )
    } else {
        let low_rect = Rect { im_max: cut, ..r };
        let high_rect = Rect { im_min: cut, ..r };
        let a_left = node.left.sub(f, r.im_min, cut)?;
        let a_right = node.right.sub(f, r.im_min, cut)?;
        let b_left = node.left.sub(f, cut, r.im_max)?;
        let b_right = node.right.sub(f, cut, r.im_max)?;
        let wa = winding_of(&node.bottom, &a_right, &mid, &a_left)?;
        let wb = winding_of(&mid, &b_right, &node.top, &b_left)?;
        (
            Node { rect: low_rect, bottom: node.bottom, right: a_right, top: mid.clone(), left: a_left, winding: wa, depth },
            Node { rect: high_rect, bottom: mid, right: b_right, top: node.top, left: b_left, winding: wb, depth },
        )
    };
    if a.winding + b.winding != node.winding {
        return Err(Error::PhaseTracking(format!(
            "winding not additive: {} + {} != {}",
            a.winding, b.winding, node.winding
        )));
    }
    Ok([a, b])
}

/// Quadrisection, or a single cut across the long side of elongated boxes.
fn split<F: AnalyticFn + ?Sized>(f: &F, node: Node, samples: usize) -> Result<Vec<Node>> {
    let (w, h) = (node.rect.width(), node.rect.height());
    if w > 2.0 * h {
        return Ok(bisect(f, node, true, samples)?.into());
    }
    if h > 2.0 * w {
        return Ok(bisect(f, node, false, samples)?.into());
    }
    let [a, b] = bisect(f, node, true, samples)?;
    let mut out = Vec::with_capacity(4);
    for half in [a, b] {
        if half.winding == 0 {
            out.push(half);
        } else {
            out.extend(bisect(f, half, false, samples)?);
        }
    }
    Ok(out)
}

fn process<F: AnalyticFn + ?Sized>(
    f: &F,
    node: Node,
    opts: &FinderOptions,
) -> Result<Vec<EigenvalueRecord>> {
    use rayon::prelude::*;
    if node.winding < 0 {
        return Err(Error::PhaseTracking(format!("negative winding {} in {:?}", node.winding, node.rect)));
    }
    if node.winding == 0 {
        return Ok(Vec::new());
    }
    let side = node.rect.width().max(node.rect.height());
    let small = side <= 10.0 * opts.refine_tol;
    let tag = |k| SectorTag::of(k, opts.sector_eps);
    if node.winding == 1 {
        let c = node.rect.center();
        let h = 0.25 * node.rect.width().min(node.rect.height());
        if let Some((k, step)) = muller::refine(f, c, h, opts.refine_tol) {
            if node.rect.contains(k) {
                return Ok(vec![EigenvalueRecord {
                    k,
                    multiplicity: 1,
                    residual: step,
                    sector: tag(k),
                    resolved: true,
                    verified: None,
                }]);
            }
        }
    }
    if small || node.depth >= opts.max_depth {
        let c = node.rect.center();
        return Ok(vec![EigenvalueRecord {
            k: c,
            multiplicity: node.winding as u32,
            residual: side,
            sector: tag(c),
            resolved: false,
            verified: None,
        }]);
    }
    let children = split(f, node, opts.samples_per_edge)?;
    let parts: Vec<Result<Vec<EigenvalueRecord>>> =
        children.into_par_iter().map(|ch| process(f, ch, opts)).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Muller's method from `seed`; returns the root and the last step size.
pub fn polish<F: AnalyticFn + ?Sized>(f: &F, seed: Complex64, h: f64, tol: f64) -> Option<(Complex64, f64)> {
    muller::refine(f, seed, h, tol)
}

/// All zeros of `f` inside `rect`, sorted by real then imaginary part.
pub fn find_zeros<F: AnalyticFn + ?Sized>(f: &F, rect: Rect, opts: &FinderOptions) -> Result<ZeroSet> {
    use rayon::prelude::*;
    if !(opts.refine_tol > 0.0) {
        return Err(Error::Domain("refine_tol must be positive".into()));
    }
    let root = root_node(f, rect, opts.samples_per_edge)?;
    let region = SearchRegion { rect: root.rect, winding: root.winding, depth: 0 };
    let mut records = process(f, root, opts)?;
    if opts.verify {
        records.par_iter_mut().for_each(|rec| {
            let side = VERIFY_SIDE.max(4.0 * rec.residual);
            let w = winding_count(f, Rect::centered(rec.k, side), 8);
            rec.verified = Some(matches!(w, Ok(n) if n == rec.multiplicity as i64));
        });
    }
    records.sort_by(|a, b| a.k.re.total_cmp(&b.k.re).then(a.k.im.total_cmp(&b.k.im)));
    Ok(ZeroSet { records, region })
}

/// Angle of `z` measured from `alpha` into `[0, 2π)`.
pub(crate) fn angle_from(z: Complex64, alpha: f64) -> f64 {
    (z.arg() - alpha).rem_euclid(TAU)
}
