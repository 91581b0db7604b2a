//! Eigenvalue continuation under perturbations of the absorption `γ₁`.

use crate::determinant::{DetSettings, Transmission};
use crate::error::{Error, Result};
use crate::media::MediumProfile;
use crate::poly::PiecewisePoly;
use crate::zero_finder::{find_zeros, polish, FinderOptions, Rect};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One-parameter family `γ₁(s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `γ₁' = s·γ₁`; s = 1 is the base medium.
    Scale,
    /// `γ₁' = γ₁ + s·δγ`; s = 0 is the base medium.
    Additive { delta: PiecewisePoly },
}

impl Family {
    pub fn identity(&self) -> f64 {
        match self {
            Family::Scale => 1.0,
            Family::Additive { .. } => 0.0,
        }
    }

    pub fn apply(&self, base: &MediumProfile, s: f64) -> MediumProfile {
        let gamma = match self {
            Family::Scale => base.gamma1.scaled(s),
            Family::Additive { delta } => base.gamma1.combine(1.0, delta, s),
        };
        base.with_gamma1(gamma)
    }
}

/// `sup|γ₁' − γ₁| / inf ε₁`.
pub fn eta_of(base: &MediumProfile, perturbed: &MediumProfile) -> Result<f64> {
    same_epsilon(base, perturbed)?;
    let diff = perturbed.gamma1.combine(1.0, &base.gamma1, -1.0);
    Ok(diff.max_abs() / base.inf_epsilon1())
}

/// `(ε₀ + sup ε₁)/(4 ε₀ inf ε₁) · (γ₀ + sup γ₁')`, the perturbation size
/// measured from the lossless medium.
pub fn eta_from_lossless(perturbed: &MediumProfile) -> f64 {
    let (e0, g0) = (perturbed.epsilon0, perturbed.gamma0);
    let sup_g = perturbed.gamma1.extrema().1 .0;
    (e0 + perturbed.sup_epsilon1()) / (4.0 * e0 * perturbed.inf_epsilon1()) * (g0 + sup_g)
}

fn same_epsilon(a: &MediumProfile, b: &MediumProfile) -> Result<()> {
    let d = a.epsilon1.combine(1.0, &b.epsilon1, -1.0);
    if d.max_abs() != 0.0 || a.epsilon0 != b.epsilon0 || a.gamma0 != b.gamma0 {
        return Err(Error::Domain("perturbations may only change γ₁".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationRun {
    pub base: MediumProfile,
    pub family: Family,
    pub s_values: Vec<f64>,
    pub eta: Vec<f64>,
    pub eta_from_lossless: Vec<f64>,
    /// `trajectories[j][i]` is eigenvalue j at `s_values[i]`.
    pub trajectories: Vec<Vec<Complex64>>,
    /// Trajectories whose continuation failed at some step.
    pub broken: Vec<usize>,
    /// `(s index, j, j')` where two trajectories met.
    pub collisions: Vec<(usize, usize, usize)>,
}

impl PerturbationRun {
    /// `max_j |k_j(s) − k_j(s₀)|` per s.
    pub fn max_displacement(&self) -> Vec<f64> {
        (0..self.s_values.len())
            .map(|i| {
                self.trajectories
                    .iter()
                    .map(|t| (t[i] - t[0]).norm())
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}

/// Search window `[0.5, 0.5 + n·π/B + 2] × [−2(C + D + 1), 0.5]`.
pub fn eigenvalue_window(t: &Transmission, num_eigs: usize) -> Result<Rect> {
    let c = &t.constants;
    Rect::new(0.5, 0.5 + num_eigs as f64 * PI / c.B + 2.0, -2.0 * (c.C + c.D + 1.0), 0.5)
}

pub fn track_eigenvalues(
    base: &MediumProfile,
    family: &Family,
    s_values: &[f64],
    num_eigs: usize,
    settings: &DetSettings,
    opts: &FinderOptions,
) -> Result<PerturbationRun> {
    if s_values.first() != Some(&family.identity()) {
        return Err(Error::Domain(format!("s values must start at {}", family.identity())));
    }
    if s_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("s values must increase".into()));
    }
    if num_eigs == 0 {
        return Err(Error::Domain("num_eigs must be positive".into()));
    }
    let t0 = Transmission::new(base.clone(), *settings)?;
    let window = eigenvalue_window(&t0, num_eigs)?;
    let found = find_zeros(&t0, window, opts)?;
    let mut start: Vec<Complex64> = found.records.iter().map(|r| r.k).collect();
    if start.len() < num_eigs {
        return Err(Error::Domain(format!("only {} eigenvalues in {window:?}", start.len())));
    }
    start.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    start.truncate(num_eigs);

    let mut trajectories: Vec<Vec<Complex64>> = start.iter().map(|&k| vec![k]).collect();
    let mut eta = vec![0.0];
    let mut eta_ll = vec![eta_from_lossless(base)];
    let mut broken = Vec::new();
    let mut collisions = Vec::new();
    for (i, &s) in s_values.iter().enumerate().skip(1) {
        let profile = family.apply(base, s);
        eta.push(eta_of(base, &profile)?);
        eta_ll.push(eta_from_lossless(&profile));
        let prev: Vec<Complex64> = trajectories.iter().map(|t| t[i - 1]).collect();
        let step = advance(base, family, &prev, s_values[i - 1], s, settings, opts, 0)?;
        for (j, n) in step.iter().enumerate() {
            match n {
                Some(z) => trajectories[j].push(*z),
                None => {
                    if !broken.contains(&j) {
                        broken.push(j);
                    }
                    trajectories[j].push(prev[j]);
                }
            }
        }
        for a in 0..num_eigs {
            for b in a + 1..num_eigs {
                if (trajectories[a][i] - trajectories[b][i]).norm() <= 10.0 * opts.refine_tol {
                    collisions.push((i, a, b));
                }
            }
        }
    }
    Ok(PerturbationRun {
        base: base.clone(),
        family: family.clone(),
        s_values: s_values.to_vec(),
        eta,
        eta_from_lossless: eta_ll,
        trajectories,
        broken,
        collisions,
    })
}

/// Halvings of an s-step allowed when eigenvalues move more than half their
/// nearest-neighbour spacing.
const MAX_STEP_HALVINGS: usize = 14;

/// Continues every eigenvalue from `s_from` to `s_to`. A step is accepted when
/// each Muller run converges within half the nearest-neighbour spacing;
/// otherwise it is split in two. `None` marks trajectories that still fail
/// at the finest step.
#[allow(clippy::too_many_arguments)]
fn advance(
    base: &MediumProfile,
    family: &Family,
    prev: &[Complex64],
    s_from: f64,
    s_to: f64,
    settings: &DetSettings,
    opts: &FinderOptions,
    depth: usize,
) -> Result<Vec<Option<Complex64>>> {
    use rayon::prelude::*;
    let ts = Transmission::new(family.apply(base, s_to), *settings)?;
    let next: Vec<Option<Complex64>> = prev
        .par_iter()
        .enumerate()
        .map(|(j, &k)| {
            let guard = 0.5 * nearest_spacing(prev, j);
            polish(&ts, k, 1e-3 * guard.min(1.0), opts.refine_tol)
                .map(|(z, _)| z)
                .filter(|z| (z - k).norm() <= guard)
        })
        .collect();
    if next.iter().all(Option::is_some) || depth >= MAX_STEP_HALVINGS {
        return Ok(next);
    }
    let mid = 0.5 * (s_from + s_to);
    let halfway = advance(base, family, prev, s_from, mid, settings, opts, depth + 1)?;
    if halfway.iter().any(Option::is_none) {
        return Ok(halfway.iter().zip(next).map(|(h, n)| h.and(n)).collect());
    }
    let halfway: Vec<Complex64> = halfway.into_iter().map(Option::unwrap).collect();
    advance(base, family, &halfway, mid, s_to, settings, opts, depth + 1)
}

fn nearest_spacing(points: &[Complex64], j: usize) -> f64 {
    points
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != j)
        .map(|(_, p)| (p - points[j]).norm())
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_se: f64,
    pub intercept_se: f64,
    pub n: usize,
}

impl Regression {
    pub fn intercept_consistent_with_zero(&self) -> bool {
        self.intercept.abs() <= 2.0 * self.intercept_se
    }
}

/// Ordinary least squares of `y` on `x` with standard errors.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<Regression> {
    let n = x.len();
    if n != y.len() || n < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 paired points, got {n}")));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("all abscissae are equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let sigma2 = ssr / (nf - 2.0);
    let slope_se = (sigma2 / sxx).sqrt();
    let intercept_se = (sigma2 * (1.0 / nf + mx * mx / sxx)).sqrt();
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    Ok(Regression { slope, intercept, r_squared, slope_se, intercept_se, n })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisplacementSummary {
    pub fit: Regression,
    pub eta: Vec<f64>,
    pub max_displacement: Vec<f64>,
    /// Displacement is nondecreasing in η along the grid.
    pub monotone: bool,
}

pub fn displacement_vs_eta(run: &PerturbationRun) -> Result<DisplacementSummary> {
    if !run.broken.is_empty() {
        return Err(Error::BrokenTrajectories(run.broken.clone()));
    }
    if run.s_values.len() < 4 {
        return Err(Error::DegenerateFit(format!("need at least 4 s values, got {}", run.s_values.len())));
    }
    let disp = run.max_displacement();
    let fit = linear_fit(&run.eta, &disp)?;
    let mut order: Vec<usize> = (0..disp.len()).collect();
    order.sort_by(|&a, &b| run.eta[a].total_cmp(&run.eta[b]));
    let monotone = order.windows(2).all(|w| disp[w[1]] >= disp[w[0]]);
    Ok(DisplacementSummary { fit, eta: run.eta.clone(), max_displacement: disp, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> MediumProfile {
        MediumProfile::constant(3.0, 0.2, 1.0, 0.1)
    }

    #[test]
    fn eta_examples() {
        let b = MediumProfile::constant(4.0, 0.4, 1.0, 0.1);
        assert_eq!(eta_of(&b, &b).unwrap(), 0.0);
        let p = b.with_gamma1(PiecewisePoly::constant(0.6));
        assert!((eta_of(&b, &p).unwrap() - 0.05).abs() < 1e-15);
        let b2 = MediumProfile::constant(2.0, 0.3, 1.0, 0.0);
        let fam = Family::Additive { delta: PiecewisePoly::polynomial(vec![0.0, 0.1]) };
        assert!((eta_of(&b2, &fam.apply(&b2, 1.0)).unwrap() - 0.05).abs() < 1e-15);
        let other = MediumProfile::constant(3.5, 0.4, 1.0, 0.1);
        assert!(eta_of(&b, &other).is_err());
    }

    #[test]
    fn eta_is_linear_in_the_perturbation() {
        let b = MediumProfile::new(
            PiecewisePoly::polynomial(vec![2.0, 0.0, 1.0]),
            PiecewisePoly::polynomial(vec![0.2, 0.1]),
            1.0,
            0.1,
        );
        let fam = Family::Additive { delta: PiecewisePoly::polynomial(vec![0.05, -0.3, 0.2]) };
        let one = eta_of(&b, &fam.apply(&b, 1.0)).unwrap();
        let two = eta_of(&b, &fam.apply(&b, 2.0)).unwrap();
        let half = eta_of(&b, &fam.apply(&b, 0.5)).unwrap();
        assert!((two - 2.0 * one).abs() < 1e-15);
        assert!((half - 0.5 * one).abs() < 1e-15);
    }

    #[test]
    fn lossless_eta_formula() {
        let p = MediumProfile::constant(4.0, 0.4, 1.0, 0.1);
        // (1 + 4)/(4·1·4) · (0.1 + 0.4)
        assert!((eta_from_lossless(&p) - 5.0 / 16.0 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn fit_recovers_line_and_flags_degenerate() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!((f.r_squared - 1.0).abs() < 1e-14);
        assert!(linear_fit(&[1.0; 4], &y).is_err());
    }

    #[test]
    fn identity_step_has_no_displacement() {
        let run = track_eigenvalues(
            &base(),
            &Family::Scale,
            &[1.0, 1.1, 1.25, 1.5],
            4,
            &DetSettings::default(),
            &FinderOptions::default(),
        )
        .unwrap();
        let d = run.max_displacement();
        assert_eq!(d[0], 0.0);
        assert!(run.broken.is_empty() && run.collisions.is_empty());
        let summary = displacement_vs_eta(&run).unwrap();
        assert!(summary.monotone, "{summary:?}");
        assert!(summary.fit.slope > 0.0);
        assert!(track_eigenvalues(&base(), &Family::Scale, &[0.0, 1.0], 2, &DetSettings::default(), &FinderOptions::default()).is_err());
    }

    #[test]
    fn refined_grid_reproduces_endpoints() {
        let o = FinderOptions::default();
        let s = DetSettings::default();
        let coarse = track_eigenvalues(&base(), &Family::Scale, &[1.0, 1.2, 1.4], 3, &s, &o).unwrap();
        let fine = track_eigenvalues(&base(), &Family::Scale, &[1.0, 1.1, 1.2, 1.3, 1.4], 3, &s, &o).unwrap();
        for j in 0..3 {
            let a = coarse.trajectories[j].last().unwrap();
            let b = fine.trajectories[j].last().unwrap();
            assert!((a - b).norm() <= 10.0 * o.refine_tol + 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn all_zero_eta_is_degenerate() {
        let fam = Family::Additive { delta: PiecewisePoly::constant(0.0) };
        let run = track_eigenvalues(&base(), &fam, &[0.0, 0.5, 1.0, 1.5], 2, &DetSettings::default(), &FinderOptions::default())
            .unwrap();
        assert!(matches!(displacement_vs_eta(&run), Err(Error::DegenerateFit(_))));
    }
}
