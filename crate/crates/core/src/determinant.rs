//! The transmission determinant
//!
//! ```text
//! D(k) = det | y(1)          -j₀(kñ₀)          |
//!            | {y(r)/r}'|₁   -∂ᵣ j₀(kñ₀ r)|₁   |
//! ```
//!
//! with `ñ₀ = (ε₀ + iγ₀/k)^{1/2}`, plus the matching coefficients of the
//! exterior/interior ansatz and the closed-form sinh model of `D`.

use crate::error::{Error, Result};
use crate::media::{compute_constants, MediumProfile, SpectralConstants, DEFAULT_QUAD_TOL};
use crate::radial_solver::{propagate, BoundaryTrace, OdeSettings};
use crate::scaled::{sin_cos_scaled, Scaled};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Radius of the excluded disk around k = 0.
pub const DEFAULT_K_MIN: f64 = 0.05;
/// Scale-free |D| below which `matching_coefficients` refuses to divide.
pub const NEAR_EIGENVALUE_THRESHOLD: f64 = 1e-8;
const SERIES_RADIUS: f64 = 0.5;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetSettings {
    pub ode: OdeSettings,
    pub k_min: f64,
}

impl Default for DetSettings {
    fn default() -> Self {
        Self { ode: OdeSettings::default(), k_min: DEFAULT_K_MIN }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantValue {
    pub value: Complex64,
    pub log_scale: f64,
    pub k: Complex64,
}

impl DeterminantValue {
    pub fn scaled(&self) -> Scaled {
        Scaled::new(self.value, self.log_scale)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.scaled().to_complex()
    }
}

/// Which square root of `ε₀ + iγ₀/k` is used for ñ₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Principal,
    Negated,
}

/// `j₀(z) = sin z / z`.
pub fn spherical_j0(z: Complex64) -> Complex64 {
    if z.norm() < 1e-2 {
        let (a, _) = small_series(z);
        return a;
    }
    z.sin() / z
}

/// `j₀'(z) = cos z / z − sin z / z²`.
pub fn j0_prime(z: Complex64) -> Complex64 {
    if z.norm() < SERIES_RADIUS {
        let (_, b) = small_series(z);
        return b / z;
    }
    z.cos() / z - z.sin() / (z * z)
}

/// Power series of `(j₀(z), z j₀'(z))` about 0.
fn small_series(z: Complex64) -> (Complex64, Complex64) {
    let z2 = z * z;
    let mut term = Complex64::new(1.0, 0.0); // (-1)^n z^{2n} / (2n+1)!
    let mut j = term;
    let mut zdj = Complex64::new(0.0, 0.0);
    for n in 1..30 {
        let nf = n as f64;
        term = -term * z2 / ((2.0 * nf) * (2.0 * nf + 1.0));
        j += term;
        zdj += term * (2.0 * nf);
        if term.norm() < 1e-18 {
            break;
        }
    }
    (j, zdj)
}

/// `j₀(μ)` and `μ j₀'(μ)` sharing one scale factor `exp(|Im μ|)`.
fn j0_pair_scaled(mu: Complex64) -> (Complex64, Complex64, f64) {
    if mu.norm() < SERIES_RADIUS {
        let (j, zdj) = small_series(mu);
        return (j, zdj, 0.0);
    }
    let (s, c, t) = sin_cos_scaled(mu);
    (s / mu, c - s / mu, t)
}

/// `k ñ₀` on the requested branch, computed as `√(k²ε₀ + ikγ₀)` rescaled by
/// the principal root of `ε₀ + iγ₀/k` (well defined for k ≠ 0).
pub fn exterior_wavenumber(profile: &MediumProfile, k: Complex64, branch: Branch) -> Complex64 {
    let n0 = (Complex64::new(profile.epsilon0, 0.0) + I * profile.gamma0 / k).sqrt();
    let mu = k * n0;
    match branch {
        Branch::Principal => mu,
        Branch::Negated => -mu,
    }
}

fn check_k(k: Complex64, settings: &DetSettings) -> Result<()> {
    if !(k.norm() >= settings.k_min) {
        return Err(Error::BelowKMin { k, k_min: settings.k_min });
    }
    Ok(())
}

/// Assembles D from a boundary trace.
pub fn assemble(profile: &MediumProfile, trace: &BoundaryTrace, branch: Branch) -> DeterminantValue {
    let mu = exterior_wavenumber(profile, trace.k, branch);
    let (j0, dj0, t) = j0_pair_scaled(mu);
    let y = trace.y1;
    let dy_over_r = trace.dy1 - trace.y1; // {y/r}' at r = 1
    let value = -y * dj0 + j0 * dy_over_r;
    let d = Scaled::new(value, trace.log_scale + t).normalized();
    DeterminantValue { value: d.value, log_scale: d.log_scale, k: trace.k }
}

pub fn eval_d(profile: &MediumProfile, k: Complex64, settings: &DetSettings) -> Result<DeterminantValue> {
    eval_d_branch(profile, k, settings, Branch::Principal)
}

pub fn eval_d_branch(
    profile: &MediumProfile,
    k: Complex64,
    settings: &DetSettings,
    branch: Branch,
) -> Result<DeterminantValue> {
    check_k(k, settings)?;
    let trace = propagate(profile, k, &settings.ode)?;
    Ok(assemble(profile, &trace, branch))
}

/// Leading-order model
/// `D(k) ≈ sinh(ikA − ikB − C + D) / (ik [ε₁(0) ε₀]^{1/4})`.
pub fn eval_sinh_model(constants: &SpectralConstants, epsilon1_at_0: f64, k: Complex64) -> Result<Complex64> {
    Ok(eval_sinh_model_scaled(constants, epsilon1_at_0, k)?.to_complex())
}

pub fn eval_sinh_model_scaled(
    constants: &SpectralConstants,
    epsilon1_at_0: f64,
    k: Complex64,
) -> Result<Scaled> {
    if k == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("sinh model is singular at k = 0".into()));
    }
    let epsilon0 = constants.A * constants.A;
    let w = I * k * constants.A - I * k * constants.B - constants.C + constants.D;
    // sinh w = -i sin(iw)
    let (s, _, t) = sin_cos_scaled(I * w);
    let prefactor = I * k * (epsilon1_at_0 * epsilon0).powf(0.25);
    Ok(Scaled::new(-I * s / prefactor, t).normalized())
}

/// Scale-free magnitude `|D| e^{−|Im k|(A+B)}`.
pub fn scale_free_abs(d: &DeterminantValue, constants: &SpectralConstants) -> f64 {
    (d.scaled().ln_abs() - d.k.im.abs() * constants.type_sum()).exp()
}

/// Coefficients of `v = c₁ j₀(kñ₀r)` and `w = c₂ y(r)/r` from the
/// outgoing-wave determinants.
pub fn matching_coefficients(
    profile: &MediumProfile,
    k: Complex64,
    settings: &DetSettings,
) -> Result<(Complex64, Complex64)> {
    check_k(k, settings)?;
    let constants = compute_constants(profile, DEFAULT_QUAD_TOL)?;
    let trace = propagate(profile, k, &settings.ode)?;
    let d = assemble(profile, &trace, Branch::Principal);
    let residual = scale_free_abs(&d, &constants);
    if !(residual >= NEAR_EIGENVALUE_THRESHOLD) {
        return Err(Error::NearEigenvalue { k, residual });
    }
    let mu = exterior_wavenumber(profile, k, Branch::Principal);
    let (j0, dj0, t) = j0_pair_scaled(mu);
    // e^{ikr}/r and its r-derivative at r = 1
    let h = (I * k).exp();
    let dh = (I * k - 1.0) * h;
    let y = trace.y1;
    let dy_over_r = trace.dy1 - trace.y1;
    // c₁ = det[[y, h], [{y/r}', h']] / D; the trace scale cancels
    let num1 = y * dh - h * dy_over_r;
    let c1 = num1 / d.value * (trace.log_scale - d.log_scale).exp();
    // c₂ = det[[h, −j₀], [h', −∂j₀]] / D carries the inverse trace scale
    let num2 = -h * dj0 + j0 * dh;
    let c2 = num2 / d.value * (t - d.log_scale).exp();
    Ok((c1, c2))
}

/// Stateless bundle of a profile with its constants and settings; the usual
/// handle for repeated evaluation of D over k-grids.
#[derive(Debug, Clone)]
pub struct Transmission {
    pub profile: MediumProfile,
    pub constants: SpectralConstants,
    pub settings: DetSettings,
}

impl Transmission {
    pub fn new(profile: MediumProfile, settings: DetSettings) -> Result<Self> {
        crate::media::ensure_valid(&profile)?;
        settings.ode.validate()?;
        let constants = compute_constants(&profile, DEFAULT_QUAD_TOL)?;
        Ok(Self { profile, constants, settings })
    }

    pub fn eval_d(&self, k: Complex64) -> Result<DeterminantValue> {
        eval_d(&self.profile, k, &self.settings)
    }

    pub fn sinh_model(&self, k: Complex64) -> Result<Complex64> {
        eval_sinh_model(&self.constants, self.profile.epsilon1_at(0.0), k)
    }

    pub fn trace(&self, k: Complex64) -> Result<BoundaryTrace> {
        propagate(&self.profile, k, &self.settings.ode)
    }
}
