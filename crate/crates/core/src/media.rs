//! Refraction-index profiles `n₁(r) = ε₁(r) + iγ₁(r)/k` on the unit ball and
//! the spectral constants derived from them.

use crate::error::{Error, Result};
use crate::poly::PiecewisePoly;
use crate::quadrature;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Number of uniform samples used by [`validate_profile`] on top of the exact
/// per-piece extrema.
pub const VALIDATION_SAMPLES: usize = 1000;
/// Relative tolerance for value/derivative continuity at breakpoints.
pub const C2_TOL: f64 = 1e-9;
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MediumProfile {
    pub epsilon1: PiecewisePoly,
    pub gamma1: PiecewisePoly,
    pub epsilon0: f64,
    pub gamma0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct SpectralConstants {
    pub A: f64,
    pub B: f64,
    pub C: f64,
    pub D: f64,
}

impl SpectralConstants {
    /// Exponential type of the determinant.
    pub fn type_sum(&self) -> f64 {
        self.A + self.B
    }

    /// Predicted zero density `(A + B) / π` near each real half-axis.
    pub fn predicted_density(&self) -> f64 {
        self.type_sum() / std::f64::consts::PI
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EpsilonNotPositive { r: f64, value: f64 },
    GammaNegative { r: f64, value: f64 },
    Epsilon0NotPositive(f64),
    Gamma0Negative(f64),
    NotC2 { function: &'static str, r: f64, derivative: usize, jump: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::EpsilonNotPositive { r, value } => write!(f, "epsilon1({r}) = {value} is not positive"),
            Violation::GammaNegative { r, value } => write!(f, "gamma1({r}) = {value} is negative"),
            Violation::Epsilon0NotPositive(v) => write!(f, "epsilon0 = {v} is not positive"),
            Violation::Gamma0Negative(v) => write!(f, "gamma0 = {v} is negative"),
            Violation::NotC2 { function, r, derivative, jump } => {
                write!(f, "{function} derivative {derivative} jumps by {jump:e} at r = {r}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Breakpoint discontinuities; only fatal for the Liouville frame.
    pub c2_issues: Vec<Violation>,
    /// Soft warnings: γ₁ touching zero is admitted but flagged.
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_c2(&self) -> bool {
        self.c2_issues.is_empty()
    }
}

/// Everything returned by [`eval_index`] at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexSample {
    pub n: Complex64,
    pub dn: Complex64,
    pub d2n: Complex64,
    pub epsilon: [f64; 3],
    pub gamma: [f64; 3],
}

impl MediumProfile {
    pub fn new(epsilon1: PiecewisePoly, gamma1: PiecewisePoly, epsilon0: f64, gamma0: f64) -> Self {
        Self { epsilon1, gamma1, epsilon0, gamma0 }
    }

    /// Homogeneous medium with constant ε₁, γ₁.
    pub fn constant(epsilon1: f64, gamma1: f64, epsilon0: f64, gamma0: f64) -> Self {
        Self::new(
            PiecewisePoly::constant(epsilon1),
            PiecewisePoly::constant(gamma1),
            epsilon0,
            gamma0,
        )
    }

    pub fn is_absorbing(&self) -> bool {
        !self.gamma1.is_identically_zero()
    }

    /// Same ε₁ and exterior, different γ₁.
    pub fn with_gamma1(&self, gamma1: PiecewisePoly) -> Self {
        Self { gamma1, ..self.clone() }
    }

    /// Union of interior breakpoints of ε₁ and γ₁.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .epsilon1
            .breakpoints
            .iter()
            .chain(self.gamma1.breakpoints.iter())
            .copied()
            .collect();
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.dedup();
        b
    }

    pub fn epsilon1_at(&self, r: f64) -> f64 {
        self.epsilon1.eval(r)
    }

    pub fn inf_epsilon1(&self) -> f64 {
        self.epsilon1.extrema().0 .0
    }

    pub fn sup_epsilon1(&self) -> f64 {
        self.epsilon1.extrema().1 .0
    }

    /// `∫₀ʳ √ε₁` and `½∫₀ʳ γ₁/√ε₁`, the running phase and damping integrals.
    pub fn phase_integrals(&self, r: f64, tol: f64) -> Result<(f64, f64)> {
        let bps = self.breakpoints();
        let b = quadrature::integrate_pieces(&|x| self.epsilon1.eval(x).sqrt(), 0.0, r, &bps, tol)?;
        let d = if self.is_absorbing() {
            0.5 * quadrature::integrate_pieces(
                &|x| self.gamma1.eval(x) / self.epsilon1.eval(x).sqrt(),
                0.0,
                r,
                &bps,
                tol,
            )?
        } else {
            0.0
        };
        Ok((b, d))
    }
}

/// Checks positivity, nonnegativity and C² continuity.
pub fn validate_profile(profile: &MediumProfile) -> ValidationReport {
    let mut report = ValidationReport::default();
    if !(profile.epsilon0 > 0.0) {
        report.violations.push(Violation::Epsilon0NotPositive(profile.epsilon0));
    }
    if !(profile.gamma0 >= 0.0) {
        report.violations.push(Violation::Gamma0Negative(profile.gamma0));
    }

    // Exact extrema per piece, cross-checked by uniform sampling.
    let ((emin, er), _) = profile.epsilon1.extrema();
    let ((gmin, gr), _) = profile.gamma1.extrema();
    let (mut emin, mut er, mut gmin, mut gr) = (emin, er, gmin, gr);
    for i in 0..=VALIDATION_SAMPLES {
        let r = i as f64 / VALIDATION_SAMPLES as f64;
        let e = profile.epsilon1.eval(r);
        if e < emin {
            emin = e;
            er = r;
        }
        let g = profile.gamma1.eval(r);
        if g < gmin {
            gmin = g;
            gr = r;
        }
    }
    if !(emin > 0.0) {
        report.violations.push(Violation::EpsilonNotPositive { r: er, value: emin });
    }
    if gmin < 0.0 {
        report.violations.push(Violation::GammaNegative { r: gr, value: gmin });
    } else if gmin == 0.0 && profile.is_absorbing() {
        report
            .warnings
            .push(format!("gamma1 vanishes at r = {gr} (strict positivity not met)"));
    }

    for (name, f) in [("epsilon1", &profile.epsilon1), ("gamma1", &profile.gamma1)] {
        for i in 1..f.num_pieces() {
            let (left, right) = f.one_sided(i);
            for d in 0..3 {
                let jump = (left[d] - right[d]).abs();
                let scale = left[d].abs().max(right[d].abs()).max(1.0);
                if jump > C2_TOL * scale {
                    report.c2_issues.push(Violation::NotC2 {
                        function: name,
                        r: f.breakpoints[i],
                        derivative: d,
                        jump,
                    });
                }
            }
        }
    }
    report
}

/// Fails with the first violation, if any.
pub fn ensure_valid(profile: &MediumProfile) -> Result<()> {
    let report = validate_profile(profile);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidProfile(v.to_string())),
    }
}

/// As [`ensure_valid`], additionally requiring C² continuity at breakpoints.
pub fn ensure_c2(profile: &MediumProfile) -> Result<()> {
    ensure_valid(profile)?;
    let report = validate_profile(profile);
    match report.c2_issues.first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidProfile(format!("{v:?}"))),
    }
}

/// `A = √ε₀`, `B = ∫√ε₁`, `C = γ₀/(2√ε₀)`, `D = ½∫γ₁/√ε₁`.
pub fn compute_constants(profile: &MediumProfile, tol: f64) -> Result<SpectralConstants> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let (b, d) = profile.phase_integrals(1.0, tol)?;
    let a = profile.epsilon0.sqrt();
    Ok(SpectralConstants { A: a, B: b, C: profile.gamma0 / (2.0 * a), D: d })
}

/// `n₁(r) = ε₁(r) + iγ₁(r)/k` together with its r-derivatives.
pub fn eval_index(profile: &MediumProfile, r: f64, k: Complex64) -> Result<IndexSample> {
    let epsilon = profile.epsilon1.eval3(r);
    let gamma = profile.gamma1.eval3(r);
    let absorbing = profile.is_absorbing();
    if absorbing && k == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroFrequency);
    }
    let i = Complex64::new(0.0, 1.0);
    let part = |d: usize| {
        if absorbing {
            epsilon[d] + i * gamma[d] / k
        } else {
            Complex64::new(epsilon[d], 0.0)
        }
    };
    Ok(IndexSample { n: part(0), dn: part(1), d2n: part(2), epsilon, gamma })
}

// --- JSON schema -----------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Constant { constant: f64 },
    Pieces { breakpoints: Vec<f64>, coeffs: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub epsilon0: f64,
    pub gamma0: f64,
    pub epsilon1: FunctionSpec,
    pub gamma1: FunctionSpec,
}

impl FunctionSpec {
    fn into_poly(self, path: &str) -> Result<PiecewisePoly> {
        match self {
            FunctionSpec::Constant { constant } => Ok(PiecewisePoly::constant(constant)),
            FunctionSpec::Pieces { breakpoints, coeffs } => PiecewisePoly::new(breakpoints, coeffs)
                .map_err(|e| Error::InvalidProfile(format!("{path}: {e}"))),
        }
    }
}

impl From<&MediumProfile> for ProfileSpec {
    fn from(p: &MediumProfile) -> Self {
        let f = |q: &PiecewisePoly| FunctionSpec::Pieces {
            breakpoints: q.breakpoints.clone(),
            coeffs: q.coeffs.clone(),
        };
        ProfileSpec {
            epsilon0: p.epsilon0,
            gamma0: p.gamma0,
            epsilon1: f(&p.epsilon1),
            gamma1: f(&p.gamma1),
        }
    }
}

impl TryFrom<ProfileSpec> for MediumProfile {
    type Error = Error;
    fn try_from(s: ProfileSpec) -> Result<Self> {
        Ok(MediumProfile::new(
            s.epsilon1.into_poly("epsilon1")?,
            s.gamma1.into_poly("gamma1")?,
            s.epsilon0,
            s.gamma0,
        ))
    }
}

impl MediumProfile {
    /// Parses the JSON profile schema; errors name the offending JSON path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: ProfileSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::InvalidProfile(format!("at `{path}`: {}", e.inner()))
        })?;
        MediumProfile::try_from(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProfileSpec::from(self)).expect("profile serializes")
    }
}
