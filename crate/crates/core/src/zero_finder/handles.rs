//! Function handles for the zero finder.

use super::AnalyticFn;
use crate::determinant::Transmission;
use crate::error::{Error, Result};
use crate::media::MediumProfile;
use crate::radial_solver::{propagate, OdeSettings};
use crate::scaled::Scaled;
use num_complex::Complex64;

/// Attaches an exponential type to a plain closure.
pub struct WithEnvelope<F> {
    pub f: F,
    pub rate: f64,
}

impl<F> AnalyticFn for WithEnvelope<F>
where
    F: Fn(Complex64) -> Result<Scaled> + Sync,
{
    fn eval(&self, z: Complex64) -> Result<Scaled> {
        (self.f)(z)
    }

    fn growth_rate(&self) -> f64 {
        self.rate
    }
}

impl AnalyticFn for Transmission {
    fn eval(&self, z: Complex64) -> Result<Scaled> {
        Ok(self.eval_d(z)?.scaled())
    }

    fn growth_rate(&self) -> f64 {
        self.constants.type_sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// `y(1; k)`
    Dirichlet,
    /// `y'(1; k)`
    Neumann,
}

/// `y(1; k)` or `y'(1; k)` as a function of k.
#[derive(Debug, Clone)]
pub struct BoundaryValueFn {
    pub profile: MediumProfile,
    pub settings: OdeSettings,
    pub kind: BoundaryKind,
    /// `∫₀¹ √ε₁`, the growth rate in `|Im k|`.
    pub b: f64,
}

impl BoundaryValueFn {
    pub fn new(profile: MediumProfile, settings: OdeSettings, kind: BoundaryKind) -> Result<Self> {
        crate::media::ensure_valid(&profile)?;
        settings.validate()?;
        let (b, _) = profile.phase_integrals(1.0, crate::media::DEFAULT_QUAD_TOL)?;
        Ok(Self { profile, settings, kind, b })
    }
}

impl AnalyticFn for BoundaryValueFn {
    fn eval(&self, z: Complex64) -> Result<Scaled> {
        let t = propagate(&self.profile, z, &self.settings)?;
        let v = match self.kind {
            BoundaryKind::Dirichlet => t.y(),
            BoundaryKind::Neumann => t.dy(),
        };
        if !v.value.is_finite() {
            return Err(Error::NonFinite { r: 1.0 });
        }
        Ok(v)
    }

    fn growth_rate(&self) -> f64 {
        self.b
    }
}
