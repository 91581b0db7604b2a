//! Interior transmission eigenvalues of spherically symmetric absorbing media.
//!
//! A medium is a ball of radius 1 with permittivity ε₁(r) and absorption γ₁(r)
//! inside a homogeneous exterior (ε₀, γ₀). The eigenvalues are the zeros of the
//! radial determinant [`determinant::Transmission::eval_d`].
//!
//! ```no_run
//! use itep::determinant::{DetSettings, Transmission};
//! use itep::media::MediumProfile;
//! use itep::zero_finder::{find_zeros, FinderOptions, Rect};
//!
//! let t = Transmission::new(MediumProfile::constant(3.0, 0.2, 1.0, 0.1), DetSettings::default())?;
//! let set = find_zeros(&t, Rect::new(0.5, 16.0, -2.0, 2.0)?, &FinderOptions::default())?;
//! for r in &set.records {
//!     println!("{} (multiplicity {})", r.k, r.multiplicity);
//! }
//! # Ok::<(), itep::Error>(())
//! ```

// `!(x > 0.0)` is used on purpose to reject NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod determinant;
pub mod error;
pub mod zero_finder;
pub mod media;
pub mod poly;
pub mod quadrature;
pub mod radial_solver;
pub mod scaled;
pub mod stability;

pub use error::{Error, Result};
