//! Continuous-variable entanglement of two polarized light modes.
//!
//! `cvpol` models a pair of orthogonally polarized Gaussian field modes at
//! the level of their second moments, applies polarization optics (wave
//! plates, basis rotations) to them, and evaluates entanglement measures:
//!
//! - the Duan inseparability criterion `I(θ) < 2` and its minimization over
//!   quadrature angle and polarization basis ([`metrics`]);
//! - the standard-form covariance parameters `(n, k)` and the entanglement
//!   of formation of symmetric states ([`metrics::eof_symmetric`]);
//! - Stokes-operator polarization entanglement of two bright beams obtained
//!   by mixing the modes with a strong phase-locked field ([`stokes`]);
//! - stepped-phase balanced-homodyne records with reproducible seeded
//!   sampling and per-bin variance estimation ([`homodyne`]).
//!
//! # Conventions
//!
//! Quadratures are `X(θ) = A† e^{iθ} + A e^{-iθ}` and `Y(θ) = X(θ + π/2)`,
//! so the vacuum has variance 1 in every quadrature, `[X, Y] = 2i`, and the
//! separability bound of the criterion is 2. All serialized artifacts carry
//! the tag [`CONVENTION`]. States are zero-mean; strong-field amplitudes
//! enter only the Stokes analysis and are carried separately.
//!
//! # Example
//!
//! Both modes squeezed 5% below shot noise on orthogonal quadratures makes
//! the ±45° modes inseparable:
//!
//! ```
//! use cvpol::{SqueezedModeParams, TwoModeGaussianState, PolarizationTransform};
//! use cvpol::metrics::duan_minimum;
//! use std::f64::consts::FRAC_PI_2;
//!
//! let x = SqueezedModeParams::pure(0.95, 0.0)?;
//! let y = SqueezedModeParams::pure(0.95, FRAC_PI_2)?;
//! let pm45 = TwoModeGaussianState::independent_squeezed_pair(x, y)
//!     .apply(&PolarizationTransform::pm45_basis());
//! let (_, value) = duan_minimum(&pm45);
//! assert!((value - 1.90).abs() < 1e-12);
//! # Ok::<(), cvpol::Error>(())
//! ```
//!
//! All types are immutable values; every operation is safe to call
//! concurrently on shared states.

pub mod error;
pub mod homodyne;
pub mod io;
pub mod metrics;
mod optim;
pub mod state;
pub mod stokes;
pub mod transform;

pub use error::{Error, Result};
pub use metrics::{EntanglementReport, StandardForm};
pub use state::{wrap_angle_pi, SqueezedModeParams, TwoModeGaussianState, CONVENTION};
pub use stokes::{BrightBeamPair, StokesReport};
pub use transform::PolarizationTransform;
