//! Linear polarization optics as 2×2 unitary Jones matrices acting on the
//! mode operators, `A' = U A`.
//!
//! Wave plates, basis rotations and mode phases are all elements of U(2);
//! composing them stays in U(2), so every reachable basis change preserves
//! the Gaussian state invariants.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_PI_8;

use crate::error::{Error, Result};
use crate::state::CONSTRUCTION_TOL;

/// A unitary mode transformation. Unitarity (`U†U = I` to 1e-12 per entry)
/// is checked at construction, so holding a value is proof of validity.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarizationTransform {
    u: Matrix2<C64>,
}

impl PolarizationTransform {
    /// Wrap an arbitrary matrix, rejecting non-unitary input.
    pub fn new(u: Matrix2<C64>) -> Result<Self> {
        let dev = unitarity_deviation(&u);
        if dev > CONSTRUCTION_TOL {
            return Err(Error::NonUnitary {
                max_dev: dev,
                tol: CONSTRUCTION_TOL,
            });
        }
        Ok(Self { u })
    }

    pub fn identity() -> Self {
        Self {
            u: Matrix2::identity(),
        }
    }

    /// Rotation of the polarization plane by `angle`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            u: Matrix2::new(
                C64::new(c, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
                C64::new(c, 0.0),
            ),
        }
    }

    /// Ideal half-wave plate with its fast axis at `axis_angle`:
    /// `[[cos 2ρ, sin 2ρ], [sin 2ρ, -cos 2ρ]]`.
    pub fn half_wave(axis_angle: f64) -> Self {
        let (s, c) = (2.0 * axis_angle).sin_cos();
        Self {
            u: Matrix2::new(
                C64::new(c, 0.0),
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(-c, 0.0),
            ),
        }
    }

    /// Half-wave plate at 22.5°, mapping the x,y modes onto the ±45° modes
    /// `(A_x ± A_y)/√2`.
    pub fn pm45_basis() -> Self {
        Self::half_wave(FRAC_PI_8)
    }

    /// Independent phases on the two modes, `diag(e^{iφ_a}, e^{iφ_b})`.
    pub fn mode_phases(phi_a: f64, phi_b: f64) -> Self {
        Self {
            u: Matrix2::new(
                C64::from_polar(1.0, phi_a),
                C64::ZERO,
                C64::ZERO,
                C64::from_polar(1.0, phi_b),
            ),
        }
    }

    /// Quarter-wave plate aligned with the mode axes: `diag(1, i)`. Rotates
    /// the noise ellipse of mode 1 by π/2 so that `X_{A'_1}(θ) = Y_{A_1}(θ)`.
    pub fn quarter_wave_y() -> Self {
        Self {
            u: Matrix2::new(C64::ONE, C64::ZERO, C64::ZERO, C64::I),
        }
    }

    /// Mixing of a decoupled mode pair into the maximally correlated pair,
    /// `A_± = (A_0 ± i A_1)/√2`.
    pub fn correlating_mix() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            u: Matrix2::new(h, h * C64::I, h, -h * C64::I),
        }
    }

    /// Chart of U(2) by four angles:
    /// `U = e^{iφ_g} [[e^{iφ_1} cos η, e^{iφ_2} sin η], [-e^{-iφ_2} sin η, e^{-iφ_1} cos η]]`.
    pub fn from_angles(eta: f64, phi1: f64, phi2: f64, phi_global: f64) -> Self {
        let (s, c) = eta.sin_cos();
        let g = C64::from_polar(1.0, phi_global);
        let e1 = C64::from_polar(1.0, phi1);
        let e2 = C64::from_polar(1.0, phi2);
        Self {
            u: Matrix2::new(
                g * e1 * c,
                g * e2 * s,
                -g * e2.conj() * s,
                g * e1.conj() * c,
            ),
        }
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.u
    }

    /// The inverse transform, `U†`.
    pub fn inverse(&self) -> Self {
        Self {
            u: self.u.adjoint(),
        }
    }

    /// Composition `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &Self) -> Self {
        Self {
            u: other.u * self.u,
        }
    }

    /// The real 4×4 matrix `S` acting on quadratures `(X_0, Y_0, X_1, Y_1)`
    /// at a fixed reference angle: covariance matrices map as `γ' = S γ Sᵀ`.
    /// Built from 2×2 blocks `[[Re U_jk, -Im U_jk], [Im U_jk, Re U_jk]]`, the
    /// usual complex-to-real embedding; it is symplectic for unitary `U`.
    pub fn symplectic(&self) -> Matrix4<f64> {
        let mut s = Matrix4::zeros();
        for j in 0..2 {
            for k in 0..2 {
                let z = self.u[(j, k)];
                s[(2 * j, 2 * k)] = z.re;
                s[(2 * j, 2 * k + 1)] = -z.im;
                s[(2 * j + 1, 2 * k)] = z.im;
                s[(2 * j + 1, 2 * k + 1)] = z.re;
            }
        }
        s
    }
}

/// Max-entry deviation of `U†U` from the identity.
pub(crate) fn unitarity_deviation(u: &Matrix2<C64>) -> f64 {
    let d = u.adjoint() * u - Matrix2::identity();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
