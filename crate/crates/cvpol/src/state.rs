//! Zero-mean two-mode Gaussian field states.
//!
//! A pair of orthogonally polarized modes `A_0`, `A_1` with bosonic commutators
//! `[A_i, A_j†] = δ_ij` is described to second order by the complex moment
//! matrices
//!
//! ```text
//! M_ij = ⟨δA_i δA_j⟩        (symmetric)
//! N_ij = ⟨δA_i† δA_j⟩       (Hermitian, N_ii ≥ 0)
//! ```
//!
//! Quadratures follow the convention `X(θ) = A† e^{iθ} + A e^{-iθ}`,
//! `Y(θ) = X(θ + π/2)`, so the vacuum has unit variance in every quadrature
//! and `[X, Y] = 2i`. All variances in this crate are shot-noise normalized.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::transform::PolarizationTransform;

/// Convention tag written into every serialized artifact: vacuum quadrature
/// variance is 1 and the separability bound of the Duan criterion is 2.
pub const CONVENTION: &str = "vacuum_variance_1";

/// Construction tolerance for algebraic structure (symmetry, Hermiticity,
/// unitarity).
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Verification tolerance for derived positivity checks (Heisenberg).
pub const VERIFICATION_TOL: f64 = 1e-9;

/// Reduce an angle to `[0, π)`; quadrature variances are π-periodic.
pub fn wrap_angle_pi(theta: f64) -> f64 {
    let r = theta.rem_euclid(PI);
    if r >= PI {
        r - PI
    } else {
        r
    }
}

/// Phenomenological description of a single squeezed mode: variance `v_min`
/// at quadrature angle `theta_sq`, `v_max` on the orthogonal quadrature.
///
/// Impure squeezing (`v_min * v_max > 1`) is allowed; the Heisenberg bound
/// `v_min * v_max >= 1` is enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedModeParams {
    v_min: f64,
    v_max: f64,
    theta_sq: f64,
}

impl SqueezedModeParams {
    pub fn new(v_min: f64, v_max: f64, theta_sq: f64) -> Result<Self> {
        if !v_min.is_finite() || !v_max.is_finite() || !theta_sq.is_finite() {
            return Err(Error::InvalidParams(
                "squeezed mode parameters must be finite".into(),
            ));
        }
        if v_min <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "v_min = {v_min} violates v_min > 0"
            )));
        }
        if v_max < v_min {
            return Err(Error::InvalidParams(format!(
                "v_max = {v_max} violates v_max >= v_min = {v_min}"
            )));
        }
        if v_min * v_max < 1.0 - CONSTRUCTION_TOL {
            return Err(Error::InvalidParams(format!(
                "v_min * v_max = {} violates the Heisenberg bound v_min * v_max >= 1",
                v_min * v_max
            )));
        }
        Ok(Self {
            v_min,
            v_max,
            theta_sq: wrap_angle_pi(theta_sq),
        })
    }

    /// Minimum-uncertainty squeezing: `v_max = 1 / v_min`.
    pub fn pure(v_min: f64, theta_sq: f64) -> Result<Self> {
        if v_min <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "v_min = {v_min} violates v_min > 0"
            )));
        }
        Self::new(v_min, 1.0 / v_min, theta_sq)
    }

    pub fn vacuum() -> Self {
        Self {
            v_min: 1.0,
            v_max: 1.0,
            theta_sq: 0.0,
        }
    }

    pub fn v_min(&self) -> f64 {
        self.v_min
    }

    pub fn v_max(&self) -> f64 {
        self.v_max
    }

    pub fn theta_sq(&self) -> f64 {
        self.theta_sq
    }
}

/// Zero-mean two-mode Gaussian state in the complex moment representation.
///
/// The mean field is carried separately where needed (Stokes analysis); this
/// type describes fluctuations only. Values are immutable after construction
/// and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeGaussianState {
    m: Matrix2<C64>,
    n: Matrix2<C64>,
    basis_label: String,
}

impl TwoModeGaussianState {
    /// Validating constructor. Checks symmetry of `M`, Hermiticity and
    /// non-negative diagonal of `N` (tolerance scaled from 1e-12) and the
    /// Heisenberg condition `γ + iΩ ⪰ 0` (minimum eigenvalue above -1e-9).
    pub fn new(m: Matrix2<C64>, n: Matrix2<C64>, basis_label: impl Into<String>) -> Result<Self> {
        let scale = 1.0 + matrix_max_abs(&m).max(matrix_max_abs(&n));
        let tol = CONSTRUCTION_TOL * scale;

        for z in m.iter().chain(n.iter()) {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidParams("moment matrices must be finite".into()));
            }
        }
        if (m[(0, 1)] - m[(1, 0)]).norm() > tol {
            return Err(Error::InvalidParams(format!(
                "M is not symmetric: |M01 - M10| = {:.3e}",
                (m[(0, 1)] - m[(1, 0)]).norm()
            )));
        }
        if (n[(0, 1)] - n[(1, 0)].conj()).norm() > tol
            || n[(0, 0)].im.abs() > tol
            || n[(1, 1)].im.abs() > tol
        {
            return Err(Error::InvalidParams("N is not Hermitian".into()));
        }
        if n[(0, 0)].re < -tol || n[(1, 1)].re < -tol {
            return Err(Error::InvalidParams(format!(
                "N has a negative diagonal entry: N00 = {}, N11 = {}",
                n[(0, 0)].re,
                n[(1, 1)].re
            )));
        }

        let state = Self {
            m: symmetrize(&m),
            n: hermitize(&n),
            basis_label: basis_label.into(),
        };
        let min_eig = state.heisenberg_min_eigenvalue();
        if min_eig < -VERIFICATION_TOL {
            return Err(Error::InvalidParams(format!(
                "Heisenberg condition violated: min eig(γ + iΩ) = {min_eig:.3e}"
            )));
        }
        Ok(state)
    }

    /// The vacuum: `M = N = 0`, unit variance in every quadrature.
    pub fn vacuum() -> Self {
        Self {
            m: Matrix2::zeros(),
            n: Matrix2::zeros(),
            basis_label: "xy".into(),
        }
    }

    /// Two independently squeezed, uncorrelated modes (no cross moments).
    ///
    /// Mode `i` has variance `v_min` at angle `theta_sq(i)` and `v_max` on the
    /// orthogonal quadrature:
    /// `Δ²X_i(θ) = v_min cos²(θ - θ_sq) + v_max sin²(θ - θ_sq)`.
    pub fn independent_squeezed_pair(p_a: SqueezedModeParams, p_b: SqueezedModeParams) -> Self {
        let diag = |p: &SqueezedModeParams| -> (C64, C64) {
            let m = C64::from_polar((p.v_min - p.v_max) / 4.0, 2.0 * p.theta_sq);
            let n = C64::new((p.v_min + p.v_max - 2.0) / 4.0, 0.0);
            (m, n)
        };
        let (m_a, n_a) = diag(&p_a);
        let (m_b, n_b) = diag(&p_b);
        Self {
            m: Matrix2::new(m_a, C64::ZERO, C64::ZERO, m_b),
            n: Matrix2::new(n_a, C64::ZERO, C64::ZERO, n_b),
            basis_label: "xy".into(),
        }
    }

    pub fn m_matrix(&self) -> &Matrix2<C64> {
        &self.m
    }

    pub fn n_matrix(&self) -> &Matrix2<C64> {
        &self.n
    }

    /// Free-text basis tag; metadata only, never interpreted by the library.
    pub fn basis_label(&self) -> &str {
        &self.basis_label
    }

    pub fn with_basis_label(mut self, label: impl Into<String>) -> Self {
        self.basis_label = label.into();
        self
    }

    /// Transform mode operators as `A' = U A`; the moments map as
    /// `M' = U M Uᵀ` and `N' = U* N Uᵀ`. Unitarity of the transform is
    /// guaranteed by [`PolarizationTransform`], so this cannot fail and all
    /// state invariants are preserved. The basis label is kept; relabel with
    /// [`Self::with_basis_label`].
    pub fn apply(&self, t: &PolarizationTransform) -> Self {
        let u = t.matrix();
        let m = u * self.m * u.transpose();
        let n = u.conjugate() * self.n * u.transpose();
        Self {
            m: symmetrize(&m),
            n: hermitize(&n),
            basis_label: self.basis_label.clone(),
        }
    }

    /// `Δ²X_mode(θ) = 1 + 2 N_mm + 2 Re(e^{-2iθ} M_mm)`.
    pub fn quadrature_variance(&self, mode: usize, theta: f64) -> Result<f64> {
        if mode > 1 {
            return Err(Error::BadModeIndex(mode));
        }
        Ok(self.quadrature_variance_unchecked(mode, theta))
    }

    pub(crate) fn quadrature_variance_unchecked(&self, mode: usize, theta: f64) -> f64 {
        let m_mm = self.m[(mode, mode)];
        let n_mm = self.n[(mode, mode)].re;
        1.0 + 2.0 * n_mm + 2.0 * (C64::from_polar(1.0, -2.0 * theta) * m_mm).re
    }

    /// The anomalous cross moment `⟨δA_0 δA_1⟩ = M_01`; the quantity whose
    /// magnitude the maximally-correlated-basis search maximizes.
    pub fn cross_moment(&self) -> C64 {
        self.m[(0, 1)]
    }

    /// Covariance `⟨X_0(θ) X_1(θ)⟩` of the two modes' quadratures at a
    /// common angle, `2 Re(e^{-2iθ} M_01) + 2 Re(N_01)`.
    pub fn cross_quadrature_covariance(&self, theta: f64) -> f64 {
        2.0 * (C64::from_polar(1.0, -2.0 * theta) * self.m[(0, 1)]).re + 2.0 * self.n[(0, 1)].re
    }

    /// Real 4×4 covariance matrix of `R = (X_0, Y_0, X_1, Y_1)` with all
    /// quadratures referenced to `theta_ref`:
    /// `γ_ij = ⟨δR_i δR_j + δR_j δR_i⟩ / 2`.
    ///
    /// Diagonal entries are the quadrature variances at `theta_ref` and
    /// `theta_ref + π/2`; the vacuum gives the identity matrix.
    pub fn covariance_matrix(&self, theta_ref: f64) -> Matrix4<f64> {
        // Rotated moments; the right-angle offsets between X and Y are
        // folded in exactly rather than through cos(π/2).
        let rot = C64::from_polar(1.0, -2.0 * theta_ref);
        let m00 = rot * self.m[(0, 0)];
        let m11 = rot * self.m[(1, 1)];
        let m01 = rot * self.m[(0, 1)];
        let n00 = self.n[(0, 0)].re;
        let n11 = self.n[(1, 1)].re;
        let n01 = self.n[(0, 1)];

        let mut g = Matrix4::zeros();
        // Single-mode blocks.
        g[(0, 0)] = 1.0 + 2.0 * n00 + 2.0 * m00.re;
        g[(1, 1)] = 1.0 + 2.0 * n00 - 2.0 * m00.re;
        g[(0, 1)] = 2.0 * m00.im;
        g[(2, 2)] = 1.0 + 2.0 * n11 + 2.0 * m11.re;
        g[(3, 3)] = 1.0 + 2.0 * n11 - 2.0 * m11.re;
        g[(2, 3)] = 2.0 * m11.im;
        // Cross-mode block.
        g[(0, 2)] = 2.0 * m01.re + 2.0 * n01.re;
        g[(1, 3)] = -2.0 * m01.re + 2.0 * n01.re;
        g[(0, 3)] = 2.0 * m01.im + 2.0 * n01.im;
        g[(1, 2)] = 2.0 * m01.im - 2.0 * n01.im;
        for i in 0..4 {
            for j in (i + 1)..4 {
                g[(j, i)] = g[(i, j)];
            }
        }
        g
    }

    /// Minimum eigenvalue of `γ + iΩ`, where `Ω = diag(J, J)`,
    /// `J = [[0, 1], [-1, 0]]` is the symplectic form in the `[X, Y] = 2i`
    /// convention. Physical states satisfy `γ + iΩ ⪰ 0`; the vacuum and pure
    /// squeezed states saturate the bound.
    pub fn heisenberg_min_eigenvalue(&self) -> f64 {
        let g = self.covariance_matrix(0.0);
        let mut h = g.map(|x| C64::new(x, 0.0));
        let i = C64::I;
        // γ + iΩ is Hermitian.
        h[(0, 1)] += i;
        h[(1, 0)] -= i;
        h[(2, 3)] += i;
        h[(3, 2)] -= i;
        let eig = SymmetricEigen::new(h);
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Largest quadrature standard deviation over both modes and all angles;
    /// the fluctuation scale against which the Stokes linearization is judged.
    pub fn max_quadrature_std(&self) -> f64 {
        let per_mode = |m: usize| {
            let peak = 1.0 + 2.0 * self.n[(m, m)].re + 2.0 * self.m[(m, m)].norm();
            peak.max(0.0).sqrt()
        };
        per_mode(0).max(per_mode(1))
    }
}

fn symmetrize(m: &Matrix2<C64>) -> Matrix2<C64> {
    let off = (m[(0, 1)] + m[(1, 0)]) * C64::new(0.5, 0.0);
    Matrix2::new(m[(0, 0)], off, off, m[(1, 1)])
}

fn hermitize(n: &Matrix2<C64>) -> Matrix2<C64> {
    let off = (n[(0, 1)] + n[(1, 0)].conj()) * C64::new(0.5, 0.0);
    Matrix2::new(
        C64::new(n[(0, 0)].re, 0.0),
        off,
        off.conj(),
        C64::new(n[(1, 1)].re, 0.0),
    )
}

fn matrix_max_abs(m: &Matrix2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
