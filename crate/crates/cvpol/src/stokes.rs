//! Polarization entanglement of two bright beams in Stokes-operator
//! variables.
//!
//! The ±45° modes `A'_x, A'_y` are spatially separated on a polarizing
//! beamsplitter and each is mixed with a strong field `B` of amplitude
//! `α_B` and locked phase `θ_B`. With `|α_B|` far above the fluctuation
//! scale, the Stokes fluctuations linearize to
//!
//! ```text
//! δS₂^α =  α_B δX'_x(θ_B)     δS₂^β = α_B δX'_y(θ_B)
//! δS₃^α = −α_B δY'_x(θ_B)     δS₃^β = α_B δY'_y(θ_B)
//! ```
//!
//! so the polarization criterion `I^S = [Δ²(S₂^α+S₂^β) + Δ²(S₃^α+S₃^β)]/2`
//! reduces to `|α_B|²` times the quadrature criterion of the underlying
//! modes at `θ_B`, and `I^S < 2|α_B|²` is the inseparability condition.

use nalgebra::Matrix4;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::metrics::EntanglementReport;
use crate::state::TwoModeGaussianState;

/// Default ratio `alpha_b / max quadrature std` required for the
/// linearization.
pub const DEFAULT_REGIME_FACTOR: f64 = 1e3;

/// Fluctuation state of the ±45° modes together with the strong-field
/// amplitude and locked phase of the mixing beam.
///
/// Constructors enforce the linearization regime
/// `alpha_b >= factor * max quadrature std`; holding a value means the
/// Stokes expressions below are valid.
#[derive(Debug, Clone)]
pub struct BrightBeamPair {
    state_pm45: TwoModeGaussianState,
    alpha_b: f64,
    theta_b: f64,
    phase_jitter_sigma: f64,
    b_field_noise: bool,
    regime_factor: f64,
}

impl BrightBeamPair {
    pub fn new(state_pm45: TwoModeGaussianState, alpha_b: f64, theta_b: f64) -> Result<Self> {
        Self::with_regime_factor(state_pm45, alpha_b, theta_b, DEFAULT_REGIME_FACTOR)
    }

    pub fn with_regime_factor(
        state_pm45: TwoModeGaussianState,
        alpha_b: f64,
        theta_b: f64,
        regime_factor: f64,
    ) -> Result<Self> {
        if !(regime_factor > 0.0) || !regime_factor.is_finite() {
            return Err(Error::InvalidParams(format!(
                "regime factor must be positive and finite, got {regime_factor}"
            )));
        }
        if !alpha_b.is_finite() || !theta_b.is_finite() {
            return Err(Error::InvalidParams(
                "alpha_b and theta_b must be finite".into(),
            ));
        }
        let max_std = state_pm45.max_quadrature_std();
        let required = regime_factor * max_std;
        if !(alpha_b > 0.0) || alpha_b < required {
            return Err(Error::Regime {
                alpha_b,
                required,
                factor: regime_factor,
                max_std,
            });
        }
        Ok(Self {
            state_pm45,
            alpha_b,
            theta_b,
            phase_jitter_sigma: 0.0,
            b_field_noise: false,
            regime_factor,
        })
    }

    /// Residual Gaussian phase error of the servo loop, in radians. Zero
    /// (the default) models an ideal lock.
    pub fn with_phase_jitter(mut self, sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParams(format!(
                "phase jitter sigma must be >= 0, got {sigma}"
            )));
        }
        self.phase_jitter_sigma = sigma;
        Ok(self)
    }

    /// Treat `B` as a coherent state instead of a noiseless classical
    /// amplitude; adds the beam's vacuum-level contribution to the Stokes
    /// variances (a relative `1/α_B²` effect that quantifies the
    /// linearization).
    pub fn with_b_field_noise(mut self, on: bool) -> Self {
        self.b_field_noise = on;
        self
    }

    pub fn state_pm45(&self) -> &TwoModeGaussianState {
        &self.state_pm45
    }

    pub fn alpha_b(&self) -> f64 {
        self.alpha_b
    }

    pub fn theta_b(&self) -> f64 {
        self.theta_b
    }

    pub fn phase_jitter_sigma(&self) -> f64 {
        self.phase_jitter_sigma
    }

    pub fn regime_factor(&self) -> f64 {
        self.regime_factor
    }
}

/// Stokes-operator analysis of a bright beam pair.
#[derive(Debug, Clone, PartialEq)]
pub struct StokesReport {
    /// `⟨S₁⟩` per beam; `−α_B²` and `+α_B²` in the linearization.
    pub s1_mean_alpha: f64,
    pub s1_mean_beta: f64,
    /// `Δ²(S₂^α + S₂^β)`, raw (shot-noise reference is `2 α_B²`).
    pub var_s2_sum: f64,
    /// `Δ²(S₃^α + S₃^β)`, raw.
    pub var_s3_sum: f64,
    /// `I^S / α_B² = (var_s2_sum + var_s3_sum) / (2 α_B²)`.
    pub i_stokes_normalized: f64,
    /// `I^S < 2 α_B²`.
    pub entangled: bool,
}

/// Mean Stokes `S₁` of the two output beams, `(−α_B², +α_B²)`; the weak
/// beam's `|α_{A'}|²` contribution is neglected, consistent with the
/// linearization regime enforced by [`BrightBeamPair`].
pub fn stokes_means(pair: &BrightBeamPair) -> (f64, f64) {
    let s1 = pair.alpha_b * pair.alpha_b;
    (-s1, s1)
}

/// Covariance matrix of `(S₂^α, S₃^α, S₂^β, S₃^β) / α_B` at phase `theta_b`.
///
/// Equal to the quadrature covariance matrix of the ±45° modes at `θ_B`
/// with a sign flip on `S₃^α`; for symmetric inputs it reproduces the
/// two-mode standard-form pattern up to a local π rotation about `S₁` of
/// beam β. With the coherent-`B` flag on, each diagonal entry gains the
/// `N_mm / α_B²` vacuum-mixing term of its weak mode.
pub fn stokes_fluctuation_cm(pair: &BrightBeamPair) -> Matrix4<f64> {
    stokes_fluctuation_cm_at(pair, pair.theta_b)
}

fn stokes_fluctuation_cm_at(pair: &BrightBeamPair, theta: f64) -> Matrix4<f64> {
    let g = pair.state_pm45.covariance_matrix(theta);
    let flip = [1.0, -1.0, 1.0, 1.0];
    let mut out = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = flip[i] * flip[j] * g[(i, j)];
        }
    }
    if pair.b_field_noise {
        let n = pair.state_pm45.n_matrix();
        let a2 = pair.alpha_b * pair.alpha_b;
        out[(0, 0)] += n[(0, 0)].re / a2;
        out[(1, 1)] += n[(0, 0)].re / a2;
        out[(2, 2)] += n[(1, 1)].re / a2;
        out[(3, 3)] += n[(1, 1)].re / a2;
    }
    out
}

/// Variances of the summed Stokes fluctuations and the normalized
/// inseparability value.
///
/// Computed from the covariance of the linearized Stokes vector, so for the
/// default noiseless-`B` model `i_stokes_normalized` coincides with the
/// quadrature criterion of the underlying state at `θ_B` to rounding.
pub fn stokes_sum_variances(pair: &BrightBeamPair) -> StokesReport {
    report_at(pair, pair.theta_b)
}

fn report_at(pair: &BrightBeamPair, theta: f64) -> StokesReport {
    let (var2, var3) = sum_variances_at(pair, theta);
    finish_report(pair, var2, var3)
}

fn sum_variances_at(pair: &BrightBeamPair, theta: f64) -> (f64, f64) {
    let sigma = stokes_fluctuation_cm_at(pair, theta);
    let a2 = pair.alpha_b * pair.alpha_b;
    let var2 = a2 * (sigma[(0, 0)] + sigma[(2, 2)] + 2.0 * sigma[(0, 2)]);
    let var3 = a2 * (sigma[(1, 1)] + sigma[(3, 3)] + 2.0 * sigma[(1, 3)]);
    (var2, var3)
}

fn finish_report(pair: &BrightBeamPair, var2: f64, var3: f64) -> StokesReport {
    let a2 = pair.alpha_b * pair.alpha_b;
    let (s1_alpha, s1_beta) = stokes_means(pair);
    let i_norm = 0.5 * (var2 + var3) / a2;
    StokesReport {
        s1_mean_alpha: s1_alpha,
        s1_mean_beta: s1_beta,
        var_s2_sum: var2,
        var_s3_sum: var3,
        i_stokes_normalized: i_norm,
        entangled: i_norm < 2.0,
    }
}

/// Monte Carlo average of the Stokes variances over the residual phase
/// jitter of the lock: each draw evaluates at `θ_B + ε`, `ε ~ N(0, σ²)`.
///
/// With `σ = 0` the result is identical to [`stokes_sum_variances`].
/// Identical RNG states give identical results.
pub fn stokes_sum_variances_sampled<R: Rng + ?Sized>(
    pair: &BrightBeamPair,
    draws: usize,
    rng: &mut R,
) -> Result<StokesReport> {
    if draws == 0 {
        return Err(Error::InvalidParams(
            "jitter averaging needs at least one draw".into(),
        ));
    }
    if pair.phase_jitter_sigma == 0.0 {
        return Ok(stokes_sum_variances(pair));
    }
    let normal = Normal::new(0.0, pair.phase_jitter_sigma)
        .map_err(|e| Error::InvalidParams(format!("jitter distribution: {e}")))?;
    let (mut acc2, mut acc3) = (0.0, 0.0);
    for _ in 0..draws {
        let eps: f64 = normal.sample(rng);
        let (v2, v3) = sum_variances_at(pair, pair.theta_b + eps);
        acc2 += v2;
        acc3 += v3;
    }
    Ok(finish_report(pair, acc2 / draws as f64, acc3 / draws as f64))
}

/// Lock the strong-field phase to the optimal quadrature angle of a prior
/// basis analysis (the servo loop is ideal; residual error is modeled by
/// the pair's jitter parameter).
pub fn lock_phase_to_squeezing(pair: &BrightBeamPair, report: &EntanglementReport) -> BrightBeamPair {
    debug_assert!(report.theta_star.is_finite());
    let mut locked = pair.clone();
    locked.theta_b = report.theta_star;
    locked
}
