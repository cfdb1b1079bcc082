//! Scenario configuration: one JSON document describing the squeezing, the
//! strong-field mixing and the scan acquisition. Command-line flags
//! override file fields; file fields override the built-in defaults (which
//! are the reference scenario).

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use cvpol::metrics::maximally_correlated_modes;
use cvpol::stokes::{lock_phase_to_squeezing, BrightBeamPair};
use cvpol::{PolarizationTransform, SqueezedModeParams, TwoModeGaussianState};

/// Strong-field phase policy: lock to the optimal quadrature angle of the
/// analyzed state (`"locked"`) or pin an explicit angle in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaBPolicy {
    Locked,
    #[serde(untagged)]
    Explicit(f64),
}

/// Which criterion a homodyne scan estimates; see the `cvpol::homodyne`
/// module docs for the wave-plate arrangements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanBasis {
    /// Quarter-wave plate only: channels measure `(X_x, Y_y)` and the bin
    /// sum estimates `I_{+45,−45}(θ)`.
    Pm45,
    /// Half-wave plate at 22.5° then the quarter-wave plate: the bin sum
    /// estimates `I_{x,y}(θ)`, which is flat for decoupled modes.
    Xy,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    /// Most-squeezed variance of mode x (vacuum = 1).
    pub v_min_x: f64,
    /// Anti-squeezed variance of mode x; `null` means minimum-uncertainty
    /// squeezing, `1 / v_min_x`.
    pub v_max_x: Option<f64>,
    pub v_min_y: f64,
    pub v_max_y: Option<f64>,
    /// Squeezed quadrature angle of mode x in radians; mode y is squeezed
    /// on the orthogonal quadrature, `theta_sq + π/2`.
    pub theta_sq: f64,
    /// Detection efficiency η for loss correction.
    pub efficiency: f64,
    /// Strong-field amplitude per output arm.
    pub alpha_b: f64,
    pub theta_b: ThetaBPolicy,
    /// Number of θ bins over one period `[0, π)`.
    pub scan_bins: usize,
    pub samples_per_bin: usize,
    pub scan_basis: ScanBasis,
    pub seed: u64,
    /// Spectrum-analyzer frequency label; metadata only.
    pub analysis_frequency_mhz: f64,
    /// Free-form provenance notes; never interpreted.
    pub metadata: serde_json::Value,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            v_min_x: 0.95,
            v_max_x: None,
            v_min_y: 0.95,
            v_max_y: None,
            theta_sq: 0.0,
            efficiency: 5.0 / 7.0,
            alpha_b: 1.0e4,
            theta_b: ThetaBPolicy::Locked,
            scan_bins: 32,
            samples_per_bin: 10_000,
            scan_basis: ScanBasis::Pm45,
            seed: 1,
            analysis_frequency_mhz: 5.0,
            metadata: serde_json::json!({
                "source": "cold-atom cavity squeezing, descriptive only",
                "cavity_coupling_transmission": 0.1,
                "probe_detuning_mhz": 50.0,
                "probe_power_uw": [5.0, 15.0],
            }),
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.params_x().context("field v_min_x/v_max_x/theta_sq")?;
        self.params_y().context("field v_min_y/v_max_y/theta_sq")?;
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            bail!("field efficiency: must lie in (0, 1], got {}", self.efficiency);
        }
        if !(self.alpha_b > 0.0) || !self.alpha_b.is_finite() {
            bail!("field alpha_b: must be positive and finite, got {}", self.alpha_b);
        }
        if let ThetaBPolicy::Explicit(t) = self.theta_b {
            if !t.is_finite() {
                bail!("field theta_b: must be finite, got {t}");
            }
        }
        if self.scan_bins == 0 {
            bail!("field scan_bins: must be at least 1");
        }
        if self.samples_per_bin < 2 {
            bail!(
                "field samples_per_bin: need at least 2 for variance estimation, got {}",
                self.samples_per_bin
            );
        }
        Ok(())
    }

    pub fn params_x(&self) -> Result<SqueezedModeParams> {
        let v_max = self.v_max_x.unwrap_or(1.0 / self.v_min_x);
        Ok(SqueezedModeParams::new(self.v_min_x, v_max, self.theta_sq)?)
    }

    pub fn params_y(&self) -> Result<SqueezedModeParams> {
        let v_max = self.v_max_y.unwrap_or(1.0 / self.v_min_y);
        Ok(SqueezedModeParams::new(
            self.v_min_y,
            v_max,
            self.theta_sq + FRAC_PI_2,
        )?)
    }

    /// The two independently squeezed modes in their native x,y basis.
    pub fn state_xy(&self) -> Result<TwoModeGaussianState> {
        Ok(TwoModeGaussianState::independent_squeezed_pair(
            self.params_x()?,
            self.params_y()?,
        ))
    }

    /// The ±45° modes, after the half-wave plate at 22.5°.
    pub fn state_pm45(&self) -> Result<TwoModeGaussianState> {
        Ok(self
            .state_xy()?
            .apply(&PolarizationTransform::pm45_basis())
            .with_basis_label("pm45"))
    }

    /// The state the homodyne channels see for the configured scan basis.
    pub fn scan_state(&self) -> Result<TwoModeGaussianState> {
        let xy = self.state_xy()?;
        let qwp = PolarizationTransform::quarter_wave_y();
        Ok(match self.scan_basis {
            ScanBasis::Pm45 => xy.apply(&qwp).with_basis_label("x,iy"),
            ScanBasis::Xy => xy
                .apply(&PolarizationTransform::pm45_basis().then(&qwp))
                .with_basis_label("+45,i(-45)"),
        })
    }

    pub fn scan_ramp(&self) -> Vec<f64> {
        (0..self.scan_bins)
            .map(|k| PI * k as f64 / self.scan_bins as f64)
            .collect()
    }

    /// Assemble the bright beam pair, resolving the phase policy (the
    /// locked policy analyzes the ±45° state and locks to its optimal
    /// angle).
    pub fn bright_pair(&self) -> Result<BrightBeamPair> {
        let state = self.state_pm45()?;
        let pair = BrightBeamPair::new(state.clone(), self.alpha_b, 0.0)?;
        Ok(match self.theta_b {
            ThetaBPolicy::Explicit(t) => BrightBeamPair::new(state, self.alpha_b, t)?,
            ThetaBPolicy::Locked => {
                let report = maximally_correlated_modes(&state)?;
                lock_phase_to_squeezing(&pair, &report)
            }
        })
    }
}
