//! Synthetic balanced-homodyne records and scan-variance estimation.
//!
//! Two homodyne detectors read the quadratures `X_0(θ)` and `X_1(θ)` of a
//! two-mode state while the local-oscillator phase θ is stepped through a
//! ramp. Within the flat cavity band the noise is white, so the per-bin
//! sample variance estimates the state's quadrature variance directly and
//! the analysis frequency is carried as metadata only.
//!
//! To estimate an inseparability criterion `I_{a,b}(θ)` from such a scan,
//! feed the state `(A_p, iA_q)` with `A_p = (A_a + A_b)/√2`,
//! `A_q = (A_a − A_b)/√2`: the identity
//! `I_{a,b}(θ) = Δ²X_p(θ) + Δ²Y_q(θ)` makes `var_a + var_b` its unbiased
//! estimator. The `diag(1, i)` phase step is the quarter-wave plate that
//! rotates the second mode's noise ellipse by π/2 so both channels measure
//! the same θ.
//!
//! Sampling is reproducible: bin `k` of a scan with seed `s` draws from an
//! independent counter-based substream `(s, k)`, so results do not depend
//! on evaluation order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::state::TwoModeGaussianState;

/// One simultaneous two-channel quadrature sample at LO phase `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub theta: f64,
    pub x_a: f64,
    pub x_b: f64,
}

/// A recorded (or simulated) homodyne scan: shot-noise-normalized samples
/// grouped in runs of constant θ, plus acquisition metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneTrace {
    samples: Vec<TraceSample>,
    /// Spectrum-analyzer frequency label in MHz; no dynamical role in the
    /// flat-spectrum model.
    pub analysis_frequency_mhz: f64,
    /// Generator seed the trace was produced with (0 for external data).
    pub seed: u64,
}

impl HomodyneTrace {
    pub fn new(samples: Vec<TraceSample>, analysis_frequency_mhz: f64, seed: u64) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if !s.theta.is_finite() || !s.x_a.is_finite() || !s.x_b.is_finite() {
                return Err(Error::InvalidParams(format!(
                    "sample {i} contains a non-finite value"
                )));
            }
        }
        Ok(Self {
            samples,
            analysis_frequency_mhz,
            seed,
        })
    }

    pub fn samples(&self) -> &[TraceSample] {
        &self.samples
    }
}

/// Draw a stepped-phase homodyne record from a state.
///
/// For every θ in `ramp`, `n_per_bin` joint Gaussian samples of
/// `(X_0(θ), X_1(θ))` are drawn with the variances and cross-covariance
/// implied by the state. Deterministic for a given seed; bins use
/// independent substreams keyed by bin index.
pub fn simulate_scan(
    s: &TwoModeGaussianState,
    ramp: &[f64],
    n_per_bin: usize,
    seed: u64,
) -> Result<HomodyneTrace> {
    if n_per_bin < 2 {
        return Err(Error::InvalidParams(format!(
            "n_per_bin = {n_per_bin}; at least 2 samples per bin are needed for variance estimation"
        )));
    }
    if ramp.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidParams("ramp contains a non-finite angle".into()));
    }
    let mut samples = Vec::with_capacity(ramp.len() * n_per_bin);
    for (bin, &theta) in ramp.iter().enumerate() {
        let var_a = s.quadrature_variance_unchecked(0, theta);
        let var_b = s.quadrature_variance_unchecked(1, theta);
        let cov = s.cross_quadrature_covariance(theta);
        // Cholesky factor of the 2×2 bin covariance.
        let l11 = var_a.max(0.0).sqrt();
        let (l21, l22) = if l11 > 0.0 {
            let l21 = cov / l11;
            (l21, (var_b - l21 * l21).max(0.0).sqrt())
        } else {
            (0.0, var_b.max(0.0).sqrt())
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(bin as u64);
        for _ in 0..n_per_bin {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            samples.push(TraceSample {
                theta,
                x_a: l11 * z1,
                x_b: l21 * z1 + l22 * z2,
            });
        }
    }
    Ok(HomodyneTrace {
        samples,
        analysis_frequency_mhz: 0.0,
        seed,
    })
}

/// Per-bin variance estimates from a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanBin {
    pub theta_center: f64,
    /// Unbiased (n−1) sample variance of each channel.
    pub var_a: f64,
    pub var_b: f64,
    /// Unbiased sample covariance of the two channels.
    pub cov_ab: f64,
    /// `var_a + var_b`; estimates the criterion when the scanned state is
    /// the `(A_p, iA_q)` arrangement (see module docs).
    pub i_plus_estimate: f64,
    pub sample_count: usize,
    /// Standard error of `i_plus_estimate` from the Wishart distribution of
    /// the sample covariance: `√(2/(n−1)) · √(var_a² + var_b² + 2 cov²)`.
    pub stderr: f64,
}

/// A θ bin left out of the estimate for having fewer than two samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkippedBin {
    pub theta: f64,
    pub sample_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEstimate {
    pub bins: Vec<ScanBin>,
    pub skipped: Vec<SkippedBin>,
}

impl ScanEstimate {
    /// Bin with the smallest criterion estimate.
    pub fn min_i_plus(&self) -> Option<&ScanBin> {
        self.bins
            .iter()
            .min_by(|a, b| a.i_plus_estimate.total_cmp(&b.i_plus_estimate))
    }

    /// Least-squares slope of `i_plus_estimate` against θ and its standard
    /// error; `None` with fewer than three bins or a degenerate ramp. A
    /// slope within ~2 standard errors of zero is the flatness signature of
    /// a scan with vanishing cross moment.
    pub fn theta_slope(&self) -> Option<(f64, f64)> {
        let n = self.bins.len();
        if n < 3 {
            return None;
        }
        let mean_t = self.bins.iter().map(|b| b.theta_center).sum::<f64>() / n as f64;
        let mean_i = self.bins.iter().map(|b| b.i_plus_estimate).sum::<f64>() / n as f64;
        let sxx: f64 = self
            .bins
            .iter()
            .map(|b| (b.theta_center - mean_t).powi(2))
            .sum();
        if sxx <= 0.0 {
            return None;
        }
        let sxy: f64 = self
            .bins
            .iter()
            .map(|b| (b.theta_center - mean_t) * (b.i_plus_estimate - mean_i))
            .sum();
        let slope = sxy / sxx;
        let ssr: f64 = self
            .bins
            .iter()
            .map(|b| {
                let fit = mean_i + slope * (b.theta_center - mean_t);
                (b.i_plus_estimate - fit).powi(2)
            })
            .sum();
        let se = (ssr / (n as f64 - 2.0) / sxx).sqrt();
        Some((slope, se))
    }
}

/// Per-bin unbiased variances, covariance and the summed criterion
/// estimator. Bins are maximal runs of identical θ; runs with fewer than
/// two samples are skipped and reported in `skipped`.
pub fn estimate_scan(trace: &HomodyneTrace) -> ScanEstimate {
    let mut bins = Vec::new();
    let mut skipped = Vec::new();
    let samples = trace.samples();
    let mut start = 0;
    while start < samples.len() {
        let theta = samples[start].theta;
        let mut end = start + 1;
        while end < samples.len() && samples[end].theta == theta {
            end += 1;
        }
        let run = &samples[start..end];
        let n = run.len();
        if n < 2 {
            skipped.push(SkippedBin {
                theta,
                sample_count: n,
            });
        } else {
            let nf = n as f64;
            let mean_a = run.iter().map(|s| s.x_a).sum::<f64>() / nf;
            let mean_b = run.iter().map(|s| s.x_b).sum::<f64>() / nf;
            let mut saa = 0.0;
            let mut sbb = 0.0;
            let mut sab = 0.0;
            for s in run {
                let da = s.x_a - mean_a;
                let db = s.x_b - mean_b;
                saa += da * da;
                sbb += db * db;
                sab += da * db;
            }
            let var_a = saa / (nf - 1.0);
            let var_b = sbb / (nf - 1.0);
            let cov_ab = sab / (nf - 1.0);
            let stderr = (2.0 / (nf - 1.0)).sqrt()
                * (var_a * var_a + var_b * var_b + 2.0 * cov_ab * cov_ab).sqrt();
            bins.push(ScanBin {
                theta_center: theta,
                var_a,
                var_b,
                cov_ab,
                i_plus_estimate: var_a + var_b,
                sample_count: n,
                stderr,
            });
        }
        start = end;
    }
    ScanEstimate { bins, skipped }
}

const CSV_HEADER: &str = "theta_rad,x_a,x_b";

/// Write a trace as CSV (`theta_rad,x_a,x_b`, one sample per row, 17
/// significant digits so the round trip is lossless).
pub fn write_trace_csv<W: Write>(trace: &HomodyneTrace, mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for s in trace.samples() {
        writeln!(w, "{:.16e},{:.16e},{:.16e}", s.theta, s.x_a, s.x_b)?;
    }
    Ok(())
}

pub fn emit_trace_csv(trace: &HomodyneTrace, path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_trace_csv(trace, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Parse a trace from CSV. Malformed rows are rejected with their 1-based
/// line number and the offending column; non-finite samples are rejected.
/// Metadata fields default to zero; attach the sidecar with
/// [`read_sidecar_json`] when present.
pub fn read_trace_csv<R: Read>(r: R, source_name: &str) -> Result<HomodyneTrace> {
    let reader = BufReader::new(r);
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => {
            return Err(Error::TraceFormat {
                source_name: source_name.into(),
                line: 1,
                msg: "empty file, expected header".into(),
            })
        }
    };
    if header.trim_end_matches('\r') != CSV_HEADER {
        return Err(Error::TraceFormat {
            source_name: source_name.into(),
            line: 1,
            msg: format!("bad header {header:?}, expected {CSV_HEADER:?}"),
        });
    }
    let mut samples = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line_no = idx + 2;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::TraceFormat {
                source_name: source_name.into(),
                line: line_no,
                msg: format!("expected 3 columns, found {}", fields.len()),
            });
        }
        let mut parsed = [0.0_f64; 3];
        for (col, (name, raw)) in ["theta_rad", "x_a", "x_b"].iter().zip(fields).enumerate() {
            let v: f64 = raw.trim().parse().map_err(|e| Error::TraceFormat {
                source_name: source_name.into(),
                line: line_no,
                msg: format!("column {name}: {e}"),
            })?;
            if !v.is_finite() {
                return Err(Error::TraceFormat {
                    source_name: source_name.into(),
                    line: line_no,
                    msg: format!("column {name}: non-finite value {raw}"),
                });
            }
            parsed[col] = v;
        }
        samples.push(TraceSample {
            theta: parsed[0],
            x_a: parsed[1],
            x_b: parsed[2],
        });
    }
    HomodyneTrace::new(samples, 0.0, 0)
}

pub fn parse_trace_csv(path: impl AsRef<Path>) -> Result<HomodyneTrace> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    read_trace_csv(file, &path.display().to_string())
}

/// Acquisition metadata stored next to a trace CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub analysis_frequency_mhz: f64,
    pub seed: u64,
    pub state_ref: String,
}

pub fn write_sidecar_json(meta: &TraceMeta, path: impl AsRef<Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(meta)?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

pub fn read_sidecar_json(path: impl AsRef<Path>) -> Result<TraceMeta> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
