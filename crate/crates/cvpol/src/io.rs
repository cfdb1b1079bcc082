//! JSON wire formats for states and analysis reports.
//!
//! Complex 2×2 matrices are written as nested `[re, im]` pairs, e.g.
//! `"M": [[[0.0, 0.0], [0.1, -0.2]], [[0.1, -0.2], [0.0, 0.0]]]`. Every
//! document carries the `"convention": "vacuum_variance_1"` tag; readers
//! reject anything else, since numbers in another normalization would be
//! silently wrong by factors of 2.

use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::EntanglementReport;
use crate::state::{TwoModeGaussianState, CONSTRUCTION_TOL, CONVENTION};
use crate::stokes::StokesReport;
use crate::transform::PolarizationTransform;

type PackedMatrix = [[[f64; 2]; 2]; 2];

fn pack(m: &Matrix2<C64>) -> PackedMatrix {
    let e = |i: usize, j: usize| [m[(i, j)].re, m[(i, j)].im];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn unpack(p: &PackedMatrix) -> Matrix2<C64> {
    let e = |i: usize, j: usize| C64::new(p[i][j][0], p[i][j][1]);
    Matrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

fn check_convention(found: &str) -> Result<()> {
    if found != CONVENTION {
        return Err(Error::JsonField {
            field: "convention".into(),
            msg: format!("expected {CONVENTION:?}, found {found:?}"),
        });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    convention: String,
    basis_label: String,
    #[serde(rename = "M")]
    m: PackedMatrix,
    #[serde(rename = "N")]
    n: PackedMatrix,
}

pub fn state_to_json(s: &TwoModeGaussianState) -> String {
    let doc = StateJson {
        convention: CONVENTION.into(),
        basis_label: s.basis_label().into(),
        m: pack(s.m_matrix()),
        n: pack(s.n_matrix()),
    };
    serde_json::to_string_pretty(&doc).expect("state serialization cannot fail")
}

/// Parse and validate a state document. Syntax errors carry line/column
/// positions from the JSON parser; invariant violations name the field.
pub fn state_from_json(text: &str) -> Result<TwoModeGaussianState> {
    let doc: StateJson = serde_json::from_str(text)?;
    check_convention(&doc.convention)?;
    let m = unpack(&doc.m);
    let n = unpack(&doc.n);
    let scale = 1.0
        + m.iter()
            .chain(n.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max);
    if (m[(0, 1)] - m[(1, 0)]).norm() > CONSTRUCTION_TOL * scale {
        return Err(Error::JsonField {
            field: "M".into(),
            msg: "matrix is not symmetric".into(),
        });
    }
    if (n[(0, 1)] - n[(1, 0)].conj()).norm() > CONSTRUCTION_TOL * scale
        || n[(0, 0)].im.abs() > CONSTRUCTION_TOL * scale
        || n[(1, 1)].im.abs() > CONSTRUCTION_TOL * scale
    {
        return Err(Error::JsonField {
            field: "N".into(),
            msg: "matrix is not Hermitian".into(),
        });
    }
    TwoModeGaussianState::new(m, n, doc.basis_label).map_err(|e| Error::JsonField {
        field: "M,N".into(),
        msg: e.to_string(),
    })
}

pub fn load_state_json(path: impl AsRef<Path>) -> Result<TwoModeGaussianState> {
    state_from_json(&std::fs::read_to_string(path)?)
}

pub fn save_state_json(s: &TwoModeGaussianState, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, state_to_json(s) + "\n")?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    convention: String,
    i_of_theta_min: f64,
    theta_star: f64,
    basis_star: PackedMatrix,
    i_star: f64,
    n_param: f64,
    k_param: f64,
    eof: f64,
}

pub fn report_to_json(r: &EntanglementReport) -> String {
    let doc = ReportJson {
        convention: CONVENTION.into(),
        i_of_theta_min: r.i_of_theta_min,
        theta_star: r.theta_star,
        basis_star: pack(r.basis_star.matrix()),
        i_star: r.i_star,
        n_param: r.n_param,
        k_param: r.k_param,
        eof: r.eof,
    };
    serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
}

pub fn report_from_json(text: &str) -> Result<EntanglementReport> {
    let doc: ReportJson = serde_json::from_str(text)?;
    check_convention(&doc.convention)?;
    let basis_star =
        PolarizationTransform::new(unpack(&doc.basis_star)).map_err(|e| Error::JsonField {
            field: "basis_star".into(),
            msg: e.to_string(),
        })?;
    Ok(EntanglementReport {
        i_of_theta_min: doc.i_of_theta_min,
        theta_star: doc.theta_star,
        basis_star,
        i_star: doc.i_star,
        n_param: doc.n_param,
        k_param: doc.k_param,
        eof: doc.eof,
    })
}

#[derive(Serialize, Deserialize)]
struct StokesJson {
    convention: String,
    s1_mean_alpha: f64,
    s1_mean_beta: f64,
    var_s2_sum: f64,
    var_s3_sum: f64,
    i_stokes_normalized: f64,
    entangled: bool,
}

pub fn stokes_report_to_json(r: &StokesReport) -> String {
    let doc = StokesJson {
        convention: CONVENTION.into(),
        s1_mean_alpha: r.s1_mean_alpha,
        s1_mean_beta: r.s1_mean_beta,
        var_s2_sum: r.var_s2_sum,
        var_s3_sum: r.var_s3_sum,
        i_stokes_normalized: r.i_stokes_normalized,
        entangled: r.entangled,
    };
    serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
}

pub fn stokes_report_from_json(text: &str) -> Result<StokesReport> {
    let doc: StokesJson = serde_json::from_str(text)?;
    check_convention(&doc.convention)?;
    Ok(StokesReport {
        s1_mean_alpha: doc.s1_mean_alpha,
        s1_mean_beta: doc.s1_mean_beta,
        var_s2_sum: doc.var_s2_sum,
        var_s3_sum: doc.var_s3_sum,
        i_stokes_normalized: doc.i_stokes_normalized,
        entangled: doc.entangled,
    })
}
