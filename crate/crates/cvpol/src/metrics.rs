//! Inseparability and entanglement measures for two-mode Gaussian states.
//!
//! The Duan criterion bounds the EPR-type variance sum
//! `I(θ) = [Δ²(X_a+X_b)(θ) + Δ²(Y_a−Y_b)(θ)] / 2` from below by 2 for
//! separable states. Expanding in mode fluctuations gives
//!
//! ```text
//! I(θ) = 2 + 2(N_00 + N_11) + 4 |M_01| cos(2θ − 2φ),   2φ = arg M_01
//! ```
//!
//! so the θ-minimum in a fixed basis is reached where the cosine is −1, and
//! minimizing over the polarization basis amounts to maximizing the
//! anomalous correlation `|⟨δA_a δA_b⟩|`. The basis search runs in two
//! steps: find a decoupled mode pair `u, v` with `⟨δA_u δA_v⟩ = 0` and the
//! diagonal moments phase-aligned, then mix them as `(A_u ± iA_v)/√2`,
//! which realizes the maximally correlated pair.
//!
//! For symmetric states the entanglement of formation is the closed-form
//! function [`eof_symmetric`] of the criterion minimum.

use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

use crate::error::{Error, Result};
use crate::optim::nelder_mead;
use crate::state::{wrap_angle_pi, TwoModeGaussianState};
use crate::transform::PolarizationTransform;

/// Acceptance residual for the decoupled-basis search, relative to
/// `1 + |M_uu| + |M_vv|`.
pub const DECOUPLE_TOL: f64 = 1e-10;

/// Iteration cap per simplex seed.
const MAX_ITER_PER_SEED: usize = 10_000;

/// Result of the full basis analysis of a two-mode state.
///
/// `theta_star` and `i_of_theta_min` refer to the basis the state was given
/// in; `i_star` is the global criterion minimum over polarization bases and
/// quadrature angle, attained in `basis_star`. `n_param` and `k_param` are
/// the symmetric standard-form covariance entries (`n - k = i_star / 2`),
/// and `eof` the entanglement of formation of the symmetric state with that
/// criterion value. All angles are reduced to `[0, π)`.
#[derive(Debug, Clone)]
pub struct EntanglementReport {
    pub i_of_theta_min: f64,
    pub theta_star: f64,
    pub basis_star: PolarizationTransform,
    pub i_star: f64,
    pub n_param: f64,
    pub k_param: f64,
    pub eof: f64,
}

/// Standard-form covariance entries of a symmetric isotropic two-mode state:
/// diagonal blocks `n·I`, off-diagonal `diag(k, −k)` with `k ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    pub n: f64,
    pub k: f64,
    /// Whether reaching the `k ≥ 0` orientation required a local π phase
    /// flip on one mode (the flip leaves entanglement invariant).
    pub phase_flipped: bool,
}

/// The Duan criterion value `I_{a,b}(θ)`; separable states satisfy
/// `I ≥ 2` for every θ.
pub fn duan_value(s: &TwoModeGaussianState, theta: f64) -> f64 {
    let base = duan_base(s);
    let m01 = s.cross_moment();
    base + 4.0 * (C64::from_polar(1.0, -2.0 * theta) * m01).re
}

/// Basis-independent part of the criterion, `2 + 2(N_00 + N_11)`.
fn duan_base(s: &TwoModeGaussianState) -> f64 {
    2.0 + 2.0 * (s.n_matrix()[(0, 0)] + s.n_matrix()[(1, 1)]).re
}

/// Minimize the criterion over the quadrature angle in the current basis.
///
/// Returns `(theta_star, value)` with `theta_star ∈ [0, π)`. The minimum is
/// analytic: `value = base − 4|M_01|` at `2θ = arg(M_01) + π`. A vanishing
/// cross moment makes the criterion θ-independent; `theta_star = 0` then.
pub fn duan_minimum(s: &TwoModeGaussianState) -> (f64, f64) {
    let base = duan_base(s);
    let m01 = s.cross_moment();
    let r = m01.norm();
    if r == 0.0 {
        return (0.0, base);
    }
    let theta_star = wrap_angle_pi(0.5 * m01.arg() + FRAC_PI_2);
    (theta_star, base - 4.0 * r)
}

/// The criterion of the ±45° modes expressed in x,y-mode variances:
/// `I_{+45,−45}(θ) = Δ²X_x(θ) + Δ²Y_y(θ)`.
///
/// The caller asserts that `s_xy` is expressed in the x,y basis; the
/// identity with `duan_value` of the ±45°-rotated state holds regardless.
pub fn criterion_xy_form(s_xy: &TwoModeGaussianState, theta: f64) -> f64 {
    s_xy.quadrature_variance_unchecked(0, theta)
        + s_xy.quadrature_variance_unchecked(1, theta + FRAC_PI_2)
}

/// Simplex seeds covering the U(2) chart; fixed order makes the search
/// deterministic.
const SEEDS: [[f64; 4]; 8] = [
    [0.0, 0.0, 0.0, 0.0],
    [FRAC_PI_4, 0.0, 0.0, 0.0],
    [FRAC_PI_4, FRAC_PI_2, 0.0, 0.0],
    [FRAC_PI_4, 0.0, FRAC_PI_2, 0.0],
    [FRAC_PI_8, FRAC_PI_4, -FRAC_PI_4, 0.0],
    [3.0 * FRAC_PI_8, -FRAC_PI_4, FRAC_PI_4, 0.0],
    [FRAC_PI_4, FRAC_PI_4, FRAC_PI_4, 0.0],
    [FRAC_PI_8, -FRAC_PI_2, FRAC_PI_4, 0.0],
];

fn transformed_m_entries(
    s: &TwoModeGaussianState,
    angles: &[f64; 4],
) -> (C64, C64, C64) {
    let t = PolarizationTransform::from_angles(angles[0], angles[1], angles[2], angles[3]);
    let u = t.matrix();
    let m = s.m_matrix();
    let row = |r: usize, c: usize| {
        u[(r, 0)] * (m[(0, 0)] * u[(c, 0)] + m[(0, 1)] * u[(c, 1)])
            + u[(r, 1)] * (m[(1, 0)] * u[(c, 0)] + m[(1, 1)] * u[(c, 1)])
    };
    (row(0, 0), row(0, 1), row(1, 1))
}

/// Find a polarization basis `u, v` in which the anomalous cross moment
/// vanishes, `⟨δA_u δA_v⟩ = 0`, and the diagonal moments share a common
/// phase, so both modes are squeezed along the same quadrature.
///
/// The search minimizes `|M'_01|²` over a four-angle chart of U(2) by
/// simplex descent from eight deterministic seeds, accepting the first seed
/// whose residual falls below [`DECOUPLE_TOL`] (relative to
/// `1 + |M'_00| + |M'_11|`); a deterministic per-mode phase then aligns the
/// diagonal. A state that is already decoupled yields the identity or a
/// phase-only transform. If no seed converges, the error carries the best
/// residual reached.
pub fn find_decoupled_basis(
    s: &TwoModeGaussianState,
) -> Result<(PolarizationTransform, TwoModeGaussianState)> {
    let residual_ok = |angles: &[f64; 4]| -> (bool, f64) {
        let (m00, m01, m11) = transformed_m_entries(s, angles);
        let scale = 1.0 + m00.norm() + m11.norm();
        (m01.norm() <= DECOUPLE_TOL * scale, m01.norm())
    };
    let objective = |angles: &[f64; 4]| {
        let (_, m01, _) = transformed_m_entries(s, angles);
        m01.norm_sqr()
    };

    let mut best_residual = f64::INFINITY;
    let mut accepted: Option<[f64; 4]> = None;
    for seed in SEEDS {
        let (ok, r) = residual_ok(&seed);
        best_residual = best_residual.min(r);
        if ok {
            accepted = Some(seed);
            break;
        }
        let x = nelder_mead(&objective, seed, 0.35, 1e-26, MAX_ITER_PER_SEED);
        let (ok, r) = residual_ok(&x);
        best_residual = best_residual.min(r);
        if ok {
            accepted = Some(x);
            break;
        }
    }
    let angles = match accepted {
        Some(a) => a,
        None => {
            return Err(Error::NonConvergence {
                best_residual,
                seeds: SEEDS.len(),
            })
        }
    };

    // Align the diagonal moments to the positive real axis; this fixes the
    // remaining per-mode phase freedom and makes |M_uu + M_vv| maximal among
    // all decoupled bases (the diagonal then carries the Takagi singular
    // values of M).
    let (m00, _, m11) = transformed_m_entries(s, &angles);
    let eps = 1e-14 * (1.0 + m00.norm() + m11.norm());
    let psi = |m: C64| if m.norm() > eps { -0.5 * m.arg() } else { 0.0 };
    let u = PolarizationTransform::from_angles(angles[0], angles[1], angles[2], angles[3])
        .then(&PolarizationTransform::mode_phases(psi(m00), psi(m11)));
    let s_uv = s.apply(&u).with_basis_label("uv");
    Ok((u, s_uv))
}

/// Full basis analysis: decouple, mix into the maximally correlated pair,
/// and evaluate the criterion minimum, standard-form parameters and the
/// entanglement of formation.
pub fn maximally_correlated_modes(s: &TwoModeGaussianState) -> Result<EntanglementReport> {
    let (theta_star, i_of_theta_min) = duan_minimum(s);
    let (u_uv, _) = find_decoupled_basis(s)?;
    let basis_star = u_uv.then(&PolarizationTransform::correlating_mix());
    let s_star = s.apply(&basis_star);
    let (_, i_star) = duan_minimum(&s_star);
    // Effective symmetric standard-form entries; for symmetric states these
    // coincide with `standard_form` of the ±45°-type state.
    let n_param = 1.0 + (s.n_matrix()[(0, 0)] + s.n_matrix()[(1, 1)]).re;
    let k_param = (n_param - 0.5 * i_star).max(0.0);
    let eof = eof_symmetric(i_star)?;
    Ok(EntanglementReport {
        i_of_theta_min,
        theta_star,
        basis_star,
        i_star,
        n_param,
        k_param,
        eof,
    })
}

const STANDARD_FORM_TOL: f64 = 1e-6;

/// Read the standard-form entries `(n, k)` off the covariance matrix of a
/// symmetric isotropic state (±45°-type) at the squeezing angle.
///
/// `n` is the common quadrature variance, `k = |⟨δX_+ δX_-⟩|` the
/// cross-mode correlation with the sign gauge-fixed to `k ≥ 0` by a local π
/// phase flip, so that `n − k` equals half the criterion minimum. States
/// whose covariance matrix does not match the sparsity/symmetry pattern to
/// within 1e-6 are rejected, naming the offending entries.
pub fn standard_form(s: &TwoModeGaussianState, theta_sq: f64) -> Result<StandardForm> {
    let g = s.covariance_matrix(theta_sq);
    let mut problems: Vec<String> = Vec::new();
    for (i, j) in [(0, 1), (0, 3), (1, 2), (2, 3)] {
        if g[(i, j)].abs() > STANDARD_FORM_TOL {
            problems.push(format!("γ[{i}][{j}] = {:.3e} should vanish", g[(i, j)]));
        }
    }
    let n = (g[(0, 0)] + g[(1, 1)] + g[(2, 2)] + g[(3, 3)]) / 4.0;
    for d in 0..4 {
        if (g[(d, d)] - n).abs() > STANDARD_FORM_TOL {
            problems.push(format!(
                "diagonal γ[{d}][{d}] = {} deviates from the common n = {n}",
                g[(d, d)]
            ));
        }
    }
    if (g[(0, 2)] + g[(1, 3)]).abs() > STANDARD_FORM_TOL {
        problems.push(format!(
            "γ[0][2] = {} and γ[1][3] = {} are not opposite",
            g[(0, 2)],
            g[(1, 3)]
        ));
    }
    if !problems.is_empty() {
        return Err(Error::StandardForm(problems.join("; ")));
    }
    let k_signed = 0.5 * (g[(0, 2)] - g[(1, 3)]);
    Ok(StandardForm {
        n,
        k: k_signed.abs(),
        phase_flipped: k_signed > 0.0,
    })
}

/// Entanglement of formation of a symmetric two-mode Gaussian state with
/// criterion minimum `i_value`:
///
/// ```text
/// E = f(i/2),  f(x) = c₊ log₂ c₊ − c₋ log₂ c₋,  c± = (x^{-1/2} ± x^{1/2})²/4
/// ```
///
/// Zero at and above the separability bound `i = 2` (continuously), strictly
/// decreasing below it. `i_value ≤ 0` is a domain error.
pub fn eof_symmetric(i_value: f64) -> Result<f64> {
    if !(i_value > 0.0) {
        return Err(Error::Domain(format!(
            "EOF requires a criterion value > 0, got {i_value}"
        )));
    }
    if i_value >= 2.0 {
        return Ok(0.0);
    }
    let x = 0.5 * i_value;
    let root = x.sqrt();
    let c_plus = (1.0 / root + root).powi(2) / 4.0;
    let c_minus = (1.0 / root - root).powi(2) / 4.0;
    // c₋ log₂ c₋ → 0 at the separable boundary.
    let minus_term = if c_minus > 0.0 {
        c_minus * c_minus.log2()
    } else {
        0.0
    };
    Ok(c_plus * c_plus.log2() - minus_term)
}

/// Infer the pre-detection criterion value from a measured one under a
/// vacuum-admixing beamsplitter of transmission `efficiency` acting
/// identically on both modes: each variance maps as `v ↦ ηv + (1−η)`, so
/// `I ↦ 2 + (I − 2)/η`. Shot noise (`I = 2`) is a fixed point.
pub fn correct_losses(i_measured: f64, efficiency: f64) -> Result<f64> {
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::Domain(format!(
            "detection efficiency must lie in (0, 1], got {efficiency}"
        )));
    }
    if !(i_measured > 0.0) {
        return Err(Error::Domain(format!(
            "measured criterion value must be > 0, got {i_measured}"
        )));
    }
    Ok(2.0 + (i_measured - 2.0) / efficiency)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::SqueezedModeParams;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    /// The scenario used throughout: both modes squeezed by the same amount
    /// at orthogonal quadratures, so the ±45° modes are maximally correlated.
    fn orthogonally_squeezed_xy(v_min: f64, v_max: f64, theta_sq: f64) -> TwoModeGaussianState {
        let px = SqueezedModeParams::new(v_min, v_max, theta_sq).unwrap();
        let py = SqueezedModeParams::new(v_min, v_max, theta_sq + FRAC_PI_2).unwrap();
        TwoModeGaussianState::independent_squeezed_pair(px, py)
    }

    fn pm45_of(s: &TwoModeGaussianState) -> TwoModeGaussianState {
        s.apply(&PolarizationTransform::pm45_basis())
            .with_basis_label("pm45")
    }

    /// Criterion evaluated the long way from covariance-matrix entries;
    /// independent of the moment-expansion shortcut in `duan_value`.
    fn duan_from_covariance(s: &TwoModeGaussianState, theta: f64) -> f64 {
        let g = s.covariance_matrix(theta);
        let var_sum_x = g[(0, 0)] + g[(2, 2)] + 2.0 * g[(0, 2)];
        let var_diff_y = g[(1, 1)] + g[(3, 3)] - 2.0 * g[(1, 3)];
        0.5 * (var_sum_x + var_diff_y)
    }

    #[test]
    fn vacuum_sits_at_the_separability_bound() {
        let v = TwoModeGaussianState::vacuum();
        for theta in [0.0, 0.4, 1.3, 3.0] {
            assert_eq!(duan_value(&v, theta), 2.0);
        }
        assert_eq!(duan_minimum(&v), (0.0, 2.0));
    }

    #[test]
    fn five_percent_scenario_reaches_1p90() {
        let theta_sq = 0.6;
        let pm45 = pm45_of(&orthogonally_squeezed_xy(0.95, 1.0 / 0.95, theta_sq));
        assert_relative_eq!(duan_value(&pm45, theta_sq), 1.90, epsilon = 1e-12);
        let (theta_star, value) = duan_minimum(&pm45);
        assert_relative_eq!(value, 1.90, epsilon = 1e-12);
        assert_relative_eq!(theta_star, theta_sq, epsilon = 1e-12);
    }

    #[test]
    fn duan_value_matches_covariance_route() {
        let s = pm45_of(&orthogonally_squeezed_xy(0.6, 2.2, 1.1));
        for theta in [0.0, 0.37, 1.1, 2.9] {
            assert_relative_eq!(
                duan_value(&s, theta),
                duan_from_covariance(&s, theta),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn quarter_period_difference_is_the_oscillating_term() {
        let s = pm45_of(&orthogonally_squeezed_xy(0.7, 1.8, 0.9));
        let m01 = s.cross_moment();
        for theta in [0.1, 0.8, 2.2] {
            let lhs = duan_value(&s, theta) - duan_value(&s, theta + FRAC_PI_2);
            let rhs = 8.0 * m01.norm() * (2.0 * theta - m01.arg()).cos();
            assert_relative_eq!(lhs, rhs, epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn theta_minimum_matches_grid_search() {
        let s = pm45_of(&orthogonally_squeezed_xy(0.55, 2.0, 2.3));
        let (_, analytic) = duan_minimum(&s);
        // Coarse 10⁴-point grid over [0, π), then local refinement around
        // the best point to push the discretization error below 1e-9.
        let coarse = 10_000;
        let (mut best_k, mut grid_min) = (0, f64::INFINITY);
        for k in 0..coarse {
            let v = duan_value(&s, PI * k as f64 / coarse as f64);
            if v < grid_min {
                grid_min = v;
                best_k = k;
            }
        }
        let mut lo = PI * (best_k as f64 - 1.0) / coarse as f64;
        let mut hi = PI * (best_k as f64 + 1.0) / coarse as f64;
        for _ in 0..6 {
            let (mut bt, mut bv) = (lo, f64::INFINITY);
            for k in 0..=100 {
                let t = lo + (hi - lo) * k as f64 / 100.0;
                let v = duan_value(&s, t);
                if v < bv {
                    bv = v;
                    bt = t;
                }
            }
            grid_min = grid_min.min(bv);
            let half = (hi - lo) / 100.0;
            lo = bt - half;
            hi = bt + half;
        }
        assert!((analytic - grid_min).abs() < 1e-9);
        assert!(analytic <= grid_min + 1e-12);
    }

    #[test]
    fn flat_criterion_when_cross_moment_vanishes() {
        let s = orthogonally_squeezed_xy(0.8, 1.4, 0.2);
        assert_eq!(s.cross_moment(), C64::ZERO);
        let values: Vec<f64> = (0..1000)
            .map(|k| duan_value(&s, PI * k as f64 / 1000.0))
            .collect();
        let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - values.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1e-12, "spread {spread}");
    }

    #[test]
    fn xy_form_equals_duan_of_pm45_state() {
        let s = orthogonally_squeezed_xy(0.65, 1.9, 1.4);
        let pm45 = pm45_of(&s);
        for theta in [0.0, 0.5, 1.4, 3.0] {
            assert_relative_eq!(
                criterion_xy_form(&s, theta),
                duan_value(&pm45, theta),
                epsilon = 1e-10
            );
        }
        assert_relative_eq!(
            criterion_xy_form(&TwoModeGaussianState::vacuum(), 0.7),
            2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn decoupling_a_decoupled_state_is_phase_only() {
        let s = orthogonally_squeezed_xy(0.9, 1.2, 0.0);
        let (u, s_uv) = find_decoupled_basis(&s).unwrap();
        let m = u.matrix();
        assert!(m[(0, 1)].norm() < 1e-9, "off-diagonal {}", m[(0, 1)].norm());
        assert!(m[(1, 0)].norm() < 1e-9);
        assert!(s_uv.cross_moment().norm() <= DECOUPLE_TOL * 2.0);
    }

    #[test]
    fn decoupling_aligns_orthogonally_squeezed_modes_like_x_and_iy() {
        let s = orthogonally_squeezed_xy(0.95, 1.0 / 0.95, 0.4);
        let (u, s_uv) = find_decoupled_basis(&s).unwrap();
        let m = u.matrix();
        // Phase-only on each mode, with a ±π/2 relative phase: A_u = A_x,
        // A_v = ±iA_y up to a common phase.
        assert!(m[(0, 1)].norm() < 1e-9);
        assert!(m[(1, 0)].norm() < 1e-9);
        let rel = (m[(1, 1)] / m[(0, 0)]).arg();
        assert!(
            rel.cos().abs() < 1e-9,
            "relative mode phase {rel} is not ±π/2"
        );
        // Aligned diagonal: both moments real and non-negative.
        let muu = s_uv.m_matrix()[(0, 0)];
        let mvv = s_uv.m_matrix()[(1, 1)];
        assert!(muu.im.abs() < 1e-10 && muu.re >= -1e-12);
        assert!(mvv.im.abs() < 1e-10 && mvv.re >= -1e-12);
    }

    #[test]
    fn decoupling_recovers_a_randomly_mixed_pair() {
        // Deterministic pseudo-random angles; state built from a known
        // decoupled pair, then scrambled.
        let mut x = 0.37_f64;
        let mut next = move || {
            x = (x * 997.0 + 0.123).fract();
            x * PI
        };
        for _ in 0..25 {
            let s0 = orthogonally_squeezed_xy(0.5 + 0.4 * next() / PI, 2.0, next());
            let t = PolarizationTransform::from_angles(next(), next(), next(), next());
            let scrambled = s0.apply(&t);
            let (_, s_uv) = find_decoupled_basis(&scrambled).unwrap();
            let scale = 1.0
                + s_uv.m_matrix()[(0, 0)].norm()
                + s_uv.m_matrix()[(1, 1)].norm();
            assert!(
                s_uv.cross_moment().norm() <= DECOUPLE_TOL * scale,
                "residual {}",
                s_uv.cross_moment().norm()
            );
        }
    }

    #[test]
    fn report_for_the_five_percent_scenario() {
        let theta_sq = 0.25;
        let v_min = 0.95;
        let v_max = 1.0 / 0.95;
        let s = orthogonally_squeezed_xy(v_min, v_max, theta_sq);
        let report = maximally_correlated_modes(&s).unwrap();
        assert_relative_eq!(report.i_star, 1.90, epsilon = 1e-9);
        // The maximally correlated modes are the ±45° modes: every entry of
        // the basis matrix has weight 1/√2.
        for z in report.basis_star.matrix().iter() {
            assert_relative_eq!(z.norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-9);
        }
        assert_relative_eq!(report.n_param, (v_min + v_max) / 2.0, epsilon = 1e-12);
        assert_relative_eq!(report.k_param, (v_max - v_min) / 2.0, epsilon = 1e-9);
        // Frozen oracle value of f(0.95).
        assert_relative_eq!(report.eof, 0.007903305997314958, epsilon = 1e-9);
    }

    #[test]
    fn report_for_vacuum() {
        let report = maximally_correlated_modes(&TwoModeGaussianState::vacuum()).unwrap();
        assert_relative_eq!(report.i_star, 2.0, epsilon = 1e-12);
        assert_eq!(report.eof, 0.0);
        assert!(report.i_star <= report.i_of_theta_min + 1e-9);
    }

    #[test]
    fn report_after_pm45_transform_sees_the_same_optimum() {
        let s = pm45_of(&orthogonally_squeezed_xy(0.9, 1.3, 1.0));
        let report = maximally_correlated_modes(&s).unwrap();
        assert_relative_eq!(report.i_star, report.i_of_theta_min, epsilon = 1e-9);
        assert!(report.i_star <= report.i_of_theta_min + 1e-9);
    }

    #[test]
    fn standard_form_of_vacuum() {
        let sf = standard_form(&TwoModeGaussianState::vacuum(), 0.3).unwrap();
        assert_eq!(sf.n, 1.0);
        assert_eq!(sf.k, 0.0);
    }

    #[test]
    fn standard_form_of_the_symmetric_scenario() {
        let theta_sq = 0.8;
        let v_min = 0.95;
        let v_max = 1.0 / 0.95;
        let pm45 = pm45_of(&orthogonally_squeezed_xy(v_min, v_max, theta_sq));
        let sf = standard_form(&pm45, theta_sq).unwrap();
        assert_relative_eq!(sf.n, (v_min + v_max) / 2.0, epsilon = 1e-12);
        assert_relative_eq!(sf.k, (v_max - v_min) / 2.0, epsilon = 1e-12);
        assert_relative_eq!(sf.n - sf.k, v_min, epsilon = 1e-12);
        // n − k = I/2 at the squeezing angle.
        assert_relative_eq!(
            sf.n - sf.k,
            0.5 * duan_value(&pm45, theta_sq),
            epsilon = 1e-9
        );
        // Full covariance pattern: all off-pattern entries vanish.
        let g = pm45.covariance_matrix(theta_sq);
        for (i, j) in [(0, 1), (0, 3), (1, 2), (2, 3)] {
            assert!(g[(i, j)].abs() < 1e-10);
        }
        assert_relative_eq!(g[(0, 2)], -g[(1, 3)], epsilon = 1e-10);
    }

    #[test]
    fn standard_form_rejects_asymmetric_states() {
        // Only one mode squeezed: the ±45° modes are correlated but not
        // isotropic at any angle.
        let px = SqueezedModeParams::new(0.5, 2.0, 0.0).unwrap();
        let s = TwoModeGaussianState::independent_squeezed_pair(px, SqueezedModeParams::vacuum());
        let pm45 = pm45_of(&s);
        let err = standard_form(&pm45, 0.0);
        assert!(matches!(err, Err(Error::StandardForm(_))));
    }

    #[test]
    fn eof_matches_frozen_high_precision_values() {
        // Evaluated with a 50-digit arbitrary-precision oracle.
        let cases = [
            (1.86, 0.0145049878278839650643),
            (1.9, 0.007903305997314958276541),
            (0.5, 1.472942483211706632959),
            (1.0, 0.5661656266226014082709),
            (1.5, 0.1467204651464522045736),
        ];
        for (i, expected) in cases {
            assert_relative_eq!(eof_symmetric(i).unwrap(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn eof_is_zero_at_and_above_the_bound() {
        assert_eq!(eof_symmetric(2.0).unwrap(), 0.0);
        assert_eq!(eof_symmetric(2.5).unwrap(), 0.0);
        // Continuity at the boundary.
        assert!(eof_symmetric(2.0 - 1e-9).unwrap() < 1e-8);
    }

    #[test]
    fn eof_rejects_nonpositive_input() {
        assert!(eof_symmetric(0.0).is_err());
        assert!(eof_symmetric(-1.0).is_err());
        assert!(eof_symmetric(f64::NAN).is_err());
    }

    #[test]
    fn eof_is_strictly_decreasing_and_convex() {
        let grid: Vec<f64> = (0..1000)
            .map(|k| 0.1 + (2.0 - 0.1) * k as f64 / 999.0)
            .collect();
        let vals: Vec<f64> = grid.iter().map(|&i| eof_symmetric(i).unwrap()).collect();
        for w in vals.windows(2) {
            assert!(w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0));
        }
        for w in vals.windows(3) {
            assert!(w[0] - 2.0 * w[1] + w[2] > -1e-12);
        }
    }

    #[test]
    fn loss_correction_reproduces_the_published_pair() {
        assert_relative_eq!(
            correct_losses(1.9, 5.0 / 7.0).unwrap(),
            1.86,
            epsilon = 1e-12
        );
        assert_eq!(correct_losses(1.7, 1.0).unwrap(), 1.7);
        assert_eq!(correct_losses(2.0, 0.41).unwrap(), 2.0);
        assert!(correct_losses(1.9, 0.0).is_err());
        assert!(correct_losses(1.9, 1.2).is_err());
        assert!(correct_losses(-0.1, 0.9).is_err());
    }

    #[test]
    fn loss_correction_orders_below_measurement() {
        for eta in [0.2, 0.5, 0.9, 0.99] {
            for i in [0.5, 1.0, 1.9, 1.999] {
                let corrected = correct_losses(i, eta).unwrap();
                assert!(corrected < i);
            }
        }
        assert_eq!(correct_losses(1.9, 1.0).unwrap(), 1.9);
    }
}
