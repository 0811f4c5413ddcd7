//! Eigenvalue/eigenvector analysis of the linear (sub)models: damping and
//! frequency tables, normalized eigenvectors, and mode-dominance reports.
//!
//! Eigenvalues come from the real Schur decomposition; eigenvectors from
//! complex inverse iteration with the converged eigenvalue as shift. The
//! contract is the residual bound ||A v - lambda v|| / ||v|| < 1e-9, not the
//! algorithm.

use crate::config::VehicleParams;
use crate::error::{Error, Result};
use nalgebra::{Complex, DMatrix, DVector};

pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;
/// Real parts in (0, this] count as marginal instability.
pub const MARGINAL_RE: f64 = 0.15;

type C64 = Complex<f64>;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum StabilityVerdict {
    Stable,
    MarginallyUnstable,
    Unstable,
}

#[derive(Debug, Clone)]
pub struct Mode {
    pub eigenvalue: C64,
    pub damping_ratio: f64,
    pub frequency: f64,
    pub eigenvector: DVector<C64>,
    pub normalized_eigenvector: DVector<C64>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ModalReport {
    pub modes: Vec<Mode>,
    pub stability_verdict: StabilityVerdict,
}

fn damping_frequency(lambda: C64) -> (f64, f64) {
    let freq = lambda.norm();
    if freq == 0.0 {
        return (0.0, 0.0);
    }
    (-lambda.re / freq, freq)
}

/// Fix the overall phase so the largest-magnitude component is real-positive,
/// making the reported vector canonical.
fn phase_fix(v: &DVector<C64>) -> DVector<C64> {
    let mut imax = 0;
    let mut best = -1.0;
    for (i, c) in v.iter().enumerate() {
        if c.norm() > best {
            best = c.norm();
            imax = i;
        }
    }
    if best <= 0.0 {
        return v.clone();
    }
    let rot = v[imax].conj() / v[imax].norm();
    v.map(|c| c * rot)
}

fn inverse_iteration(a: &DMatrix<C64>, lambda: C64, n: usize) -> Option<(DVector<C64>, f64)> {
    // shift slightly off the eigenvalue so the solve stays well posed
    let scale = 1.0 + lambda.norm();
    let mut shift = lambda;
    let mut v = DVector::<C64>::from_element(n, C64::new(1.0, 0.0)).normalize();
    for attempt in 0..3 {
        let mut m = a.clone();
        for i in 0..n {
            m[(i, i)] -= shift;
        }
        if let Some(lu) = m.lu().try_inverse() {
            for _ in 0..8 {
                let next = &lu * &v;
                let norm = next.norm();
                if !norm.is_finite() || norm == 0.0 {
                    break;
                }
                v = next / C64::new(norm, 0.0);
                let av = a * &v;
                let res = (&av - v.map(|c| c * lambda)).norm();
                if res < EIGEN_RESIDUAL_TOL * 1e-2 {
                    return Some((v, res));
                }
            }
            let av = a * &v;
            let res = (&av - v.map(|c| c * lambda)).norm();
            if res < EIGEN_RESIDUAL_TOL {
                return Some((v, res));
            }
        }
        // nudge the shift off a singular factorization and retry
        shift = lambda + C64::new(1e-10 * scale * (attempt + 1) as f64, 0.0);
    }
    None
}

/// Full eigen decomposition of a general real matrix with stability verdict.
pub fn eigen_analysis(matrix: &DMatrix<f64>) -> Result<ModalReport> {
    let n = matrix.nrows();
    if n != matrix.ncols() || matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::EigenFailed("matrix must be square and finite".into()));
    }
    let schur = nalgebra::linalg::Schur::try_new(matrix.clone(), 1e-14, 10_000)
        .ok_or_else(|| Error::EigenFailed("Schur iteration did not converge".into()))?;
    let eigenvalues = schur
        .complex_eigenvalues()
        .iter()
        .copied()
        .collect::<Vec<C64>>();

    let ac: DMatrix<C64> = matrix.map(|x| C64::new(x, 0.0));
    let mut modes = Vec::with_capacity(n);
    for lambda in eigenvalues {
        let (v, residual) = inverse_iteration(&ac, lambda, n)
            .ok_or_else(|| Error::EigenFailed(format!("eigenvector for {lambda} did not converge")))?;
        let v = phase_fix(&v);
        let (zeta, freq) = damping_frequency(lambda);
        modes.push(Mode {
            eigenvalue: lambda,
            damping_ratio: zeta,
            frequency: freq,
            eigenvector: v.clone(),
            normalized_eigenvector: v,
            residual,
        });
    }
    // canonical order: by real part, then imaginary part (conjugates adjacent)
    modes.sort_by(|a, b| {
        a.eigenvalue
            .re
            .partial_cmp(&b.eigenvalue.re)
            .unwrap()
            .then(a.eigenvalue.im.partial_cmp(&b.eigenvalue.im).unwrap())
    });

    let max_re = modes.iter().map(|m| m.eigenvalue.re).fold(f64::MIN, f64::max);
    let stability_verdict = if max_re > MARGINAL_RE {
        StabilityVerdict::Unstable
    } else if max_re > 0.0 {
        StabilityVerdict::MarginallyUnstable
    } else {
        StabilityVerdict::Stable
    };
    Ok(ModalReport {
        modes,
        stability_verdict,
    })
}

/// Scale an eigenvector for cross-state dominance comparison: translational
/// velocities by the tip speed, body rates by the rotor speed; angles and
/// flapping unscaled. The phase is fixed so the largest scaled component is
/// real-positive.
pub fn normalize_eigenvector(
    v: &DVector<C64>,
    state_labels: &[&str],
    p: &VehicleParams,
) -> Result<DVector<C64>> {
    if v.len() != state_labels.len() {
        return Err(Error::LabelError(format!(
            "{} labels for a vector of length {}",
            state_labels.len(),
            v.len()
        )));
    }
    let tip = p.tip_speed_mr();
    let omega = p.mr_omega_nom;
    let mut out = v.clone();
    for (i, label) in state_labels.iter().enumerate() {
        let scale = match *label {
            "u" | "v" | "w" => tip,
            "p" | "q" | "r" => omega,
            "phi" | "theta" | "psi" | "a1s" | "b1s" => 1.0,
            other => return Err(Error::LabelError(other.to_string())),
        };
        out[i] /= C64::new(scale, 0.0);
    }
    Ok(phase_fix(&out))
}

/// Apply eigenvector normalization to every mode of a report.
pub fn apply_normalization(
    report: &mut ModalReport,
    state_labels: &[&str],
    p: &VehicleParams,
) -> Result<()> {
    for mode in &mut report.modes {
        mode.normalized_eigenvector = normalize_eigenvector(&mode.eigenvector, state_labels, p)?;
    }
    Ok(())
}

/// States ranked by normalized component magnitude for one mode, with the
/// classical mode label when the dominance pattern matches one.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ModeDominance {
    pub eigenvalue_re: f64,
    pub eigenvalue_im: f64,
    /// (state, |normalized component|), descending
    pub ranking: Vec<(String, f64)>,
    /// states within 50% of the largest component
    pub dominant_states: Vec<String>,
    pub label: Option<String>,
}

fn classify(dominant: &[String]) -> Option<String> {
    let has = |s: &str| dominant.iter().any(|d| d == s);
    let all_in = |set: &[&str]| dominant.iter().all(|d| set.contains(&d.as_str()));
    if dominant.len() >= 2 && all_in(&["q", "theta", "a1s"]) {
        return Some("short period".to_string());
    }
    if has("u") && all_in(&["u", "theta"]) {
        return Some("phugoid".to_string());
    }
    if dominant.len() == 1 && has("w") {
        return Some("heaving".to_string());
    }
    if has("r") && (has("v") || has("phi")) {
        return Some("dutch roll".to_string());
    }
    None
}

/// Rank states by normalized magnitude per mode; the top states (within 50%
/// of the largest) define the mode's character.
pub fn mode_dominance(report: &ModalReport, state_labels: &[&str]) -> Vec<ModeDominance> {
    report
        .modes
        .iter()
        .map(|mode| {
            let mut ranking: Vec<(String, f64)> = state_labels
                .iter()
                .zip(mode.normalized_eigenvector.iter())
                .map(|(l, c)| (l.to_string(), c.norm()))
                .collect();
            ranking.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
            let top = ranking.first().map(|r| r.1).unwrap_or(0.0);
            let dominant: Vec<String> = ranking
                .iter()
                .filter(|(_, m)| *m >= 0.5 * top && *m > 0.0)
                .map(|(l, _)| l.clone())
                .collect();
            ModeDominance {
                eigenvalue_re: mode.eigenvalue.re,
                eigenvalue_im: mode.eigenvalue.im,
                label: classify(&dominant),
                ranking,
                dominant_states: dominant,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::xcell;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_matrix_modes() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -2.0]));
        let r = eigen_analysis(&m).unwrap();
        let mut re: Vec<f64> = r.modes.iter().map(|m| m.eigenvalue.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(re[0], -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(re[1], -1.0, epsilon = 1e-12);
        for mode in &r.modes {
            assert_abs_diff_eq!(mode.damping_ratio, 1.0, epsilon = 1e-12);
        }
        assert_eq!(r.stability_verdict, StabilityVerdict::Stable);
        // each mode dominated by exactly one state
        let dom = mode_dominance(&r, &["x1", "x2"]);
        for d in &dom {
            assert_eq!(d.dominant_states.len(), 1);
            assert!(d.ranking[1].1 < 1e-12);
        }
    }

    #[test]
    fn eigen_residuals_and_invariants_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..40 {
            let n = 3 + trial % 7;
            let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-3.0..3.0));
            let r = eigen_analysis(&m).unwrap();
            // residual contract
            for mode in &r.modes {
                assert!(mode.residual < EIGEN_RESIDUAL_TOL, "residual {}", mode.residual);
                let av = m.map(|x| Complex::new(x, 0.0)) * &mode.eigenvector;
                let res = (&av - mode.eigenvector.map(|c| c * mode.eigenvalue)).norm()
                    / mode.eigenvector.norm();
                assert!(res < EIGEN_RESIDUAL_TOL);
            }
            // sum of eigenvalues = trace, product = det
            let sum: Complex<f64> = r.modes.iter().map(|m| m.eigenvalue).sum();
            assert_relative_eq!(sum.re, m.trace(), max_relative = 1e-9, epsilon = 1e-9);
            assert_abs_diff_eq!(sum.im, 0.0, epsilon = 1e-9);
            let prod: Complex<f64> = r
                .modes
                .iter()
                .map(|m| m.eigenvalue)
                .fold(Complex::new(1.0, 0.0), |a, b| a * b);
            let det = m.determinant();
            assert_relative_eq!(prod.re, det, max_relative = 1e-6, epsilon = 1e-6);
            // conjugate pairing
            for mode in &r.modes {
                if mode.eigenvalue.im.abs() > 1e-12 {
                    assert!(
                        r.modes
                            .iter()
                            .any(|o| (o.eigenvalue - mode.eigenvalue.conj()).norm() < 1e-8),
                        "unpaired complex eigenvalue {}",
                        mode.eigenvalue
                    );
                }
            }
        }
    }

    #[test]
    fn damping_frequency_reconstructs_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let re = rng.gen_range(-20.0..1.0);
            let im: f64 = rng.gen_range(0.1..20.0);
            let lambda = Complex::new(re, im);
            let (zeta, omega) = damping_frequency(lambda);
            let rebuilt = Complex::new(-zeta * omega, omega * (1.0 - zeta * zeta).sqrt());
            assert_abs_diff_eq!(rebuilt.re, lambda.re, epsilon = 1e-12);
            assert_abs_diff_eq!(rebuilt.im, lambda.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn verdict_thresholds() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 0.05]));
        assert_eq!(
            eigen_analysis(&m).unwrap().stability_verdict,
            StabilityVerdict::MarginallyUnstable
        );
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 0.3]));
        assert_eq!(eigen_analysis(&m).unwrap().stability_verdict, StabilityVerdict::Unstable);
    }

    #[test]
    fn normalization_leaves_angles_unscaled() {
        let p = xcell();
        let v = DVector::from_vec(vec![
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        ]);
        let out = normalize_eigenvector(&v, &["u", "w", "q", "psi"], &p).unwrap();
        assert_abs_diff_eq!(out[3].norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn normalization_rejects_unknown_labels() {
        let p = xcell();
        let v = DVector::from_vec(vec![Complex::new(1.0, 0.0)]);
        assert!(matches!(
            normalize_eigenvector(&v, &["bogus"], &p),
            Err(Error::LabelError(_))
        ));
    }

    #[test]
    fn dominance_ranking_is_scale_equivariant() {
        let p = xcell();
        let labels = ["u", "w", "q", "theta", "a1s"];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            // distinct magnitudes so the ranking has no float-level ties
            let v = DVector::from_fn(5, |i, _| {
                let mag = 2.0_f64.powi(i as i32) * rng.gen_range(0.8..1.2);
                let ph: f64 = rng.gen_range(0.0..6.28);
                Complex::new(mag * ph.cos(), mag * ph.sin())
            });
            let c = Complex::new(rng.gen_range(0.1..5.0), rng.gen_range(-5.0..5.0));
            let n1 = normalize_eigenvector(&v, &labels, &p).unwrap();
            let n2 = normalize_eigenvector(&v.map(|x| x * c), &labels, &p).unwrap();
            let rank = |n: &DVector<Complex<f64>>| {
                let mut idx: Vec<usize> = (0..5).collect();
                idx.sort_by(|&a, &b| n[b].norm().partial_cmp(&n[a].norm()).unwrap());
                idx
            };
            assert_eq!(rank(&n1), rank(&n2));
            // phase fixing makes the output canonical up to overall magnitude
            let mag = c.norm();
            for i in 0..5 {
                assert_abs_diff_eq!(n1[i].re * mag, n2[i].re, epsilon = 1e-9 * mag.max(1.0));
                assert_abs_diff_eq!(n1[i].im * mag, n2[i].im, epsilon = 1e-9 * mag.max(1.0));
            }
        }
    }
}
