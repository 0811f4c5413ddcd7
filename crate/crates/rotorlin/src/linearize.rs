//! Numerical linearization about a trim: state-space A/B assembly and the
//! decoupled longitudinal / lateral-directional submodels.
//!
//! Force and moment partials come from central differences of the total
//! force/moment buildup; inertial cross terms and the Euler-angle kinematic
//! rows are analytic. Every numeric entry is re-evaluated at half step for a
//! Richardson estimate and a step-halving stability report.

use crate::config::VehicleParams;
use crate::dynamics::{ControlInput, FlightState};
use crate::error::{Error, Result};
use crate::forces::{self, ForceMoment};
use crate::rotor::{self, FlappingState};
use crate::trim::TrimPoint;
use nalgebra::DMatrix;

/// Finite-difference step for a variable at its trim value.
pub fn step_policy(x0: f64) -> f64 {
    (1e-4 * x0.abs()).max(1e-5)
}

#[derive(Debug, Clone)]
pub struct StepReport {
    /// (variable, h) for every differenced column.
    pub steps: Vec<(String, f64)>,
    /// |entry(h/2) - entry(h)| for A and B.
    pub halving_dev_a: DMatrix<f64>,
    pub halving_dev_b: DMatrix<f64>,
    /// Richardson extrapolation (4 D(h/2) - D(h)) / 3.
    pub richardson_a: DMatrix<f64>,
    pub richardson_b: DMatrix<f64>,
}

#[derive(Debug, Clone)]
pub struct LinearModel {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub state_labels: Vec<&'static str>,
    pub input_labels: Vec<&'static str>,
    pub trim: TrimPoint,
    pub step_report: StepReport,
}

impl LinearModel {
    /// Entries whose value moves more than `rel` (relative) and `abs_floor`
    /// (absolute) when the step is halved. Empty means the differencing is
    /// step-stable.
    pub fn step_violations(&self, rel: f64, abs_floor: f64) -> Vec<(char, usize, usize, f64)> {
        let mut out = Vec::new();
        for (tag, m, dev) in [
            ('A', &self.a, &self.step_report.halving_dev_a),
            ('B', &self.b, &self.step_report.halving_dev_b),
        ] {
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let d = dev[(i, j)];
                    let v = m[(i, j)].abs();
                    if d > abs_floor && d > rel * v {
                        out.push((tag, i, j, d / v.max(abs_floor)));
                    }
                }
            }
        }
        out
    }
}

/// One differenced column of the six force/moment components.
struct PartialColumn {
    /// central difference at h
    d_h: [f64; 6],
    /// central difference at h/2
    d_h2: [f64; 6],
    h: f64,
}

enum Var {
    State(usize),
    Input(usize),
}

fn resolve(label: &str, n: usize) -> Result<Var> {
    let states: &[&str] = if n == 11 {
        &FlightState::LABELS_11
    } else {
        &FlightState::LABELS_9
    };
    if let Some(i) = states.iter().position(|&s| s == label) {
        return Ok(Var::State(i));
    }
    if let Some(i) = ControlInput::LABELS.iter().position(|&s| s == label) {
        return Ok(Var::Input(i));
    }
    Err(Error::LabelError(label.to_string()))
}

fn eval_forces(
    state0: &FlightState,
    controls0: &ControlInput,
    var: &Var,
    delta: f64,
    p: &VehicleParams,
) -> Result<ForceMoment> {
    let mut sv = state0.to_vec();
    let mut cv = controls0.to_vec();
    match var {
        Var::State(i) => sv[*i] += delta,
        Var::Input(i) => cv[*i] += delta,
    }
    let s = FlightState::from_slice(&sv);
    let c = ControlInput::from_slice(&cv);
    Ok(forces::total_forces_moments(&s, &c, p)?.total)
}

/// Central difference of the total forces/moments with respect to one named
/// state or input, with a half-step re-evaluation. An inflow divergence at a
/// perturbed point is retried at h/4 before giving up.
pub fn force_moment_partials(
    trim: &TrimPoint,
    variable: &str,
    p: &VehicleParams,
) -> Result<([f64; 6], f64)> {
    let col = partial_column(&trim.state, &trim.controls, variable, p)?;
    Ok((col.d_h, col.h))
}

fn partial_column(
    state0: &FlightState,
    controls0: &ControlInput,
    variable: &str,
    p: &VehicleParams,
) -> Result<PartialColumn> {
    let var = resolve(variable, state0.dim())?;
    let x0 = match &var {
        Var::State(i) => state0.to_vec()[*i],
        Var::Input(i) => controls0.to_vec()[*i],
    };
    let mut h = step_policy(x0);
    for attempt in 0..2 {
        let result = (|| -> Result<PartialColumn> {
            let fp = eval_forces(state0, controls0, &var, h, p)?;
            let fm = eval_forces(state0, controls0, &var, -h, p)?;
            let fp2 = eval_forces(state0, controls0, &var, h / 2.0, p)?;
            let fm2 = eval_forces(state0, controls0, &var, -h / 2.0, p)?;
            let mut d_h = [0.0; 6];
            let mut d_h2 = [0.0; 6];
            let ap = fp.to_array();
            let am = fm.to_array();
            let ap2 = fp2.to_array();
            let am2 = fm2.to_array();
            for k in 0..6 {
                d_h[k] = (ap[k] - am[k]) / (2.0 * h);
                d_h2[k] = (ap2[k] - am2[k]) / h;
            }
            Ok(PartialColumn { d_h, d_h2, h })
        })();
        match result {
            Ok(col) => return Ok(col),
            Err(Error::InflowDiverged { .. }) if attempt == 0 => h /= 4.0,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PartialUnavailable(variable.to_string()))
}

/// Analytic inertial cross terms: the rate/velocity products of the
/// Euler-Newton equations differentiated at the trim state.
fn cross_terms(s: &FlightState, p: &VehicleParams, n: usize) -> DMatrix<f64> {
    let mut c = DMatrix::<f64>::zeros(n, n);
    // indices: u v w p q r phi theta psi
    let (u, v, w, pp, q, r) = (s.u, s.v, s.w, s.p, s.q, s.r);
    // du = X/m - q w + r v
    c[(0, 1)] = r;
    c[(0, 2)] = -q;
    c[(0, 4)] = -w;
    c[(0, 5)] = v;
    // dv = Y/m - r u + p w
    c[(1, 0)] = -r;
    c[(1, 2)] = pp;
    c[(1, 3)] = w;
    c[(1, 5)] = -u;
    // dw = Z/m - p v + q u
    c[(2, 0)] = q;
    c[(2, 1)] = -pp;
    c[(2, 3)] = -v;
    c[(2, 4)] = u;
    // dp = (L + (Iyy-Izz) q r)/Ixx
    c[(3, 4)] = (p.iyy - p.izz) * r / p.ixx;
    c[(3, 5)] = (p.iyy - p.izz) * q / p.ixx;
    // dq = (M + (Izz-Ixx) p r)/Iyy
    c[(4, 3)] = (p.izz - p.ixx) * r / p.iyy;
    c[(4, 5)] = (p.izz - p.ixx) * pp / p.iyy;
    // dr = (N + (Ixx-Iyy) p q)/Izz
    c[(5, 3)] = (p.ixx - p.iyy) * q / p.izz;
    c[(5, 4)] = (p.ixx - p.iyy) * pp / p.izz;
    c
}

/// Analytic Euler-angle kinematic rows at the trim attitude and rates.
fn kinematic_rows(s: &FlightState, a: &mut DMatrix<f64>) {
    let (sphi, cphi) = s.phi.sin_cos();
    let (sth, cth) = s.theta.sin_cos();
    let tth = sth / cth;
    let sec = 1.0 / cth;
    let (q, r) = (s.q, s.r);
    // phi-dot row
    a[(6, 3)] = 1.0;
    a[(6, 4)] = sphi * tth;
    a[(6, 5)] = cphi * tth;
    a[(6, 6)] = (q * cphi - r * sphi) * tth;
    a[(6, 7)] = (q * sphi + r * cphi) * sec * sec;
    // theta-dot row
    a[(7, 4)] = cphi;
    a[(7, 5)] = -sphi;
    a[(7, 6)] = -(q * sphi + r * cphi);
    // psi-dot row
    a[(8, 4)] = sphi * sec;
    a[(8, 5)] = cphi * sec;
    a[(8, 6)] = (q * cphi - r * sphi) * sec;
    a[(8, 7)] = (q * sphi + r * cphi) * tth * sec;
}

/// Numeric partial of the steady flapping solution (composed with the hub
/// air velocity) with respect to a state or input.
fn steady_flap_partial(
    state0: &FlightState,
    controls0: &ControlInput,
    var: &Var,
    h: f64,
    p: &VehicleParams,
) -> (f64, f64) {
    let eval = |delta: f64| -> FlappingState {
        let mut sv = state0.to_vec();
        let mut cv = controls0.to_vec();
        match var {
            Var::State(i) => sv[*i] += delta,
            Var::Input(i) => cv[*i] += delta,
        }
        let s = FlightState::from_slice(&sv);
        let c = ControlInput::from_slice(&cv);
        let air = forces::air_at_main_hub(&s, p);
        rotor::flapping_steady(air, (s.p, s.q), (c.d_lat, c.d_long), p)
    };
    let fp = eval(h);
    let fm = eval(-h);
    ((fp.a1s - fm.a1s) / (2.0 * h), (fp.b1s - fm.b1s) / (2.0 * h))
}

/// Assemble the state-space model about a trim. `augmented` adds the two
/// flapping states (11-state model); otherwise the 9-state quasi-steady
/// model is produced.
pub fn assemble_linear_model(
    trim: &TrimPoint,
    p: &VehicleParams,
    augmented: bool,
) -> Result<LinearModel> {
    let n = if augmented { 11 } else { 9 };
    let mut state0 = trim.state;
    state0.flap = augmented.then_some(trim.flap);
    let controls0 = trim.controls;

    let state_labels: Vec<&'static str> = if augmented {
        FlightState::LABELS_11.to_vec()
    } else {
        FlightState::LABELS_9.to_vec()
    };
    let input_labels: Vec<&'static str> = ControlInput::LABELS.to_vec();

    // Force/moment partial columns, evaluated concurrently per variable.
    let mut cols_a: Vec<Option<PartialColumn>> = (0..n).map(|_| None).collect();
    let mut cols_b: Vec<Option<PartialColumn>> = (0..4).map(|_| None).collect();
    {
        let state0 = &state0;
        let controls0 = &controls0;
        let results: Vec<Result<PartialColumn>> = std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for label in state_labels.iter().chain(input_labels.iter()) {
                let label: &'static str = label;
                handles.push(scope.spawn(move || partial_column(state0, controls0, label, p)));
            }
            handles.into_iter().map(|h| h.join().expect("partial column thread")). collect()
        });
        for (k, res) in results.into_iter().enumerate() {
            let col = res?;
            if k < n {
                cols_a[k] = Some(col);
            } else {
                cols_b[k - n] = Some(col);
            }
        }
    }

    let mass_scale = [p.m, p.m, p.m, p.ixx, p.iyy, p.izz];
    let build = |use_half: bool| -> (DMatrix<f64>, DMatrix<f64>) {
        let mut a = cross_terms(&state0, p, n);
        let mut b = DMatrix::<f64>::zeros(n, 4);
        for (j, col) in cols_a.iter().enumerate() {
            let col = col.as_ref().unwrap();
            let d = if use_half { &col.d_h2 } else { &col.d_h };
            for i in 0..6 {
                a[(i, j)] += d[i] / mass_scale[i];
            }
        }
        for (j, col) in cols_b.iter().enumerate() {
            let col = col.as_ref().unwrap();
            let d = if use_half { &col.d_h2 } else { &col.d_h };
            for i in 0..6 {
                b[(i, j)] = d[i] / mass_scale[i];
            }
        }
        kinematic_rows(&state0, &mut a);
        if augmented {
            // flapping rows: relaxation toward the steady solution
            for (j, label) in state_labels.iter().enumerate() {
                if *label == "a1s" {
                    a[(9, j)] = -1.0 / p.mr_tau_c;
                    continue;
                }
                if *label == "b1s" {
                    a[(10, j)] = -1.0 / p.mr_tau_c;
                    continue;
                }
                let var = resolve(label, n).unwrap();
                let x0 = state0.to_vec()[j];
                let h = if use_half { step_policy(x0) / 2.0 } else { step_policy(x0) };
                let (da, db) = steady_flap_partial(&state0, &controls0, &var, h, p);
                a[(9, j)] = da / p.mr_tau_c;
                a[(10, j)] = db / p.mr_tau_c;
            }
            for (j, label) in input_labels.iter().enumerate() {
                let var = resolve(label, n).unwrap();
                let h = if use_half { step_policy(0.0) / 2.0 } else { step_policy(0.0) };
                let (da, db) = steady_flap_partial(&state0, &controls0, &var, h, p);
                b[(9, j)] = da / p.mr_tau_c;
                b[(10, j)] = db / p.mr_tau_c;
            }
        }
        (a, b)
    };

    let (a, b) = build(false);
    let (a2, b2) = build(true);
    let halving_dev_a = (&a2 - &a).abs();
    let halving_dev_b = (&b2 - &b).abs();
    let richardson_a = (&a2 * 4.0 - &a) / 3.0;
    let richardson_b = (&b2 * 4.0 - &b) / 3.0;

    let steps = state_labels
        .iter()
        .enumerate()
        .map(|(j, l)| (l.to_string(), cols_a[j].as_ref().unwrap().h))
        .chain(
            input_labels
                .iter()
                .enumerate()
                .map(|(j, l)| (l.to_string(), cols_b[j].as_ref().unwrap().h)),
        )
        .collect();

    Ok(LinearModel {
        a,
        b,
        state_labels,
        input_labels,
        trim: trim.clone(),
        step_report: StepReport {
            steps,
            halving_dev_a,
            halving_dev_b,
            richardson_a,
            richardson_b,
        },
    })
}

/// Decoupled longitudinal and lateral-directional submodels.
#[derive(Debug, Clone)]
pub struct DecoupledModel {
    pub long_a: DMatrix<f64>,
    pub long_b: DMatrix<f64>,
    pub long_state_labels: Vec<&'static str>,
    pub long_input_labels: Vec<&'static str>,
    pub lat_a: DMatrix<f64>,
    pub lat_b: DMatrix<f64>,
    pub lat_state_labels: Vec<&'static str>,
    pub lat_input_labels: Vec<&'static str>,
    /// largest off-block entry magnitude dropped from the full matrix
    pub coupling_norm: f64,
}

const LONG_IDX: [usize; 4] = [0, 2, 4, 7]; // u w q theta
const LAT_IDX: [usize; 4] = [1, 3, 5, 6]; // v p r phi
const LONG_IN: [usize; 2] = [0, 3]; // d_coll d_long
const LAT_IN: [usize; 2] = [1, 2]; // d_ped d_lat

/// Extract the decoupled blocks from a 9-state model. With
/// `include_flapping` the blocks are augmented to 5 states: the extracted
/// 4x4 rows/columns are preserved exactly, the flapping row comes from the
/// steady-flapping partials scaled by 1/tau_c, and the direct flapping
/// column follows the reference display structure (thrust-tilt term with
/// reversed sign against the hub spring, matching the published matrices).
pub fn decouple(
    model: &LinearModel,
    trim: &TrimPoint,
    include_flapping: bool,
    p: &VehicleParams,
) -> DecoupledModel {
    assert_eq!(model.a.nrows(), 9, "decouple expects the 9-state model");
    let a = &model.a;
    let b = &model.b;

    let dim = if include_flapping { 5 } else { 4 };
    let mut long_a = DMatrix::<f64>::zeros(dim, dim);
    let mut lat_a = DMatrix::<f64>::zeros(dim, dim);
    let mut long_b = DMatrix::<f64>::zeros(dim, 2);
    let mut lat_b = DMatrix::<f64>::zeros(dim, 2);

    for i in 0..4 {
        for j in 0..4 {
            long_a[(i, j)] = a[(LONG_IDX[i], LONG_IDX[j])];
            lat_a[(i, j)] = a[(LAT_IDX[i], LAT_IDX[j])];
        }
        for j in 0..2 {
            long_b[(i, j)] = b[(LONG_IDX[i], LONG_IN[j])];
            lat_b[(i, j)] = b[(LAT_IDX[i], LAT_IN[j])];
        }
    }

    if include_flapping {
        let t0 = trim.main_sol.thrust;
        let (sa, ca) = trim.flap.a1s.sin_cos();
        let cb = trim.flap.b1s.cos();
        // direct flapping columns
        long_a[(0, 4)] = -t0 * ca / p.m;
        long_a[(1, 4)] = t0 * sa * cb / p.m;
        long_a[(2, 4)] = (p.mr_kbeta - t0 * p.h_mr * ca) / p.iyy;
        lat_a[(0, 4)] = t0 * cb / p.m;
        lat_a[(1, 4)] = (p.mr_kbeta - t0 * p.h_mr * cb) / p.ixx;
        // flapping rows from the steady solution
        let state0 = trim.state;
        let controls0 = trim.controls;
        for (k, &j9) in LONG_IDX.iter().enumerate() {
            let var = Var::State(j9);
            let h = step_policy(state0.to_vec()[j9]);
            let (da, _) = steady_flap_partial(&state0, &controls0, &var, h, p);
            long_a[(4, k)] = da / p.mr_tau_c;
        }
        long_a[(4, 4)] = -1.0 / p.mr_tau_c;
        for (k, &j9) in LAT_IDX.iter().enumerate() {
            let var = Var::State(j9);
            let h = step_policy(state0.to_vec()[j9]);
            let (_, db) = steady_flap_partial(&state0, &controls0, &var, h, p);
            lat_a[(4, k)] = db / p.mr_tau_c;
        }
        lat_a[(4, 4)] = -1.0 / p.mr_tau_c;
        for (k, &ji) in LONG_IN.iter().enumerate() {
            let (da, _) = steady_flap_partial(&state0, &controls0, &Var::Input(ji), 1e-5, p);
            long_b[(4, k)] = da / p.mr_tau_c;
        }
        for (k, &ji) in LAT_IN.iter().enumerate() {
            let (_, db) = steady_flap_partial(&state0, &controls0, &Var::Input(ji), 1e-5, p);
            lat_b[(4, k)] = db / p.mr_tau_c;
        }
    }

    // largest dropped cross-block entry
    let mut coupling: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            coupling = coupling.max(a[(LONG_IDX[i], LAT_IDX[j])].abs());
            coupling = coupling.max(a[(LAT_IDX[i], LONG_IDX[j])].abs());
        }
    }

    DecoupledModel {
        long_a,
        long_b,
        long_state_labels: if include_flapping {
            vec!["u", "w", "q", "theta", "a1s"]
        } else {
            vec!["u", "w", "q", "theta"]
        },
        long_input_labels: vec!["d_coll", "d_long"],
        lat_a,
        lat_b,
        lat_state_labels: if include_flapping {
            vec!["v", "p", "r", "phi", "b1s"]
        } else {
            vec!["v", "p", "r", "phi"]
        },
        lat_input_labels: vec!["d_ped", "d_lat"],
        coupling_norm: coupling,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::xcell;
    use crate::dynamics::state_derivative;
    use crate::trim::trim_hover;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn hover_model() -> (VehicleParams, TrimPoint, LinearModel) {
        let p = xcell();
        let t = trim_hover(&p).unwrap();
        let m = assemble_linear_model(&t, &p, false).unwrap();
        (p, t, m)
    }

    #[test]
    fn psi_columns_are_exactly_zero_in_force_rows() {
        let (_, _, m) = hover_model();
        for i in 0..6 {
            assert_eq!(m.a[(i, 8)], 0.0);
        }
    }

    #[test]
    fn gravity_pitch_entry_matches_analytic() {
        let (p, t, m) = hover_model();
        // (u, theta) entry = -g cos(theta0)
        assert_abs_diff_eq!(m.a[(0, 7)], -p.g * t.state.theta.cos(), epsilon = 1e-6);
    }

    #[test]
    fn kinematic_rows_match_numeric_differencing() {
        let (p, t, m) = hover_model();
        // independent numeric check of rows 6..8 against the full nonlinear
        // derivative
        for j in 0..9 {
            let h = step_policy(t.state.to_vec()[j]);
            let mut sp = t.state.to_vec();
            let mut sm = sp.clone();
            sp[j] += h;
            sm[j] -= h;
            let dp = state_derivative(&FlightState::from_slice(&sp), &t.controls, &p).unwrap();
            let dm = state_derivative(&FlightState::from_slice(&sm), &t.controls, &p).unwrap();
            let dpv = dp.to_vec();
            let dmv = dm.to_vec();
            for i in 6..9 {
                let numeric = (dpv[i] - dmv[i]) / (2.0 * h);
                assert_abs_diff_eq!(m.a[(i, j)], numeric, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn step_halving_is_stable() {
        let (_, _, m) = hover_model();
        let violations = m.step_violations(1e-3, 1e-6);
        assert!(violations.is_empty(), "unstable entries: {violations:?}");
    }

    #[test]
    fn linear_model_is_tangent_to_nonlinear() {
        // perturbation along each state: error of the linear prediction
        // shrinks quadratically
        let (p, t, m) = hover_model();
        let d0 = state_derivative(&t.state, &t.controls, &p).unwrap().to_vec();
        for j in 0..9 {
            let mut errs = Vec::new();
            for &eps in &[1e-2, 1e-3, 1e-4] {
                let mut sv = t.state.to_vec();
                sv[j] += eps;
                let d = state_derivative(&FlightState::from_slice(&sv), &t.controls, &p)
                    .unwrap()
                    .to_vec();
                let mut err: f64 = 0.0;
                for i in 0..9 {
                    let lin = d0[i] + m.a[(i, j)] * eps;
                    err += (d[i] - lin).powi(2);
                }
                errs.push(err.sqrt());
            }
            if errs[0] < 1e-12 {
                continue; // exactly linear direction (e.g. psi)
            }
            let slope = (errs[0] / errs[1]).log10();
            assert!(
                slope > 1.6,
                "direction {j}: error sequence {errs:?} has slope {slope}"
            );
        }
    }

    #[test]
    fn unknown_variable_is_label_error() {
        let (p, t, _) = hover_model();
        assert!(matches!(
            force_moment_partials(&t, "warp", &p),
            Err(Error::LabelError(_))
        ));
    }

    #[test]
    fn collective_thrust_partial_matches_reference() {
        let (p, t, _) = hover_model();
        // dT/d(coll) at hover: compare through the Z row (thrust-dominated)
        let (col, _) = force_moment_partials(&t, "d_coll", &p).unwrap();
        // Z partial includes the fuselage-download chain; thrust part is
        // within a few percent of 1043.6
        assert_relative_eq!(-col[2], 1043.6, max_relative = 0.03);
    }

    #[test]
    fn heading_partial_is_exactly_zero() {
        let (p, t, _) = hover_model();
        let (col, _) = force_moment_partials(&t, "psi", &p).unwrap();
        for c in col {
            assert_eq!(c, 0.0);
        }
    }

    #[test]
    fn decoupled_blocks_preserve_entries() {
        let (p, t, m) = hover_model();
        let d = decouple(&m, &t, true, &p);
        for (i, &i9) in LONG_IDX.iter().enumerate() {
            for (j, &j9) in LONG_IDX.iter().enumerate() {
                assert_eq!(d.long_a[(i, j)], m.a[(i9, j9)]);
            }
        }
        for (i, &i9) in LAT_IDX.iter().enumerate() {
            for (j, &j9) in LAT_IDX.iter().enumerate() {
                assert_eq!(d.lat_a[(i, j)], m.a[(i9, j9)]);
            }
        }
        assert!(d.coupling_norm >= 0.0);
    }

    #[test]
    fn flapping_rows_have_relaxation_structure() {
        let (p, t, m) = hover_model();
        let d = decouple(&m, &t, true, &p);
        assert_relative_eq!(d.long_a[(4, 4)], -10.0, max_relative = 1e-12);
        assert_relative_eq!(d.long_b[(4, 1)], 42.0, max_relative = 1e-9);
        assert_abs_diff_eq!(d.long_b[(4, 0)], 0.0, epsilon = 1e-9);
        assert_relative_eq!(d.lat_a[(4, 4)], -10.0, max_relative = 1e-12);
        assert_relative_eq!(d.lat_b[(4, 1)], 42.0, max_relative = 1e-9);
    }

    #[test]
    fn block_diagonal_embedding_is_consistent() {
        // embedding both 5-state blocks into a 10x10 with zero off-blocks and
        // propagating a pure longitudinal perturbation matches the block model
        let (p, t, m) = hover_model();
        let d = decouple(&m, &t, true, &p);
        let mut full = DMatrix::<f64>::zeros(10, 10);
        full.view_mut((0, 0), (5, 5)).copy_from(&d.long_a);
        full.view_mut((5, 5), (5, 5)).copy_from(&d.lat_a);
        let mut x = DMatrix::<f64>::zeros(10, 1);
        x[(0, 0)] = 1.0;
        x[(2, 0)] = -0.5;
        let full_dx = &full * &x;
        let block_dx = &d.long_a * x.view((0, 0), (5, 1));
        for i in 0..5 {
            assert_eq!(full_dx[(i, 0)], block_dx[(i, 0)]);
            assert_eq!(full_dx[(5 + i, 0)], 0.0);
        }
    }

    #[test]
    fn augmented_model_has_flapping_relaxation() {
        let p = xcell();
        let t = trim_hover(&p).unwrap();
        let m = assemble_linear_model(&t, &p, true).unwrap();
        assert_eq!(m.a.nrows(), 11);
        assert_relative_eq!(m.a[(9, 9)], -10.0, max_relative = 1e-12);
        assert_relative_eq!(m.a[(10, 10)], -10.0, max_relative = 1e-12);
        assert_relative_eq!(m.b[(9, 3)], 42.0, max_relative = 1e-9);
        assert_relative_eq!(m.b[(10, 2)], 42.0, max_relative = 1e-9);
    }
}
