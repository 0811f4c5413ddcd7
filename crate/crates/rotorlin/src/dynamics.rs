//! Rigid-body flight state and the nonlinear 6-DOF state derivative.
//!
//! Two model variants are first-class: the 9-state model with quasi-steady
//! flapping (flap angles follow their algebraic steady solution) and the
//! 11-state model with the flapping dynamics integrated as states.

use crate::config::VehicleParams;
use crate::error::{Error, Result};
use crate::forces::{self, ForceMoment};
use crate::rotor::FlappingState;
use std::f64::consts::FRAC_PI_2;

/// Default symmetric actuator limit on blade-pitch commands, rad.
pub const CONTROL_LIMIT: f64 = 0.25;

/// Body-axis flight state. `flap` is present only in the augmented variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightState {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
    pub flap: Option<FlappingState>,
}

impl FlightState {
    pub fn at_rest() -> Self {
        FlightState {
            u: 0.0,
            v: 0.0,
            w: 0.0,
            p: 0.0,
            q: 0.0,
            r: 0.0,
            phi: 0.0,
            theta: 0.0,
            psi: 0.0,
            flap: None,
        }
    }

    pub const LABELS_9: [&'static str; 9] = ["u", "v", "w", "p", "q", "r", "phi", "theta", "psi"];
    pub const LABELS_11: [&'static str; 11] = [
        "u", "v", "w", "p", "q", "r", "phi", "theta", "psi", "a1s", "b1s",
    ];

    pub fn dim(&self) -> usize {
        if self.flap.is_some() {
            11
        } else {
            9
        }
    }

    pub fn labels(&self) -> &'static [&'static str] {
        if self.flap.is_some() {
            &Self::LABELS_11
        } else {
            &Self::LABELS_9
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![
            self.u, self.v, self.w, self.p, self.q, self.r, self.phi, self.theta, self.psi,
        ];
        if let Some(f) = self.flap {
            v.push(f.a1s);
            v.push(f.b1s);
        }
        v
    }

    pub fn from_slice(s: &[f64]) -> Self {
        assert!(s.len() == 9 || s.len() == 11, "state vector must be 9 or 11 long");
        FlightState {
            u: s[0],
            v: s[1],
            w: s[2],
            p: s[3],
            q: s[4],
            r: s[5],
            phi: s[6],
            theta: s[7],
            psi: s[8],
            flap: if s.len() == 11 {
                Some(FlappingState { a1s: s[9], b1s: s[10] })
            } else {
                None
            },
        }
    }

    pub fn get(&self, label: &str) -> Result<f64> {
        let v = match label {
            "u" => self.u,
            "v" => self.v,
            "w" => self.w,
            "p" => self.p,
            "q" => self.q,
            "r" => self.r,
            "phi" => self.phi,
            "theta" => self.theta,
            "psi" => self.psi,
            "a1s" => self.flap.ok_or_else(|| Error::LabelError("a1s".into()))?.a1s,
            "b1s" => self.flap.ok_or_else(|| Error::LabelError("b1s".into()))?.b1s,
            other => return Err(Error::LabelError(other.to_string())),
        };
        Ok(v)
    }
}

/// Blade-pitch commands, rad.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlInput {
    pub d_coll: f64,
    pub d_ped: f64,
    pub d_lat: f64,
    pub d_long: f64,
}

impl ControlInput {
    pub const LABELS: [&'static str; 4] = ["d_coll", "d_ped", "d_lat", "d_long"];

    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.d_coll, self.d_ped, self.d_lat, self.d_long]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        ControlInput {
            d_coll: s[0],
            d_ped: s[1],
            d_lat: s[2],
            d_long: s[3],
        }
    }

    pub fn within_limits(&self, limit: f64) -> bool {
        self.to_vec().iter().all(|c| c.abs() <= limit)
    }
}

/// Time derivative of a `FlightState`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub du: f64,
    pub dv: f64,
    pub dw: f64,
    pub dp: f64,
    pub dq: f64,
    pub dr: f64,
    pub dphi: f64,
    pub dtheta: f64,
    pub dpsi: f64,
    pub dflap: Option<(f64, f64)>,
}

impl StateDerivative {
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = vec![
            self.du, self.dv, self.dw, self.dp, self.dq, self.dr, self.dphi, self.dtheta,
            self.dpsi,
        ];
        if let Some((da, db)) = self.dflap {
            v.push(da);
            v.push(db);
        }
        v
    }

    pub fn norm(&self) -> f64 {
        self.to_vec().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Euler-Newton core: accelerations and Euler-angle kinematics given total
/// body forces/moments (gravity already projected into `fm`).
pub fn rigid_body_derivative(
    state: &FlightState,
    fm: &ForceMoment,
    p: &VehicleParams,
) -> Result<StateDerivative> {
    if state.theta.abs() >= FRAC_PI_2 {
        return Err(Error::KinematicSingularity(state.theta));
    }
    let FlightState {
        u, v, w, p: pp, q, r, phi, theta, ..
    } = *state;
    let (sphi, cphi) = phi.sin_cos();
    let (sth, cth) = theta.sin_cos();
    let tth = sth / cth;

    Ok(StateDerivative {
        du: fm.x / p.m - q * w + r * v,
        dv: fm.y / p.m - r * u + pp * w,
        dw: fm.z / p.m - pp * v + q * u,
        dp: (fm.l + (p.iyy - p.izz) * q * r) / p.ixx,
        dq: (fm.m + (p.izz - p.ixx) * pp * r) / p.iyy,
        dr: (fm.n + (p.ixx - p.iyy) * pp * q) / p.izz,
        dphi: pp + (q * sphi + r * cphi) * tth,
        dtheta: q * cphi - r * sphi,
        dpsi: (q * sphi + r * cphi) / cth,
        dflap: None,
    })
}

/// Full nonlinear state derivative. Quasi-steady states (no flap fields)
/// fold the flapping into the force evaluation; augmented states integrate
/// the flapping dynamics alongside the rigid body.
pub fn state_derivative(
    state: &FlightState,
    controls: &ControlInput,
    p: &VehicleParams,
) -> Result<StateDerivative> {
    let buildup = forces::total_forces_moments(state, controls, p)?;
    let mut deriv = rigid_body_derivative(state, &buildup.total, p)?;
    if state.flap.is_some() {
        deriv.dflap = Some(crate::rotor::flapping_rates(
            buildup.flap,
            buildup.air_main,
            (state.p, state.q),
            (controls.d_lat, controls.d_long),
            p,
        ));
    }
    Ok(deriv)
}
