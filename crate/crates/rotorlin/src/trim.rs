//! Equilibrium solver: hover and straight forward flight.
//!
//! Newton iteration over (theta0_mr, theta0_tr, d_lat, d_long, phi, theta)
//! drives the six body-axis acceleration residuals to zero with the
//! prescribed velocity and zero angular rates. Flapping follows its steady
//! solution through the force evaluation, so the returned flap angles are
//! the trim flapping by construction.

use crate::config::VehicleParams;
use crate::dynamics::{state_derivative, ControlInput, FlightState};
use crate::error::{Error, Result};
use crate::forces::{self};
use crate::rotor::{FlappingState, RotorSolution};
use nalgebra::{DMatrix, DVector};

pub const TRIM_TOL: f64 = 1e-8;
pub const MU_LIMIT: f64 = 0.15;

/// Flight condition a trim was solved for.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub enum TrimCondition {
    Hover,
    Forward { u: f64, v: f64, w: f64 },
}

impl TrimCondition {
    pub fn velocity(&self) -> (f64, f64, f64) {
        match *self {
            TrimCondition::Hover => (0.0, 0.0, 0.0),
            TrimCondition::Forward { u, v, w } => (u, v, w),
        }
    }

    pub fn label(&self) -> String {
        match self {
            TrimCondition::Hover => "hover".to_string(),
            TrimCondition::Forward { u, v, w } => format!("forward({u}, {v}, {w})"),
        }
    }
}

/// Converged equilibrium point.
#[derive(Debug, Clone)]
pub struct TrimPoint {
    pub state: FlightState,
    pub controls: ControlInput,
    pub main_sol: RotorSolution,
    pub tail_sol: RotorSolution,
    pub flap: FlappingState,
    /// Mixed-unit norm of the (force/m, moment/I) residuals, i.e. the
    /// translational (m/s^2) and angular (rad/s^2) accelerations.
    pub residual_norm: f64,
    pub condition: TrimCondition,
}

fn residuals(z: &[f64; 6], cond: TrimCondition, p: &VehicleParams) -> Result<[f64; 6]> {
    let (u, v, w) = cond.velocity();
    let state = FlightState {
        u,
        v,
        w,
        p: 0.0,
        q: 0.0,
        r: 0.0,
        phi: z[4],
        theta: z[5],
        psi: 0.0,
        flap: None,
    };
    let controls = ControlInput {
        d_coll: z[0],
        d_ped: z[1],
        d_lat: z[2],
        d_long: z[3],
    };
    let d = state_derivative(&state, &controls, p)?;
    Ok([d.du, d.dv, d.dw, d.dp, d.dq, d.dr])
}

fn residual_norm(r: &[f64; 6]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Hover-momentum initial guess for a collective, given a thrust demand.
fn collective_guess(thrust: f64, tip: f64, disc: f64, lift_slope: f64, solidity: f64, p: &VehicleParams) -> f64 {
    let ct = thrust / (p.rho * tip * tip * disc);
    let lam0 = (ct.abs() / (2.0 * p.eta_w)).sqrt().copysign(ct);
    3.0 * ct / (0.5 * lift_slope * solidity) + 1.5 * lam0
}

fn solve(cond: TrimCondition, p: &VehicleParams) -> Result<TrimPoint> {
    use std::f64::consts::PI;
    let tip = p.tip_speed_mr();
    let disc = PI * p.mr_radius * p.mr_radius;
    let coll0 = collective_guess(p.m * p.g, tip, disc, p.mr_lift_slope, p.sigma_mr(), p);

    // yaw-balance guess for the tail collective
    let q_est = p.rho * tip * tip * disc * p.mr_radius
        * (p.sigma_mr() / 8.0 * p.mr_cd0 + (p.m * p.g / (p.rho * tip * tip * disc)).powf(1.5) / (2.0 * p.eta_w).sqrt());
    let tip_tr = p.tip_speed_tr();
    let disc_tr = PI * p.tr_radius * p.tr_radius;
    let ped0 = collective_guess(
        q_est / p.l_tr / p.fin_blockage(),
        tip_tr,
        disc_tr,
        p.tr_lift_slope,
        p.sigma_tr(),
        p,
    );

    let mut z = [coll0, ped0, 0.0, 0.0, 0.05, 0.0];
    let mut history = Vec::new();
    let mut best = f64::INFINITY;
    let mut stale = 0usize;

    for _ in 0..80 {
        let r = residuals(&z, cond, p)?;
        let norm = residual_norm(&r);
        history.push(norm);
        if norm <= TRIM_TOL * 1e-3 {
            break;
        }
        if norm < best * 0.99 {
            best = norm;
            stale = 0;
        } else {
            stale += 1;
            if stale >= 10 {
                return Err(Error::TrimNotConverged(history));
            }
        }

        // Jacobian by central differences, per-variable step 1e-5.
        let h = 1e-5;
        let mut jac = DMatrix::<f64>::zeros(6, 6);
        for j in 0..6 {
            let mut zp = z;
            let mut zm = z;
            zp[j] += h;
            zm[j] -= h;
            let rp = residuals(&zp, cond, p)?;
            let rm = residuals(&zm, cond, p)?;
            for i in 0..6 {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rhs = DVector::from_iterator(6, r.iter().copied());
        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::TrimNotConverged(history.clone()))?;

        // Backtrack if the full step grows the residual.
        let mut scale = 1.0;
        for _ in 0..5 {
            let mut zn = z;
            for j in 0..6 {
                zn[j] -= scale * step[j];
            }
            match residuals(&zn, cond, p) {
                Ok(rn) if residual_norm(&rn) < norm => {
                    z = zn;
                    break;
                }
                _ => scale *= 0.5,
            }
        }
        if scale < 1.0 / 16.0 {
            // accept anyway; stagnation guard will catch real failure
            for j in 0..6 {
                z[j] -= scale * 2.0 * step[j];
            }
        }
    }

    let r = residuals(&z, cond, p)?;
    let norm = residual_norm(&r);
    if norm > TRIM_TOL {
        history.push(norm);
        return Err(Error::TrimNotConverged(history));
    }

    let (u, v, w) = cond.velocity();
    let state = FlightState {
        u,
        v,
        w,
        p: 0.0,
        q: 0.0,
        r: 0.0,
        phi: z[4],
        theta: z[5],
        psi: 0.0,
        flap: None,
    };
    let controls = ControlInput {
        d_coll: z[0],
        d_ped: z[1],
        d_lat: z[2],
        d_long: z[3],
    };
    let buildup = forces::total_forces_moments(&state, &controls, p)?;
    Ok(TrimPoint {
        state,
        controls,
        main_sol: buildup.main,
        tail_sol: buildup.tail,
        flap: buildup.flap,
        residual_norm: norm,
        condition: cond,
    })
}

/// Trim at hover: zero velocities and angular rates, heading free (zero).
pub fn trim_hover(p: &VehicleParams) -> Result<TrimPoint> {
    solve(TrimCondition::Hover, p)
}

/// Trim in straight flight at the prescribed body velocity, zero rates.
pub fn trim_forward(p: &VehicleParams, velocity: (f64, f64, f64)) -> Result<TrimPoint> {
    let (u, v, w) = velocity;
    let mu = (u * u + v * v).sqrt() / p.tip_speed_mr();
    if mu > MU_LIMIT {
        return Err(Error::MuOutOfRange(mu, MU_LIMIT));
    }
    solve(TrimCondition::Forward { u, v, w }, p)
}
