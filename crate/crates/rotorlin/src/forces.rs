//! Component force/moment buildup: rotors, fuselage, fins, gravity.
//!
//! Axis convention: x forward, y right, z down; moments right-handed about
//! the same axes. Rotor force signs are fixed by the reference hover trim
//! (positive roll attitude with the tail rotor thrusting along -y).

use crate::config::VehicleParams;
use crate::dynamics::{ControlInput, FlightState};
use crate::error::Result;
use crate::rotor::{
    self, AirVelocity, FlappingState, RotorGeometry, RotorSolution,
};

/// Body-axis forces (N) and moments (N m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceMoment {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

impl ForceMoment {
    pub const ZERO: ForceMoment = ForceMoment {
        x: 0.0,
        y: 0.0,
        z: 0.0,
        l: 0.0,
        m: 0.0,
        n: 0.0,
    };

    pub fn force_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn moment_norm(&self) -> f64 {
        (self.l * self.l + self.m * self.m + self.n * self.n).sqrt()
    }
}

impl std::ops::Add for ForceMoment {
    type Output = ForceMoment;
    fn add(self, o: ForceMoment) -> ForceMoment {
        ForceMoment {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
            l: self.l + o.l,
            m: self.m + o.m,
            n: self.n + o.n,
        }
    }
}

impl std::ops::AddAssign for ForceMoment {
    fn add_assign(&mut self, o: ForceMoment) {
        *self = *self + o;
    }
}

/// Air-relative velocity at a hub offset (x, 0, z) from the c.g.:
/// vehicle velocity plus omega x r (still-air assumption).
fn air_at_offset(s: &FlightState, x: f64, z: f64) -> AirVelocity {
    AirVelocity::new(
        s.u + s.q * z,
        s.v + s.r * x - s.p * z,
        s.w - s.q * x,
    )
}

/// Air velocity at the main-rotor hub (0, 0, -h_mr).
pub fn air_at_main_hub(s: &FlightState, p: &VehicleParams) -> AirVelocity {
    air_at_offset(s, 0.0, -p.h_mr)
}

/// Air velocity at the tail-rotor hub (-l_tr, 0, -h_tr).
pub fn air_at_tail_hub(s: &FlightState, p: &VehicleParams) -> AirVelocity {
    air_at_offset(s, -p.l_tr, -p.h_tr)
}

/// Gravity projected into body axes. Norm is m g for any attitude.
pub fn gravity_force(phi: f64, theta: f64, p: &VehicleParams) -> ForceMoment {
    let w = p.m * p.g;
    ForceMoment {
        x: -w * theta.sin(),
        y: w * phi.sin() * theta.cos(),
        z: w * phi.cos() * theta.cos(),
        l: 0.0,
        m: 0.0,
        n: 0.0,
    }
}

/// Main-rotor forces and moments from thrust, torque, and tip-path tilt.
/// Thrust acts normal to the tip-path plane at hub height; the hub spring
/// adds K_beta per radian of flapping; shaft torque reacts in yaw.
pub fn main_rotor_forces(thrust: f64, torque: f64, flap: FlappingState, p: &VehicleParams) -> ForceMoment {
    let (sa, ca) = flap.a1s.sin_cos();
    let (sb, cb) = flap.b1s.sin_cos();
    ForceMoment {
        x: -thrust * sa,
        y: thrust * sb,
        z: -thrust * ca * cb,
        l: p.mr_kbeta * flap.b1s + thrust * p.h_mr * sb,
        m: p.mr_kbeta * flap.a1s + thrust * p.h_mr * sa,
        n: -torque,
    }
}

/// Tail-rotor forces and moments: thrust along -y at (-l_tr, 0, -h_tr),
/// torque reacting in pitch.
pub fn tail_rotor_forces(thrust: f64, torque: f64, p: &VehicleParams) -> ForceMoment {
    ForceMoment {
        x: 0.0,
        y: -thrust,
        z: 0.0,
        l: -thrust * p.h_tr,
        m: -torque,
        n: thrust * p.l_tr,
    }
}

/// Fuselage and fin aerodynamic loads.
///
/// Fuselage: axis-aligned flat plates with speed-coupled drag
/// `F_i = -1/2 rho S_i V_inf v_i`, where V_inf includes the main-rotor
/// downwash (w_rel = w_a - w_i) so the hover download is captured.
/// Vertical fin: combined linear-lift/quadratic plate on the local side
/// velocity `v_a - k_vf v_iTR` (a configured fraction of the tail-rotor
/// sidewash; no rate-arm terms — the fin's rate response is dominated by
/// the tail rotor and is not modeled).
/// Horizontal fin: same plate form on the local vertical flow at the tail
/// boom station; the tail sits outside the main-rotor disc, so no hover
/// wake impingement.
pub fn fuselage_fin_forces(
    air: AirVelocity,
    pitch_rate: f64,
    main_wi: f64,
    tail_vi: f64,
    p: &VehicleParams,
) -> ForceMoment {
    let mut fm = ForceMoment::ZERO;

    let w_rel = air.w_a - main_wi;
    let v_inf = (air.u_a * air.u_a + air.v_a * air.v_a + w_rel * w_rel).sqrt();
    fm.x += -0.5 * p.rho * p.s_fus_x * v_inf * air.u_a;
    fm.y += -0.5 * p.rho * p.s_fus_y * v_inf * air.v_a;
    fm.z += -0.5 * p.rho * p.s_fus_z * v_inf * w_rel;

    // C1 magnitude blend, zero-valued and flat at zero; keeps the force
    // field differentiable where fin lift couples to |u|
    let wc = p.axial_smoothing;
    let ua = (air.u_a * air.u_a + wc * wc).sqrt() - wc;

    let v_vf = air.v_a - p.vf_sidewash_frac * tail_vi;
    let y_vf = -0.5 * p.rho * p.s_vf * (p.vf_lift_slope * ua + v_vf.abs()) * v_vf;
    fm.y += y_vf;
    fm.l += p.h_tr * y_vf;
    fm.n += -p.l_tr * y_vf;

    let w_hf = air.w_a + pitch_rate * p.l_tr;
    let z_hf = -0.5 * p.rho * p.s_hf * (p.hf_lift_slope * ua + w_hf.abs()) * w_hf;
    fm.z += z_hf;
    fm.m += p.l_tr * z_hf;

    fm
}

/// Everything `total_forces_moments` solved on the way to the totals.
#[derive(Debug, Clone, Copy)]
pub struct ForceBuildup {
    pub total: ForceMoment,
    pub main: RotorSolution,
    pub tail: RotorSolution,
    pub flap: FlappingState,
    pub air_main: AirVelocity,
    pub air_tail: AirVelocity,
}

/// Sum of rotor, fuselage/fin, and gravity loads at a flight state.
/// Quasi-steady states use the algebraic flapping solution; augmented
/// states use their integrated flap angles.
pub fn total_forces_moments(
    state: &FlightState,
    controls: &ControlInput,
    p: &VehicleParams,
) -> Result<ForceBuildup> {
    let air_main = air_at_main_hub(state, p);
    let geom_main = RotorGeometry::main(p);
    let main = rotor::solve_rotor_inflow(air_main, controls.d_coll, p.mr_omega_nom, &geom_main)?;

    let flap = state.flap.unwrap_or_else(|| {
        rotor::flapping_steady(air_main, (state.p, state.q), (controls.d_lat, controls.d_long), p)
    });

    let air_tail = air_at_tail_hub(state, p);
    let tail = rotor::solve_tail_rotor(air_tail, &main, controls.d_ped, p)?;

    let mut total = main_rotor_forces(main.thrust, main.torque, flap, p);
    total += tail_rotor_forces(tail.thrust, tail.torque, p);
    total += fuselage_fin_forces(
        AirVelocity::new(state.u, state.v, state.w),
        state.q,
        main.induced_velocity,
        tail.induced_velocity,
        p,
    );
    total += gravity_force(state.phi, state.theta, p);

    Ok(ForceBuildup {
        total,
        main,
        tail,
        flap,
        air_main,
        air_tail,
    })
}


impl ForceMoment {
    pub fn to_array(&self) -> [f64; 6] {
        [self.x, self.y, self.z, self.l, self.m, self.n]
    }
}
