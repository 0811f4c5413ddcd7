//! Main- and tail-rotor aerodynamics: momentum/blade-element thrust and
//! inflow, torque, and first-harmonic flapping.
//!
//! The thrust coefficient and inflow ratio form a coupled fixed point
//!
//! ```text
//!   C_T      = (a sigma / 2) [ (mu_z - lambda0)/2 + (1/3 + mu^2/2) theta0 ]
//!   lambda0  = C_T / (2 eta_w sqrt(mu^2 + (lambda0 - mu_z)^2))
//! ```
//!
//! solved by damped fixed-point iteration with a bracketed-Newton fallback.
//! The axial advance ratio enters magnitude-smoothed,
//! `mu_z = (sqrt(w^2 + w_c^2) - w_c)/(Omega R)`: the reference model's
//! axial-flow response is even-symmetric about zero, and the C1 blend keeps
//! the force field differentiable for the linearizer.

use crate::config::VehicleParams;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Air-relative velocity components at a rotor hub, body axes, m/s.
/// Built from vehicle velocity minus wind plus omega x r_hub.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AirVelocity {
    pub u_a: f64,
    pub v_a: f64,
    pub w_a: f64,
}

impl AirVelocity {
    pub fn new(u_a: f64, v_a: f64, w_a: f64) -> Self {
        AirVelocity { u_a, v_a, w_a }
    }
}

/// Geometry and aerodynamic constants for one rotor.
#[derive(Debug, Clone, Copy)]
pub struct RotorGeometry {
    pub radius: f64,
    pub solidity: f64,
    pub lift_slope: f64,
    pub cd0: f64,
    pub eta_w: f64,
    pub rho: f64,
    pub axial_smoothing: f64,
    /// Thrust multiplier (vertical-fin blockage for the tail rotor, 1 otherwise).
    pub blockage: f64,
}

impl RotorGeometry {
    pub fn main(p: &VehicleParams) -> Self {
        RotorGeometry {
            radius: p.mr_radius,
            solidity: p.sigma_mr(),
            lift_slope: p.mr_lift_slope,
            cd0: p.mr_cd0,
            eta_w: p.eta_w,
            rho: p.rho,
            axial_smoothing: p.axial_smoothing,
            blockage: 1.0,
        }
    }

    pub fn tail(p: &VehicleParams) -> Self {
        RotorGeometry {
            radius: p.tr_radius,
            solidity: p.sigma_tr(),
            lift_slope: p.tr_lift_slope,
            cd0: p.tr_cd0,
            eta_w: p.eta_w,
            rho: p.rho,
            axial_smoothing: p.axial_smoothing,
            blockage: 1.0 - 0.75 * p.s_vf / (PI * p.tr_radius * p.tr_radius),
        }
    }
}

/// Converged thrust/inflow/torque state of one rotor.
#[derive(Debug, Clone, Copy)]
pub struct RotorSolution {
    pub thrust: f64,
    pub torque: f64,
    pub ct: f64,
    pub cq: f64,
    pub induced_velocity: f64,
    pub lambda0: f64,
    pub mu: f64,
    pub mu_z: f64,
    pub iterations: u32,
    pub residual: f64,
}

const INFLOW_TOL: f64 = 1e-12;
const MAX_ITERATIONS: u32 = 100;

fn smooth_mag(w: f64, wc: f64) -> f64 {
    (w * w + wc * wc).sqrt() - wc
}

/// Solve the coupled thrust/inflow fixed point for one rotor.
///
/// `ct` may come out negative (descent or negative collective). Returns
/// `InflowDiverged` when no self-consistent inflow exists within the
/// iteration budget, which flags vortex-ring-adjacent conditions outside
/// the model's validity.
pub fn solve_rotor_inflow(
    air: AirVelocity,
    collective: f64,
    omega: f64,
    geom: &RotorGeometry,
) -> Result<RotorSolution> {
    assert!(omega > 0.0, "rotor speed must be positive");
    let tip = omega * geom.radius;
    let mu = (air.u_a * air.u_a + air.v_a * air.v_a).sqrt() / tip;
    let mu_z = smooth_mag(air.w_a, geom.axial_smoothing) / tip;

    let half_as = 0.5 * geom.lift_slope * geom.solidity;
    let theta_term = (1.0 / 3.0 + 0.5 * mu * mu) * collective;
    let ct_of = |lam: f64| half_as * (0.5 * (mu_z - lam) + theta_term);
    let map = |lam: f64| -> Option<f64> {
        let den = 2.0 * geom.eta_w * (mu * mu + (lam - mu_z) * (lam - mu_z)).sqrt();
        let ct = ct_of(lam);
        if den < 1e-14 {
            if ct.abs() < 1e-16 {
                Some(0.0)
            } else {
                None
            }
        } else {
            Some(ct / den)
        }
    };
    let resid_of = |lam: f64| map(lam).map(|m| (lam - m).abs()).unwrap_or(f64::INFINITY);

    // Initial guess: hover momentum closed form, or the high-speed limit.
    let ct0 = ct_of(0.0);
    let mut lam = if mu > 0.02 {
        ct0 / (2.0 * geom.eta_w * mu)
    } else {
        ct0.signum() * (ct0.abs() / (2.0 * geom.eta_w)).sqrt()
    };
    if !lam.is_finite() {
        lam = 0.0;
    }

    let mut iterations = 0u32;
    // Damped fixed point, relaxation 0.5.
    for _ in 0..20 {
        iterations += 1;
        match map(lam) {
            Some(next) => lam += 0.5 * (next - lam),
            None => break,
        }
        if resid_of(lam) <= INFLOW_TOL {
            return Ok(finish(lam, mu, mu_z, tip, geom, ct_of(lam), iterations, resid_of(lam)));
        }
    }

    // Newton with bisection safeguard on
    // F(lam) = 2 eta lam sqrt(mu^2 + (lam-mu_z)^2) - C_T(lam).
    let f = |lam: f64| {
        let s = (mu * mu + (lam - mu_z) * (lam - mu_z)).sqrt();
        2.0 * geom.eta_w * lam * s - ct_of(lam)
    };
    let fprime = |lam: f64| {
        let s = (mu * mu + (lam - mu_z) * (lam - mu_z)).sqrt();
        let ds = if s > 1e-14 { (lam - mu_z) / s } else { 0.0 };
        2.0 * geom.eta_w * (s + lam * ds) + 0.5 * half_as
    };

    // Grow a sign-change bracket around the best iterate.
    let mut span = 0.005;
    let mut bracket = None;
    for _ in 0..12 {
        let lo = lam - span;
        let hi = lam + span;
        if f(lo) * f(hi) < 0.0 {
            bracket = Some((lo, hi));
            break;
        }
        span *= 2.0;
    }
    let (mut lo, mut hi) = match bracket {
        Some(b) => b,
        None => {
            return Err(Error::InflowDiverged {
                mu,
                mu_z,
                residual: resid_of(lam),
            })
        }
    };
    if f(lo) > 0.0 {
        std::mem::swap(&mut lo, &mut hi);
    }
    // Invariant: f(lo) < 0 < f(hi) with lo/hi possibly unordered as numbers.
    let mut x = 0.5 * (lo + hi);
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let fx = f(x);
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let dfx = fprime(x);
        let mut next = if dfx.abs() > 1e-14 { x - fx / dfx } else { 0.5 * (lo + hi) };
        // Step outside the bracket falls back to bisection.
        if (next - lo) * (next - hi) >= 0.0 {
            next = 0.5 * (lo + hi);
        }
        x = next;
        if resid_of(x) <= INFLOW_TOL {
            return Ok(finish(x, mu, mu_z, tip, geom, ct_of(x), iterations, resid_of(x)));
        }
    }
    let residual = resid_of(x);
    if residual <= 1e-10 {
        return Ok(finish(x, mu, mu_z, tip, geom, ct_of(x), iterations, residual));
    }
    Err(Error::InflowDiverged { mu, mu_z, residual })
}

fn finish(
    lam: f64,
    mu: f64,
    mu_z: f64,
    tip: f64,
    geom: &RotorGeometry,
    ct: f64,
    iterations: u32,
    residual: f64,
) -> RotorSolution {
    let disc = PI * geom.radius * geom.radius;
    let thrust = geom.blockage * geom.rho * tip * tip * disc * ct;
    let cq = rotor_cq(ct, lam, mu, mu_z, geom);
    let torque = geom.rho * tip * tip * disc * geom.radius * cq;
    RotorSolution {
        thrust,
        torque,
        ct,
        cq,
        induced_velocity: lam * tip,
        lambda0: lam,
        mu,
        mu_z,
        iterations,
        residual,
    }
}

fn rotor_cq(ct: f64, lam: f64, mu: f64, mu_z: f64, geom: &RotorGeometry) -> f64 {
    geom.solidity / 8.0 * (1.0 + 7.0 / 3.0 * mu * mu) * geom.cd0 + (lam - mu_z) * ct
}

/// Shaft torque of a converged solution: profile drag plus induced terms.
/// Total function of its inputs; the blockage factor does not apply here.
pub fn rotor_torque(sol: &RotorSolution, geom: &RotorGeometry) -> f64 {
    sol.torque_with(geom)
}

impl RotorSolution {
    fn torque_with(&self, geom: &RotorGeometry) -> f64 {
        let cq = rotor_cq(self.ct, self.lambda0, self.mu, self.mu_z, geom);
        // torque = rho (OmegaR)^2 (pi R^2) R cq; recover (OmegaR)^2 from thrust identity
        let disc = PI * geom.radius * geom.radius;
        let tip_sq = if self.ct.abs() > 1e-14 {
            self.thrust / (geom.blockage * geom.rho * disc * self.ct)
        } else if self.lambda0.abs() > 1e-14 {
            (self.induced_velocity / self.lambda0).powi(2)
        } else {
            0.0
        };
        geom.rho * tip_sq * disc * geom.radius * cq
    }
}

/// Tail-rotor solve: identical iteration to the main rotor with the
/// main-rotor wake folded into the in-plane flow, the fin blockage factor
/// on thrust, and the axial direction along the body y-axis.
///
/// `air` is the tail-hub air velocity in body axes. The wake factor
/// K_lambda = clamp(1.5 u_a/(w_iMR - w_a) - g_i, 0, 1.5) is active only when
/// the skew ratio u_a/(w_iMR - w_a) lies in [g_i, g_f]; a singular ratio
/// (w_iMR = w_a) takes the K_lambda = 0 branch.
pub fn solve_tail_rotor(
    air: AirVelocity,
    main_sol: &RotorSolution,
    pedal_collective: f64,
    p: &VehicleParams,
) -> Result<RotorSolution> {
    let (gi, gf) = p.wake_band();
    let denom = main_sol.induced_velocity - air.w_a;
    let mut k_lambda = 0.0;
    if denom.abs() > 1e-9 {
        let ratio = air.u_a / denom;
        if ratio >= gi && ratio <= gf {
            k_lambda = (1.5 * ratio - gi).clamp(0.0, 1.5);
        }
    }
    let w_eff = air.w_a + k_lambda * main_sol.induced_velocity;
    // Tail disc lies in the x-z plane: in-plane flow (u, w_eff), axial flow v.
    let tail_air = AirVelocity::new(air.u_a, w_eff, air.v_a);
    let geom = RotorGeometry::tail(p);
    solve_rotor_inflow(tail_air, pedal_collective, p.omega_tr(), &geom)
}

/// Longitudinal/lateral first-harmonic flapping angles, rad.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FlappingState {
    pub a1s: f64,
    pub b1s: f64,
}

/// Steady flapping forcing terms (the right-hand sides that the flapping
/// states relax toward with time constant tau_c).
fn flapping_forcing(
    air: AirVelocity,
    rates: (f64, f64),
    cyclic: (f64, f64),
    p: &VehicleParams,
) -> FlappingState {
    let (rate_p, rate_q) = rates;
    let (d_lat, d_long) = cyclic;
    let tip = p.tip_speed_mr();
    let mu = (air.u_a * air.u_a + air.v_a * air.v_a).sqrt() / tip;
    let dadmu = p.a1s_mu_gain + p.a1s_mu_slope * mu;
    let a1s = dadmu * air.u_a / tip - p.mr_tau_c * rate_q + p.mr_a_dlong * d_long;
    let b1s = p.b1s_mu_v_gain * air.v_a / tip - p.mr_tau_c * rate_p + p.mr_b_dlat * d_lat;
    FlappingState { a1s, b1s }
}

/// Flapping state derivatives (da1s/dt, db1s/dt), rad/s.
pub fn flapping_rates(
    flap: FlappingState,
    air: AirVelocity,
    rates: (f64, f64),
    cyclic: (f64, f64),
    p: &VehicleParams,
) -> (f64, f64) {
    let steady = flapping_forcing(air, rates, cyclic, p);
    (
        (steady.a1s - flap.a1s) / p.mr_tau_c,
        (steady.b1s - flap.b1s) / p.mr_tau_c,
    )
}

/// Algebraic steady solution of the flapping dynamics (unique; the system is
/// linear in the flap states). The steady gain from d_long to a1s equals the
/// configured cyclic gain exactly.
pub fn flapping_steady(
    air: AirVelocity,
    rates: (f64, f64),
    cyclic: (f64, f64),
    p: &VehicleParams,
) -> FlappingState {
    flapping_forcing(air, rates, cyclic, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::xcell;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn still() -> AirVelocity {
        AirVelocity::new(0.0, 0.0, 0.0)
    }

    #[test]
    fn hover_fixed_point_reproduces_reference_values() {
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        let sol = solve_rotor_inflow(still(), 0.1047, p.mr_omega_nom, &geom).unwrap();
        // The completed constants close the calibration triangle, so these are
        // tight: C_T 0.002256, w_i 4.582, T 81.616.
        assert_relative_eq!(sol.ct, 0.002256, max_relative = 1e-6);
        assert_relative_eq!(sol.induced_velocity, 4.582, max_relative = 1e-6);
        assert_relative_eq!(sol.thrust, 81.616, max_relative = 1e-6);
        assert!(sol.residual <= 1e-10);
        assert!(sol.iterations < 50, "took {}", sol.iterations);
    }

    #[test]
    fn hover_torque_matches_reference() {
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        let sol = solve_rotor_inflow(still(), 0.1047, p.mr_omega_nom, &geom).unwrap();
        assert_relative_eq!(sol.cq, 0.0002228, max_relative = 1e-4);
        assert_relative_eq!(sol.torque, 6.247, max_relative = 1e-4);
        assert_relative_eq!(rotor_torque(&sol, &geom), sol.torque, max_relative = 1e-12);
    }

    #[test]
    fn zero_collective_gives_zero_thrust_and_inflow() {
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        let sol = solve_rotor_inflow(still(), 0.0, p.mr_omega_nom, &geom).unwrap();
        assert_abs_diff_eq!(sol.ct, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.lambda0, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn thrust_free_torque_is_pure_profile_drag() {
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        let sol = solve_rotor_inflow(still(), 0.0, p.mr_omega_nom, &geom).unwrap();
        assert_relative_eq!(sol.cq, geom.solidity * geom.cd0 / 8.0, max_relative = 1e-9);
    }

    #[test]
    fn forward_flight_fixed_point_near_reference() {
        // Reference condition: theta0 = 0.0622 at u,v,w = (16.5557, 0.7456, 0.2585).
        // The smoothed axial-flow model sits within 1% of the published point.
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        let air = AirVelocity::new(16.5557, 0.7456, 0.2585);
        let sol = solve_rotor_inflow(air, 0.0622, p.mr_omega_nom, &geom).unwrap();
        assert_relative_eq!(sol.ct, 0.002270, max_relative = 0.01);
        assert_relative_eq!(sol.induced_velocity, 1.272, max_relative = 0.01);
        assert_relative_eq!(sol.thrust, 82.145, max_relative = 0.01);
    }

    #[test]
    fn hover_momentum_closed_form_matches_solver() {
        // At mu = mu_z = 0 with C_T > 0: lambda0 = sqrt(C_T / (2 eta_w)).
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        for theta0 in [0.02, 0.05, 0.1047, 0.15, 0.2] {
            let sol = solve_rotor_inflow(still(), theta0, p.mr_omega_nom, &geom).unwrap();
            let closed = (sol.ct / (2.0 * geom.eta_w)).sqrt();
            assert_abs_diff_eq!(sol.lambda0, closed, epsilon = 1e-10);
        }
    }

    #[test]
    fn residual_below_tolerance_across_sweep() {
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        let tip = p.tip_speed_mr();
        let mut worst_iter = 0;
        for i in 0..=10 {
            let mu = 0.15 * i as f64 / 10.0;
            for j in 0..=10 {
                let muz = -0.05 + 0.1 * j as f64 / 10.0;
                for k in 0..=8 {
                    let th0 = 0.2 * k as f64 / 8.0;
                    let air = AirVelocity::new(mu * tip, 0.0, muz * tip);
                    match solve_rotor_inflow(air, th0, p.mr_omega_nom, &geom) {
                        Ok(sol) => {
                            assert!(sol.residual <= 1e-10);
                            worst_iter = worst_iter.max(sol.iterations);
                        }
                        Err(Error::InflowDiverged { .. }) => {
                            // Only the transparent-disc corner may diverge:
                            // zero collective, zero in-plane flow, nonzero axial.
                            assert!(
                                th0 == 0.0 && mu == 0.0 && muz != 0.0,
                                "unexpected divergence at mu={mu} muz={muz} th0={th0}"
                            );
                        }
                        Err(e) => panic!("unexpected error {e}"),
                    }
                }
            }
        }
        assert!(worst_iter < 50, "worst iteration count {worst_iter}");
    }

    #[test]
    fn thrust_monotone_in_collective_at_hover() {
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        let mut last = f64::NEG_INFINITY;
        for k in 0..=18 {
            let th0 = 0.02 + (0.2 - 0.02) * k as f64 / 18.0;
            let sol = solve_rotor_inflow(still(), th0, p.mr_omega_nom, &geom).unwrap();
            assert!(sol.thrust > last, "thrust not monotone at theta0={th0}");
            last = sol.thrust;
        }
    }

    #[test]
    fn tail_rotor_hover_reproduces_reference() {
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        let main_sol = solve_rotor_inflow(still(), 0.1047, p.mr_omega_nom, &geom).unwrap();
        let sol = solve_tail_rotor(still(), &main_sol, 0.2412, &p).unwrap();
        assert_relative_eq!(sol.thrust, 6.8656, max_relative = 1e-3);
        assert_relative_eq!(sol.ct, 0.01329, max_relative = 1e-3);
        assert_relative_eq!(sol.induced_velocity, 8.693, max_relative = 1e-3);
        assert_relative_eq!(sol.torque, 0.1268, max_relative = 1e-3);
    }

    #[test]
    fn tail_rotor_forward_flight_near_reference() {
        let p = xcell();
        let geom = RotorGeometry::main(&p);
        let air = AirVelocity::new(16.5557, 0.7456, 0.2585);
        let main_sol = solve_rotor_inflow(air, 0.0622, p.mr_omega_nom, &geom).unwrap();
        let sol = solve_tail_rotor(air, &main_sol, 0.1171, &p).unwrap();
        assert_relative_eq!(sol.thrust, 5.1032, max_relative = 0.02);
        assert_relative_eq!(sol.induced_velocity, 3.336, max_relative = 0.02);
    }

    #[test]
    fn tail_with_unity_blockage_matches_main_formula() {
        // With f_t = 1 and K_lambda = 0 the tail solve is the generic rotor
        // solve with tail parameters: blockage and wake are pure corrections.
        let geom_unblocked = RotorGeometry {
            blockage: 1.0,
            ..RotorGeometry::tail(&xcell())
        };
        let p = xcell();
        let main_sol = solve_rotor_inflow(still(), 0.1047, p.mr_omega_nom, &RotorGeometry::main(&p)).unwrap();
        // hover: wake ratio 0 < g_i, so K_lambda = 0 already
        let tail = solve_tail_rotor(still(), &main_sol, 0.2412, &p).unwrap();
        let generic =
            solve_rotor_inflow(still(), 0.2412, p.omega_tr(), &geom_unblocked).unwrap();
        assert_relative_eq!(tail.ct, generic.ct, max_relative = 1e-10);
        assert_relative_eq!(
            tail.thrust,
            generic.thrust * RotorGeometry::tail(&p).blockage,
            max_relative = 1e-10
        );
        assert_relative_eq!(tail.torque, generic.torque, max_relative = 1e-10);
    }

    #[test]
    fn wake_factor_engages_only_inside_band() {
        let p = xcell();
        let (gi, gf) = p.wake_band();
        let geom = RotorGeometry::main(&p);
        let main_sol = solve_rotor_inflow(still(), 0.1047, p.mr_omega_nom, &geom).unwrap();
        let wi = main_sol.induced_velocity;
        // pick u so the skew ratio is mid-band; compare with just-outside
        let mid = 0.5 * (gi + gf);
        let inside = solve_tail_rotor(
            AirVelocity::new(mid * wi, 0.0, 0.0),
            &main_sol,
            0.2412,
            &p,
        )
        .unwrap();
        let outside = solve_tail_rotor(
            AirVelocity::new((gf + 0.5) * wi, 0.0, 0.0),
            &main_sol,
            0.2412,
            &p,
        )
        .unwrap();
        // wake inflow raises in-plane advance ratio inside the band
        assert!(inside.mu > outside.mu * 0.0 && inside.mu > 0.0);
        let expected_k = (1.5 * mid - gi).clamp(0.0, 1.5);
        let w_eff = expected_k * wi;
        let tip_tr = p.tip_speed_tr();
        let mu_expected = ((mid * wi).powi(2) + w_eff * w_eff).sqrt() / tip_tr;
        assert_relative_eq!(inside.mu, mu_expected, max_relative = 1e-12);
        // outside the band no wake term remains
        let mu_out = (gf + 0.5) * wi / tip_tr;
        assert_relative_eq!(outside.mu, mu_out, max_relative = 1e-12);
    }

    #[test]
    fn flapping_steady_hover_trim_inputs_reproduce_reference() {
        // Reference hover cyclic: d_long = 0.0003395, d_lat = 0.001783 at rest.
        let p = xcell();
        let flap = flapping_steady(still(), (0.0, 0.0), (0.001783, 0.0003395), &p);
        assert_relative_eq!(flap.a1s, 0.0014258, max_relative = 1e-3);
        assert_relative_eq!(flap.b1s, 0.0074866, max_relative = 1e-3);
    }

    #[test]
    fn flapping_zero_inputs_zero_output() {
        let p = xcell();
        let flap = flapping_steady(still(), (0.0, 0.0), (0.0, 0.0), &p);
        assert_eq!(flap.a1s, 0.0);
        assert_eq!(flap.b1s, 0.0);
        let (da, db) = flapping_rates(FlappingState::default(), still(), (0.0, 0.0), (0.0, 0.0), &p);
        assert_eq!(da, 0.0);
        assert_eq!(db, 0.0);
    }

    #[test]
    fn flapping_rate_from_long_cyclic_step() {
        // From zero flapping, step d_long = 0.01: da1s/dt = 4.2*0.01/0.1 = 0.42.
        let p = xcell();
        let (da, db) =
            flapping_rates(FlappingState::default(), still(), (0.0, 0.0), (0.0, 0.01), &p);
        assert_relative_eq!(da, p.mr_a_dlong * 0.01 / p.mr_tau_c, max_relative = 1e-12);
        assert_relative_eq!(da, 0.42, max_relative = 1e-12);
        assert_abs_diff_eq!(db, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rates_vanish_at_steady_solution() {
        let p = xcell();
        let air = AirVelocity::new(4.0, -1.5, 0.3);
        let rates = (0.2, -0.1);
        let cyclic = (0.01, -0.02);
        let steady = flapping_steady(air, rates, cyclic, &p);
        let (da, db) = flapping_rates(steady, air, rates, cyclic, &p);
        assert_abs_diff_eq!(da, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(db, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn steady_long_cyclic_gain_is_exact() {
        let p = xcell();
        let f1 = flapping_steady(still(), (0.0, 0.0), (0.0, 0.01), &p);
        let f0 = flapping_steady(still(), (0.0, 0.0), (0.0, 0.0), &p);
        let gain = (f1.a1s - f0.a1s) / 0.01;
        assert_abs_diff_eq!(gain, 4.2, epsilon = 1e-9);
    }

    #[test]
    fn steady_pitch_rate_gain_is_minus_tau_c() {
        let p = xcell();
        let f1 = flapping_steady(still(), (0.0, 0.1), (0.0, 0.0), &p);
        let f0 = flapping_steady(still(), (0.0, 0.0), (0.0, 0.0), &p);
        let gain = (f1.a1s - f0.a1s) / 0.1;
        assert_abs_diff_eq!(gain, -0.1, epsilon = 1e-9);
    }
}
