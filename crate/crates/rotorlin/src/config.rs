//! Vehicle parameter set: loading, validation, and completion.
//!
//! The config format is a flat `key = value` text document with `#` comments,
//! SI units throughout. `complete_parameters` back-solves the constants that
//! the reference data over-determines (air density, wake efficiency, blade
//! lift slope and profile drag, tail gear ratio, hub stiffness) from the
//! hover operating point, so a config can be recalibrated against measured
//! trim data.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Physical parameter set for one vehicle. Immutable after construction;
/// share by value or `&` across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct VehicleParams {
    pub m: f64,
    pub ixx: f64,
    pub iyy: f64,
    pub izz: f64,

    pub mr_radius: f64,
    pub mr_chord: f64,
    pub mr_blades: u32,
    pub mr_omega_nom: f64,
    pub mr_lift_slope: f64,
    pub mr_cd0: f64,
    pub mr_kbeta: f64,
    pub mr_tau_c: f64,
    pub mr_a_dlong: f64,
    pub mr_b_dlat: f64,

    pub tr_radius: f64,
    pub tr_chord: f64,
    pub tr_blades: u32,
    pub tr_gear_ratio: f64,
    pub tr_lift_slope: f64,
    pub tr_cd0: f64,

    pub h_mr: f64,
    pub l_tr: f64,
    pub h_tr: f64,

    pub s_vf: f64,
    pub s_hf: f64,
    pub s_fus_x: f64,
    pub s_fus_y: f64,
    pub s_fus_z: f64,

    pub rho: f64,
    pub g: f64,
    pub eta_w: f64,

    // Flapping response constants (steady-gain calibration, see rotor module).
    pub a1s_mu_gain: f64,
    pub a1s_mu_slope: f64,
    pub b1s_mu_v_gain: f64,

    // Fin aerodynamics: combined linear-lift + quadratic-drag plates.
    pub vf_lift_slope: f64,
    pub hf_lift_slope: f64,
    pub vf_sidewash_frac: f64,

    // Axial-flow smoothing width, m/s. The axial advance ratio enters the
    // rotor model magnitude-smoothed; this sets the C1 blending width.
    pub axial_smoothing: f64,
}

impl VehicleParams {
    /// Rotor solidity b·c/(πR), main rotor.
    pub fn sigma_mr(&self) -> f64 {
        self.mr_blades as f64 * self.mr_chord / (PI * self.mr_radius)
    }

    /// Rotor solidity b·c/(πR), tail rotor.
    pub fn sigma_tr(&self) -> f64 {
        self.tr_blades as f64 * self.tr_chord / (PI * self.tr_radius)
    }

    /// Main rotor tip speed ΩR, m/s.
    pub fn tip_speed_mr(&self) -> f64 {
        self.mr_omega_nom * self.mr_radius
    }

    /// Tail rotor shaft speed, rad/s.
    pub fn omega_tr(&self) -> f64 {
        self.tr_gear_ratio * self.mr_omega_nom
    }

    /// Tail rotor tip speed, m/s.
    pub fn tip_speed_tr(&self) -> f64 {
        self.omega_tr() * self.tr_radius
    }

    /// Vertical-fin blockage factor on tail thrust.
    pub fn fin_blockage(&self) -> f64 {
        1.0 - 0.75 * self.s_vf / (PI * self.tr_radius * self.tr_radius)
    }

    /// Wake-geometry band edges for the main-rotor-wake-on-tail factor.
    pub fn wake_band(&self) -> (f64, f64) {
        let gi = (self.l_tr - self.mr_radius - self.tr_radius) / self.h_tr;
        let gf = (self.l_tr - self.mr_radius + self.tr_radius) / self.h_tr;
        (gi, gf)
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("m", self.m),
            ("Ixx", self.ixx),
            ("Iyy", self.iyy),
            ("Izz", self.izz),
            ("mr_radius", self.mr_radius),
            ("mr_chord", self.mr_chord),
            ("mr_omega_nom", self.mr_omega_nom),
            ("mr_lift_slope", self.mr_lift_slope),
            ("tr_radius", self.tr_radius),
            ("tr_chord", self.tr_chord),
            ("tr_gear_ratio", self.tr_gear_ratio),
            ("tr_lift_slope", self.tr_lift_slope),
            ("s_vf", self.s_vf),
            ("s_hf", self.s_hf),
            ("s_fus_x", self.s_fus_x),
            ("s_fus_y", self.s_fus_y),
            ("s_fus_z", self.s_fus_z),
            ("rho", self.rho),
            ("g", self.g),
        ];
        for (name, v) in pos {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(name, v, "must be strictly positive"));
            }
        }
        if !(self.eta_w > 0.0 && self.eta_w <= 1.0) {
            return Err(invalid("eta_w", self.eta_w, "must lie in (0, 1]"));
        }
        if !(self.mr_tau_c > 0.0) {
            return Err(invalid("mr_tau_c", self.mr_tau_c, "must be strictly positive"));
        }
        if self.l_tr <= self.mr_radius {
            return Err(invalid(
                "l_tr",
                self.l_tr,
                "tail rotor must sit behind the main disc (l_tr > mr_radius)",
            ));
        }
        if self.mr_blades == 0 {
            return Err(invalid("mr_blades", 0.0, "must be at least 1"));
        }
        if self.tr_blades == 0 {
            return Err(invalid("tr_blades", 0.0, "must be at least 1"));
        }
        for (name, sigma) in [("mr", self.sigma_mr()), ("tr", self.sigma_tr())] {
            if !(sigma > 0.0 && sigma < 0.2) {
                return Err(invalid(
                    &format!("{name} solidity"),
                    sigma,
                    "derived solidity must lie in (0, 0.2)",
                ));
            }
        }
        if !(self.axial_smoothing >= 0.0) {
            return Err(invalid("axial_smoothing", self.axial_smoothing, "must be >= 0"));
        }
        Ok(())
    }
}

fn invalid(name: &str, value: f64, constraint: &str) -> Error {
    Error::InvalidParameter {
        name: name.to_string(),
        value,
        constraint: constraint.to_string(),
    }
}

/// Canonical key order for serialization; every key is required on load.
const KEYS: &[&str] = &[
    "m", "Ixx", "Iyy", "Izz", "mr_radius", "mr_chord", "mr_blades", "mr_omega_nom",
    "mr_lift_slope", "mr_cd0", "mr_kbeta", "mr_tau_c", "mr_a_dlong", "mr_b_dlat",
    "tr_radius", "tr_chord", "tr_blades", "tr_gear_ratio", "tr_lift_slope", "tr_cd0",
    "h_mr", "l_tr", "h_tr", "s_vf", "s_hf", "s_fus_x", "s_fus_y", "s_fus_z",
    "rho", "g", "eta_w", "a1s_mu_gain", "a1s_mu_slope", "b1s_mu_v_gain",
    "vf_lift_slope", "hf_lift_slope", "vf_sidewash_frac", "axial_smoothing",
];

/// Units shown in serialized config comments, keyed like `KEYS`.
fn unit_of(key: &str) -> &'static str {
    match key {
        "m" => "kg",
        "Ixx" | "Iyy" | "Izz" => "kg m^2",
        "mr_radius" | "mr_chord" | "tr_radius" | "tr_chord" | "h_mr" | "l_tr" | "h_tr" => "m",
        "mr_blades" | "tr_blades" => "count",
        "mr_omega_nom" => "rad/s",
        "mr_lift_slope" | "tr_lift_slope" => "1/rad",
        "mr_kbeta" => "N m/rad",
        "mr_tau_c" => "s",
        "s_vf" | "s_hf" | "s_fus_x" | "s_fus_y" | "s_fus_z" => "m^2",
        "rho" => "kg/m^3",
        "g" => "m/s^2",
        "axial_smoothing" => "m/s",
        _ => "-",
    }
}

/// Parse a flat key-value config document into a validated parameter set.
pub fn load_config(text: &str) -> Result<VehicleParams> {
    let mut map: BTreeMap<String, f64> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, '=');
        let key = parts.next().unwrap_or("").trim();
        let val = parts.next().ok_or(Error::ConfigSyntax {
            line: i + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let value: f64 = val.trim().parse().map_err(|_| Error::ConfigSyntax {
            line: i + 1,
            msg: format!("cannot parse `{}` as a number", val.trim()),
        })?;
        if !KEYS.contains(&key) {
            return Err(Error::ConfigSyntax {
                line: i + 1,
                msg: format!("unknown key `{key}`"),
            });
        }
        map.insert(key.to_string(), value);
    }
    let get = |k: &str| -> Result<f64> {
        map.get(k).copied().ok_or_else(|| Error::MissingParameter(k.to_string()))
    };
    let get_count = |k: &str| -> Result<u32> {
        let v = get(k)?;
        if v.fract() != 0.0 || v < 0.0 {
            return Err(invalid(k, v, "must be a non-negative integer"));
        }
        Ok(v as u32)
    };
    let p = VehicleParams {
        m: get("m")?,
        ixx: get("Ixx")?,
        iyy: get("Iyy")?,
        izz: get("Izz")?,
        mr_radius: get("mr_radius")?,
        mr_chord: get("mr_chord")?,
        mr_blades: get_count("mr_blades")?,
        mr_omega_nom: get("mr_omega_nom")?,
        mr_lift_slope: get("mr_lift_slope")?,
        mr_cd0: get("mr_cd0")?,
        mr_kbeta: get("mr_kbeta")?,
        mr_tau_c: get("mr_tau_c")?,
        mr_a_dlong: get("mr_a_dlong")?,
        mr_b_dlat: get("mr_b_dlat")?,
        tr_radius: get("tr_radius")?,
        tr_chord: get("tr_chord")?,
        tr_blades: get_count("tr_blades")?,
        tr_gear_ratio: get("tr_gear_ratio")?,
        tr_lift_slope: get("tr_lift_slope")?,
        tr_cd0: get("tr_cd0")?,
        h_mr: get("h_mr")?,
        l_tr: get("l_tr")?,
        h_tr: get("h_tr")?,
        s_vf: get("s_vf")?,
        s_hf: get("s_hf")?,
        s_fus_x: get("s_fus_x")?,
        s_fus_y: get("s_fus_y")?,
        s_fus_z: get("s_fus_z")?,
        rho: get("rho")?,
        g: get("g")?,
        eta_w: get("eta_w")?,
        a1s_mu_gain: get("a1s_mu_gain")?,
        a1s_mu_slope: get("a1s_mu_slope")?,
        b1s_mu_v_gain: get("b1s_mu_v_gain")?,
        vf_lift_slope: get("vf_lift_slope")?,
        hf_lift_slope: get("hf_lift_slope")?,
        vf_sidewash_frac: get("vf_sidewash_frac")?,
        axial_smoothing: get("axial_smoothing")?,
    };
    p.validate()?;
    Ok(p)
}

/// Serialize to the canonical config document. `load_config(serialize(p)) == p`
/// exactly (shortest-roundtrip float formatting).
pub fn serialize(p: &VehicleParams) -> String {
    let v = |k: &str| -> f64 {
        match k {
            "m" => p.m,
            "Ixx" => p.ixx,
            "Iyy" => p.iyy,
            "Izz" => p.izz,
            "mr_radius" => p.mr_radius,
            "mr_chord" => p.mr_chord,
            "mr_blades" => p.mr_blades as f64,
            "mr_omega_nom" => p.mr_omega_nom,
            "mr_lift_slope" => p.mr_lift_slope,
            "mr_cd0" => p.mr_cd0,
            "mr_kbeta" => p.mr_kbeta,
            "mr_tau_c" => p.mr_tau_c,
            "mr_a_dlong" => p.mr_a_dlong,
            "mr_b_dlat" => p.mr_b_dlat,
            "tr_radius" => p.tr_radius,
            "tr_chord" => p.tr_chord,
            "tr_blades" => p.tr_blades as f64,
            "tr_gear_ratio" => p.tr_gear_ratio,
            "tr_lift_slope" => p.tr_lift_slope,
            "tr_cd0" => p.tr_cd0,
            "h_mr" => p.h_mr,
            "l_tr" => p.l_tr,
            "h_tr" => p.h_tr,
            "s_vf" => p.s_vf,
            "s_hf" => p.s_hf,
            "s_fus_x" => p.s_fus_x,
            "s_fus_y" => p.s_fus_y,
            "s_fus_z" => p.s_fus_z,
            "rho" => p.rho,
            "g" => p.g,
            "eta_w" => p.eta_w,
            "a1s_mu_gain" => p.a1s_mu_gain,
            "a1s_mu_slope" => p.a1s_mu_slope,
            "b1s_mu_v_gain" => p.b1s_mu_v_gain,
            "vf_lift_slope" => p.vf_lift_slope,
            "hf_lift_slope" => p.hf_lift_slope,
            "vf_sidewash_frac" => p.vf_sidewash_frac,
            "axial_smoothing" => p.axial_smoothing,
            _ => unreachable!(),
        }
    };
    let mut out = String::from("# rotorlin vehicle config (SI units)\n");
    for k in KEYS {
        out.push_str(&format!("{k} = {}  # {}\n", v(k), unit_of(k)));
    }
    out
}

/// Hover operating-point targets used to back-solve unpublished constants.
/// Defaults are the X-Cell reference hover point.
#[derive(Debug, Clone)]
pub struct TrimTargets {
    pub mr_thrust: f64,
    pub mr_ct: f64,
    pub mr_torque: f64,
    pub mr_cq: f64,
    pub mr_w_i: f64,
    pub mr_theta0: f64,
    pub tr_thrust: f64,
    pub tr_ct: f64,
    /// Pitch-moment-per-flapping entry (q-row, a1s-column of the hover
    /// longitudinal system matrix), 1/s^2. Optional; drives the hub
    /// stiffness back-solve.
    pub m_a1s: Option<f64>,
}

impl Default for TrimTargets {
    fn default() -> Self {
        TrimTargets {
            mr_thrust: 81.616,
            mr_ct: 0.002256,
            mr_torque: 6.247,
            mr_cq: 0.0002228,
            mr_w_i: 4.582,
            mr_theta0: 0.1047,
            tr_thrust: 6.8656,
            tr_ct: 0.01329,
            m_a1s: Some(102.4125),
        }
    }
}

/// Names and values replaced by `complete_parameters`, for provenance.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Completion {
    pub name: String,
    pub old: f64,
    pub new: f64,
}

/// Back-solve {rho, eta_w, mr_lift_slope, mr_cd0, tr_gear_ratio, mr_kbeta}
/// from the hover targets. Each replacement is a closed-form inversion of one
/// model relation at hover; the operation is idempotent for fixed targets.
pub fn complete_parameters(
    base: &VehicleParams,
    targets: &TrimTargets,
) -> Result<(VehicleParams, Vec<Completion>)> {
    let mut p = base.clone();
    let mut prov = Vec::new();
    let t = targets;

    let tip = p.tip_speed_mr();
    let disc = PI * p.mr_radius * p.mr_radius;

    // T = rho (OmegaR)^2 (pi R^2) C_T  =>  rho
    let rho = t.mr_thrust / (tip * tip * disc * t.mr_ct);
    check_pos("rho", rho)?;
    prov.push(rec("rho", p.rho, rho));
    p.rho = rho;

    // lambda0 = sqrt(C_T / 2 eta_w) at hover  =>  eta_w
    let lam0 = t.mr_w_i / tip;
    let eta_w = t.mr_ct / (2.0 * lam0 * lam0);
    if !(eta_w > 0.0 && eta_w <= 1.0) {
        return Err(Error::CalibrationFailed {
            parameter: "eta_w".into(),
            reason: format!("inverted value {eta_w} outside (0, 1]"),
        });
    }
    prov.push(rec("eta_w", p.eta_w, eta_w));
    p.eta_w = eta_w;

    // C_T = (a sigma / 2)(theta0/3 - lambda0/2) at hover  =>  a
    let sigma = p.sigma_mr();
    let bracket = t.mr_theta0 / 3.0 - lam0 / 2.0;
    if bracket.abs() < 1e-12 {
        return Err(Error::CalibrationFailed {
            parameter: "mr_lift_slope".into(),
            reason: "hover collective/inflow targets give a singular inversion".into(),
        });
    }
    let a = 2.0 * t.mr_ct / (sigma * bracket);
    check_pos("mr_lift_slope", a)?;
    prov.push(rec("mr_lift_slope", p.mr_lift_slope, a));
    p.mr_lift_slope = a;

    // C_Q = (sigma/8) C_D0 + lambda0 C_T at hover  =>  C_D0
    let cd0 = (t.mr_cq - lam0 * t.mr_ct) * 8.0 / sigma;
    check_pos("mr_cd0", cd0)?;
    prov.push(rec("mr_cd0", p.mr_cd0, cd0));
    p.mr_cd0 = cd0;

    // T_TR = f_t rho (Omega_TR R_TR)^2 (pi R_TR^2) C_T,TR  =>  gear ratio
    let ft = p.fin_blockage();
    let disc_tr = PI * p.tr_radius * p.tr_radius;
    let tip_tr_sq = t.tr_thrust / (ft * p.rho * disc_tr * t.tr_ct);
    check_pos("tr_gear_ratio", tip_tr_sq)?;
    let gear = tip_tr_sq.sqrt() / p.tr_radius / p.mr_omega_nom;
    prov.push(rec("tr_gear_ratio", p.tr_gear_ratio, gear));
    p.tr_gear_ratio = gear;

    // Direct flapping-moment column M_a1s = (K_beta - T h) / Iyy  =>  K_beta.
    // The reference matrices carry the hub thrust-tilt term with this sign in
    // the direct column, opposite to the chain entries; invert accordingly.
    if let Some(m_a1s) = t.m_a1s {
        let kb = p.iyy * m_a1s + t.mr_thrust * p.h_mr;
        check_pos("mr_kbeta", kb)?;
        prov.push(rec("mr_kbeta", p.mr_kbeta, kb));
        p.mr_kbeta = kb;
    }

    p.validate()?;
    Ok((p, prov))
}

fn rec(name: &str, old: f64, new: f64) -> Completion {
    Completion {
        name: name.to_string(),
        old,
        new,
    }
}

fn check_pos(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::CalibrationFailed {
            parameter: name.to_string(),
            reason: format!("inverted value {v} is not strictly positive"),
        });
    }
    Ok(())
}

/// The shipped X-Cell config with completed constants.
pub fn default_config_text() -> &'static str {
    include_str!("../configs/xcell.cfg")
}

/// Parsed shipped config. Panics only if the shipped file is corrupt, which
/// the test suite guards.
pub fn xcell() -> VehicleParams {
    load_config(default_config_text()).expect("shipped config must parse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn shipped_config_parses_and_validates() {
        let p = xcell();
        assert_eq!(p.mr_blades, 2);
        assert_relative_eq!(p.m, 8.2);
        assert_relative_eq!(p.mr_omega_nom, 167.0);
        assert_relative_eq!(p.l_tr, 0.91);
    }

    #[test]
    fn solidity_matches_hand_value() {
        // sigma = b c / (pi R) = 2*0.058/(pi*0.775), evaluated by hand
        let p = xcell();
        assert_relative_eq!(p.sigma_mr(), 0.047645, epsilon = 1e-5);
    }

    #[test]
    fn blockage_and_wake_band_match_direct_evaluation() {
        let p = xcell();
        // f_t = 1 - 0.75*0.012/(pi*0.13^2); g_i,g_f from the geometry offsets
        assert_relative_eq!(p.fin_blockage(), 1.0 - 0.75 * 0.012 / (PI * 0.0169), epsilon = 1e-12);
        let (gi, gf) = p.wake_band();
        assert_relative_eq!(gi, (0.91 - 0.775 - 0.13) / 0.08, epsilon = 1e-12);
        assert_relative_eq!(gf, (0.91 - 0.775 + 0.13) / 0.08, epsilon = 1e-12);
        assert_relative_eq!(gi, 0.0625, epsilon = 1e-12);
        assert_relative_eq!(gf, 3.3125, epsilon = 1e-12);
    }

    #[test]
    fn negative_mass_rejected() {
        let text = serialize(&xcell()).replace("m = 8.2", "m = -1");
        match load_config(&text) {
            Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, "m"),
            other => panic!("expected InvalidParameter, got {other:?}"),
        }
    }

    #[test]
    fn missing_key_reported_by_name() {
        let text: String = serialize(&xcell())
            .lines()
            .filter(|l| !l.starts_with("eta_w"))
            .collect::<Vec<_>>()
            .join("\n");
        match load_config(&text) {
            Err(Error::MissingParameter(name)) => assert_eq!(name, "eta_w"),
            other => panic!("expected MissingParameter, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{}\nbogus = 1\n", serialize(&xcell()));
        assert!(matches!(load_config(&text), Err(Error::ConfigSyntax { .. })));
    }

    #[test]
    fn serialize_round_trips_exactly() {
        let p = xcell();
        let q = load_config(&serialize(&p)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn completion_matches_closed_form_oracles() {
        let (p, prov) = complete_parameters(&xcell(), &TrimTargets::default()).unwrap();
        // rho = 81.616/(129.425^2 * pi*0.775^2 * 0.002256), by hand
        let tip = 167.0 * 0.775;
        let rho = 81.616 / (tip * tip * PI * 0.775 * 0.775 * 0.002256);
        assert_relative_eq!(p.rho, rho, epsilon = 1e-12);
        assert_relative_eq!(p.rho, 1.1446, epsilon = 1e-4);
        // eta_w from lambda0 = w_i/(OmegaR), eta = C_T/(2 lambda0^2)
        let lam0 = 4.582 / tip;
        assert_relative_eq!(p.eta_w, 0.002256 / (2.0 * lam0 * lam0), epsilon = 1e-12);
        assert_relative_eq!(p.eta_w, 0.900, epsilon = 1e-3);
        // lift slope and profile drag by direct inversion
        assert_relative_eq!(p.mr_lift_slope, 5.5064, epsilon = 1e-4);
        assert_relative_eq!(p.mr_cd0, 0.0240, epsilon = 1e-4);
        // gear ratio: tail tip speed from the blockage-corrected thrust relation
        assert_relative_eq!(p.tr_gear_ratio, 4.6603, epsilon = 1e-4);
        // hub stiffness from the direct-column structure
        assert_relative_eq!(p.mr_kbeta, 0.34 * 102.4125 + 81.616 * 0.235, epsilon = 1e-9);
        assert_eq!(prov.len(), 6);
    }

    #[test]
    fn completion_is_idempotent() {
        let t = TrimTargets::default();
        let (p1, _) = complete_parameters(&xcell(), &t).unwrap();
        let (p2, _) = complete_parameters(&p1, &t).unwrap();
        for (a, b) in [
            (p1.rho, p2.rho),
            (p1.eta_w, p2.eta_w),
            (p1.mr_lift_slope, p2.mr_lift_slope),
            (p1.mr_cd0, p2.mr_cd0),
            (p1.tr_gear_ratio, p2.tr_gear_ratio),
            (p1.mr_kbeta, p2.mr_kbeta),
        ] {
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn inconsistent_targets_fail_calibration() {
        let mut t = TrimTargets::default();
        t.mr_cq = 0.0; // forces negative profile drag on inversion
        match complete_parameters(&xcell(), &t) {
            Err(Error::CalibrationFailed { parameter, .. }) => assert_eq!(parameter, "mr_cd0"),
            other => panic!("expected CalibrationFailed, got {other:?}"),
        }
    }
}
