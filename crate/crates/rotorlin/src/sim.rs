//! Fixed-step time-domain integration of the nonlinear and linear models,
//! input scripting, and trajectory divergence metrics.

use crate::config::VehicleParams;
use crate::dynamics::{state_derivative, ControlInput, FlightState};
use crate::error::{Error, Result};
use crate::linearize::LinearModel;
use nalgebra::DVector;

/// Control channels addressable from an input script.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Coll,
    Ped,
    Lat,
    Long,
}

impl Channel {
    pub fn parse(s: &str) -> Result<Channel> {
        match s {
            "coll" => Ok(Channel::Coll),
            "ped" => Ok(Channel::Ped),
            "lat" => Ok(Channel::Lat),
            "long" => Ok(Channel::Long),
            other => Err(Error::ConfigSyntax {
                line: 0,
                msg: format!("unknown channel `{other}` (coll|ped|lat|long)"),
            }),
        }
    }

    fn index(self) -> usize {
        match self {
            Channel::Coll => 0,
            Channel::Ped => 1,
            Channel::Lat => 2,
            Channel::Long => 3,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Directive {
    Step { t: f64, value: f64 },
    Ramp { t0: f64, t1: f64, v0: f64, v1: f64 },
}

/// Piecewise-constant / piecewise-linear control deltas applied on top of
/// the reference (trim) controls.
///
/// Text schema, one directive per line, `#` comments:
/// ```text
/// step <t> <channel> <delta>
/// ramp <t0> <t1> <channel> <delta0> <delta1>
/// ```
#[derive(Debug, Clone, Default)]
pub struct InputScript {
    directives: [Vec<Directive>; 4],
}

impl InputScript {
    pub fn parse(text: &str) -> Result<InputScript> {
        let mut script = InputScript::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let syntax = |msg: String| Error::ConfigSyntax {
                line: lineno + 1,
                msg,
            };
            let num = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| syntax(format!("cannot parse `{s}` as a number")))
            };
            match toks.as_slice() {
                ["step", t, ch, v] => {
                    let ch = Channel::parse(ch)?;
                    script.directives[ch.index()].push(Directive::Step {
                        t: num(t)?,
                        value: num(v)?,
                    });
                }
                ["ramp", t0, t1, ch, v0, v1] => {
                    let ch = Channel::parse(ch)?;
                    script.directives[ch.index()].push(Directive::Ramp {
                        t0: num(t0)?,
                        t1: num(t1)?,
                        v0: num(v0)?,
                        v1: num(v1)?,
                    });
                }
                _ => {
                    return Err(syntax(format!(
                        "expected `step <t> <ch> <v>` or `ramp <t0> <t1> <ch> <v0> <v1>`, got `{line}`"
                    )))
                }
            }
        }
        for dirs in &mut script.directives {
            dirs.sort_by(|a, b| start_time(a).partial_cmp(&start_time(b)).unwrap());
        }
        Ok(script)
    }

    /// A doublet on one channel: +amp for the first half, -amp for the
    /// second, zero afterwards.
    pub fn doublet(channel: Channel, amp: f64, phase: f64) -> InputScript {
        let mut s = InputScript::default();
        s.directives[channel.index()] = vec![
            Directive::Step { t: 0.0, value: amp },
            Directive::Step {
                t: phase,
                value: -amp,
            },
            Directive::Step {
                t: 2.0 * phase,
                value: 0.0,
            },
        ];
        s
    }

    /// Control deltas at time t.
    pub fn delta_at(&self, t: f64) -> ControlInput {
        let mut d = [0.0; 4];
        for (i, dirs) in self.directives.iter().enumerate() {
            for dir in dirs {
                match *dir {
                    Directive::Step { t: t0, value } => {
                        if t >= t0 {
                            d[i] = value;
                        }
                    }
                    Directive::Ramp { t0, t1, v0, v1 } => {
                        if t >= t0 {
                            let f = if t >= t1 {
                                1.0
                            } else {
                                (t - t0) / (t1 - t0).max(1e-12)
                            };
                            d[i] = v0 + f * (v1 - v0);
                        }
                    }
                }
            }
        }
        ControlInput::from_slice(&d)
    }
}

fn start_time(d: &Directive) -> f64 {
    match *d {
        Directive::Step { t, .. } => t,
        Directive::Ramp { t0, .. } => t0,
    }
}

/// What `integrate` propagates.
pub enum Model<'a> {
    /// Full nonlinear dynamics (9- or 11-state per the initial state).
    Nonlinear {
        params: &'a VehicleParams,
        base_controls: ControlInput,
    },
    /// Linear perturbation dynamics about the model's trim; reports
    /// absolute states.
    Linear(&'a LinearModel),
}

/// Integrated trajectory on a uniform grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<FlightState>,
    pub controls: Vec<ControlInput>,
    pub model_tag: String,
    pub dt: f64,
    /// reason the run stopped early, if it did
    pub halt: Option<String>,
}

pub(crate) fn rk4_step<F>(f: &F, x: &[f64], t: f64, dt: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64], f64) -> Result<Vec<f64>>,
{
    let n = x.len();
    let k1 = f(x, t)?;
    let mut xt: Vec<f64> = (0..n).map(|i| x[i] + 0.5 * dt * k1[i]).collect();
    let k2 = f(&xt, t + 0.5 * dt)?;
    for i in 0..n {
        xt[i] = x[i] + 0.5 * dt * k2[i];
    }
    let k3 = f(&xt, t + 0.5 * dt)?;
    for i in 0..n {
        xt[i] = x[i] + dt * k3[i];
    }
    let k4 = f(&xt, t + dt)?;
    Ok((0..n)
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// Classic fixed-step 4th-order integration under a scripted input.
/// A kinematic singularity or inflow divergence mid-run truncates the
/// trajectory and records the halt reason.
pub fn integrate(
    model: &Model,
    x0: &FlightState,
    script: &InputScript,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !(t_end >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt".into(),
            value: dt,
            constraint: "dt > 0 and t_end >= 0".into(),
        });
    }
    if let Model::Nonlinear { params, .. } = model {
        // resolve the flapping time constant when flap states are integrated
        if x0.flap.is_some() && dt > params.mr_tau_c / 10.0 {
            return Err(Error::InvalidParameter {
                name: "dt".into(),
                value: dt,
                constraint: format!("dt <= tau_c/10 = {} with flapping states", params.mr_tau_c / 10.0),
            });
        }
    }

    let steps = (t_end / dt).round() as usize;
    let (tag, controls_at): (String, Box<dyn Fn(f64) -> ControlInput>) = match model {
        Model::Nonlinear { base_controls, .. } => {
            let base = *base_controls;
            (
                "nonlinear".to_string(),
                Box::new(move |t| {
                    let d = script.delta_at(t);
                    ControlInput {
                        d_coll: base.d_coll + d.d_coll,
                        d_ped: base.d_ped + d.d_ped,
                        d_lat: base.d_lat + d.d_lat,
                        d_long: base.d_long + d.d_long,
                    }
                }),
            )
        }
        Model::Linear(lm) => {
            let base = lm.trim.controls;
            (
                format!("linear({})", lm.trim.condition.label()),
                Box::new(move |t| {
                    let d = script.delta_at(t);
                    ControlInput {
                        d_coll: base.d_coll + d.d_coll,
                        d_ped: base.d_ped + d.d_ped,
                        d_lat: base.d_lat + d.d_lat,
                        d_long: base.d_long + d.d_long,
                    }
                }),
            )
        }
    };

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut controls = Vec::with_capacity(steps + 1);
    let mut halt = None;

    match model {
        Model::Nonlinear { params, .. } => {
            let f = |xv: &[f64], t: f64| -> Result<Vec<f64>> {
                let s = FlightState::from_slice(xv);
                let c = controls_at(t);
                Ok(state_derivative(&s, &c, params)?.to_vec())
            };
            let mut x = x0.to_vec();
            times.push(0.0);
            states.push(*x0);
            controls.push(controls_at(0.0));
            for k in 0..steps {
                let t = k as f64 * dt;
                match rk4_step(&f, &x, t, dt) {
                    Ok(next) => x = next,
                    Err(e) => {
                        halt = Some(e.to_string());
                        break;
                    }
                }
                let s = FlightState::from_slice(&x);
                if s.theta.abs() >= std::f64::consts::FRAC_PI_2 {
                    halt = Some(Error::KinematicSingularity(s.theta).to_string());
                    break;
                }
                times.push((k + 1) as f64 * dt);
                states.push(s);
                controls.push(controls_at((k + 1) as f64 * dt));
            }
        }
        Model::Linear(lm) => {
            let n = lm.a.nrows();
            let trim_vec = {
                let mut s = lm.trim.state;
                s.flap = (n == 11).then_some(lm.trim.flap);
                s.to_vec()
            };
            let x0v = x0.to_vec();
            if x0v.len() != n {
                return Err(Error::GridError(format!(
                    "initial state dimension {} does not match the {}-state linear model",
                    x0v.len(),
                    n
                )));
            }
            let mut dx = DVector::from_iterator(n, x0v.iter().zip(&trim_vec).map(|(a, b)| a - b));
            let f = |xv: &[f64], t: f64| -> Result<Vec<f64>> {
                let dxv = DVector::from_column_slice(xv);
                let du = script.delta_at(t).to_vec();
                let duv = DVector::from_vec(du);
                Ok(((&lm.a * dxv) + (&lm.b * duv)).iter().copied().collect())
            };
            times.push(0.0);
            states.push(*x0);
            controls.push(controls_at(0.0));
            for k in 0..steps {
                let t = k as f64 * dt;
                let next = rk4_step(&f, dx.as_slice(), t, dt)?;
                dx = DVector::from_vec(next);
                let abs: Vec<f64> = dx.iter().zip(&trim_vec).map(|(d, t)| d + t).collect();
                times.push((k + 1) as f64 * dt);
                states.push(FlightState::from_slice(&abs));
                controls.push(controls_at((k + 1) as f64 * dt));
            }
        }
    }

    Ok(Trajectory {
        times,
        states,
        controls,
        model_tag: tag,
        dt,
        halt,
    })
}

/// Per-state divergence between two trajectories on the same grid.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StateDivergence {
    pub state: String,
    pub rms: f64,
    pub peak_diff: f64,
    /// peak |a(t) - a(0)| of the reference trajectory
    pub ref_peak_response: f64,
    /// first time the difference exceeds 10% of the reference peak response
    pub time_of_10pct: Option<f64>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DivergenceReport {
    pub states: Vec<StateDivergence>,
}

/// Compare two trajectories sample-by-sample. Reference for the 10%
/// threshold is `a`.
pub fn compare(a: &Trajectory, b: &Trajectory) -> Result<DivergenceReport> {
    if a.times.len() != b.times.len() {
        return Err(Error::GridError(format!(
            "lengths differ: {} vs {}",
            a.times.len(),
            b.times.len()
        )));
    }
    for (ta, tb) in a.times.iter().zip(&b.times) {
        if (ta - tb).abs() > 1e-12 {
            return Err(Error::GridError(format!("time grids differ at t={ta} vs {tb}")));
        }
    }
    let na = a.states.first().map(|s| s.dim()).unwrap_or(9);
    let nb = b.states.first().map(|s| s.dim()).unwrap_or(9);
    let n = na.min(nb);
    let labels: &[&str] = if n == 11 {
        &FlightState::LABELS_11
    } else {
        &FlightState::LABELS_9
    };

    let mut out = Vec::with_capacity(n);
    for (i, label) in labels.iter().enumerate() {
        let a0 = a.states[0].to_vec()[i];
        let mut sum_sq = 0.0;
        let mut peak_diff: f64 = 0.0;
        let mut ref_peak: f64 = 0.0;
        let mut t10 = None;
        for k in 0..a.times.len() {
            let va = a.states[k].to_vec()[i];
            let vb = b.states[k].to_vec()[i];
            let d = (va - vb).abs();
            sum_sq += d * d;
            peak_diff = peak_diff.max(d);
            ref_peak = ref_peak.max((va - a0).abs());
        }
        for (k, t) in a.times.iter().enumerate() {
            let va = a.states[k].to_vec()[i];
            let vb = b.states[k].to_vec()[i];
            if (va - vb).abs() > 0.1 * ref_peak && ref_peak > 0.0 {
                t10 = Some(*t);
                break;
            }
        }
        out.push(StateDivergence {
            state: label.to_string(),
            rms: (sum_sq / a.times.len() as f64).sqrt(),
            peak_diff,
            ref_peak_response: ref_peak,
            time_of_10pct: t10,
        });
    }
    Ok(DivergenceReport { states: out })
}
