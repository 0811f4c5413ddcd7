//! `rotorlin` command line: config handling, trim, sweeps, linearization,
//! modal analysis, simulation, and the end-to-end reproduction report.

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rotorlin::config::{self, Completion, TrimTargets, VehicleParams};
use rotorlin::dynamics::{ControlInput, FlightState};
use rotorlin::error::Error;
use rotorlin::linearize::{assemble_linear_model, decouple, DecoupledModel, LinearModel};
use rotorlin::modal::{apply_normalization, eigen_analysis, mode_dominance, ModalReport};
use rotorlin::sim::{compare, integrate, InputScript, Model, Trajectory};
use rotorlin::trim::{trim_forward, trim_hover, TrimPoint};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

mod reference;

#[derive(Parser)]
#[command(name = "rotorlin", version, about = "Small-scale helicopter flight dynamics toolkit")]
struct Cli {
    /// Vehicle config file (falls back to $ROTORLIN_CONFIG, then the
    /// built-in X-Cell set)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Condition {
    Hover,
    Forward,
}

#[derive(Clone, Copy, ValueEnum)]
enum Block {
    Long,
    Lat,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimModel {
    Nonlinear,
    Linear,
}

#[derive(Subcommand)]
enum Command {
    /// Show or complete the vehicle parameter set
    Params {
        /// Back-solve calibration constants from the reference hover point
        /// and emit the completed config document
        #[arg(long)]
        complete: bool,
        /// Write the result here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve a trim point and emit it as JSON
    Trim {
        #[arg(long, value_enum)]
        condition: Condition,
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        #[arg(long, default_value_t = 0.0)]
        v: f64,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sweep one state or input about a trim and emit rotor/flapping CSV
    Sweep {
        #[arg(long)]
        var: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 41)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Condition::Hover)]
        condition: Condition,
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        #[arg(long, default_value_t = 0.0)]
        v: f64,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Assemble the state-space model about a trim
    Linearize {
        #[arg(long, value_enum)]
        condition: Condition,
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        #[arg(long, default_value_t = 0.0)]
        v: f64,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
        /// 11-state model with flapping states
        #[arg(long)]
        augmented: bool,
        /// Base path: writes <base>.json and <base>.txt
        #[arg(long)]
        output: Option<PathBuf>,
        /// Print the aligned plain-text matrices instead of JSON
        #[arg(long)]
        text: bool,
    },
    /// Eigen analysis of a decoupled block or the full model
    Modes {
        #[arg(long, value_enum)]
        condition: Condition,
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        #[arg(long, default_value_t = 0.0)]
        v: f64,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
        #[arg(long, value_enum)]
        block: Block,
        /// Drop the flapping state from the decoupled blocks
        #[arg(long)]
        no_flapping: bool,
        /// Base path: writes <base>.json, <base>.txt and <base>.csv
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Integrate the nonlinear or linear model under a scripted input
    Simulate {
        #[arg(long, value_enum)]
        model: SimModel,
        /// Input script file (deltas on top of the trim controls)
        #[arg(long)]
        script: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Condition::Hover)]
        condition: Condition,
        #[arg(long, default_value_t = 0.0)]
        u: f64,
        #[arg(long, default_value_t = 0.0)]
        v: f64,
        #[arg(long, default_value_t = 0.0)]
        w: f64,
        #[arg(long, default_value_t = 5.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Integrate the 11-state augmented variant (nonlinear only)
        #[arg(long)]
        augmented: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Divergence metrics between two trajectory CSVs
    Compare { a: PathBuf, b: PathBuf },
    /// Full pipeline: complete parameters, trim both conditions, linearize,
    /// run modal analysis, and juxtapose every value with its reference
    Reproduce {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::MissingParameter(_)
        | Error::InvalidParameter { .. }
        | Error::ConfigSyntax { .. }
        | Error::LabelError(_)
        | Error::MuOutOfRange(_, _)
        | Error::Io(_) => 2,
        Error::TrimNotConverged(_) | Error::InflowDiverged { .. } => 3,
        Error::CalibrationFailed { .. }
        | Error::KinematicSingularity(_)
        | Error::PartialUnavailable(_)
        | Error::EigenFailed(_)
        | Error::GridError(_) => 4,
    }
}

fn load_params(cli_config: &Option<PathBuf>) -> Result<(VehicleParams, String), Error> {
    let path = cli_config
        .clone()
        .or_else(|| std::env::var("ROTORLIN_CONFIG").ok().map(PathBuf::from));
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p)?;
            Ok((config::load_config(&text)?, p.display().to_string()))
        }
        None => Ok((config::xcell(), "<built-in>".to_string())),
    }
}

// ---------------------------------------------------------------------------
// manifest

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn manifest(subcommand: &str, config_path: &str, condition: &str, completions: &[Completion]) -> Value {
    let core = json!({
        "tool_version": env!("CARGO_PKG_VERSION"),
        "subcommand": subcommand,
        "config": config_path,
        "condition": condition,
        "completed_parameters": completions,
    });
    let hash = format!("{:016x}", fnv1a(core.to_string().as_bytes()));
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut m = core;
    m["manifest_hash"] = json!(hash);
    m["timestamp"] = json!(timestamp);
    m
}

fn manifest_hash(m: &Value) -> String {
    m["manifest_hash"].as_str().unwrap_or("").to_string()
}

fn emit(doc: &str, output: &Option<PathBuf>) -> Result<(), Error> {
    match output {
        Some(p) => std::fs::write(p, doc).map_err(Error::from),
        None => {
            println!("{doc}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// JSON renderings

fn trim_json(t: &TrimPoint, m: &Value) -> Value {
    json!({
        "manifest": m,
        "condition": t.condition.label(),
        "residual_norm": t.residual_norm,
        "main_rotor": {
            "thrust_n": t.main_sol.thrust,
            "ct": t.main_sol.ct,
            "torque_nm": t.main_sol.torque,
            "cq": t.main_sol.cq,
            "induced_velocity_ms": t.main_sol.induced_velocity,
            "lambda0": t.main_sol.lambda0,
            "mu": t.main_sol.mu,
            "collective_rad": t.controls.d_coll,
            "collective_deg": t.controls.d_coll.to_degrees(),
            "iterations": t.main_sol.iterations,
            "residual": t.main_sol.residual,
        },
        "tail_rotor": {
            "thrust_n": t.tail_sol.thrust,
            "ct": t.tail_sol.ct,
            "torque_nm": t.tail_sol.torque,
            "cq": t.tail_sol.cq,
            "induced_velocity_ms": t.tail_sol.induced_velocity,
            "collective_rad": t.controls.d_ped,
            "collective_deg": t.controls.d_ped.to_degrees(),
        },
        "flapping": {
            "a1s_rad": t.flap.a1s,
            "a1s_deg": t.flap.a1s.to_degrees(),
            "b1s_rad": t.flap.b1s,
            "b1s_deg": t.flap.b1s.to_degrees(),
        },
        "cyclic": {
            "d_long_rad": t.controls.d_long,
            "d_long_deg": t.controls.d_long.to_degrees(),
            "d_lat_rad": t.controls.d_lat,
            "d_lat_deg": t.controls.d_lat.to_degrees(),
        },
        "attitude": {
            "theta_rad": t.state.theta,
            "theta_deg": t.state.theta.to_degrees(),
            "phi_rad": t.state.phi,
            "phi_deg": t.state.phi.to_degrees(),
        },
        "velocity": { "u": t.state.u, "v": t.state.v, "w": t.state.w },
    })
}

fn matrix_json(m: &DMatrix<f64>) -> Value {
    let rows: Vec<Vec<f64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect();
    json!(rows)
}

fn linear_model_json(lm: &LinearModel, dec: &DecoupledModel, man: &Value) -> Value {
    json!({
        "manifest": man,
        "condition": lm.trim.condition.label(),
        "state_labels": lm.state_labels,
        "input_labels": lm.input_labels,
        "a": matrix_json(&lm.a),
        "b": matrix_json(&lm.b),
        "step_report": {
            "steps": lm.step_report.steps.iter().map(|(n, h)| json!({"variable": n, "h": h})).collect::<Vec<_>>(),
            "max_halving_dev_a": lm.step_report.halving_dev_a.max(),
            "max_halving_dev_b": lm.step_report.halving_dev_b.max(),
            "violations": lm.step_violations(1e-3, 1e-6).len(),
        },
        "decoupled": {
            "long": {
                "state_labels": dec.long_state_labels,
                "input_labels": dec.long_input_labels,
                "a": matrix_json(&dec.long_a),
                "b": matrix_json(&dec.long_b),
            },
            "lat": {
                "state_labels": dec.lat_state_labels,
                "input_labels": dec.lat_input_labels,
                "a": matrix_json(&dec.lat_a),
                "b": matrix_json(&dec.lat_b),
            },
            "coupling_norm": dec.coupling_norm,
        },
    })
}

fn matrix_text(title: &str, labels_r: &[&str], labels_c: &[&str], m: &DMatrix<f64>) -> String {
    let mut s = format!("{title}\n");
    s.push_str(&format!("{:>10}", ""));
    for l in labels_c {
        s.push_str(&format!("{l:>12}"));
    }
    s.push('\n');
    for i in 0..m.nrows() {
        s.push_str(&format!("{:>10}", labels_r[i]));
        for j in 0..m.ncols() {
            s.push_str(&format!("{:>12.4}", m[(i, j)]));
        }
        s.push('\n');
    }
    s
}

fn linear_model_text(lm: &LinearModel, dec: &DecoupledModel) -> String {
    let sl: Vec<&str> = lm.state_labels.clone();
    let il: Vec<&str> = lm.input_labels.clone();
    let mut out = String::new();
    out.push_str(&matrix_text("A (full)", &sl, &sl, &lm.a));
    out.push('\n');
    out.push_str(&matrix_text("B (full)", &sl, &il, &lm.b));
    out.push('\n');
    out.push_str(&matrix_text(
        "A long-ver",
        &dec.long_state_labels,
        &dec.long_state_labels,
        &dec.long_a,
    ));
    out.push('\n');
    out.push_str(&matrix_text(
        "B long-ver",
        &dec.long_state_labels,
        &dec.long_input_labels,
        &dec.long_b,
    ));
    out.push('\n');
    out.push_str(&matrix_text(
        "A lat-dir",
        &dec.lat_state_labels,
        &dec.lat_state_labels,
        &dec.lat_a,
    ));
    out.push('\n');
    out.push_str(&matrix_text(
        "B lat-dir",
        &dec.lat_state_labels,
        &dec.lat_input_labels,
        &dec.lat_b,
    ));
    out
}

fn modes_json(report: &ModalReport, labels: &[&str], block: &str, man: &Value) -> Value {
    let dom = mode_dominance(report, labels);
    let modes: Vec<Value> = report
        .modes
        .iter()
        .zip(&dom)
        .map(|(m, d)| {
            json!({
                "eigenvalue": { "re": m.eigenvalue.re, "im": m.eigenvalue.im },
                "damping_ratio": m.damping_ratio,
                "frequency_rad_s": m.frequency,
                "residual": m.residual,
                "eigenvector": m.eigenvector.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
                "normalized_eigenvector": m.normalized_eigenvector.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>(),
                "dominant_states": d.dominant_states,
                "label": d.label,
            })
        })
        .collect();
    json!({
        "manifest": man,
        "block": block,
        "state_labels": labels,
        "stability_verdict": report.stability_verdict,
        "modes": modes,
    })
}

fn modes_text(report: &ModalReport, labels: &[&str]) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "{:>24}  {:>14}  {:>16}\n",
        "Eigen value", "Damping ratio", "Frequency (rad/s)"
    ));
    for m in &report.modes {
        let ev = if m.eigenvalue.im.abs() > 1e-12 {
            format!("{:.4} {:+.4}i", m.eigenvalue.re, m.eigenvalue.im)
        } else {
            format!("{:.6}", m.eigenvalue.re)
        };
        s.push_str(&format!(
            "{ev:>24}  {:>14.4}  {:>16.4}\n",
            m.damping_ratio, m.frequency
        ));
    }
    s.push_str(&format!("verdict: {:?}\n", report.stability_verdict));
    let dom = mode_dominance(report, labels);
    for (k, d) in dom.iter().enumerate() {
        let label = d.label.clone().unwrap_or_else(|| "unlabeled".to_string());
        let top: Vec<String> = d
            .ranking
            .iter()
            .take(2)
            .map(|(l, v)| format!("{l}={v:.3e}"))
            .collect();
        s.push_str(&format!("mode {k}: {label}; dominant {}\n", top.join(", ")));
    }
    s
}

fn modes_csv(report: &ModalReport, labels: &[&str], hash: &str) -> String {
    let mut s = format!("# manifest_hash={hash}\nmode,eigenvalue_re,eigenvalue_im");
    for l in labels {
        s.push_str(&format!(",{l}"));
    }
    s.push('\n');
    for (k, m) in report.modes.iter().enumerate() {
        s.push_str(&format!("{k},{},{}", m.eigenvalue.re, m.eigenvalue.im));
        for c in m.normalized_eigenvector.iter() {
            s.push_str(&format!(",{}", c.norm()));
        }
        s.push('\n');
    }
    s
}

fn trajectory_csv(traj: &Trajectory, p: &VehicleParams, hash: &str) -> String {
    let mut s = format!(
        "# manifest_hash={hash}\n# model={} dt={}\n", traj.model_tag, traj.dt
    );
    s.push_str("t,u,v,w,p,q,r,phi,theta,psi,a1s,b1s,d_coll,d_ped,d_lat,d_long\n");
    for (k, t) in traj.times.iter().enumerate() {
        let st = &traj.states[k];
        let c = &traj.controls[k];
        let flap = st.flap.unwrap_or_else(|| {
            rotorlin::rotor::flapping_steady(
                rotorlin::forces::air_at_main_hub(st, p),
                (st.p, st.q),
                (c.d_lat, c.d_long),
                p,
            )
        });
        s.push_str(&format!(
            "{t},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            st.u, st.v, st.w, st.p, st.q, st.r, st.phi, st.theta, st.psi,
            flap.a1s, flap.b1s, c.d_coll, c.d_ped, c.d_lat, c.d_long
        ));
    }
    if let Some(h) = &traj.halt {
        s.push_str(&format!("# halted: {h}\n"));
    }
    s
}

fn read_trajectory_csv(path: &PathBuf) -> Result<Trajectory, Error> {
    let text = std::fs::read_to_string(path)?;
    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut controls = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            saw_header = true; // column header row
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|x| x.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::GridError(format!("bad CSV row `{line}` in {}", path.display())))?;
        if vals.len() != 16 {
            return Err(Error::GridError(format!(
                "expected 16 columns, got {} in {}",
                vals.len(),
                path.display()
            )));
        }
        times.push(vals[0]);
        let mut s = FlightState::from_slice(&vals[1..10]);
        s.flap = Some(rotorlin::rotor::FlappingState {
            a1s: vals[10],
            b1s: vals[11],
        });
        states.push(s);
        controls.push(ControlInput::from_slice(&vals[12..16]));
    }
    let dt = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
    Ok(Trajectory {
        times,
        states,
        controls,
        model_tag: path.display().to_string(),
        dt,
        halt: None,
    })
}

// ---------------------------------------------------------------------------

fn solve_condition(
    p: &VehicleParams,
    condition: Condition,
    u: f64,
    v: f64,
    w: f64,
) -> Result<TrimPoint, Error> {
    match condition {
        Condition::Hover => trim_hover(p),
        Condition::Forward => trim_forward(p, (u, v, w)),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let (params, config_path) = load_params(&cli.config)?;
    match cli.command {
        Command::Params { complete, output } => {
            if complete {
                let (done, prov) = config::complete_parameters(&params, &TrimTargets::default())?;
                let man = manifest("params --complete", &config_path, "-", &prov);
                let text = format!(
                    "# manifest_hash = {}\n{}",
                    manifest_hash(&man),
                    config::serialize(&done)
                );
                emit(&text, &output)?;
            } else {
                let man = manifest("params", &config_path, "-", &[]);
                let doc = json!({
                    "manifest": man,
                    "config_text": config::serialize(&params),
                    "derived": {
                        "sigma_mr": params.sigma_mr(),
                        "sigma_tr": params.sigma_tr(),
                        "tip_speed_mr": params.tip_speed_mr(),
                        "tip_speed_tr": params.tip_speed_tr(),
                        "fin_blockage": params.fin_blockage(),
                        "wake_band": params.wake_band(),
                    },
                });
                emit(&serde_json::to_string_pretty(&doc).unwrap(), &output)?;
            }
            Ok(())
        }
        Command::Trim { condition, u, v, w, output } => {
            let t = solve_condition(&params, condition, u, v, w)?;
            let man = manifest("trim", &config_path, &t.condition.label(), &[]);
            emit(
                &serde_json::to_string_pretty(&trim_json(&t, &man)).unwrap(),
                &output,
            )?;
            Ok(())
        }
        Command::Sweep {
            var,
            from,
            to,
            steps,
            condition,
            u,
            v,
            w,
            output,
        } => {
            let t = solve_condition(&params, condition, u, v, w)?;
            let man = manifest("sweep", &config_path, &t.condition.label(), &[]);
            let csv = sweep_csv(&params, &t, &var, from, to, steps, &manifest_hash(&man))?;
            emit(&csv, &output)?;
            Ok(())
        }
        Command::Linearize {
            condition,
            u,
            v,
            w,
            augmented,
            output,
            text,
        } => {
            let t = solve_condition(&params, condition, u, v, w)?;
            let lm9 = assemble_linear_model(&t, &params, false)?;
            let dec = decouple(&lm9, &t, true, &params);
            let lm = if augmented {
                assemble_linear_model(&t, &params, true)?
            } else {
                lm9
            };
            let man = manifest("linearize", &config_path, &t.condition.label(), &[]);
            let jdoc = serde_json::to_string_pretty(&linear_model_json(&lm, &dec, &man)).unwrap();
            let tdoc = format!(
                "# manifest_hash = {}\n{}",
                manifest_hash(&man),
                linear_model_text(&lm, &dec)
            );
            match output {
                Some(base) => {
                    std::fs::write(base.with_extension("json"), &jdoc)?;
                    std::fs::write(base.with_extension("txt"), &tdoc)?;
                }
                None => {
                    if text {
                        println!("{tdoc}");
                    } else {
                        println!("{jdoc}");
                    }
                }
            }
            Ok(())
        }
        Command::Modes {
            condition,
            u,
            v,
            w,
            block,
            no_flapping,
            output,
        } => {
            let t = solve_condition(&params, condition, u, v, w)?;
            let lm = assemble_linear_model(&t, &params, false)?;
            let (matrix, labels): (DMatrix<f64>, Vec<&str>) = match block {
                Block::Full => (lm.a.clone(), lm.state_labels.clone()),
                Block::Long | Block::Lat => {
                    let dec = decouple(&lm, &t, !no_flapping, &params);
                    match block {
                        Block::Long => (dec.long_a.clone(), dec.long_state_labels.clone()),
                        _ => (dec.lat_a.clone(), dec.lat_state_labels.clone()),
                    }
                }
            };
            let mut report = eigen_analysis(&matrix)?;
            apply_normalization(&mut report, &labels, &params)?;
            let block_name = match block {
                Block::Long => "long",
                Block::Lat => "lat",
                Block::Full => "full",
            };
            let man = manifest("modes", &config_path, &t.condition.label(), &[]);
            let jdoc =
                serde_json::to_string_pretty(&modes_json(&report, &labels, block_name, &man))
                    .unwrap();
            let tdoc = modes_text(&report, &labels);
            let cdoc = modes_csv(&report, &labels, &manifest_hash(&man));
            match output {
                Some(base) => {
                    std::fs::write(base.with_extension("json"), &jdoc)?;
                    std::fs::write(base.with_extension("txt"), &tdoc)?;
                    std::fs::write(base.with_extension("csv"), &cdoc)?;
                }
                None => println!("{jdoc}"),
            }
            Ok(())
        }
        Command::Simulate {
            model,
            script,
            condition,
            u,
            v,
            w,
            t_end,
            dt,
            augmented,
            output,
        } => {
            let t = solve_condition(&params, condition, u, v, w)?;
            let script = match script {
                Some(path) => InputScript::parse(&std::fs::read_to_string(path)?)?,
                None => InputScript::default(),
            };
            let man = manifest("simulate", &config_path, &t.condition.label(), &[]);
            let traj = match model {
                SimModel::Nonlinear => {
                    let mut x0 = t.state;
                    if augmented {
                        x0.flap = Some(t.flap);
                    }
                    integrate(
                        &Model::Nonlinear {
                            params: &params,
                            base_controls: t.controls,
                        },
                        &x0,
                        &script,
                        t_end,
                        dt,
                    )?
                }
                SimModel::Linear => {
                    let lm = assemble_linear_model(&t, &params, augmented)?;
                    let mut x0 = t.state;
                    x0.flap = augmented.then_some(t.flap);
                    let traj = integrate(&Model::Linear(&lm), &x0, &script, t_end, dt)?;
                    traj
                }
            };
            emit(&trajectory_csv(&traj, &params, &manifest_hash(&man)), &output)?;
            Ok(())
        }
        Command::Compare { a, b } => {
            let ta = read_trajectory_csv(&a)?;
            let tb = read_trajectory_csv(&b)?;
            let rep = compare(&ta, &tb)?;
            let man = manifest("compare", &config_path, "-", &[]);
            let doc = json!({ "manifest": man, "divergence": rep });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            Ok(())
        }
        Command::Reproduce { output } => {
            let doc = reference::reproduce(&params, &config_path)?;
            emit(&serde_json::to_string_pretty(&doc).unwrap(), &output)?;
            Ok(())
        }
    }
}

fn sweep_csv(
    p: &VehicleParams,
    t: &TrimPoint,
    var: &str,
    from: f64,
    to: f64,
    steps: usize,
    hash: &str,
) -> Result<String, Error> {
    let state_idx = FlightState::LABELS_9.iter().position(|&l| l == var);
    let input_idx = ControlInput::LABELS.iter().position(|&l| l == var);
    if state_idx.is_none() && input_idx.is_none() {
        return Err(Error::LabelError(var.to_string()));
    }
    let mut s = format!("# manifest_hash={hash}\nswept_var,T,Q,CT,CQ,w_i,a1s,b1s\n");
    let n = steps.max(2);
    for k in 0..n {
        let x = from + (to - from) * k as f64 / (n - 1) as f64;
        let mut sv = t.state.to_vec();
        let mut cv = t.controls.to_vec();
        if let Some(i) = state_idx {
            sv[i] = x;
        }
        if let Some(i) = input_idx {
            cv[i] = x;
        }
        let st = FlightState::from_slice(&sv);
        let c = ControlInput::from_slice(&cv);
        match rotorlin::forces::total_forces_moments(&st, &c, p) {
            Ok(b) => {
                s.push_str(&format!(
                    "{x},{},{},{},{},{},{},{}\n",
                    b.main.thrust,
                    b.main.torque,
                    b.main.ct,
                    b.main.cq,
                    b.main.induced_velocity,
                    b.flap.a1s,
                    b.flap.b1s
                ));
            }
            Err(Error::InflowDiverged { .. }) => {
                s.push_str(&format!("{x},nan,nan,nan,nan,nan,nan,nan\n"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(s)
}
