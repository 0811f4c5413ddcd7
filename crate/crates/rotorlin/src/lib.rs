//! First-principles flight dynamics for a small-scale helicopter: nonlinear
//! 6-DOF model, trim solver, numerical linearization to state-space models,
//! modal analysis, and time-domain simulation.
//!
//! The crate is organized along the pipeline:
//!
//! * [`config`] — vehicle parameters, validation, calibration completion
//! * [`rotor`] — rotor thrust/inflow/torque and tip-path-plane flapping
//! * [`forces`] — component force/moment buildup (rotors, fuselage, fins, gravity)
//! * [`dynamics`] — rigid-body state derivative (9- and 11-state variants)
//! * [`trim`] — hover and forward-flight equilibrium
//! * [`linearize`] — A/B assembly and longitudinal/lateral decoupling
//! * [`modal`] — eigenvalues, damping/frequency, mode dominance
//! * [`sim`] — fixed-step integration and trajectory comparison

pub mod config;
pub mod dynamics;
pub mod error;
pub mod forces;
pub mod linearize;
pub mod modal;
pub mod rotor;
pub mod sim;
pub mod trim;

pub use config::{complete_parameters, load_config, TrimTargets, VehicleParams};
pub use dynamics::{state_derivative, ControlInput, FlightState};
pub use error::{Error, Result};
pub use linearize::{assemble_linear_model, decouple, DecoupledModel, LinearModel};
pub use modal::{eigen_analysis, mode_dominance, ModalReport};
pub use rotor::{solve_rotor_inflow, solve_tail_rotor, RotorSolution};
pub use sim::{compare, integrate, InputScript, Model, Trajectory};
pub use trim::{trim_forward, trim_hover, TrimCondition, TrimPoint};
