//! Simulation and chaos analysis of an asymmetric water wheel with unsteady
//! inflow.
//!
//! The wheel's mass distribution is truncated to its lowest Fourier modes,
//! giving a Lorenz-like non-autonomous system driven by closed-form inflow
//! forcings. The crate integrates the reduced and mode-truncated systems,
//! runs a competitive-modes analysis that locates chaotic parameter regimes,
//! and quantifies chaos with Lyapunov exponents and sign-switch statistics.
//! The `waterwheel` binary turns scenarios into CSV/JSON data files.

pub mod config;
pub mod diagnostics;
pub mod forcing;
pub mod highermodes;
pub mod integrate;
pub mod models;
pub mod modes;
pub mod runner;

pub use config::ScenarioConfig;
pub use forcing::{InflowForcings, TimeFunction};
pub use integrate::{integrate, IntegratorOptions, Method, OdeSystem, Trajectory};
pub use models::{make_scenario, ReducedParams, ReducedState, Scenario, ScenarioKind};
pub use modes::{detect_events, eval_g, eval_h, CompetitiveEvent};
pub use runner::{run_scenario, run_suite};
