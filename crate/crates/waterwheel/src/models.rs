//! Right-hand sides of the water wheel systems and the built-in scenarios.
//!
//! Three views of the same wheel:
//! * the reduced scaled system in (x, y, z) — angular velocity plus the two
//!   lowest Fourier modes of the mass distribution;
//! * the dimensional lowest-mode system in (a1, b1, omega) with explicit
//!   leakage, damping, inertia and geometry;
//! * the scaled mode-truncated system in (x, y, z, a2, b2, ..., aN, bN).

use crate::forcing::{InflowForcings, TimeFunction};
use crate::integrate::OdeSystem;

/// Parameters of the reduced system.
///
/// dx/dtau = sigma (y - x)
/// dy/dtau = r(tau) x - y - x z + mu(tau)
/// dz/dtau = x y - z + dr/dtau
#[derive(Debug, Clone)]
pub struct ReducedParams {
    pub sigma: f64,
    pub r: TimeFunction,
    pub mu: TimeFunction,
}

impl ReducedParams {
    pub fn new(sigma: f64, r: TimeFunction, mu: TimeFunction) -> Self {
        debug_assert!(sigma > 0.0);
        ReducedParams { sigma, r, mu }
    }
}

/// Scaled state (x, y, z): angular velocity, asymmetric first mode, shifted
/// symmetric first mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ReducedState {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        ReducedState { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_slice(s: &[f64]) -> Self {
        ReducedState {
            x: s[0],
            y: s[1],
            z: s[2],
        }
    }
}

/// Time derivative of the reduced state.
pub fn reduced_rhs(state: &ReducedState, tau: f64, params: &ReducedParams) -> ReducedState {
    let ReducedState { x, y, z } = *state;
    ReducedState {
        x: params.sigma * (y - x),
        y: params.r.eval(tau) * x - y - x * z + params.mu.eval(tau),
        z: x * y - z + params.r.deriv1(tau),
    }
}

/// Divergence of the reduced field: -sigma - 2, independent of state and time.
pub fn reduced_divergence(params: &ReducedParams) -> f64 {
    -params.sigma - 2.0
}

impl OdeSystem for ReducedParams {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, tau: f64, state: &[f64], deriv: &mut [f64]) {
        let d = reduced_rhs(&ReducedState::from_slice(state), tau, self);
        deriv[0] = d.x;
        deriv[1] = d.y;
        deriv[2] = d.z;
    }
}

/// Dimensional parameters of the lowest-mode system.
///
/// da1/dt = omega b1 - K a1 + p1(t)
/// db1/dt = -omega a1 - K b1 + q1(t)
/// I domega/dt = -nu omega + pi g R a1
#[derive(Debug, Clone)]
pub struct DimensionalParams {
    /// Leakage rate K (1/time).
    pub leakage: f64,
    /// Rotational damping nu.
    pub damping: f64,
    /// Moment of inertia I.
    pub inertia: f64,
    /// Gravitational constant g.
    pub gravity: f64,
    /// Wheel radius R.
    pub radius: f64,
    pub p1: TimeFunction,
    pub q1: TimeFunction,
}

/// Lowest-mode dimensional state (a1, b1, omega).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionalState {
    pub a1: f64,
    pub b1: f64,
    pub omega: f64,
}

pub fn dimensional_rhs(
    state: &DimensionalState,
    t: f64,
    params: &DimensionalParams,
) -> DimensionalState {
    let DimensionalState { a1, b1, omega } = *state;
    let k = params.leakage;
    DimensionalState {
        a1: omega * b1 - k * a1 + params.p1.eval(t),
        b1: -omega * a1 - k * b1 + params.q1.eval(t),
        omega: (-params.damping * omega
            + std::f64::consts::PI * params.gravity * params.radius * a1)
            / params.inertia,
    }
}

impl OdeSystem for DimensionalParams {
    fn dim(&self) -> usize {
        3
    }
    fn eval(&self, t: f64, state: &[f64], deriv: &mut [f64]) {
        let d = dimensional_rhs(
            &DimensionalState {
                a1: state[0],
                b1: state[1],
                omega: state[2],
            },
            t,
            self,
        );
        deriv[0] = d.a1;
        deriv[1] = d.b1;
        deriv[2] = d.omega;
    }
}

/// Per-mode forcing pair of the scaled truncated system.
#[derive(Debug, Clone)]
pub struct ModeForcing {
    pub p: TimeFunction,
    pub q: TimeFunction,
}

/// Parameters of the scaled mode-truncated system.
///
/// `forcings[n-1]` drives mode n. Mode 1 is the reduced block, so its
/// forcing pair is (mu, r). For n >= 2, in scaled units (K = 1):
///
/// da_n/dtau = n x b_n - a_n + p_n(tau)
/// db_n/dtau = -n x a_n - b_n + q_n(tau)
///
/// State layout: [x, y, z, a2, b2, ..., aN, bN].
#[derive(Debug, Clone)]
pub struct ModeParams {
    pub sigma: f64,
    pub forcings: Vec<ModeForcing>,
}

impl ModeParams {
    pub fn new(sigma: f64, forcings: Vec<ModeForcing>) -> Self {
        assert!(!forcings.is_empty(), "at least mode 1 is required");
        ModeParams { sigma, forcings }
    }

    /// Highest retained mode index N.
    pub fn n_max(&self) -> usize {
        self.forcings.len()
    }

    pub fn state_dim(&self) -> usize {
        3 + 2 * (self.n_max() - 1)
    }

    /// Reduced-system view of mode 1 (r = q1 scaled, mu = p1 scaled).
    pub fn reduced(&self) -> ReducedParams {
        ReducedParams {
            sigma: self.sigma,
            r: self.forcings[0].q.clone(),
            mu: self.forcings[0].p.clone(),
        }
    }

    /// State-vector indices of (a_n, b_n) for n >= 2.
    pub fn amplitude_indices(&self, n: usize) -> (usize, usize) {
        assert!((2..=self.n_max()).contains(&n), "mode {n} out of range");
        let base = 3 + 2 * (n - 2);
        (base, base + 1)
    }

    pub fn component_names(&self) -> Vec<String> {
        let mut names = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        for n in 2..=self.n_max() {
            names.push(format!("a{n}"));
            names.push(format!("b{n}"));
        }
        names
    }
}

/// Time derivative of the scaled mode-truncated state.
pub fn mode_rhs(state: &[f64], tau: f64, params: &ModeParams, deriv: &mut [f64]) {
    debug_assert_eq!(state.len(), params.state_dim());
    let x = state[0];
    let reduced = ReducedState::from_slice(state);
    let r = &params.forcings[0].q;
    let mu = &params.forcings[0].p;
    deriv[0] = params.sigma * (reduced.y - reduced.x);
    deriv[1] = r.eval(tau) * x - reduced.y - x * reduced.z + mu.eval(tau);
    deriv[2] = x * reduced.y - reduced.z + r.deriv1(tau);
    for n in 2..=params.n_max() {
        let (ia, ib) = params.amplitude_indices(n);
        let (a, b) = (state[ia], state[ib]);
        let nf = n as f64;
        let forcing = &params.forcings[n - 1];
        deriv[ia] = nf * x * b - a + forcing.p.eval(tau);
        deriv[ib] = -nf * x * a - b + forcing.q.eval(tau);
    }
}

impl OdeSystem for ModeParams {
    fn dim(&self) -> usize {
        self.state_dim()
    }
    fn eval(&self, tau: f64, state: &[f64], deriv: &mut [f64]) {
        mode_rhs(state, tau, self, deriv);
    }
}

/// The (y, z, a2, b2, ...) dynamics on the invariant manifold x = y = 0 of a
/// symmetric wheel: every component decays linearly toward its forcing.
///
/// Used for diagnostics of runs that never spin; layout drops x, keeping
/// [y, z, a2, b2, ...].
#[derive(Debug, Clone)]
pub struct SpinLockedSubsystem<'a>(pub &'a ModeParams);

impl OdeSystem for SpinLockedSubsystem<'_> {
    fn dim(&self) -> usize {
        self.0.state_dim() - 1
    }
    fn eval(&self, tau: f64, state: &[f64], deriv: &mut [f64]) {
        let r = &self.0.forcings[0].q;
        deriv[0] = -state[0];
        deriv[1] = -state[1] + r.deriv1(tau);
        for n in 2..=self.0.n_max() {
            let ia = 2 + 2 * (n - 2);
            let forcing = &self.0.forcings[n - 1];
            deriv[ia] = -state[ia] + forcing.p.eval(tau);
            deriv[ia + 1] = -state[ia + 1] + forcing.q.eval(tau);
        }
    }
}

/// The three bundled wheel configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Time-varying inflow with an asymmetric component (mu = 1).
    UnsteadyAsymmetric,
    /// Time-varying inflow, symmetric (mu = 0, hence p2 = 0).
    UnsteadySymmetric,
    /// Inflow frozen at its tau = 30 level, asymmetric.
    SteadyAsymmetric,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 3] = [
        ScenarioKind::UnsteadyAsymmetric,
        ScenarioKind::UnsteadySymmetric,
        ScenarioKind::SteadyAsymmetric,
    ];

    pub fn slug(&self) -> &'static str {
        match self {
            ScenarioKind::UnsteadyAsymmetric => "unsteady-asymmetric",
            ScenarioKind::UnsteadySymmetric => "unsteady-symmetric",
            ScenarioKind::SteadyAsymmetric => "steady-asymmetric",
        }
    }
}

impl std::str::FromStr for ScenarioKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unsteady-asymmetric" => Ok(ScenarioKind::UnsteadyAsymmetric),
            "unsteady-symmetric" => Ok(ScenarioKind::UnsteadySymmetric),
            "steady-asymmetric" => Ok(ScenarioKind::SteadyAsymmetric),
            other => Err(format!(
                "unknown scenario kind '{other}' (expected unsteady-asymmetric, \
                 unsteady-symmetric or steady-asymmetric)"
            )),
        }
    }
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.slug())
    }
}

/// A ready-to-integrate scenario: parameters, initial state, time span.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub params: ModeParams,
    pub initial: Vec<f64>,
    pub span: (f64, f64),
}

/// Freeze instant used by the steady variant.
pub const STEADY_FREEZE_TAU: f64 = 30.0;

/// Default integration span of the bundled scenarios.
pub const SCENARIO_SPAN: (f64, f64) = (0.0, 60.0);

/// Build a bundled scenario with the given initial angular velocity.
///
/// All three use sigma = 5, N = 2 and the reference inflow; the symmetric
/// kind zeroes mu (and with it p2), the steady kind freezes r and q2 at
/// tau = 30. Initial state is (x0, 0, r(0), 0, 0) with r evaluated per kind.
pub fn make_scenario(kind: ScenarioKind, x0: f64) -> Scenario {
    make_scenario_from(kind, x0, &InflowForcings::reference())
}

/// [`make_scenario`] with a caller-supplied inflow profile.
pub fn make_scenario_from(kind: ScenarioKind, x0: f64, inflow: &InflowForcings) -> Scenario {
    let InflowForcings { r, mu, p2, q2 } = inflow.clone();
    let (r, mu, p2, q2) = match kind {
        ScenarioKind::UnsteadyAsymmetric => (r, mu, p2, q2),
        ScenarioKind::UnsteadySymmetric => (
            r,
            TimeFunction::constant(0.0),
            TimeFunction::constant(0.0),
            q2,
        ),
        ScenarioKind::SteadyAsymmetric => (
            r.freeze(STEADY_FREEZE_TAU),
            mu,
            p2,
            q2.freeze(STEADY_FREEZE_TAU),
        ),
    };
    let z0 = r.eval(0.0);
    let params = ModeParams::new(
        5.0,
        vec![ModeForcing { p: mu, q: r }, ModeForcing { p: p2, q: q2 }],
    );
    Scenario {
        kind,
        params,
        initial: vec![x0, 0.0, z0, 0.0, 0.0],
        span: SCENARIO_SPAN,
    }
}
