//! Python bindings for the water wheel toolkit.
//!
//! Exposes the forcing grammar, the reduced and mode-truncated models, the
//! integrators, the competitive-modes analysis and the scenario runner.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::path::PathBuf;

use waterwheel::config::ScenarioConfig;
use waterwheel::diagnostics::{self, DiagnosticsError, LyapunovOptions};
use waterwheel::forcing::{AffineTerm, InflowForcings, StepOrientation, TimeFunction};
use waterwheel::highermodes;
use waterwheel::integrate::{integrate_named, IntegrateError, IntegratorOptions, Method, Trajectory};
use waterwheel::models::{
    self, make_scenario, reduced_rhs, ReducedParams, ReducedState, ScenarioKind,
};
use waterwheel::modes;
use waterwheel::runner::{self, ScenarioSummary};

fn run_err(e: runner::RunError) -> PyErr {
    match e {
        runner::RunError::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn integrate_err(e: IntegrateError) -> PyErr {
    match e {
        IntegrateError::InvalidOptions(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn diag_err(e: DiagnosticsError) -> PyErr {
    match e {
        DiagnosticsError::InvalidOptions(_) | DiagnosticsError::BadWindow { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn analysis_err(e: modes::AnalysisError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A closed-form forcing of scaled time with exact derivatives to order 2.
#[pyclass(name = "TimeFunction", frozen, from_py_object)]
#[derive(Clone)]
struct PyTimeFunction {
    inner: TimeFunction,
}

#[pymethods]
impl PyTimeFunction {
    #[staticmethod]
    fn constant(value: f64) -> Self {
        TimeFunction::constant(value).into()
    }

    /// amplitude * sin(angular_frequency * tau + phase)
    #[staticmethod]
    #[pyo3(signature = (amplitude, angular_frequency, phase = 0.0))]
    fn sinusoid(amplitude: f64, angular_frequency: f64, phase: f64) -> Self {
        TimeFunction::sinusoid(amplitude, angular_frequency, phase).into()
    }

    /// amplitude * tanh(center - tau), or tanh(tau - center) when rising.
    #[staticmethod]
    #[pyo3(signature = (amplitude, center, rising = false))]
    fn tanh_step(amplitude: f64, center: f64, rising: bool) -> Self {
        let orientation = if rising {
            StepOrientation::Rising
        } else {
            StepOrientation::Falling
        };
        TimeFunction::tanh_step(amplitude, center, orientation).into()
    }

    /// offset + sum(coefficient_i * child_i)
    #[staticmethod]
    fn affine(offset: f64, terms: Vec<(f64, PyTimeFunction)>) -> Self {
        TimeFunction::affine(
            offset,
            terms
                .into_iter()
                .map(|(coefficient, child)| AffineTerm {
                    coefficient,
                    child: child.inner,
                })
                .collect(),
        )
        .into()
    }

    fn eval(&self, tau: f64) -> f64 {
        self.inner.eval(tau)
    }

    #[pyo3(signature = (tau, order = 0))]
    fn eval_deriv(&self, tau: f64, order: u32) -> PyResult<f64> {
        self.inner
            .eval_deriv(tau, order)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn freeze(&self, tau0: f64) -> Self {
        self.inner.freeze(tau0).into()
    }

    fn is_constant(&self) -> bool {
        self.inner.is_constant()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str::<TimeFunction>(text)
            .map(Into::into)
            .map_err(|e| PyValueError::new_err(format!("bad forcing expression: {e}")))
    }

    fn __repr__(&self) -> String {
        format!("TimeFunction({:?})", self.inner)
    }
}

impl From<TimeFunction> for PyTimeFunction {
    fn from(inner: TimeFunction) -> Self {
        PyTimeFunction { inner }
    }
}

/// The bundled inflow profile (r, mu, p2, q2) behind the scenarios.
#[pyfunction]
fn reference_forcings(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let f = InflowForcings::reference();
    let d = PyDict::new(py);
    d.set_item("r", PyTimeFunction::from(f.r))?;
    d.set_item("mu", PyTimeFunction::from(f.mu))?;
    d.set_item("p2", PyTimeFunction::from(f.p2))?;
    d.set_item("q2", PyTimeFunction::from(f.q2))?;
    Ok(d)
}

fn trajectory_from_lists(times: Vec<f64>, states: Vec<Vec<f64>>) -> PyResult<Trajectory> {
    if times.len() != states.len() {
        return Err(PyValueError::new_err(
            "times and states must have the same length",
        ));
    }
    let dim = states.first().map_or(0, Vec::len);
    let names = (0..dim).map(|i| format!("s{i}")).collect();
    Ok(Trajectory {
        times,
        states,
        names,
    })
}

fn trajectory_to_py(traj: Trajectory) -> (Vec<f64>, Vec<Vec<f64>>, Vec<String>) {
    (traj.times, traj.states, traj.names)
}

fn options(step: f64, sample_interval: f64) -> IntegratorOptions {
    IntegratorOptions {
        method: Method::Rk4Fixed { step },
        sample_interval,
    }
}

type EventTuple = (f64, usize, usize, f64, f64);

fn events_to_py(events: Vec<modes::CompetitiveEvent>) -> Vec<EventTuple> {
    events
        .into_iter()
        .map(|e| (e.tau, e.pair.0, e.pair.1, e.g_value, e.residual))
        .collect()
}

/// The reduced three-variable system with its competitive-modes analysis.
#[pyclass(name = "ReducedModel", frozen)]
struct PyReducedModel {
    params: ReducedParams,
}

#[pymethods]
impl PyReducedModel {
    #[new]
    fn new(sigma: f64, r: PyTimeFunction, mu: PyTimeFunction) -> PyResult<Self> {
        if !(sigma > 0.0) {
            return Err(PyValueError::new_err("sigma must be positive"));
        }
        Ok(PyReducedModel {
            params: ReducedParams::new(sigma, r.inner, mu.inner),
        })
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.params.sigma
    }

    fn rhs(&self, state: [f64; 3], tau: f64) -> (f64, f64, f64) {
        let d = reduced_rhs(&ReducedState::from_slice(&state), tau, &self.params);
        (d.x, d.y, d.z)
    }

    fn divergence(&self) -> f64 {
        models::reduced_divergence(&self.params)
    }

    fn eval_g(&self, state: [f64; 3], tau: f64) -> [f64; 4] {
        modes::eval_g(&ReducedState::from_slice(&state), tau, &self.params)
    }

    fn eval_h(&self, state: [f64; 3], tau: f64) -> [f64; 4] {
        modes::eval_h(&ReducedState::from_slice(&state), tau, &self.params)
    }

    fn manifold_residuals(&self, state: [f64; 3], tau: f64) -> [f64; 6] {
        modes::manifold_residuals(&ReducedState::from_slice(&state), tau, &self.params)
    }

    fn classify_region(&self, x: f64, z: f64, tau: f64) -> bool {
        modes::classify_region(x, z, tau, &self.params)
    }

    #[pyo3(signature = (state0, t_end, step = 1e-3, sample_interval = 1e-2, t_start = 0.0))]
    fn integrate(
        &self,
        state0: [f64; 3],
        t_end: f64,
        step: f64,
        sample_interval: f64,
        t_start: f64,
    ) -> PyResult<(Vec<f64>, Vec<Vec<f64>>, Vec<String>)> {
        let names = vec!["x".into(), "y".into(), "z".into()];
        integrate_named(
            &self.params,
            &state0,
            (t_start, t_end),
            &options(step, sample_interval),
            names,
        )
        .map(trajectory_to_py)
        .map_err(integrate_err)
    }

    #[pyo3(signature = (times, states, epsilon = 0.5))]
    fn detect_events(
        &self,
        times: Vec<f64>,
        states: Vec<Vec<f64>>,
        epsilon: f64,
    ) -> PyResult<Vec<EventTuple>> {
        let traj = trajectory_from_lists(times, states)?;
        modes::detect_events(&traj, &self.params, epsilon)
            .map(events_to_py)
            .map_err(analysis_err)
    }

    #[pyo3(signature = (times, states, epsilon = 0.5))]
    fn check_conjecture<'py>(
        &self,
        py: Python<'py>,
        times: Vec<f64>,
        states: Vec<Vec<f64>>,
        epsilon: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let traj = trajectory_from_lists(times, states)?;
        let report = modes::check_conjecture(&traj, &self.params, epsilon).map_err(analysis_err)?;
        let d = PyDict::new(py);
        d.set_item("conditions", report.conditions.to_vec())?;
        d.set_item("event_count", report.events.len())?;
        let pairs = PyDict::new(py);
        for (idx, (i, j)) in modes::PAIR_ORDER.iter().enumerate() {
            pairs.set_item(format!("g{i}_g{j}"), report.pair_counts[idx])?;
        }
        d.set_item("pair_event_counts", pairs)?;
        d.set_item(
            "positive_region_fraction",
            report.positive_region_fraction,
        )?;
        d.set_item("events", events_to_py(report.events))?;
        Ok(d)
    }

    #[pyo3(signature = (times, states))]
    fn oscillator_residual(
        &self,
        times: Vec<f64>,
        states: Vec<Vec<f64>>,
    ) -> PyResult<Vec<[f64; 3]>> {
        let traj = trajectory_from_lists(times, states)?;
        modes::oscillator_residual(&traj, &self.params).map_err(analysis_err)
    }

    #[pyo3(signature = (state0, t_end, renorm_interval = 0.5, perturbation = 1e-8,
                        transient = 0.0, step = 1e-3, seed = 0, t_start = 0.0))]
    #[allow(clippy::too_many_arguments)]
    fn largest_lyapunov<'py>(
        &self,
        py: Python<'py>,
        state0: [f64; 3],
        t_end: f64,
        renorm_interval: f64,
        perturbation: f64,
        transient: f64,
        step: f64,
        seed: u64,
        t_start: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let opts = LyapunovOptions {
            renorm_interval,
            perturbation,
            transient,
            step,
            seed,
        };
        let est = diagnostics::largest_lyapunov(&self.params, &state0, (t_start, t_end), &opts)
            .map_err(diag_err)?;
        lyapunov_dict(py, est.exponent, est.horizon, est.renorm_interval, est.sample_count)
    }
}

fn lyapunov_dict(
    py: Python<'_>,
    exponent: f64,
    horizon: (f64, f64),
    renorm_interval: f64,
    sample_count: usize,
) -> PyResult<Bound<'_, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("exponent", exponent)?;
    d.set_item("horizon", horizon)?;
    d.set_item("renorm_interval", renorm_interval)?;
    d.set_item("sample_count", sample_count)?;
    Ok(d)
}

/// A bundled scenario: mode-truncated parameters, initial state and span.
#[pyclass(name = "Scenario", frozen)]
struct PyScenario {
    scenario: models::Scenario,
}

#[pymethods]
impl PyScenario {
    #[getter]
    fn kind(&self) -> String {
        self.scenario.kind.slug().to_string()
    }

    #[getter]
    fn initial(&self) -> Vec<f64> {
        self.scenario.initial.clone()
    }

    #[getter]
    fn span(&self) -> (f64, f64) {
        self.scenario.span
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.scenario.params.sigma
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.scenario.params.n_max()
    }

    #[getter]
    fn component_names(&self) -> Vec<String> {
        self.scenario.params.component_names()
    }

    /// The reduced-system view of mode 1.
    fn reduced(&self) -> PyReducedModel {
        PyReducedModel {
            params: self.scenario.params.reduced(),
        }
    }

    fn mode_rhs(&self, state: Vec<f64>, tau: f64) -> PyResult<Vec<f64>> {
        if state.len() != self.scenario.params.state_dim() {
            return Err(PyValueError::new_err(format!(
                "state must have {} components",
                self.scenario.params.state_dim()
            )));
        }
        let mut deriv = vec![0.0; state.len()];
        models::mode_rhs(&state, tau, &self.scenario.params, &mut deriv);
        Ok(deriv)
    }

    #[pyo3(signature = (t_end = None, step = 1e-3, sample_interval = 1e-2))]
    fn integrate(
        &self,
        t_end: Option<f64>,
        step: f64,
        sample_interval: f64,
    ) -> PyResult<(Vec<f64>, Vec<Vec<f64>>, Vec<String>)> {
        let span = (
            self.scenario.span.0,
            t_end.unwrap_or(self.scenario.span.1),
        );
        integrate_named(
            &self.scenario.params,
            &self.scenario.initial,
            span,
            &options(step, sample_interval),
            self.scenario.params.component_names(),
        )
        .map(trajectory_to_py)
        .map_err(integrate_err)
    }

    /// Attracting circle of mode n at instant tau: ((cx, cy), radius).
    fn evolving_circle(&self, n: usize, tau: f64) -> PyResult<((f64, f64), f64)> {
        if !(1..=self.scenario.params.n_max()).contains(&n) {
            return Err(PyValueError::new_err(format!(
                "mode {n} not retained (N = {})",
                self.scenario.params.n_max()
            )));
        }
        let c = highermodes::evolving_circle(n, tau, &self.scenario.params);
        Ok((c.center, c.radius))
    }

    /// Truncated iterated-integral solution of mode n at tau, driven by the
    /// sampled angular velocity (component 0 of the supplied trajectory).
    #[pyo3(signature = (n, times, states, k_max = 8, tau = None))]
    fn series_solution(
        &self,
        n: usize,
        times: Vec<f64>,
        states: Vec<Vec<f64>>,
        k_max: usize,
        tau: Option<f64>,
    ) -> PyResult<(f64, f64, bool)> {
        if !(2..=self.scenario.params.n_max()).contains(&n) {
            return Err(PyValueError::new_err(format!(
                "mode {n} not retained (N = {})",
                self.scenario.params.n_max()
            )));
        }
        let tau = tau.unwrap_or(*times.last().unwrap_or(&0.0));
        let traj = trajectory_from_lists(times, states)?;
        let forcing = &self.scenario.params.forcings[n - 1];
        let sol = highermodes::series_solution(n, &traj, &forcing.p, &forcing.q, 1.0, k_max, tau)
            .map_err(analysis_err)?;
        Ok((sol.a, sol.b, sol.truncation_warning))
    }
}

/// Build one of the bundled scenarios: unsteady-asymmetric,
/// unsteady-symmetric or steady-asymmetric.
#[pyfunction]
#[pyo3(signature = (kind = "unsteady-asymmetric", x0 = 1.0))]
fn scenario(kind: &str, x0: f64) -> PyResult<PyScenario> {
    let kind: ScenarioKind = kind.parse().map_err(PyValueError::new_err)?;
    Ok(PyScenario {
        scenario: make_scenario(kind, x0),
    })
}

/// Number of strict sign changes of `series[start:end]`.
#[pyfunction]
#[pyo3(signature = (series, start = 0, end = None))]
fn sign_switch_count(series: Vec<f64>, start: usize, end: Option<usize>) -> PyResult<usize> {
    let end = end.unwrap_or(series.len());
    diagnostics::sign_switch_count(&series, start..end).map_err(diag_err)
}

/// Residual of the radial-balance identity for one mode-plane state.
#[pyfunction]
#[pyo3(signature = (a, b, da, db, p, q, leakage = 1.0))]
fn radial_balance_residual(a: f64, b: f64, da: f64, db: f64, p: f64, q: f64, leakage: f64) -> f64 {
    highermodes::radial_balance_residual(a, b, da, db, p, q, leakage)
}

fn summary_dict<'py>(py: Python<'py>, s: &ScenarioSummary) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("scenario", s.kind.slug())?;
    d.set_item("x0", s.x0)?;
    d.set_item("span", s.span)?;
    d.set_item("epsilon", s.epsilon)?;
    d.set_item("conditions", s.conditions.to_vec())?;
    d.set_item("event_count", s.event_count)?;
    let pairs = PyDict::new(py);
    for (idx, (i, j)) in modes::PAIR_ORDER.iter().enumerate() {
        pairs.set_item(format!("g{i}_g{j}"), s.pair_counts[idx])?;
    }
    d.set_item("pair_event_counts", pairs)?;
    d.set_item("positive_region_fraction", s.positive_region_fraction)?;
    d.set_item("switch_window", s.switch_window)?;
    d.set_item("x_sign_switches", s.x_sign_switches)?;
    d.set_item("y_sign_switches", s.y_sign_switches)?;
    d.set_item("max_abs_x", s.max_abs_x)?;
    d.set_item("lyapunov_exponent", s.lyapunov.exponent)?;
    d.set_item("lyapunov_system", s.lyapunov_system)?;
    Ok(d)
}

/// Run one scenario with the file-writing pipeline; returns the summary.
#[pyfunction]
#[pyo3(signature = (out_dir, kind = "unsteady-asymmetric", x0 = 1.0, t_end = 60.0,
                    epsilon = 0.5, step = 1e-3, sample_interval = 1e-2,
                    grid_n = 601, snapshot_tau = 5.0))]
#[allow(clippy::too_many_arguments)]
fn run_scenario<'py>(
    py: Python<'py>,
    out_dir: PathBuf,
    kind: &str,
    x0: f64,
    t_end: f64,
    epsilon: f64,
    step: f64,
    sample_interval: f64,
    grid_n: usize,
    snapshot_tau: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let mut config = ScenarioConfig {
        kind: kind.parse().map_err(PyValueError::new_err)?,
        x0,
        t_end,
        epsilon,
        out_dir,
        ..ScenarioConfig::default()
    };
    config.integrator = options(step, sample_interval);
    config.region.n = grid_n;
    config.region.snapshot_tau = snapshot_tau;
    let summary = runner::run_scenario(&config).map_err(run_err)?;
    summary_dict(py, &summary)
}

/// Run all six bundled (scenario, x0) combinations into `out_dir`.
#[pyfunction]
fn run_suite(py: Python<'_>, out_dir: PathBuf) -> PyResult<Vec<Bound<'_, PyDict>>> {
    let summaries = runner::run_suite(&out_dir).map_err(run_err)?;
    summaries.iter().map(|s| summary_dict(py, s)).collect()
}

#[pymodule]
fn waterwheel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTimeFunction>()?;
    m.add_class::<PyReducedModel>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(reference_forcings, m)?)?;
    m.add_function(wrap_pyfunction!(scenario, m)?)?;
    m.add_function(wrap_pyfunction!(sign_switch_count, m)?)?;
    m.add_function(wrap_pyfunction!(radial_balance_residual, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
