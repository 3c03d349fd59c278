//! Time steppers for non-autonomous ODE systems with uniform output sampling.
//!
//! Two engines: classical fixed-step RK4 (the deterministic default) and a
//! Dormand-Prince embedded 4(5) pair with PI step control and 4th-order dense
//! output, useful around the steep tanh fronts of the inflow profile.

use thiserror::Error;

/// A first-order ODE system `ds/dtau = f(tau, s)`.
///
/// Evaluation must be pure; systems are shared immutably, so independent
/// trajectories can integrate concurrently.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn eval(&self, tau: f64, state: &[f64], deriv: &mut [f64]);
}

/// Adapter turning a closure into an [`OdeSystem`].
pub struct FnSystem<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64, &[f64], &mut [f64])> FnSystem<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnSystem { dim, f }
    }
}

impl<F: Fn(f64, &[f64], &mut [f64])> OdeSystem for FnSystem<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, tau: f64, state: &[f64], deriv: &mut [f64]) {
        (self.f)(tau, state, deriv)
    }
}

#[derive(Debug, Error)]
pub enum IntegrateError {
    #[error("integration blew up near tau = {tau}: non-finite state")]
    Blowup { tau: f64 },
    #[error("adaptive step underflow at tau = {tau}: step {step:e} < 1e-12")]
    StepUnderflow { tau: f64, step: f64 },
    #[error("invalid integrator options: {0}")]
    InvalidOptions(String),
}

/// Stepping scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Rk4Fixed { step: f64 },
    Rk45Adaptive { rel_tol: f64, abs_tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub method: Method,
    /// Spacing of the uniform output grid, in tau units.
    pub sample_interval: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            method: Method::Rk4Fixed { step: 1e-3 },
            sample_interval: 1e-2,
        }
    }
}

impl IntegratorOptions {
    pub fn rk45_default_tols() -> Method {
        Method::Rk45Adaptive {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
        }
    }

    fn validate(&self) -> Result<(), IntegrateError> {
        if !(self.sample_interval > 0.0) {
            return Err(IntegrateError::InvalidOptions(format!(
                "sample interval must be positive, got {}",
                self.sample_interval
            )));
        }
        match self.method {
            Method::Rk4Fixed { step } if !(step > 0.0) => Err(IntegrateError::InvalidOptions(
                format!("step must be positive, got {step}"),
            )),
            Method::Rk45Adaptive { rel_tol, abs_tol } if !(rel_tol > 0.0 && abs_tol > 0.0) => {
                Err(IntegrateError::InvalidOptions(format!(
                    "tolerances must be positive, got rtol {rel_tol}, atol {abs_tol}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// A uniformly sampled solution: strictly increasing times, one state row per
/// instant, no non-finite entries.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// One label per state component, used for CSV headers.
    pub names: Vec<String>,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Sample spacing; `None` for trajectories with fewer than two samples.
    pub fn spacing(&self) -> Option<f64> {
        (self.times.len() >= 2).then(|| self.times[1] - self.times[0])
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[i]).collect()
    }

    /// Index of the first sample with `times[k] >= tau - tiny`.
    pub fn index_at(&self, tau: f64) -> usize {
        self.times
            .partition_point(|&t| t < tau - 1e-12)
            .min(self.times.len().saturating_sub(1))
    }

    /// Check the structural invariants (uniform grid, finite entries).
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.times.len() != self.states.len() {
            return Err("times/states length mismatch".into());
        }
        let dim = self.dim();
        if let Some(h) = self.spacing() {
            if !(h > 0.0) {
                return Err("non-increasing times".into());
            }
            for k in 1..self.times.len() {
                let dt = self.times[k] - self.times[k - 1];
                if (dt - h).abs() > 1e-9 * h.max(1.0) {
                    return Err(format!("non-uniform spacing at sample {k}"));
                }
            }
        }
        for (k, s) in self.states.iter().enumerate() {
            if s.len() != dim {
                return Err(format!("ragged state row at sample {k}"));
            }
            if s.iter().any(|v| !v.is_finite()) {
                return Err(format!("non-finite state at sample {k}"));
            }
        }
        Ok(())
    }
}

fn default_names(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("s{i}")).collect()
}

pub(crate) struct Rk4Scratch {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4Scratch {
    pub(crate) fn new(dim: usize) -> Self {
        Rk4Scratch {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }
}

pub(crate) fn rk4_advance<S: OdeSystem>(
    system: &S,
    tau: f64,
    h: f64,
    state: &mut [f64],
    scr: &mut Rk4Scratch,
) -> Result<(), IntegrateError> {
    let n = state.len();
    system.eval(tau, state, &mut scr.k1);
    for i in 0..n {
        scr.tmp[i] = state[i] + 0.5 * h * scr.k1[i];
    }
    system.eval(tau + 0.5 * h, &scr.tmp, &mut scr.k2);
    for i in 0..n {
        scr.tmp[i] = state[i] + 0.5 * h * scr.k2[i];
    }
    system.eval(tau + 0.5 * h, &scr.tmp, &mut scr.k3);
    for i in 0..n {
        scr.tmp[i] = state[i] + h * scr.k3[i];
    }
    system.eval(tau + h, &scr.tmp, &mut scr.k4);
    for i in 0..n {
        state[i] += h / 6.0 * (scr.k1[i] + 2.0 * scr.k2[i] + 2.0 * scr.k3[i] + scr.k4[i]);
    }
    if state.iter().any(|v| !v.is_finite()) {
        return Err(IntegrateError::Blowup { tau });
    }
    Ok(())
}

/// One classical RK4 update of size `h` from `tau`.
pub fn step_rk4<S: OdeSystem>(
    system: &S,
    state: &[f64],
    tau: f64,
    h: f64,
) -> Result<Vec<f64>, IntegrateError> {
    if !(h > 0.0) {
        return Err(IntegrateError::InvalidOptions(format!(
            "step must be positive, got {h}"
        )));
    }
    let mut s = state.to_vec();
    let mut scr = Rk4Scratch::new(state.len());
    rk4_advance(system, tau, h, &mut s, &mut scr)?;
    Ok(s)
}

/// Integrate `system` over `span`, sampling on the uniform grid.
///
/// The grid step is `opts.sample_interval`; the end of the span is the final
/// sample. The fixed-step method subdivides each grid cell into an integral
/// number of RK4 steps no larger than the configured step; the adaptive
/// method steps freely and fills the grid from its dense output.
pub fn integrate<S: OdeSystem>(
    system: &S,
    state0: &[f64],
    span: (f64, f64),
    opts: &IntegratorOptions,
) -> Result<Trajectory, IntegrateError> {
    integrate_named(system, state0, span, opts, default_names(system.dim()))
}

/// [`integrate`] with caller-supplied component labels.
pub fn integrate_named<S: OdeSystem>(
    system: &S,
    state0: &[f64],
    span: (f64, f64),
    opts: &IntegratorOptions,
    names: Vec<String>,
) -> Result<Trajectory, IntegrateError> {
    opts.validate()?;
    let (t0, t1) = span;
    if !(t1 > t0) {
        return Err(IntegrateError::InvalidOptions(format!(
            "degenerate span [{t0}, {t1}]"
        )));
    }
    let n_samples = ((t1 - t0) / opts.sample_interval).round().max(1.0) as usize;
    let sample_at = |k: usize| t0 + k as f64 * opts.sample_interval;

    let mut times = Vec::with_capacity(n_samples + 1);
    let mut states = Vec::with_capacity(n_samples + 1);
    times.push(t0);
    states.push(state0.to_vec());

    match opts.method {
        Method::Rk4Fixed { step } => {
            let n_sub = (opts.sample_interval / step - 1e-9).ceil().max(1.0) as usize;
            let h = opts.sample_interval / n_sub as f64;
            let mut state = state0.to_vec();
            let mut scr = Rk4Scratch::new(state.len());
            for k in 0..n_samples {
                let cell_start = sample_at(k);
                for j in 0..n_sub {
                    let tau = cell_start + j as f64 * h;
                    rk4_advance(system, tau, h, &mut state, &mut scr)?;
                }
                times.push(sample_at(k + 1));
                states.push(state.clone());
            }
        }
        Method::Rk45Adaptive { rel_tol, abs_tol } => {
            adaptive_fill(
                system, state0, t0, t1, rel_tol, abs_tol, &sample_at, n_samples, &mut times,
                &mut states,
            )?;
        }
    }

    Ok(Trajectory {
        times,
        states,
        names,
    })
}

// Dormand-Prince 5(4) coefficients.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[allow(clippy::too_many_arguments)]
fn adaptive_fill<S: OdeSystem>(
    system: &S,
    state0: &[f64],
    t0: f64,
    t1: f64,
    rel_tol: f64,
    abs_tol: f64,
    sample_at: &dyn Fn(usize) -> f64,
    n_samples: usize,
    times: &mut Vec<f64>,
    states: &mut Vec<Vec<f64>>,
) -> Result<(), IntegrateError> {
    let n = state0.len();
    let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; n]).collect();
    let mut y = state0.to_vec();
    let mut y_next = vec![0.0; n];
    let mut y_stage = vec![0.0; n];
    let mut t = t0;

    system.eval(t, &y, &mut k[0]);
    let mut h = initial_step(system, t, &y, &k[0].clone(), rel_tol, abs_tol, t1 - t0);

    // PI controller constants (standard DOPRI5 settings).
    let safe = 0.9;
    let beta = 0.04;
    let expo1 = 0.2 - beta * 0.75;
    let facc1 = 1.0 / 0.2;
    let facc2 = 1.0 / 10.0;
    let mut facold: f64 = 1e-4;

    let mut next_sample = 1usize;
    while t1 - t > 1e-12 {
        if t + h > t1 {
            h = t1 - t;
        }
        if h < 1e-12 {
            return Err(IntegrateError::StepUnderflow { tau: t, step: h });
        }

        for stage in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(stage) {
                    acc += A[stage][j] * kj[i];
                }
                y_stage[i] = y[i] + h * acc;
            }
            let out = &mut k[stage];
            system.eval(t + C[stage] * h, &y_stage, out);
        }
        // FSAL: stage 7 already evaluates at (t + h, y_next) because the last
        // A row equals the 5th-order weights.
        for i in 0..n {
            y_next[i] = y_stage[i];
        }
        if y_next.iter().any(|v| !v.is_finite()) {
            return Err(IntegrateError::Blowup { tau: t });
        }

        let mut err_sq = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            e *= h;
            let sc = abs_tol + rel_tol * y[i].abs().max(y_next[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / n as f64).sqrt();

        if err <= 1.0 {
            // Accept; build the dense-output polynomial for this interval.
            let mut cont = [
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
                vec![0.0; n],
            ];
            for i in 0..n {
                let dy = y_next[i] - y[i];
                let bspl = h * k[0][i] - dy;
                cont[0][i] = y[i];
                cont[1][i] = dy;
                cont[2][i] = bspl;
                cont[3][i] = dy - h * k[6][i] - bspl;
                let mut dsum = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    dsum += D[j] * kj[i];
                }
                cont[4][i] = h * dsum;
            }
            let t_new = t + h;
            while next_sample <= n_samples && sample_at(next_sample) <= t_new + 1e-12 {
                let ts = sample_at(next_sample).min(t_new);
                let theta = ((ts - t) / h).clamp(0.0, 1.0);
                let om = 1.0 - theta;
                let mut row = vec![0.0; n];
                for i in 0..n {
                    row[i] = cont[0][i]
                        + theta
                            * (cont[1][i]
                                + om * (cont[2][i] + theta * (cont[3][i] + om * cont[4][i])));
                }
                times.push(sample_at(next_sample));
                states.push(row);
                next_sample += 1;
            }

            let fac11 = err.powf(expo1);
            let fac = (fac11 / facold.powf(beta) / safe).clamp(facc2, facc1);
            facold = err.max(1e-4);
            h /= fac;
            t = t_new;
            y.copy_from_slice(&y_next);
            // FSAL: reuse stage 7 as the first stage of the next step.
            k.swap(0, 6);
        } else {
            let fac11 = err.powf(expo1);
            h /= (fac11 / safe).min(facc1);
        }
    }
    // The final span point is an exact step end; make sure it was emitted.
    if next_sample <= n_samples {
        times.push(sample_at(n_samples));
        states.push(y.clone());
    } else {
        // Replace the dense-output row at t1 with the step-end state.
        *states.last_mut().expect("at least the initial sample") = y.clone();
    }
    Ok(())
}

fn initial_step<S: OdeSystem>(
    system: &S,
    t0: f64,
    y0: &[f64],
    f0: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    span: f64,
) -> f64 {
    let n = y0.len();
    let sc: Vec<f64> = y0.iter().map(|v| abs_tol + rel_tol * v.abs()).collect();
    let d0 = rms(y0.iter().zip(&sc).map(|(v, s)| v / s), n);
    let d1 = rms(f0.iter().zip(&sc).map(|(v, s)| v / s), n);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    // One explicit Euler probe to estimate the second derivative scale.
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + h0 * f).collect();
    let mut f1 = vec![0.0; n];
    system.eval(t0 + h0, &y1, &mut f1);
    let d2 = rms(
        f1.iter().zip(f0).zip(&sc).map(|((a, b), s)| (a - b) / s),
        n,
    ) / h0;
    let d_max = d1.max(d2);
    let h1 = if d_max <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d_max).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

fn rms(it: impl Iterator<Item = f64>, n: usize) -> f64 {
    (it.map(|v| v * v).sum::<f64>() / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn exponential(sign: f64) -> FnSystem<impl Fn(f64, &[f64], &mut [f64])> {
        FnSystem::new(1, move |_tau, s: &[f64], d: &mut [f64]| d[0] = sign * s[0])
    }

    #[test]
    fn rk4_step_matches_fourth_order_taylor_on_exponential() {
        let sys = exponential(1.0);
        let s = step_rk4(&sys, &[1.0], 0.0, 0.1).unwrap();
        // RK4 on y'=y reproduces the Taylor series through h^4.
        let taylor = 1.0 + 0.1 + 0.1f64.powi(2) / 2.0 + 0.1f64.powi(3) / 6.0 + 0.1f64.powi(4) / 24.0;
        assert_abs_diff_eq!(s[0], taylor, epsilon = 1e-14);
        assert_abs_diff_eq!(s[0], 0.1f64.exp(), epsilon = 1e-7);
    }

    #[test]
    fn rk4_step_identity_on_zero_field() {
        let sys = FnSystem::new(3, |_t, _s: &[f64], d: &mut [f64]| d.fill(0.0));
        let s = step_rk4(&sys, &[1.0, -2.0, 0.5], 3.0, 0.25).unwrap();
        assert_eq!(s, vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn rk4_step_exact_on_constant_rhs() {
        let sys = FnSystem::new(1, |_t, _s: &[f64], d: &mut [f64]| d[0] = 1.0);
        let s = step_rk4(&sys, &[0.0], 0.0, 0.5).unwrap();
        assert_eq!(s[0], 0.5);
    }

    #[test]
    fn fixed_step_decay_hits_exp_minus_one() {
        let sys = exponential(-1.0);
        let opts = IntegratorOptions {
            method: Method::Rk4Fixed { step: 1e-3 },
            sample_interval: 1e-2,
        };
        let traj = integrate(&sys, &[1.0], (0.0, 1.0), &opts).unwrap();
        assert_abs_diff_eq!(*traj.times.last().unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(traj.states.last().unwrap()[0], (-1.0f64).exp(), epsilon = 1e-10);
        traj.check_invariants().unwrap();
    }

    #[test]
    fn zero_field_gives_constant_trajectory() {
        let sys = FnSystem::new(2, |_t, _s: &[f64], d: &mut [f64]| d.fill(0.0));
        let traj = integrate(&sys, &[4.0, -1.0], (0.0, 2.0), &IntegratorOptions::default()).unwrap();
        for s in &traj.states {
            assert_eq!(s, &vec![4.0, -1.0]);
        }
    }

    #[test]
    fn rk4_order_four_on_decay() {
        let sys = exponential(-1.0);
        let exact = (-1.0f64).exp();
        let mut pts = Vec::new();
        for &h in &[0.1, 0.05, 0.025, 0.0125] {
            let opts = IntegratorOptions {
                method: Method::Rk4Fixed { step: h },
                sample_interval: h,
            };
            let traj = integrate(&sys, &[1.0], (0.0, 1.0), &opts).unwrap();
            let err = (traj.states.last().unwrap()[0] - exact).abs();
            pts.push((h.ln(), err.ln()));
        }
        let slope = fit_slope(&pts);
        assert!((slope - 4.0).abs() <= 0.1, "slope {slope}");
    }

    fn fit_slope(pts: &[(f64, f64)]) -> f64 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn adaptive_decay_matches_exact() {
        let sys = exponential(-1.0);
        let opts = IntegratorOptions {
            method: IntegratorOptions::rk45_default_tols(),
            sample_interval: 0.1,
        };
        let traj = integrate(&sys, &[1.0], (0.0, 1.0), &opts).unwrap();
        traj.check_invariants().unwrap();
        assert_eq!(traj.len(), 11);
        for (t, s) in traj.times.iter().zip(&traj.states) {
            assert_abs_diff_eq!(s[0], (-t).exp(), epsilon = 1e-7);
        }
    }

    #[test]
    fn adaptive_dense_output_on_oscillator() {
        // y'' = -w^2 y written first-order; dense samples against cos/sin.
        let w = 3.0;
        let sys = FnSystem::new(2, move |_t, s: &[f64], d: &mut [f64]| {
            d[0] = s[1];
            d[1] = -w * w * s[0];
        });
        let opts = IntegratorOptions {
            method: IntegratorOptions::rk45_default_tols(),
            sample_interval: 0.05,
        };
        let traj = integrate(&sys, &[1.0, 0.0], (0.0, 4.0), &opts).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            assert_abs_diff_eq!(s[0], (w * t).cos(), epsilon = 1e-6);
        }
    }

    #[test]
    fn blowup_reports_failing_time() {
        // y' = y^2 from y(0)=1 diverges at t=1.
        let sys = FnSystem::new(1, |_t, s: &[f64], d: &mut [f64]| d[0] = s[0] * s[0]);
        let opts = IntegratorOptions {
            method: Method::Rk4Fixed { step: 1e-3 },
            sample_interval: 1e-2,
        };
        match integrate(&sys, &[1.0], (0.0, 2.0), &opts) {
            Err(IntegrateError::Blowup { tau }) => assert!((0.5..1.5).contains(&tau), "tau {tau}"),
            other => panic!("expected blowup, got {other:?}"),
        }
    }

    #[test]
    fn adaptive_step_underflow_near_singularity() {
        let sys = FnSystem::new(1, |_t, s: &[f64], d: &mut [f64]| d[0] = s[0] * s[0]);
        let opts = IntegratorOptions {
            method: IntegratorOptions::rk45_default_tols(),
            sample_interval: 1e-2,
        };
        match integrate(&sys, &[1.0], (0.0, 2.0), &opts) {
            Err(IntegrateError::StepUnderflow { tau, .. }) | Err(IntegrateError::Blowup { tau }) => {
                assert!((0.9..1.1).contains(&tau), "tau {tau}")
            }
            other => panic!("expected failure near t=1, got {other:?}"),
        }
    }

    #[test]
    fn invalid_options_are_rejected() {
        let sys = exponential(-1.0);
        let opts = IntegratorOptions {
            method: Method::Rk4Fixed { step: 0.0 },
            sample_interval: 1e-2,
        };
        assert!(matches!(
            integrate(&sys, &[1.0], (0.0, 1.0), &opts),
            Err(IntegrateError::InvalidOptions(_))
        ));
        let opts = IntegratorOptions::default();
        assert!(matches!(
            integrate(&sys, &[1.0], (1.0, 1.0), &opts),
            Err(IntegrateError::InvalidOptions(_))
        ));
    }
}
