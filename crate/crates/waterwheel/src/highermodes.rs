//! Qualitative machinery for the higher Fourier modes.
//!
//! Each (a_n, b_n) plane contracts onto an evolving circle through the
//! origin determined by the mode forcings; the module provides that circle,
//! an algebraic radial-balance identity that validates any mode derivative
//! pair, and a truncated iterated-integral series solution usable as a
//! short-horizon oracle for direct integration.

use crate::forcing::TimeFunction;
use crate::integrate::Trajectory;
use crate::modes::AnalysisError;
use crate::models::ModeParams;

/// The attracting circle of one mode plane at one instant.
///
/// Centered at (p_n/2K, q_n/2K) with radius equal to the center norm, so the
/// perimeter always passes through the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvingCircle {
    pub center: (f64, f64),
    pub radius: f64,
    pub tau: f64,
}

/// Circle of mode `n` at instant `tau`, in scaled units (K = 1).
///
/// Panics if `n` is not a retained mode index.
pub fn evolving_circle(n: usize, tau: f64, params: &ModeParams) -> EvolvingCircle {
    assert!(
        (1..=params.n_max()).contains(&n),
        "mode {n} not retained (N = {})",
        params.n_max()
    );
    let forcing = &params.forcings[n - 1];
    circle_from_values(forcing.p.eval(tau), forcing.q.eval(tau), 1.0, tau)
}

/// Circle from raw forcing values and leakage rate.
pub fn circle_from_values(p: f64, q: f64, leakage: f64, tau: f64) -> EvolvingCircle {
    let center = (p / (2.0 * leakage), q / (2.0 * leakage));
    EvolvingCircle {
        center,
        radius: center.0.hypot(center.1),
        tau,
    }
}

/// Residual of the radial-balance identity
///
/// -(a da + b db)/K = (a - p/2K)^2 + (b - q/2K)^2 - (p/2K)^2 - (q/2K)^2,
///
/// which holds exactly (the rotation terms cancel in a da + b db) whenever
/// (da, db) are mode derivatives consistent with the truncated system.
/// Returns the absolute difference of the two sides.
pub fn radial_balance_residual(
    a: f64,
    b: f64,
    da: f64,
    db: f64,
    p: f64,
    q: f64,
    leakage: f64,
) -> f64 {
    let lhs = -(a * da + b * db) / leakage;
    let cp = p / (2.0 * leakage);
    let cq = q / (2.0 * leakage);
    let rhs = (a - cp).powi(2) + (b - cq).powi(2) - cp * cp - cq * cq;
    (lhs - rhs).abs()
}

/// Truncated series value of one mode at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSolution {
    pub a: f64,
    pub b: f64,
    /// Set when the last retained term exceeds 1e-3 of its partial sum, i.e.
    /// the truncation cannot be trusted at this horizon.
    pub truncation_warning: bool,
}

/// Evaluate the iterated-integral series for mode `n` at `tau`, assuming
/// zero initial mode amplitudes.
///
/// With Omega the cumulative integral of omega, P_0/Q_0 the exponentially
/// weighted integrals of p/q and P_k/Q_k the omega-weighted integrals of
/// their predecessors,
///
/// a = e^{-K tau} sum_k (-1)^k (n^{2k} P_{2k} + n^{2k+1} Q_{2k+1})
/// b = -e^{-K tau} sum_k (-1)^k (n^{2k+1} P_{2k+1} - n^{2k} Q_{2k})
///
/// truncated at `k_max`. All integrals are cumulative trapezoids on the
/// omega sample grid (component 0 of `omega_samples`); `tau` snaps to the
/// nearest grid instant and must lie inside the sampled span.
pub fn series_solution(
    n: usize,
    omega_samples: &Trajectory,
    p: &TimeFunction,
    q: &TimeFunction,
    leakage: f64,
    k_max: usize,
    tau: f64,
) -> Result<SeriesSolution, AnalysisError> {
    if omega_samples.len() < 2 {
        return Err(AnalysisError::TooFewSamples {
            needed: 2,
            got: omega_samples.len(),
        });
    }
    if !(leakage > 0.0) {
        return Err(AnalysisError::InvalidArgument(format!(
            "leakage rate must be positive, got {leakage}"
        )));
    }
    let times = &omega_samples.times;
    let h = omega_samples.spacing().expect("len >= 2");
    let (lo, hi) = (times[0], *times.last().expect("non-empty"));
    if tau < lo - 0.5 * h || tau > hi + 0.5 * h {
        return Err(AnalysisError::OutsideCoverage { tau, lo, hi });
    }
    let idx = (((tau - lo) / h).round() as usize).min(times.len() - 1);

    let omega = omega_samples.column(0);
    let m = idx + 1; // quadrature only needs the grid up to tau
    let p0: Vec<f64> = times[..m]
        .iter()
        .map(|&t| (leakage * t).exp() * p.eval(t))
        .collect();
    let q0: Vec<f64> = times[..m]
        .iter()
        .map(|&t| (leakage * t).exp() * q.eval(t))
        .collect();

    let depth = 2 * k_max + 2;
    let mut p_iter = vec![cumtrapz(&p0, h)];
    let mut q_iter = vec![cumtrapz(&q0, h)];
    for _ in 1..depth {
        p_iter.push(cumtrapz_weighted(&omega[..m], p_iter.last().expect("seeded"), h));
        q_iter.push(cumtrapz_weighted(&omega[..m], q_iter.last().expect("seeded"), h));
    }

    let nf = n as f64;
    let mut sum_a = 0.0;
    let mut sum_b = 0.0;
    let mut last_a = 0.0;
    let mut last_b = 0.0;
    for k in 0..=k_max {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        last_a = sign * (nf.powi(2 * k as i32) * p_iter[2 * k][idx]
            + nf.powi(2 * k as i32 + 1) * q_iter[2 * k + 1][idx]);
        last_b = -sign
            * (nf.powi(2 * k as i32 + 1) * p_iter[2 * k + 1][idx]
                - nf.powi(2 * k as i32) * q_iter[2 * k][idx]);
        sum_a += last_a;
        sum_b += last_b;
    }
    let decay = (-leakage * times[idx]).exp();
    let warn = exceeds_fraction(last_a, sum_a) || exceeds_fraction(last_b, sum_b);
    Ok(SeriesSolution {
        a: decay * sum_a,
        b: decay * sum_b,
        truncation_warning: warn,
    })
}

fn exceeds_fraction(term: f64, sum: f64) -> bool {
    term != 0.0 && term.abs() > 1e-3 * sum.abs()
}

fn cumtrapz(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

fn cumtrapz_weighted(weight: &[f64], values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..values.len() {
        acc += 0.5 * h * (weight[i - 1] * values[i - 1] + weight[i] * values[i]);
        out.push(acc);
    }
    out
}
