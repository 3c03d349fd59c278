//! Quantitative chaos indicators: largest Lyapunov exponent (two-trajectory
//! renormalization) and sign-switch counting for time series.

use crate::integrate::{rk4_advance, IntegrateError, OdeSystem, Rk4Scratch};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error(transparent)]
    Integration(#[from] IntegrateError),
    #[error("invalid diagnostics options: {0}")]
    InvalidOptions(String),
    #[error("shadow trajectory collapsed onto the reference at tau = {tau}; perturbation too small")]
    ShadowCollapse { tau: f64 },
    #[error("empty or out-of-range window {start}..{end} for series of length {len}")]
    BadWindow {
        start: usize,
        end: usize,
        len: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovOptions {
    /// Renormalize the shadow trajectory every this many tau units.
    pub renorm_interval: f64,
    /// Initial and renormalized separation.
    pub perturbation: f64,
    /// Leading stretch of the span excluded from the average (the pair is
    /// still integrated and renormalized there).
    pub transient: f64,
    /// Internal RK4 step.
    pub step: f64,
    /// Seed of the perturbation direction.
    pub seed: u64,
}

impl Default for LyapunovOptions {
    fn default() -> Self {
        LyapunovOptions {
            renorm_interval: 0.5,
            perturbation: 1e-8,
            transient: 0.0,
            step: 1e-3,
            seed: 0,
        }
    }
}

/// Largest-Lyapunov estimate and the settings that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovEstimate {
    /// Average exponential separation rate, 1/tau units.
    pub exponent: f64,
    pub horizon: (f64, f64),
    pub renorm_interval: f64,
    /// Total number of renormalizations over the span (at least 100).
    pub sample_count: usize,
}

/// Benettin two-trajectory estimate of the largest Lyapunov exponent.
///
/// A shadow copy of the state, displaced by `perturbation` along a seeded
/// random direction, is integrated in lockstep with the reference; every
/// `renorm_interval` the log separation growth is accumulated and the shadow
/// is pulled back to the reference distance. Deterministic for fixed
/// options.
pub fn largest_lyapunov<S: OdeSystem>(
    system: &S,
    state0: &[f64],
    span: (f64, f64),
    opts: &LyapunovOptions,
) -> Result<LyapunovEstimate, DiagnosticsError> {
    let (t0, t1) = span;
    if !(opts.perturbation > 0.0) || !(opts.renorm_interval > 0.0) || !(opts.step > 0.0) {
        return Err(DiagnosticsError::InvalidOptions(
            "perturbation, renorm interval and step must be positive".into(),
        ));
    }
    let span_len = t1 - t0;
    if span_len < 100.0 * opts.renorm_interval {
        return Err(DiagnosticsError::InvalidOptions(format!(
            "span length {span_len} shorter than 100 renormalization intervals"
        )));
    }
    if opts.transient >= span_len {
        return Err(DiagnosticsError::InvalidOptions(format!(
            "transient {} consumes the whole span {span_len}",
            opts.transient
        )));
    }

    let dim = system.dim();
    let direction = seeded_direction(dim, opts.seed);
    let mut reference = state0.to_vec();
    let mut shadow: Vec<f64> = reference
        .iter()
        .zip(&direction)
        .map(|(s, d)| s + opts.perturbation * d)
        .collect();

    let n_renorm = (span_len / opts.renorm_interval).round() as usize;
    let n_sub = (opts.renorm_interval / opts.step - 1e-9).ceil().max(1.0) as usize;
    let h = opts.renorm_interval / n_sub as f64;

    let mut log_sum = 0.0;
    let mut averaged_time = 0.0;
    let mut scratch = Rk4Scratch::new(dim);
    for block in 0..n_renorm {
        let block_start = t0 + block as f64 * opts.renorm_interval;
        for j in 0..n_sub {
            let tau = block_start + j as f64 * h;
            rk4_advance(system, tau, h, &mut reference, &mut scratch)?;
            rk4_advance(system, tau, h, &mut shadow, &mut scratch)?;
        }
        let dist = distance(&reference, &shadow);
        if dist == 0.0 {
            return Err(DiagnosticsError::ShadowCollapse {
                tau: block_start + opts.renorm_interval,
            });
        }
        if block_start + opts.renorm_interval - t0 > opts.transient {
            log_sum += (dist / opts.perturbation).ln();
            averaged_time += opts.renorm_interval;
        }
        let scale = opts.perturbation / dist;
        for i in 0..dim {
            shadow[i] = reference[i] + (shadow[i] - reference[i]) * scale;
        }
    }
    Ok(LyapunovEstimate {
        exponent: log_sum / averaged_time,
        horizon: span,
        renorm_interval: opts.renorm_interval,
        sample_count: n_renorm,
    })
}

fn seeded_direction(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Count strict sign changes between adjacent samples of `series[window]`.
///
/// Zero samples inherit the preceding sign, so touching zero without
/// crossing does not count.
pub fn sign_switch_count(
    series: &[f64],
    window: std::ops::Range<usize>,
) -> Result<usize, DiagnosticsError> {
    if window.start >= window.end || window.end > series.len() {
        return Err(DiagnosticsError::BadWindow {
            start: window.start,
            end: window.end,
            len: series.len(),
        });
    }
    let mut count = 0;
    let mut prev = 0i8;
    for &v in &series[window] {
        let sign = if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            prev
        };
        if prev != 0 && sign != 0 && sign != prev {
            count += 1;
        }
        if sign != 0 {
            prev = sign;
        }
    }
    Ok(count)
}
