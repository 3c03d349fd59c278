//! Competitive-modes analysis of the reduced system.
//!
//! Differentiating the reduced system (with time appended as a fourth
//! autonomous variable) casts it as four oscillators
//! `d2 x_i / dtau2 = -x_i g_i + h_i`. The g's act as squared mode
//! frequencies; chaos is conjectured to require at least two of them to be
//! positive and (nearly) equal at some instant. This module evaluates the
//! g/h decomposition, the six pair-equality manifolds, classifies the
//! jointly-positive region of the (x, z) plane, and scans trajectories for
//! competitive events.

use crate::integrate::Trajectory;
use crate::models::{ReducedParams, ReducedState};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("empty trajectory")]
    EmptyTrajectory,
    #[error("trajectory has {got} samples, need at least {needed}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("trajectory dimension {got} too small, need at least {needed}")]
    BadDimension { needed: usize, got: usize },
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
    #[error("evaluation instant {tau} outside sample coverage [{lo}, {hi}]")]
    OutsideCoverage { tau: f64, lo: f64, hi: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Squared-frequency and forcing parts of the oscillator form at one state.
///
/// The fourth component belongs to the appended time variable and is
/// identically zero in both vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunctions {
    pub g: [f64; 4],
    pub h: [f64; 4],
}

/// g_1 = -sigma^2 - sigma (r - z)
/// g_2 = -1 - sigma (r - z) + x^2
/// g_3 = -1 + x^2
/// g_4 = 0
pub fn eval_g(state: &ReducedState, tau: f64, params: &ReducedParams) -> [f64; 4] {
    let sigma = params.sigma;
    let r = params.r.eval(tau);
    let rz = r - state.z;
    let x2 = state.x * state.x;
    [
        -sigma * sigma - sigma * rz,
        -1.0 - sigma * rz + x2,
        -1.0 + x2,
        0.0,
    ]
}

/// h_1 = sigma mu - (sigma + sigma^2) y
/// h_2 = -mu - dmu - (1 + sigma) r x + (2 + sigma) x z
/// h_3 = -dr + ddr + mu x - (2 + sigma) x y + r x^2 + sigma y^2
/// h_4 = 0
pub fn eval_h(state: &ReducedState, tau: f64, params: &ReducedParams) -> [f64; 4] {
    let sigma = params.sigma;
    let ReducedState { x, y, z } = *state;
    let r = params.r.eval(tau);
    let dr = params.r.deriv1(tau);
    let ddr = params.r.deriv2(tau);
    let mu = params.mu.eval(tau);
    let dmu = params.mu.deriv1(tau);
    [
        sigma * mu - (sigma + sigma * sigma) * y,
        -mu - dmu - (1.0 + sigma) * r * x + (2.0 + sigma) * x * z,
        -dr + ddr + mu * x - (2.0 + sigma) * x * y + r * x * x + sigma * y * y,
        0.0,
    ]
}

pub fn eval_mode_functions(
    state: &ReducedState,
    tau: f64,
    params: &ReducedParams,
) -> ModeFunctions {
    ModeFunctions {
        g: eval_g(state, tau, params),
        h: eval_h(state, tau, params),
    }
}

/// The six pair-equality manifolds, in the fixed order used everywhere:
/// (1,4), (2,4), (3,4), (1,2), (2,3), (1,3).
pub const PAIR_ORDER: [(usize, usize); 6] = [(1, 4), (2, 4), (3, 4), (1, 2), (2, 3), (1, 3)];

/// Residuals (g_i - g_j) in [`PAIR_ORDER`]; a zero component means the state
/// sits on that pair's equality manifold.
pub fn manifold_residuals(state: &ReducedState, tau: f64, params: &ReducedParams) -> [f64; 6] {
    let g = eval_g(state, tau, params);
    [
        g[0] - g[3],
        g[1] - g[3],
        g[2] - g[3],
        g[0] - g[1],
        g[1] - g[2],
        g[0] - g[2],
    ]
}

fn pair_index(i: usize, j: usize) -> usize {
    PAIR_ORDER
        .iter()
        .position(|&p| p == (i, j))
        .expect("pair indices must be 1 <= i < j <= 4")
}

/// Whether the equality manifold g_i = g_j has real solutions in the (x, z)
/// plane. Only g_1 = g_2 (`1 - sigma^2 - x^2 = 0`) can fail, for sigma > 1.
fn pair_capable(i: usize, j: usize, sigma: f64) -> bool {
    if (i, j) == (1, 2) {
        sigma <= 1.0
    } else {
        true
    }
}

/// True when some competitive-capable pair is jointly positive at (x, z).
///
/// Pairs among g_1..g_3 need both members positive; a pair with g_4 = 0 is
/// counted in the limiting sense g_i > 0.
pub fn classify_region(x: f64, z: f64, tau: f64, params: &ReducedParams) -> bool {
    let g = eval_g(&ReducedState::new(x, 0.0, z), tau, params);
    for (i, j) in PAIR_ORDER {
        if !pair_capable(i, j, params.sigma) {
            continue;
        }
        let positive = if j == 4 {
            g[i - 1] > 0.0
        } else {
            g[i - 1] > 0.0 && g[j - 1] > 0.0
        };
        if positive {
            return true;
        }
    }
    false
}

/// Boolean classification grid over a rectangle of the (x, z) plane.
#[derive(Debug, Clone)]
pub struct RegionGrid {
    pub x_range: (f64, f64),
    pub z_range: (f64, f64),
    pub n: usize,
    pub tau: f64,
    /// Row-major, z outer (ascending), x inner (ascending).
    pub cells: Vec<bool>,
}

impl RegionGrid {
    pub fn x_at(&self, i: usize) -> f64 {
        grid_coord(self.x_range, self.n, i)
    }
    pub fn z_at(&self, j: usize) -> f64 {
        grid_coord(self.z_range, self.n, j)
    }
}

fn grid_coord(range: (f64, f64), n: usize, i: usize) -> f64 {
    if n == 1 {
        return range.0;
    }
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

/// Classify an n-by-n uniform grid at the snapshot instant `tau`.
pub fn region_grid(
    x_range: (f64, f64),
    z_range: (f64, f64),
    n: usize,
    tau: f64,
    params: &ReducedParams,
) -> RegionGrid {
    let mut cells = Vec::with_capacity(n * n);
    for j in 0..n {
        let z = grid_coord(z_range, n, j);
        for i in 0..n {
            let x = grid_coord(x_range, n, i);
            cells.push(classify_region(x, z, tau, params));
        }
    }
    RegionGrid {
        x_range,
        z_range,
        n,
        tau,
        cells,
    }
}

/// One detected competitive instant.
///
/// For pairs among g_1..g_3 the event marks a sample with
/// `|g_i - g_j| <= epsilon` and both members positive; `residual` is that
/// gap. For pairs with g_4 the event marks a fast zero crossing from above
/// (see [`detect_events`]) recorded at the positive-side sample; there
/// `residual` is the smaller |g_i| of the two bracketing samples and is
/// larger than epsilon by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompetitiveEvent {
    pub tau: f64,
    /// 1-based oscillator indices, i < j.
    pub pair: (usize, usize),
    /// The binding (smaller) positive g value at the recorded sample.
    pub g_value: f64,
    pub residual: f64,
}

fn g_along(traj: &Trajectory, params: &ReducedParams) -> Result<Vec<[f64; 4]>, AnalysisError> {
    if traj.is_empty() {
        return Err(AnalysisError::EmptyTrajectory);
    }
    if traj.dim() < 3 {
        return Err(AnalysisError::BadDimension {
            needed: 3,
            got: traj.dim(),
        });
    }
    Ok(traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| eval_g(&ReducedState::from_slice(&s[..3]), t, params))
        .collect())
}

/// Scan a sampled trajectory for competitive events at tolerance `epsilon`.
///
/// Proper pairs (both indices <= 3) fire at any sample where the two g's are
/// within `epsilon` of each other and both strictly positive. Pairs with the
/// appended mode (g_4 = 0) fire when g_i sweeps from above `+epsilon` to
/// below `-epsilon` between consecutive samples — a near-zero crossing from
/// above, resolved at sampling resolution; slow meanders inside the band do
/// not count. Detection never refines between samples.
pub fn detect_events(
    traj: &Trajectory,
    params: &ReducedParams,
    epsilon: f64,
) -> Result<Vec<CompetitiveEvent>, AnalysisError> {
    if !(epsilon > 0.0) {
        return Err(AnalysisError::NonPositiveTolerance(epsilon));
    }
    let gs = g_along(traj, params)?;
    let mut events = Vec::new();
    for k in 0..gs.len() {
        let g = &gs[k];
        for (i, j) in PAIR_ORDER {
            if j == 4 {
                if k > 0 && gs[k - 1][i - 1] > epsilon && g[i - 1] < -epsilon {
                    events.push(CompetitiveEvent {
                        tau: traj.times[k - 1],
                        pair: (i, j),
                        g_value: gs[k - 1][i - 1],
                        residual: gs[k - 1][i - 1].abs().min(g[i - 1].abs()),
                    });
                }
            } else {
                let (gi, gj) = (g[i - 1], g[j - 1]);
                if (gi - gj).abs() <= epsilon && gi.min(gj) > 0.0 {
                    events.push(CompetitiveEvent {
                        tau: traj.times[k],
                        pair: (i, j),
                        g_value: gi.min(gj),
                        residual: (gi - gj).abs(),
                    });
                }
            }
        }
    }
    events.sort_by(|a, b| a.tau.total_cmp(&b.tau));
    Ok(events)
}

/// Aggregated conjecture check along one trajectory.
#[derive(Debug, Clone)]
pub struct ConjectureReport {
    /// The four necessary conditions: (1) at least two mode frequencies
    /// exist, (2) some pair is competitive at some instant, (3) some g
    /// depends on time, (4) some h depends on the state.
    pub conditions: [bool; 4],
    pub events: Vec<CompetitiveEvent>,
    /// Event counts in [`PAIR_ORDER`].
    pub pair_counts: [usize; 6],
    /// Fraction of samples whose (x, z, tau) classify into the
    /// jointly-positive region.
    pub positive_region_fraction: f64,
}

/// Evaluate the four conjecture conditions along a trajectory.
///
/// Conditions 1 and 4 are structural truths of this system. Condition 3
/// holds exactly when the inflow forcing r actually varies in time; a frozen
/// (steady) r makes every g autonomous and the condition is reported false.
pub fn check_conjecture(
    traj: &Trajectory,
    params: &ReducedParams,
    epsilon: f64,
) -> Result<ConjectureReport, AnalysisError> {
    let events = detect_events(traj, params, epsilon)?;
    let mut pair_counts = [0usize; 6];
    for ev in &events {
        pair_counts[pair_index(ev.pair.0, ev.pair.1)] += 1;
    }
    let in_region = traj
        .times
        .iter()
        .zip(&traj.states)
        .filter(|(&t, s)| classify_region(s[0], s[2], t, params))
        .count();
    Ok(ConjectureReport {
        conditions: [
            true,
            !events.is_empty(),
            !params.r.is_constant(),
            true,
        ],
        events,
        pair_counts,
        positive_region_fraction: in_region as f64 / traj.len() as f64,
    })
}

/// Consistency residuals of the oscillator decomposition along a trajectory.
///
/// For each interior sample, returns |D2 x_i - (-x_i g_i + h_i)| for
/// i = 1..3, where D2 is the central second difference on the sample grid.
/// (The appended variable has both sides identically zero.) The residual
/// shrinks as the square of the sampling step.
pub fn oscillator_residual(
    traj: &Trajectory,
    params: &ReducedParams,
) -> Result<Vec<[f64; 3]>, AnalysisError> {
    if traj.len() < 3 {
        return Err(AnalysisError::TooFewSamples {
            needed: 3,
            got: traj.len(),
        });
    }
    if traj.dim() < 3 {
        return Err(AnalysisError::BadDimension {
            needed: 3,
            got: traj.dim(),
        });
    }
    let h = traj.spacing().expect("len >= 3 implies spacing");
    let mut out = Vec::with_capacity(traj.len() - 2);
    for k in 1..traj.len() - 1 {
        let s = ReducedState::from_slice(&traj.states[k][..3]);
        let g = eval_g(&s, traj.times[k], params);
        let hh = eval_h(&s, traj.times[k], params);
        let mut row = [0.0; 3];
        for i in 0..3 {
            let d2 = (traj.states[k + 1][i] - 2.0 * traj.states[k][i] + traj.states[k - 1][i])
                / (h * h);
            let xi = traj.states[k][i];
            row[i] = (d2 - (-xi * g[i] + hh[i])).abs();
        }
        out.push(row);
    }
    Ok(out)
}
