//! Scenario runner: integrates a configured scenario and writes its data
//! files (trajectory, pair-residual series, events, region grid, summary),
//! plus the six-run suite with a cross-scenario comparison.
//!
//! All numbers are serialized with 17 significant digits and every stage is
//! deterministic, so repeated runs with the same configuration produce
//! byte-identical files.

use crate::config::{ForcingOverrides, ScenarioConfig};
use crate::diagnostics::{
    largest_lyapunov, sign_switch_count, DiagnosticsError, LyapunovEstimate,
};
use crate::forcing::InflowForcings;
use crate::highermodes::evolving_circle;
use crate::integrate::{integrate_named, IntegrateError, Trajectory};
use crate::models::{make_scenario_from, ReducedState, Scenario, ScenarioKind, SpinLockedSubsystem};
use crate::modes::{
    check_conjecture, manifold_residuals, region_grid, AnalysisError, ConjectureReport, PAIR_ORDER,
};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Integration(#[from] IntegrateError),
    #[error(transparent)]
    Diagnostics(#[from] DiagnosticsError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    /// Process exit code: 2 for numerical failures, 3 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Io { .. } => 3,
            _ => 2,
        }
    }
}

/// Format with 17 significant digits, the serialization used in every CSV
/// and JSON artifact.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Everything the summary file reports, also returned to callers.
#[derive(Debug, Clone)]
pub struct ScenarioSummary {
    pub kind: ScenarioKind,
    pub x0: f64,
    pub span: (f64, f64),
    pub epsilon: f64,
    pub conditions: [bool; 4],
    pub event_count: usize,
    pub pair_counts: [usize; 6],
    pub positive_region_fraction: f64,
    pub switch_window: (f64, f64),
    pub x_sign_switches: usize,
    pub y_sign_switches: usize,
    pub max_abs_x: f64,
    pub lyapunov: LyapunovEstimate,
    pub lyapunov_system: &'static str,
    pub lyapunov_transient: f64,
}

/// Integrate one configured scenario and write its artifacts into
/// `config.out_dir`.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioSummary, RunError> {
    let scenario = build_scenario(config);
    let span = (0.0, config.t_end);
    let traj = integrate_named(
        &scenario.params,
        &scenario.initial,
        span,
        &config.integrator,
        scenario.params.component_names(),
    )?;

    std::fs::create_dir_all(&config.out_dir).map_err(|source| RunError::Io {
        path: config.out_dir.clone(),
        source,
    })?;

    let reduced = scenario.params.reduced();
    let report = check_conjecture(&traj, &reduced, config.epsilon)?;

    if config.outputs.trajectory {
        write_file(
            &config.out_dir.join("trajectory.csv"),
            &trajectory_csv(&traj, &scenario),
        )?;
    }
    if config.outputs.g_series {
        write_file(
            &config.out_dir.join("g_series.csv"),
            &g_series_csv(&traj, &scenario),
        )?;
    }
    if config.outputs.events {
        write_file(&config.out_dir.join("events.csv"), &events_csv(&report))?;
    }
    if config.outputs.region {
        let grid = region_grid(
            config.region.x_range,
            config.region.z_range,
            config.region.n,
            config.region.snapshot_tau,
            &reduced,
        );
        write_file(&config.out_dir.join("region.csv"), &region_csv(&grid))?;
    }

    let summary = summarize(config, &scenario, &traj, report)?;
    if config.outputs.summary {
        write_file(
            &config.out_dir.join("summary.json"),
            &summary_json(&summary),
        )?;
    }
    Ok(summary)
}

fn build_scenario(config: &ScenarioConfig) -> Scenario {
    let mut inflow = InflowForcings::reference();
    let ForcingOverrides { r, mu, p2, q2 } = config.forcing.clone();
    if let Some(r) = r {
        inflow.r = r;
    }
    if let Some(mu) = mu {
        inflow.mu = mu;
    }
    if let Some(p2) = p2 {
        inflow.p2 = p2;
    }
    if let Some(q2) = q2 {
        inflow.q2 = q2;
    }
    make_scenario_from(config.kind, config.x0, &inflow)
}

fn summarize(
    config: &ScenarioConfig,
    scenario: &Scenario,
    traj: &Trajectory,
    report: ConjectureReport,
) -> Result<ScenarioSummary, RunError> {
    let t_end = *traj.times.last().expect("non-empty trajectory");
    let window_start = if t_end > 20.0 { 20.0 } else { traj.times[0] };
    let w0 = traj.index_at(window_start);
    let x_series = traj.column(0);
    let y_series = traj.column(1);
    let x_sign_switches = sign_switch_count(&x_series, w0..traj.len())?;
    let y_sign_switches = sign_switch_count(&y_series, w0..traj.len())?;
    let max_abs_x = x_series.iter().fold(0.0f64, |m, v| m.max(v.abs()));

    let span_len = t_end - traj.times[0];
    let mut lopts = config.lyapunov;
    if let crate::integrate::Method::Rk4Fixed { step } = config.integrator.method {
        lopts.step = step;
    }
    if span_len < 100.0 * lopts.renorm_interval {
        lopts.renorm_interval = span_len / 120.0;
    }
    if lopts.transient >= span_len {
        lopts.transient = span_len / 4.0;
    }

    // A symmetric wheel started at rest never spins (x = y = 0 is
    // invariant), so its meaningful stability question lives on the
    // invariant manifold; off it, the estimate is for the full system.
    let spin_locked = scenario.kind == ScenarioKind::UnsteadySymmetric && config.x0 == 0.0;
    let (lyapunov, lyapunov_system) = if spin_locked {
        let sub = SpinLockedSubsystem(&scenario.params);
        let initial = &scenario.initial[1..];
        (
            largest_lyapunov(&sub, initial, (traj.times[0], t_end), &lopts)?,
            "spin-locked-subsystem",
        )
    } else {
        (
            largest_lyapunov(
                &scenario.params,
                &scenario.initial,
                (traj.times[0], t_end),
                &lopts,
            )?,
            "full",
        )
    };

    Ok(ScenarioSummary {
        kind: scenario.kind,
        x0: config.x0,
        span: (traj.times[0], t_end),
        epsilon: config.epsilon,
        conditions: report.conditions,
        event_count: report.events.len(),
        pair_counts: report.pair_counts,
        positive_region_fraction: report.positive_region_fraction,
        switch_window: (traj.times[w0], t_end),
        x_sign_switches,
        y_sign_switches,
        max_abs_x,
        lyapunov,
        lyapunov_system,
        lyapunov_transient: lopts.transient,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    std::fs::write(path, contents).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn trajectory_csv(traj: &Trajectory, scenario: &Scenario) -> String {
    let mut out = String::new();
    out.push_str("tau");
    for name in &traj.names {
        let _ = write!(out, ",{name}");
    }
    out.push_str(",circle_center_a,circle_center_b,circle_radius\n");
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let circle = evolving_circle(2, *t, &scenario.params);
        let _ = write!(out, "{}", fmt_f64(*t));
        for v in s {
            let _ = write!(out, ",{}", fmt_f64(*v));
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            fmt_f64(circle.center.0),
            fmt_f64(circle.center.1),
            fmt_f64(circle.radius)
        );
    }
    out
}

fn g_series_csv(traj: &Trajectory, scenario: &Scenario) -> String {
    let reduced = scenario.params.reduced();
    let mut out = String::from("tau");
    for (i, j) in PAIR_ORDER {
        let _ = write!(out, ",g{i}_minus_g{j}");
    }
    out.push('\n');
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let res = manifold_residuals(&ReducedState::from_slice(&s[..3]), *t, &reduced);
        let _ = write!(out, "{}", fmt_f64(*t));
        for v in res {
            let _ = write!(out, ",{}", fmt_f64(v));
        }
        out.push('\n');
    }
    out
}

fn events_csv(report: &ConjectureReport) -> String {
    let mut out = String::from("tau,i,j,g_value,residual\n");
    for ev in &report.events {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(ev.tau),
            ev.pair.0,
            ev.pair.1,
            fmt_f64(ev.g_value),
            fmt_f64(ev.residual)
        );
    }
    out
}

fn region_csv(grid: &crate::modes::RegionGrid) -> String {
    let mut out = String::from("z_over_x");
    for i in 0..grid.n {
        let _ = write!(out, ",{}", fmt_f64(grid.x_at(i)));
    }
    out.push('\n');
    for j in 0..grid.n {
        let _ = write!(out, "{}", fmt_f64(grid.z_at(j)));
        for i in 0..grid.n {
            out.push(',');
            out.push(if grid.cells[j * grid.n + i] { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

fn json_bool(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn summary_json(s: &ScenarioSummary) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"scenario\": \"{}\",", s.kind.slug());
    let _ = writeln!(out, "  \"x0\": {},", fmt_f64(s.x0));
    let _ = writeln!(
        out,
        "  \"span\": [{}, {}],",
        fmt_f64(s.span.0),
        fmt_f64(s.span.1)
    );
    let _ = writeln!(out, "  \"epsilon\": {},", fmt_f64(s.epsilon));
    out.push_str("  \"conjecture\": {\n");
    let _ = writeln!(
        out,
        "    \"conditions\": [{}, {}, {}, {}],",
        json_bool(s.conditions[0]),
        json_bool(s.conditions[1]),
        json_bool(s.conditions[2]),
        json_bool(s.conditions[3])
    );
    let _ = writeln!(out, "    \"event_count\": {},", s.event_count);
    out.push_str("    \"pair_event_counts\": {");
    for (idx, (i, j)) in PAIR_ORDER.iter().enumerate() {
        let sep = if idx == 0 { "" } else { ", " };
        let _ = write!(out, "{sep}\"g{i}_g{j}\": {}", s.pair_counts[idx]);
    }
    out.push_str("},\n");
    let _ = writeln!(
        out,
        "    \"positive_region_fraction\": {}",
        fmt_f64(s.positive_region_fraction)
    );
    out.push_str("  },\n");
    out.push_str("  \"sign_switches\": {\n");
    let _ = writeln!(
        out,
        "    \"window_tau\": [{}, {}],",
        fmt_f64(s.switch_window.0),
        fmt_f64(s.switch_window.1)
    );
    let _ = writeln!(out, "    \"x\": {},", s.x_sign_switches);
    let _ = writeln!(out, "    \"y\": {}", s.y_sign_switches);
    out.push_str("  },\n");
    out.push_str("  \"lyapunov\": {\n");
    let _ = writeln!(out, "    \"system\": \"{}\",", s.lyapunov_system);
    let _ = writeln!(out, "    \"exponent\": {},", fmt_f64(s.lyapunov.exponent));
    let _ = writeln!(
        out,
        "    \"horizon\": [{}, {}],",
        fmt_f64(s.lyapunov.horizon.0),
        fmt_f64(s.lyapunov.horizon.1)
    );
    let _ = writeln!(
        out,
        "    \"renorm_interval\": {},",
        fmt_f64(s.lyapunov.renorm_interval)
    );
    let _ = writeln!(out, "    \"sample_count\": {},", s.lyapunov.sample_count);
    let _ = writeln!(out, "    \"transient\": {}", fmt_f64(s.lyapunov_transient));
    out.push_str("  },\n");
    let _ = writeln!(out, "  \"max_abs_x\": {}", fmt_f64(s.max_abs_x));
    out.push_str("}\n");
    out
}

/// The six bundled (scenario, x0) combinations, in reporting order.
pub const SUITE_COMBOS: [(ScenarioKind, f64); 6] = [
    (ScenarioKind::UnsteadyAsymmetric, 1.0),
    (ScenarioKind::SteadyAsymmetric, 1.0),
    (ScenarioKind::UnsteadySymmetric, 1.0),
    (ScenarioKind::UnsteadyAsymmetric, 0.0),
    (ScenarioKind::SteadyAsymmetric, 0.0),
    (ScenarioKind::UnsteadySymmetric, 0.0),
];

pub fn combo_dir_name(kind: ScenarioKind, x0: f64) -> String {
    let tag = if x0 == 0.0 { "0" } else { "1" };
    format!("{}-x0-{tag}", kind.slug())
}

/// Run all six combinations with default settings into subdirectories of
/// `base_dir` and write a cross-scenario comparison file.
///
/// A failing scenario aborts the suite; artifacts of completed runs stay on
/// disk.
pub fn run_suite(base_dir: &Path) -> Result<Vec<ScenarioSummary>, RunError> {
    let mut summaries = Vec::with_capacity(SUITE_COMBOS.len());
    for (kind, x0) in SUITE_COMBOS {
        let config = ScenarioConfig {
            kind,
            x0,
            out_dir: base_dir.join(combo_dir_name(kind, x0)),
            ..ScenarioConfig::default()
        };
        summaries.push(run_scenario(&config)?);
    }
    write_file(&base_dir.join("comparison.json"), &comparison_json(&summaries))?;
    Ok(summaries)
}

fn comparison_json(summaries: &[ScenarioSummary]) -> String {
    let mut out = String::new();
    out.push_str("{\n  \"runs\": [\n");
    for (idx, s) in summaries.iter().enumerate() {
        out.push_str("    {");
        let _ = write!(
            out,
            "\"scenario\": \"{}\", \"x0\": {}, \"directory\": \"{}\", \
             \"x_sign_switches\": {}, \"y_sign_switches\": {}, \"event_count\": {}, \
             \"lyapunov_exponent\": {}",
            s.kind.slug(),
            fmt_f64(s.x0),
            combo_dir_name(s.kind, s.x0),
            s.x_sign_switches,
            s.y_sign_switches,
            s.event_count,
            fmt_f64(s.lyapunov.exponent)
        );
        out.push('}');
        out.push_str(if idx + 1 == summaries.len() { "\n" } else { ",\n" });
    }
    out.push_str("  ],\n");
    let _ = writeln!(out, "  \"disorder_metric\": \"x_sign_switches\",");

    // Claimed ordering: unsteady-asymmetric >= steady-asymmetric >= symmetric.
    let claimed = [
        ScenarioKind::UnsteadyAsymmetric,
        ScenarioKind::SteadyAsymmetric,
        ScenarioKind::UnsteadySymmetric,
    ];
    out.push_str("  \"disorder_ranking\": {\n");
    for (gi, x0) in [1.0, 0.0].iter().enumerate() {
        let mut group: Vec<&ScenarioSummary> =
            summaries.iter().filter(|s| s.x0 == *x0).collect();
        group.sort_by(|a, b| b.x_sign_switches.cmp(&a.x_sign_switches));
        let _ = write!(out, "    \"x0={x0}\": [");
        for (i, s) in group.iter().enumerate() {
            let sep = if i == 0 { "" } else { ", " };
            let _ = write!(out, "{sep}\"{}\"", s.kind.slug());
        }
        out.push(']');
        out.push_str(if gi == 0 { ",\n" } else { "\n" });
    }
    out.push_str("  },\n");
    out.push_str("  \"claimed_order_holds\": {\n");
    for (gi, x0) in [1.0, 0.0].iter().enumerate() {
        let switches: Vec<usize> = claimed
            .iter()
            .filter_map(|k| {
                summaries
                    .iter()
                    .find(|s| s.kind == *k && s.x0 == *x0)
                    .map(|s| s.x_sign_switches)
            })
            .collect();
        let holds = switches.windows(2).all(|w| w[0] >= w[1]);
        let _ = write!(out, "    \"x0={x0}\": {}", json_bool(holds));
        out.push_str(if gi == 0 { ",\n" } else { "\n" });
    }
    out.push_str("  }\n}\n");
    out
}
