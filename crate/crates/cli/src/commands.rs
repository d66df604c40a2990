use rayon::prelude::*;
use serde_json::json;

use dicke_core::oracle::{validate_with as oracle_validate, ValidationReport};
use dicke_core::statistics::poisson_tv_distance;
use dicke_core::{moments, DickeState, Distribution, Process, Qmin, Result as CoreResult};

use crate::args::{StateArgs, StatsArgs, SweepArgs, TimeArgs, ValidateArgs};
use crate::error::CliError;
use crate::output::{Dataset, Table, Value};

/// A finished computation: the dataset to write and whether it counts as a
/// pass (only `validate` can fail this way).
#[derive(Debug, Clone)]
pub struct Report {
    pub dataset: Dataset,
    pub passed: bool,
}

impl From<Dataset> for Report {
    fn from(dataset: Dataset) -> Self {
        Self { dataset, passed: true }
    }
}

pub(crate) fn check_delta(delta: f64) -> Result<(), CliError> {
    if delta.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("detuning must be finite, got {delta}")))
    }
}

pub fn resolve_state(args: &StateArgs) -> Result<DickeState, CliError> {
    check_delta(args.delta)?;
    match (args.n_atoms, args.excited, args.two_j, args.two_m) {
        (Some(n), Some(e), None, None) => Ok(DickeState::from_excited_count(n, e, args.delta)?),
        (None, None, Some(two_j), Some(two_m)) => Ok(DickeState::new(two_j, two_m, args.delta, 0.0)?),
        _ => Err(CliError::Config(
            "give the state as --n-atoms with --excited, or as --two-j with --two-m".into(),
        )),
    }
}

/// `steps` evenly spaced times from `tau_min` to `tau_max` inclusive; a
/// single step is just `tau_min`.
pub fn time_grid(time: &TimeArgs) -> Result<Vec<f64>, CliError> {
    let TimeArgs { tau_min, tau_max, tau_steps } = *time;
    if !(tau_min.is_finite() && tau_max.is_finite()) || tau_min < 0.0 || tau_max <= tau_min {
        return Err(CliError::Config(format!(
            "need 0 <= tau-min < tau-max, got tau-min = {tau_min}, tau-max = {tau_max}"
        )));
    }
    if tau_steps == 0 {
        return Err(CliError::Config("tau-steps must be at least 1".into()));
    }
    if tau_steps == 1 {
        return Ok(vec![tau_min]);
    }
    let span = tau_max - tau_min;
    let last = (tau_steps - 1) as f64;
    Ok((0..tau_steps).map(|i| tau_min + span * (i as f64 / last)).collect())
}

/// `steps` points `tau_max·i/steps`, `i = 1..=steps`: the half-open window
/// `(0, tau_max]` used by the figure datasets.
pub fn open_grid(tau_max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(CliError::Config(format!("tau-max must be positive, got {tau_max}")));
    }
    if steps == 0 {
        return Err(CliError::Config("tau-steps must be at least 1".into()));
    }
    Ok((1..=steps).map(|i| tau_max * (i as f64 / steps as f64)).collect())
}

pub const STATS_COLUMNS: [&str; 8] =
    ["tau", "mean", "variance", "std", "mandel_q", "fock_peak_n", "fock_peak_p", "tv_to_poisson"];

pub fn stats_row(dist: &Distribution) -> Vec<Value> {
    let s = moments(dist);
    vec![
        s.tau.into(),
        s.mean.into(),
        s.variance.into(),
        s.std.into(),
        Value::opt(s.mandel_q),
        s.fock_peak.0.into(),
        s.fock_peak.1.into(),
        poisson_tv_distance(dist, s.mean).into(),
    ]
}

pub fn stats(args: &StatsArgs) -> Result<Report, CliError> {
    let state = resolve_state(&args.state)?;
    let taus = time_grid(&args.time)?;
    let process = Process::new(&state)?;

    let mut table = Table::new(&STATS_COLUMNS);
    for dist in process.distributions(&taus) {
        table.push(stats_row(&dist));
    }
    let config = json!({
        "state": args.state,
        "time": args.time,
        "two_j": state.two_j(),
        "two_m": state.two_m(),
    });
    Ok(Dataset::new("stats", config, table).into())
}

/// Q_min for every `(δ, M)` cell, δ-major, M ascending.
pub fn sweep_cells(two_j: i64, two_ms: &[i64], deltas: &[f64], grid: usize, refine: bool) -> CoreResult<Vec<(i64, f64, Qmin)>> {
    let cells: Vec<(i64, f64)> = deltas.iter().flat_map(|&d| two_ms.iter().map(move |&m| (m, d))).collect();
    cells
        .par_iter()
        .map(|&(two_m, delta)| {
            let state = DickeState::new(two_j, two_m, delta, 0.0)?;
            let q = Process::new(&state)?.q_min(grid, refine)?;
            Ok((two_m, delta, q))
        })
        .collect()
}

pub fn qmin_sweep(args: &SweepArgs) -> Result<Report, CliError> {
    let two_j = match (args.n_atoms, args.two_j) {
        (Some(n), None) => n,
        (None, Some(j)) => j,
        _ => return Err(CliError::Config("give exactly one of --n-atoms and --two-j".into())),
    };
    if two_j < 1 {
        return Err(CliError::Config(format!("need at least one atom, got 2J = {two_j}")));
    }
    for &d in &args.delta {
        check_delta(d)?;
    }
    let lo = args.m_min.map_or(2 - two_j, |m| m.0);
    let hi = args.m_max.map_or(two_j, |m| m.0);
    if (lo - two_j) % 2 != 0 || (hi - two_j) % 2 != 0 {
        return Err(CliError::Config("M must be an integer for even N and a half-integer for odd N".into()));
    }
    if lo > hi {
        return Err(CliError::Config(format!("empty M range: m-min {} > m-max {}", lo as f64 / 2.0, hi as f64 / 2.0)));
    }
    let two_ms: Vec<i64> = (lo..=hi).step_by(2).collect();

    let cells = sweep_cells(two_j, &two_ms, &args.delta, args.grid_points, !args.no_refine)?;
    let mut table = Table::new(&["two_m", "delta", "q_min", "tau_at_min"]);
    for (two_m, delta, q) in cells {
        table.push(vec![two_m.into(), delta.into(), q.q_min.into(), q.tau_at_min.into()]);
    }
    let config = json!({ "sweep": args, "two_j": two_j });
    Ok(Dataset::new("qmin-sweep", config, table).into())
}

pub fn validate(args: &ValidateArgs) -> Result<Report, CliError> {
    validate_with(args, Process::new)
}

/// `validate` against an arbitrary pipeline constructor; lets tests check
/// that a broken pipeline is reported as a failure.
pub fn validate_with<F>(args: &ValidateArgs, pipeline: F) -> Result<Report, CliError>
where
    F: Fn(&DickeState) -> CoreResult<Process> + Sync,
{
    for &d in &args.deltas {
        check_delta(d)?;
    }
    if args.max_atoms == 0 {
        return Err(CliError::Config("max-atoms must be at least 1".into()));
    }
    let taus = time_grid(&TimeArgs { tau_min: 0.0, tau_max: args.tau_max, tau_steps: args.tau_steps })?;
    let report = oracle_validate(args.max_atoms, &args.deltas, &taus, pipeline)?;
    Ok(validation_report(args, report))
}

fn validation_report(args: &ValidateArgs, report: ValidationReport) -> Report {
    let mut table = Table::new(&["n_atoms", "excited", "delta", "tau", "max_abs_diff"]);
    for c in &report.cases {
        table.push(vec![c.n_atoms.into(), c.excited.into(), c.delta.into(), c.tau.into(), c.max_abs_diff.into()]);
    }
    let worst = report.worst.as_ref().map(|w| w.max_abs_diff);
    let dataset = Dataset::new("validate", json!({ "validate": args }), table)
        .with_meta("passed", report.passed)
        .with_meta("threshold", report.threshold)
        .with_meta("worst_max_abs_diff", worst.and_then(serde_json::Number::from_f64).map(serde_json::Value::Number));
    Report { dataset, passed: report.passed }
}
