//! Command implementations, independent of argument parsing so they can be
//! driven from tests.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use tecost_core::channels::{parse_channel_lenient, FILE_COMPLETENESS_TOL};
use tecost_core::fidelity::fmin_descent;
use tecost_core::matcore::random::split_seed;
use tecost_core::matcore::validate_psd;
use tecost_core::tecost::{channel_cost, depolarizing_cost_closed_form, depolarizing_fmin_closed_form};
use tecost_core::KrausChannel;

use crate::error::{CliError, CliResult};
use crate::report::{Suite, SuiteRow, SuiteSummary, SweepRow, VerifyReport};
use crate::settings::Settings;

/// Slack of the one-sided check F_min ≥ cos‖K‖.
pub const ONE_SIDED_SLACK: f64 = 1e-7;

/// Default number of q values in a depolarizing sweep.
pub const DEFAULT_SWEEP_POINTS: usize = 21;

/// Runs both solvers on `channel` and compares F_min with max(cos‖K‖, 0).
pub fn verify(channel: &KrausChannel, descriptor: &str, settings: &Settings) -> CliResult<VerifyReport> {
    let t0 = Instant::now();
    let fmin = fmin_descent(channel, &settings.fmin)?;
    let fmin_seconds = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let cost = channel_cost(channel, &settings.cost)?;
    let cost_seconds = t1.elapsed().as_secs_f64();
    let clamped_cos = cost.cos_value.max(0.0);
    let abs_gap = (fmin.value - clamped_cos).abs();
    Ok(VerifyReport {
        channel: descriptor.to_string(),
        fmin_value: fmin.value,
        cos_cost: cost.cos_value,
        clamped_cos,
        abs_gap,
        tolerance: settings.gap_tol,
        pass: abs_gap <= settings.gap_tol,
        one_sided_ok: fmin.value >= cost.cos_value - ONE_SIDED_SLACK,
        regime: cost.regime,
        fmin_converged: fmin.converged,
        fmin_iterations: fmin.iterations,
        fmin_possibly_zero: fmin.possibly_zero,
        cost_converged: cost.converged,
        certificate_gap: cost.certificate_gap,
        fmin_seconds,
        cost_seconds,
    })
}

/// `points` equally spaced q values from −1/(n² − 1) to 1 inclusive.
pub fn q_grid(n: usize, points: usize) -> CliResult<Vec<f64>> {
    if n < 2 {
        return Err(CliError::Usage(format!("depolarizing sweep needs n >= 2, got {n}")));
    }
    if points < 2 {
        return Err(CliError::Usage(format!(
            "a sweep needs at least 2 points, got {points}"
        )));
    }
    let lo = -1.0 / ((n * n) as f64 - 1.0);
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                1.0
            } else {
                lo + (1.0 - lo) * i as f64 / (points - 1) as f64
            }
        })
        .collect())
}

/// Solver outputs against the closed forms for depolarizing(n, q), with the
/// no-entanglement fidelity √(q + (1 − q)/n) alongside.
pub fn sweep_depolarizing(n: usize, qs: &[f64], settings: &Settings) -> CliResult<Vec<SweepRow>> {
    // validate the whole grid before any solver work
    for &q in qs {
        depolarizing_fmin_closed_form(n, q)?;
    }
    qs.par_iter()
        .map(|&q| {
            let channel = KrausChannel::depolarizing(n, q)?;
            let fmin = fmin_descent(&channel, &settings.fmin)?;
            let cost = channel_cost(&channel, &settings.cost)?;
            let fmin_closed = depolarizing_fmin_closed_form(n, q)?;
            let cost_closed = depolarizing_cost_closed_form(n, q)?;
            Ok(SweepRow {
                q,
                fmin_solver: fmin.value,
                fmin_closed,
                cost_solver: cost.angle,
                cost_closed,
                no_entanglement_fidelity: (q + (1.0 - q) / n as f64).max(0.0).sqrt(),
                fmin_gap: (fmin.value - fmin_closed).abs(),
                cost_gap: (cost.angle - cost_closed).abs(),
            })
        })
        .collect()
}

/// Verifies `trials` random channels for every (n, d) pair. Trial k of the
/// flattened (n, d, trial) order uses seed split_seed(master, k) for both
/// the channel and the solvers; rows come back in that order.
pub fn random_suite(ns: &[usize], ds: &[usize], trials: usize, settings: &Settings) -> CliResult<Suite> {
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    if ns.is_empty() || ds.is_empty() {
        return Err(CliError::Usage("need at least one n and one d".into()));
    }
    let jobs: Vec<(usize, usize, usize)> = ns
        .iter()
        .flat_map(|&n| ds.iter().flat_map(move |&d| (0..trials).map(move |t| (n, d, t))))
        .collect();
    let start = Instant::now();
    let results: Vec<CliResult<(SuiteRow, f64, f64)>> = jobs
        .par_iter()
        .enumerate()
        .map(|(index, &(n, d, trial))| {
            let seed = split_seed(settings.seed, index as u64);
            let channel = KrausChannel::random(n, d, seed)?;
            let report = verify(
                &channel,
                &format!("random:n={n},d={d},seed={seed}"),
                &settings.with_seed(seed),
            )?;
            let row = SuiteRow {
                n,
                d,
                trial,
                seed,
                fmin_value: report.fmin_value,
                cos_cost: report.cos_cost,
                clamped_cos: report.clamped_cos,
                abs_gap: report.abs_gap,
                pass: report.pass,
                one_sided_ok: report.one_sided_ok,
                regime: report.regime,
            };
            Ok((row, report.fmin_seconds, report.cost_seconds))
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let (mut fmin_seconds, mut cost_seconds) = (0.0, 0.0);
    for r in results {
        let (row, f, c) = r?;
        fmin_seconds += f;
        cost_seconds += c;
        rows.push(row);
    }
    let summary = SuiteSummary {
        trials: rows.len(),
        max_gap: rows.iter().map(|r| r.abs_gap).fold(0.0, f64::max),
        failures: rows.iter().filter(|r| !r.pass).count(),
        one_sided_failures: rows.iter().filter(|r| !r.one_sided_ok).count(),
        tolerance: settings.gap_tol,
        wall_seconds: start.elapsed().as_secs_f64(),
        fmin_seconds,
        cost_seconds,
    };
    Ok(Suite { summary, rows })
}

/// Diagnostics for a channel file.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Validation {
    pub n: usize,
    pub d: usize,
    pub completeness_residual: f64,
    pub completeness_tol: f64,
    pub choi_psd: bool,
    pub choi_min_eigenvalue: f64,
    pub valid: bool,
}

/// Parses a channel file without the completeness requirement and reports
/// whether it would be accepted. Malformed files are errors; well-formed
/// files that fail a check come back with `valid = false`.
pub fn validate(path: &Path) -> CliResult<Validation> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let (channel, residual) = parse_channel_lenient(&text)?;
    let choi = channel.choi_matrix();
    let psd = validate_psd(choi.matrix(), 1e-9);
    let choi_min = choi.eigen().eigenvalues[0];
    Ok(Validation {
        n: channel.n(),
        d: channel.d(),
        completeness_residual: residual,
        completeness_tol: FILE_COMPLETENESS_TOL,
        choi_psd: psd.valid,
        choi_min_eigenvalue: choi_min,
        valid: residual <= FILE_COMPLETENESS_TOL && psd.valid,
    })
}
