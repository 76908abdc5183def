//! Seeded scenario execution, parameter sweeps and CSV/JSON emission.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::correlations::{
    correlation_record, discord_numeric, quantum_discord, xstate, BellDiagonalParams,
    CorrelationError, CorrelationRecord, DEFAULT_COARSE_GRID, DEFAULT_REFINE_ITERS,
};
use crate::dephasing_channels::{
    classify_cc_dynamics, sudden_change_time, CcDynamicsClass, DephasingSource,
};
use crate::kicked_top::{
    build_floquet, default_fit_window, detect_revivals, echo_amplitudes, fit_decay, Branch,
    DecayFit, FidelitySeries, FitRequest, RevivalReport, TopError, DEFAULT_REVIVAL_THRESHOLD,
};
use crate::spin_algebra::{build_spin_operators, spin_coherent_state, SpinError};

pub use config::{Column, ConfigError, Format, InitialAngles, Preset, ScenarioConfig, SourceKind};

/// Unitarity and amplitude-bound tolerance enforced on every run.
pub const INVARIANT_TOLERANCE: f64 = 1e-10;
/// Tolerance of the `CC = MI − Q` re-check at emission.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical invariant violated: {0}")]
    Invariant(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// Process exit code: 2 configuration, 3 numerical invariant, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Invariant(_) => 3,
            RunError::Io { .. } => 4,
        }
    }
}

impl From<SpinError> for RunError {
    fn from(e: SpinError) -> Self {
        RunError::Invariant(e.to_string())
    }
}

impl From<TopError> for RunError {
    fn from(e: TopError) -> Self {
        RunError::Invariant(e.to_string())
    }
}

impl From<CorrelationError> for RunError {
    fn from(e: CorrelationError) -> Self {
        RunError::Invariant(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub n: usize,
    pub record: CorrelationRecord,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: ScenarioConfig,
    pub series: FidelitySeries,
    pub rows: Vec<Row>,
    /// Free-form `key: value` metadata lines emitted after the config echo.
    pub notes: Vec<String>,
}

impl RunOutput {
    pub fn fidelity(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.record.fidelity).collect()
    }

    /// Mean `F` over the last third of the run.
    pub fn final_window_mean_fidelity(&self) -> f64 {
        let f = self.fidelity();
        let start = f.len() - f.len().div_ceil(3);
        let tail = &f[start..];
        tail.iter().sum::<f64>() / tail.len() as f64
    }
}

/// Dephasing amplitudes `f_0..f_{n_kicks}` for a configuration.
pub fn amplitudes(cfg: &ScenarioConfig) -> Result<FidelitySeries, RunError> {
    let v = cfg.validate()?;
    match &v.source {
        Some(src) => {
            let f = src
                .amplitudes(cfg.n_kicks)
                .map_err(|e| RunError::Invariant(e.to_string()))?;
            Ok(FidelitySeries::from_amplitudes(f, None))
        }
        None => {
            let ops = build_spin_operators(v.top.spin)?;
            let psi0 = spin_coherent_state(&ops, v.angles);
            let plus = build_floquet(&v.top, &ops, Branch::Plus)?;
            let minus = build_floquet(&v.top, &ops, Branch::Minus)?;
            for (name, u) in [("plus", &plus), ("minus", &minus)] {
                let residual = u.unitarity_residual();
                if residual >= INVARIANT_TOLERANCE {
                    return Err(RunError::Invariant(format!(
                        "Floquet operator ({name} branch) unitarity residual {residual:e}"
                    )));
                }
            }
            let f = echo_amplitudes(&plus, &minus, &psi0, cfg.n_kicks);
            Ok(FidelitySeries::from_amplitudes(f, Some(v.top.epsilon)))
        }
    }
}

fn records(c: BellDiagonalParams, series: &FidelitySeries) -> Result<Vec<Row>, RunError> {
    series
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, &f)| {
            if f.norm() > 1.0 + INVARIANT_TOLERANCE {
                return Err(RunError::Invariant(format!(
                    "|f| = {} exceeds 1 at kick {n}",
                    f.norm()
                )));
            }
            // Clip rounding excess so the X state stays within its domain.
            let f = if f.norm() > 1.0 { f / f.norm() } else { f };
            Ok(Row {
                n,
                record: correlation_record(c, f)?,
            })
        })
        .collect()
}

/// Runs one scenario: operators are built once, the amplitude series is computed,
/// and every kick is mapped through the correlation measures.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunOutput, RunError> {
    let v = cfg.validate()?;
    let series = amplitudes(cfg)?;
    let rows = records(v.correlations, &series)?;
    let mut notes = Vec::new();
    if let Some(seed) = v.seed {
        notes.push(format!(
            "initial_angles: theta={:.15e} phi={:.15e} (seed {seed})",
            v.angles.theta(),
            v.angles.phi()
        ));
    }
    let clamped = rows
        .iter()
        .filter(|r| r.record.clamp_excess > crate::correlations::THETA_CLAMP_WARN)
        .count();
    if clamped > 0 {
        notes.push(format!("theta_clamp_warnings: {clamped}"));
    }
    Ok(RunOutput {
        config: cfg.clone(),
        series,
        rows,
        notes,
    })
}

/// Checks `CC = MI − Q` on every row.
pub fn check_row_identities(rows: &[Row]) -> Result<(), RunError> {
    for row in rows {
        let r = &row.record;
        let gap = (r.classical - (r.mutual_information - r.discord)).abs();
        if gap >= IDENTITY_TOLERANCE || !gap.is_finite() {
            return Err(RunError::Invariant(format!(
                "CC differs from MI - Q by {gap:e} at kick {}",
                row.n
            )));
        }
    }
    Ok(())
}

/// Closed-form vs brute-force discord along a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub n: usize,
    pub fidelity: f64,
    pub alpha: f64,
    pub closed: f64,
    pub numeric: f64,
}

pub fn oracle_rows(
    c: BellDiagonalParams,
    series: &FidelitySeries,
    stride: usize,
) -> Result<Vec<OracleRow>, RunError> {
    let stride = stride.max(1);
    let picked: Vec<(usize, Complex64)> = series
        .amplitudes()
        .iter()
        .copied()
        .enumerate()
        .step_by(stride)
        .collect();
    picked
        .into_par_iter()
        .map(|(n, f)| {
            let f = if f.norm() > 1.0 { f / f.norm() } else { f };
            let fidelity = f.norm_sqr().min(1.0);
            let alpha = crate::kicked_top::principal_arg(f);
            let closed = quantum_discord(c, fidelity, alpha)?;
            let numeric =
                discord_numeric(&xstate(c, f)?, DEFAULT_COARSE_GRID, DEFAULT_REFINE_ITERS).discord;
            Ok(OracleRow {
                n,
                fidelity,
                alpha,
                closed,
                numeric,
            })
        })
        .collect()
}

/// Spread of closed-form and brute-force discord as `α` sweeps `[0, π)` at fixed
/// `(c, F)`. The brute-force value is invariant; the closed form is not in general.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaSweepDiagnostic {
    pub fidelity: f64,
    pub closed_variation: f64,
    pub numeric_variation: f64,
    pub max_discrepancy: f64,
}

pub fn alpha_sweep_diagnostic(
    c: BellDiagonalParams,
    fidelity: f64,
    samples: usize,
) -> Result<AlphaSweepDiagnostic, RunError> {
    let samples = samples.max(2);
    let values: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let alpha = std::f64::consts::PI * k as f64 / samples as f64;
            let f = Complex64::from_polar(fidelity.sqrt(), alpha);
            let closed = quantum_discord(c, fidelity, alpha)?;
            let numeric =
                discord_numeric(&xstate(c, f)?, DEFAULT_COARSE_GRID, DEFAULT_REFINE_ITERS).discord;
            Ok((closed, numeric))
        })
        .collect::<Result<_, RunError>>()?;
    let spread = |it: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        });
        hi - lo
    };
    Ok(AlphaSweepDiagnostic {
        fidelity,
        closed_variation: spread(&mut values.iter().map(|v| v.0)),
        numeric_variation: spread(&mut values.iter().map(|v| v.1)),
        max_discrepancy: values
            .iter()
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
    })
}

/// Side-by-side kicked-top and memoryless dephasing of the same pair.
#[derive(Debug, Clone)]
pub struct ChannelComparison {
    pub gamma: f64,
    /// True when `gamma` was fitted from the kicked-top decay.
    pub gamma_fitted: bool,
    pub qkt: Vec<Row>,
    pub markovian: Vec<Row>,
}

/// Compares the kicked-top source with phase damping. Without an explicit rate the
/// Markovian `γ` is half the exponential rate fitted to the early kicked-top decay.
pub fn channel_compare(cfg: &ScenarioConfig) -> Result<ChannelComparison, RunError> {
    let v = cfg.validate()?;
    let qkt_cfg = ScenarioConfig {
        source: SourceKind::Qkt,
        ..cfg.clone()
    };
    let qkt = run_scenario(&qkt_cfg)?;
    let (gamma, gamma_fitted) = match cfg.source {
        SourceKind::Markovian { gamma } => (gamma, false),
        SourceKind::Qkt => {
            let window = default_fit_window(&qkt.series);
            let fit = fit_decay(
                &qkt.series,
                window,
                FitRequest::Only(crate::kicked_top::DecayModel::Exponential),
            )?;
            (fit.rate / 2.0, true)
        }
    };
    let mk = DephasingSource::markovian(gamma).map_err(|e| ConfigError::Invalid {
        key: "gamma".into(),
        reason: e.to_string(),
    })?;
    let series = FidelitySeries::from_amplitudes(
        mk.amplitudes(cfg.n_kicks)
            .map_err(|e| RunError::Invariant(e.to_string()))?,
        None,
    );
    let markovian = records(v.correlations, &series)?;
    Ok(ChannelComparison {
        gamma,
        gamma_fitted,
        qkt: qkt.rows,
        markovian,
    })
}

/// Fidelity-only analysis of a kicked-top run.
#[derive(Debug, Clone)]
pub struct FidelityAnalysis {
    pub series: FidelitySeries,
    pub revivals: RevivalReport,
    pub fit: Option<DecayFit>,
}

pub fn fidelity_analysis(cfg: &ScenarioConfig) -> Result<FidelityAnalysis, RunError> {
    let series = amplitudes(cfg)?;
    let revivals = detect_revivals(&series, DEFAULT_REVIVAL_THRESHOLD);
    let fit = fit_decay(&series, default_fit_window(&series), FitRequest::Best).ok();
    Ok(FidelityAnalysis {
        series,
        revivals,
        fit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummaryRow {
    pub value: f64,
    pub final_mean_fidelity: f64,
    pub revival_period: Option<f64>,
    pub k_estimate: Option<f64>,
    pub sudden_change_time: Option<f64>,
    pub oracle_max_discrepancy: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axis: String,
    pub runs: Vec<RunOutput>,
    pub summary: Vec<SweepSummaryRow>,
}

/// Stride between kicks checked against the brute-force discord in sweeps.
pub const SWEEP_ORACLE_STRIDE: usize = 10;

fn summarize(value: f64, run: &RunOutput, oracle: bool) -> Result<SweepSummaryRow, RunError> {
    let v = run.config.validate()?;
    let revivals = matches!(run.config.source, SourceKind::Qkt)
        .then(|| detect_revivals(&run.series, DEFAULT_REVIVAL_THRESHOLD));
    let sudden = if classify_cc_dynamics(v.correlations) == CcDynamicsClass::SuddenChange {
        let src = DephasingSource::Qkt(run.series.clone());
        sudden_change_time(v.correlations, &src, run.config.n_kicks)
            .map_err(|e| RunError::Invariant(e.to_string()))?
            .first()
            .map(|c| c.time)
    } else {
        None
    };
    let oracle_max = if oracle {
        let rows = oracle_rows(v.correlations, &run.series, SWEEP_ORACLE_STRIDE)?;
        Some(
            rows.iter()
                .map(|r| (r.closed - r.numeric).abs())
                .fold(0.0, f64::max),
        )
    } else {
        None
    };
    Ok(SweepSummaryRow {
        value,
        final_mean_fidelity: run.final_window_mean_fidelity(),
        revival_period: revivals.as_ref().and_then(|r| r.estimated_period),
        k_estimate: revivals.as_ref().and_then(|r| r.k_estimate),
        sudden_change_time: sudden,
        oracle_max_discrepancy: oracle_max,
    })
}

/// Independent runs with `axis` set to each of `values`, evaluated in parallel.
pub fn sweep(
    base: &ScenarioConfig,
    axis: &str,
    values: &[f64],
    oracle: bool,
) -> Result<SweepResult, RunError> {
    sweep_with(base, axis, values, oracle, true)
}

/// As [`sweep`], optionally forcing serial execution.
pub fn sweep_with(
    base: &ScenarioConfig,
    axis: &str,
    values: &[f64],
    oracle: bool,
    parallel: bool,
) -> Result<SweepResult, RunError> {
    let configs: Vec<ScenarioConfig> = values
        .iter()
        .map(|&x| base.with_axis(axis, x))
        .collect::<Result<_, _>>()?;
    let one =
        |(cfg, &value): (&ScenarioConfig, &f64)| -> Result<(RunOutput, SweepSummaryRow), RunError> {
            let run = run_scenario(cfg)?;
            let row = summarize(value, &run, oracle)?;
            Ok((run, row))
        };
    let results: Vec<(RunOutput, SweepSummaryRow)> = if parallel {
        configs
            .par_iter()
            .zip(values)
            .map(one)
            .collect::<Result<_, _>>()?
    } else {
        configs
            .iter()
            .zip(values)
            .map(one)
            .collect::<Result<_, _>>()?
    };
    let (runs, summary) = results.into_iter().unzip();
    Ok(SweepResult {
        axis: axis.to_string(),
        runs,
        summary,
    })
}

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file_name = path.file_name().ok_or_else(|| {
        io(std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            "no file name",
        ))
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}
