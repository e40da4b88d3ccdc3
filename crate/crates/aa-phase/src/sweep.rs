//! Single-point runs and parameter sweeps with deterministic CSV/JSON
//! output.
//!
//! Rows are computed for the whole grid before anything is written, so a
//! failure partway leaves no partial output file. Numbers go to CSV with 15
//! significant digits in a fixed column order; JSON uses the shortest
//! round-trip representation, so identical configs produce byte-identical
//! files on one platform.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{RunConfig, SweepVariable, ValidatedRun};
use crate::error::{Error, Result};
use crate::hamiltonian::QesParams;
use crate::phase::{full_report, PhaseReport};
use crate::statistics::{amplitudes, mandel_q, mean_photon, StatisticsSpec};

pub const CSV_HEADER: &str = "swept_value,lambda,T,gamma,beta_closed,beta_quadrature,\
beta_coherent,phi_measured,cyclicity_defect,mean_photon,mandel_q";

/// One grid point of a sweep, in CSV column order.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub swept_value: f64,
    pub lambda: f64,
    pub period_t: f64,
    pub gamma: f64,
    pub beta_closed: f64,
    pub beta_quadrature: f64,
    pub beta_coherent: Option<f64>,
    pub phi_measured: f64,
    pub cyclicity_defect: f64,
    pub mean_photon: f64,
    pub mandel_q: Option<f64>,
}

/// State-level diagnostics attached to single-run output.
#[derive(Debug, Clone, Serialize)]
pub struct StateDiagnostics {
    pub mean_photon: f64,
    pub mandel_q: Option<f64>,
    pub tail_mass: f64,
    pub state_dim: usize,
    /// Phase ramp reported mod 2*pi; absent for custom amplitudes.
    pub theta_mod_2pi: Option<f64>,
    /// True when theta is only the amplitude-phase convention
    /// `C_n = sqrt(pmf) exp(i n theta)` (binomial, negative-binomial) rather
    /// than a parameter of the distribution itself.
    pub theta_is_amplitude_convention: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingleOutput {
    pub version: &'static str,
    pub config: RunConfig,
    pub report: PhaseReport,
    pub diagnostics: StateDiagnostics,
}

#[derive(Debug, Clone, Serialize)]
pub struct ColumnStats {
    pub column: &'static str,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

/// Least-squares fit of `beta(theta) = c0 + c1 cos(2 theta)`; the residual
/// is the largest absolute deviation across the grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CosineFit {
    pub c0: f64,
    pub c1: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub version: &'static str,
    pub config: RunConfig,
    pub rows: usize,
    pub columns: Vec<ColumnStats>,
    pub cosine_fit: Option<CosineFit>,
}

#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs one parameter point end to end.
pub fn run_single(run: &ValidatedRun) -> Result<SingleOutput> {
    let report = full_report(
        &run.params,
        &run.statistics,
        run.quadrature_steps,
        run.tail_tol,
    )?;
    let diagnostics = state_diagnostics(&run.statistics, run.tail_tol)?;
    Ok(SingleOutput {
        version: VERSION,
        config: run.config.clone(),
        report,
        diagnostics,
    })
}

fn state_diagnostics(spec: &StatisticsSpec, tail_tol: f64) -> Result<StateDiagnostics> {
    let (state, tail) = amplitudes(spec, tail_tol)?;
    let mandel = match mandel_q(&state) {
        Ok(q) => Some(q),
        Err(Error::ZeroMeanPhoton) => None,
        Err(e) => return Err(e),
    };
    let theta_is_amplitude_convention = match spec {
        StatisticsSpec::Custom { .. } => None,
        StatisticsSpec::Coherent { .. } => Some(false),
        StatisticsSpec::Binomial { .. } | StatisticsSpec::NegativeBinomial { .. } => Some(true),
    };
    Ok(StateDiagnostics {
        mean_photon: mean_photon(&state),
        mandel_q: mandel,
        tail_mass: tail.tail_mass,
        state_dim: tail.dim_used,
        theta_mod_2pi: spec.theta(),
        theta_is_amplitude_convention,
    })
}

/// Applies one grid value to the parameter set / statistics family.
fn apply_sweep_value(
    params: &QesParams,
    statistics: &StatisticsSpec,
    variable: SweepVariable,
    value: f64,
) -> (QesParams, StatisticsSpec) {
    let mut params = params.clone();
    let mut statistics = statistics.clone();
    match variable {
        SweepVariable::Theta => match &mut statistics {
            StatisticsSpec::Coherent { theta, .. }
            | StatisticsSpec::Binomial { theta, .. }
            | StatisticsSpec::NegativeBinomial { theta, .. } => *theta = value,
            StatisticsSpec::Custom { .. } => unreachable!("validation rejects theta sweeps"),
        },
        SweepVariable::AlphaMag => match &mut statistics {
            StatisticsSpec::Coherent { alpha_mag, .. } => *alpha_mag = value,
            _ => unreachable!("validation rejects alpha_mag sweeps"),
        },
        SweepVariable::ACoeff(k) => params.a_coeff[k] = value,
        SweepVariable::Epsilon(k) => params.epsilon[k] = value,
    }
    (params, statistics)
}

/// Runs every grid point in axis order and assembles the summary.
pub fn run_sweep(run: &ValidatedRun) -> Result<SweepOutput> {
    let axis = run.sweep.ok_or_else(|| {
        Error::ParamOutOfRange("run_sweep needs a configuration with a sweep axis".into())
    })?;
    let mut rows = Vec::with_capacity(axis.points);
    for value in axis.grid() {
        let (params, statistics) =
            apply_sweep_value(&run.params, &run.statistics, axis.variable, value);
        let report = full_report(&params, &statistics, run.quadrature_steps, run.tail_tol)?;
        let diagnostics = state_diagnostics(&statistics, run.tail_tol)?;
        rows.push(SweepRow {
            swept_value: value,
            lambda: report.lambda,
            period_t: report.period_t,
            gamma: report.gamma_dynamical,
            beta_closed: report.beta_closed,
            beta_quadrature: report.beta_quadrature,
            beta_coherent: report.beta_coherent,
            phi_measured: report.phi_measured,
            cyclicity_defect: report.cyclicity_defect,
            mean_photon: diagnostics.mean_photon,
            mandel_q: diagnostics.mandel_q,
        });
    }

    let cosine_fit = if axis.variable == SweepVariable::Theta
        && matches!(run.statistics, StatisticsSpec::Coherent { .. })
    {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .map(|r| (r.swept_value, r.beta_closed))
            .collect();
        fit_cosine_2theta(&points)
    } else {
        None
    };

    let summary = SweepSummary {
        version: VERSION,
        config: run.config.clone(),
        rows: rows.len(),
        columns: column_stats(&rows),
        cosine_fit,
    };
    Ok(SweepOutput { rows, summary })
}

fn column_stats(rows: &[SweepRow]) -> Vec<ColumnStats> {
    fn stats(values: impl Iterator<Item = Option<f64>>) -> (Option<f64>, Option<f64>) {
        let mut min = None;
        let mut max = None;
        for v in values.flatten() {
            min = Some(min.map_or(v, |m: f64| m.min(v)));
            max = Some(max.map_or(v, |m: f64| m.max(v)));
        }
        (min, max)
    }
    macro_rules! col {
        ($name:literal, $extract:expr) => {{
            let (min, max) = stats(rows.iter().map($extract));
            ColumnStats {
                column: $name,
                min,
                max,
            }
        }};
    }
    vec![
        col!("swept_value", |r: &SweepRow| Some(r.swept_value)),
        col!("lambda", |r: &SweepRow| Some(r.lambda)),
        col!("T", |r: &SweepRow| Some(r.period_t)),
        col!("gamma", |r: &SweepRow| Some(r.gamma)),
        col!("beta_closed", |r: &SweepRow| Some(r.beta_closed)),
        col!("beta_quadrature", |r: &SweepRow| Some(r.beta_quadrature)),
        col!("beta_coherent", |r: &SweepRow| r.beta_coherent),
        col!("phi_measured", |r: &SweepRow| Some(r.phi_measured)),
        col!("cyclicity_defect", |r: &SweepRow| Some(r.cyclicity_defect)),
        col!("mean_photon", |r: &SweepRow| Some(r.mean_photon)),
        col!("mandel_q", |r: &SweepRow| r.mandel_q),
    ]
}

/// Normal equations for the two-parameter model `c0 + c1 cos(2 theta)`.
pub fn fit_cosine_2theta(points: &[(f64, f64)]) -> Option<CosineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mut s_c = 0.0;
    let mut s_cc = 0.0;
    let mut s_b = 0.0;
    let mut s_bc = 0.0;
    for &(theta, beta) in points {
        let c = (2.0 * theta).cos();
        s_c += c;
        s_cc += c * c;
        s_b += beta;
        s_bc += beta * c;
    }
    let det = n * s_cc - s_c * s_c;
    if det.abs() < 1e-12 * n * n {
        return None;
    }
    let c0 = (s_cc * s_b - s_c * s_bc) / det;
    let c1 = (n * s_bc - s_c * s_b) / det;
    let residual = points
        .iter()
        .map(|&(theta, beta)| (beta - c0 - c1 * (2.0 * theta).cos()).abs())
        .fold(0.0f64, f64::max);
    Some(CosineFit { c0, c1, residual })
}

/// 15 significant digits, scientific.
pub fn format_number(x: f64) -> String {
    format!("{x:.14e}")
}

fn format_optional(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

pub fn csv_line(row: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        format_number(row.swept_value),
        format_number(row.lambda),
        format_number(row.period_t),
        format_number(row.gamma),
        format_number(row.beta_closed),
        format_number(row.beta_quadrature),
        format_optional(row.beta_coherent),
        format_number(row.phi_measured),
        format_number(row.cyclicity_defect),
        format_number(row.mean_photon),
        format_optional(row.mandel_q),
    )
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes the CSV; on failure the partial file is removed.
pub fn write_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let attempt = (|| -> std::io::Result<()> {
        let mut file = std::io::BufWriter::new(fs::File::create(path)?);
        writeln!(file, "{CSV_HEADER}")?;
        for row in rows {
            writeln!(file, "{}", csv_line(row))?;
        }
        file.flush()
    })();
    if let Err(e) = attempt {
        let _ = fs::remove_file(path);
        return Err(io_err(path, e));
    }
    Ok(())
}

/// Serializes any summary/report value as pretty JSON; partial files are
/// removed on failure.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report types serialize");
    if let Err(e) = fs::write(path, text + "\n") {
        let _ = fs::remove_file(path);
        return Err(io_err(path, e));
    }
    Ok(())
}
