//! Run configuration: a flat TOML file (`key = value`, arrays in brackets)
//! plus CLI overrides. Validation happens here so the CLI can separate
//! configuration mistakes (exit code 2) from numerical failures (exit
//! code 3).

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hamiltonian::QesParams;
use crate::statistics::StatisticsSpec;
use crate::tolerances;

#[derive(Debug, Error)]
#[error("configuration error: {0}")]
pub struct ConfigError(pub String);

fn default_quadrature_steps() -> usize {
    tolerances::DEFAULT_QUADRATURE_STEPS
}

fn default_tail_tol() -> f64 {
    tolerances::DEFAULT_TAIL_TOL
}

/// The on-disk schema. Family-specific keys are optional and validated
/// against the chosen `statistics` family; unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Diagonal coefficients `eps_1..eps_p0` (may be empty).
    pub epsilon: Vec<f64>,
    /// Off-diagonal coefficients `A_0..A_s0`; their sum is the gauge rate
    /// `lambda` and must be positive.
    pub a: Vec<f64>,
    /// One of `custom`, `coherent`, `binomial`, `negative-binomial`.
    pub statistics: String,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_mag: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes_re: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes_im: Option<Vec<f64>>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_variable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_points: Option<usize>,

    #[serde(default = "default_quadrature_steps")]
    pub quadrature_steps: usize,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
    /// Output directory; the CLI `--out` flag overrides it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    /// Seed for the randomized `verify` subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| ConfigError(format!("cannot parse {}: {e}", path.display())))
    }

    /// Checks every invariant and resolves the family and sweep axis.
    pub fn validate(&self) -> Result<ValidatedRun, ConfigError> {
        let params = QesParams::new(self.epsilon.clone(), self.a.clone())
            .map_err(|e| ConfigError(e.to_string()))?;
        let lambda = params.lambda();
        if !(lambda > 0.0) {
            return Err(ConfigError(format!(
                "lambda = sum of the a-coefficients is {lambda}; the gauge construction \
                 f(t) = lambda*t with lambda*T = 2*pi requires lambda > 0"
            )));
        }

        let statistics = self.statistics_spec()?;

        if self.quadrature_steps < 16 || !self.quadrature_steps.is_multiple_of(2) {
            return Err(ConfigError(format!(
                "quadrature_steps = {} must be even and at least 16",
                self.quadrature_steps
            )));
        }
        if !(self.tail_tol > 0.0 && self.tail_tol < 1.0) {
            return Err(ConfigError(format!(
                "tail_tol = {} must lie strictly between 0 and 1",
                self.tail_tol
            )));
        }

        let sweep = self.sweep_axis(&statistics)?;

        Ok(ValidatedRun {
            config: self.clone(),
            params,
            statistics,
            sweep,
            quadrature_steps: self.quadrature_steps,
            tail_tol: self.tail_tol,
        })
    }

    fn statistics_spec(&self) -> Result<StatisticsSpec, ConfigError> {
        let forbid = |cond: bool, key: &str| {
            if cond {
                Err(ConfigError(format!(
                    "key `{key}` does not apply to statistics = \"{}\"",
                    self.statistics
                )))
            } else {
                Ok(())
            }
        };
        let spec = match self.statistics.as_str() {
            "custom" => {
                forbid(self.alpha_mag.is_some(), "alpha_mag")?;
                forbid(self.theta.is_some(), "theta")?;
                forbid(self.trials.is_some(), "trials")?;
                forbid(self.prob.is_some(), "prob")?;
                forbid(self.w.is_some(), "w")?;
                forbid(self.q.is_some(), "q")?;
                let re = self
                    .amplitudes_re
                    .as_ref()
                    .ok_or_else(|| ConfigError("custom statistics needs `amplitudes_re`".into()))?;
                let im = match &self.amplitudes_im {
                    Some(im) => {
                        if im.len() != re.len() {
                            return Err(ConfigError(format!(
                                "amplitudes_re has {} entries but amplitudes_im has {}",
                                re.len(),
                                im.len()
                            )));
                        }
                        im.clone()
                    }
                    None => vec![0.0; re.len()],
                };
                let amplitudes = re
                    .iter()
                    .zip(im.iter())
                    .map(|(&r, &i)| Complex64::new(r, i))
                    .collect();
                StatisticsSpec::Custom { amplitudes }
            }
            "coherent" => {
                forbid(self.trials.is_some(), "trials")?;
                forbid(self.prob.is_some(), "prob")?;
                forbid(self.w.is_some(), "w")?;
                forbid(self.q.is_some(), "q")?;
                forbid(self.amplitudes_re.is_some(), "amplitudes_re")?;
                StatisticsSpec::Coherent {
                    alpha_mag: self.alpha_mag.ok_or_else(|| {
                        ConfigError("coherent statistics needs `alpha_mag`".into())
                    })?,
                    theta: self.theta.unwrap_or(0.0),
                }
            }
            "binomial" => {
                forbid(self.alpha_mag.is_some(), "alpha_mag")?;
                forbid(self.w.is_some(), "w")?;
                forbid(self.q.is_some(), "q")?;
                forbid(self.amplitudes_re.is_some(), "amplitudes_re")?;
                StatisticsSpec::Binomial {
                    trials: self
                        .trials
                        .ok_or_else(|| ConfigError("binomial statistics needs `trials`".into()))?,
                    prob: self
                        .prob
                        .ok_or_else(|| ConfigError("binomial statistics needs `prob`".into()))?,
                    theta: self.theta.unwrap_or(0.0),
                }
            }
            "negative-binomial" => {
                forbid(self.alpha_mag.is_some(), "alpha_mag")?;
                forbid(self.trials.is_some(), "trials")?;
                forbid(self.prob.is_some(), "prob")?;
                forbid(self.amplitudes_re.is_some(), "amplitudes_re")?;
                StatisticsSpec::NegativeBinomial {
                    w: self.w.ok_or_else(|| {
                        ConfigError("negative-binomial statistics needs `w`".into())
                    })?,
                    q: self.q.ok_or_else(|| {
                        ConfigError("negative-binomial statistics needs `q`".into())
                    })?,
                    theta: self.theta.unwrap_or(0.0),
                }
            }
            other => {
                return Err(ConfigError(format!(
                    "unknown statistics family \"{other}\" (expected custom, coherent, \
                     binomial, or negative-binomial)"
                )))
            }
        };
        spec.validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(spec)
    }

    fn sweep_axis(&self, statistics: &StatisticsSpec) -> Result<Option<SweepAxis>, ConfigError> {
        let pieces = [
            self.sweep_variable.is_some(),
            self.sweep_start.is_some(),
            self.sweep_stop.is_some(),
            self.sweep_points.is_some(),
        ];
        if pieces.iter().all(|p| !p) {
            return Ok(None);
        }
        if !pieces.iter().all(|p| *p) {
            return Err(ConfigError(
                "a sweep needs all of sweep_variable, sweep_start, sweep_stop, sweep_points".into(),
            ));
        }
        let variable = SweepVariable::parse(self.sweep_variable.as_deref().unwrap())?;
        let start = self.sweep_start.unwrap();
        let stop = self.sweep_stop.unwrap();
        let points = self.sweep_points.unwrap();
        if !start.is_finite() || !stop.is_finite() {
            return Err(ConfigError("sweep endpoints must be finite".into()));
        }
        if !(start < stop) {
            return Err(ConfigError(format!(
                "sweep_start = {start} must be strictly less than sweep_stop = {stop}"
            )));
        }
        if points < 2 {
            return Err(ConfigError(format!(
                "sweep_points = {points} must be at least 2"
            )));
        }

        match variable {
            SweepVariable::Theta => {
                if matches!(statistics, StatisticsSpec::Custom { .. }) {
                    return Err(ConfigError(
                        "theta sweeps need a statistics family with a phase ramp \
                         (coherent, binomial, or negative-binomial)"
                            .into(),
                    ));
                }
            }
            SweepVariable::AlphaMag => {
                if !matches!(statistics, StatisticsSpec::Coherent { .. }) {
                    return Err(ConfigError(
                        "alpha_mag sweeps apply to coherent statistics only".into(),
                    ));
                }
                if start < 0.0 {
                    return Err(ConfigError(
                        "alpha_mag sweeps need non-negative endpoints".into(),
                    ));
                }
            }
            SweepVariable::ACoeff(k) => {
                if k >= self.a.len() {
                    return Err(ConfigError(format!(
                        "sweep variable a[{k}] is out of range: the config defines {} \
                         a-coefficients",
                        self.a.len()
                    )));
                }
                // lambda is linear in the swept entry; positivity at both
                // endpoints covers the whole grid.
                let base: f64 = self.a.iter().sum::<f64>() - self.a[k];
                for endpoint in [start, stop] {
                    if !(base + endpoint > 0.0) {
                        return Err(ConfigError(format!(
                            "sweeping a[{k}] to {endpoint} drives lambda to {}; \
                             lambda > 0 is required at every grid point",
                            base + endpoint
                        )));
                    }
                }
            }
            SweepVariable::Epsilon(k) => {
                if k >= self.epsilon.len() {
                    return Err(ConfigError(format!(
                        "sweep variable epsilon[{k}] is out of range: the config defines {} \
                         epsilon-coefficients",
                        self.epsilon.len()
                    )));
                }
            }
        }

        Ok(Some(SweepAxis {
            variable,
            start,
            stop,
            points,
        }))
    }
}

/// A parsed and validated run.
#[derive(Debug, Clone)]
pub struct ValidatedRun {
    pub config: RunConfig,
    pub params: QesParams,
    pub statistics: StatisticsSpec,
    pub sweep: Option<SweepAxis>,
    pub quadrature_steps: usize,
    pub tail_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Theta,
    AlphaMag,
    ACoeff(usize),
    Epsilon(usize),
}

impl SweepVariable {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        if text == "theta" {
            return Ok(Self::Theta);
        }
        if text == "alpha_mag" {
            return Ok(Self::AlphaMag);
        }
        let indexed = |prefix: &str| -> Option<Result<usize, ConfigError>> {
            let rest = text.strip_prefix(prefix)?.strip_prefix('[')?;
            let digits = rest.strip_suffix(']')?;
            Some(
                digits
                    .parse::<usize>()
                    .map_err(|_| ConfigError(format!("bad index in sweep variable `{text}`"))),
            )
        };
        if let Some(k) = indexed("a") {
            return Ok(Self::ACoeff(k?));
        }
        if let Some(k) = indexed("epsilon") {
            return Ok(Self::Epsilon(k?));
        }
        Err(ConfigError(format!(
            "unknown sweep variable `{text}` (expected theta, alpha_mag, a[k], or epsilon[k])"
        )))
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Theta => write!(f, "theta"),
            Self::AlphaMag => write!(f, "alpha_mag"),
            Self::ACoeff(k) => write!(f, "a[{k}]"),
            Self::Epsilon(k) => write!(f, "epsilon[{k}]"),
        }
    }
}

/// Inclusive uniform grid over `[start, stop]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepAxis {
    pub fn grid(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        (0..self.points)
            .map(|i| self.start + span * i as f64 / (self.points - 1) as f64)
            .collect()
    }
}
