//! Initial-state factories for the supported photon-statistics families,
//! plus the diagnostics (mean photon number, Mandel Q) that classify them as
//! sub-Poissonian, Poissonian, or super-Poissonian.
//!
//! Coherent amplitudes are `C_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!)` with
//! `alpha = |alpha| exp(i theta)`. The binomial and negative-binomial
//! families only fix `|C_n|^2`; the amplitude phase is a convention,
//! `C_n = sqrt(pmf(n)) exp(i n theta)`, chosen so the phase ramp enters the
//! off-diagonal phase terms exactly the way the coherent `theta` does. For
//! those two families `theta` is an extension knob, not part of the
//! distribution; `|C_n|^2` is independent of it.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::tolerances;

/// Tagged description of an initial-state family.
#[derive(Debug, Clone, PartialEq)]
pub enum StatisticsSpec {
    /// Explicit amplitudes, normalized by the factory.
    Custom { amplitudes: Vec<Complex64> },
    /// Poissonian: coherent state with `alpha = alpha_mag * exp(i theta)`.
    Coherent { alpha_mag: f64, theta: f64 },
    /// Sub-Poissonian: `|C_n|^2 = C(N,n) p^n (1-p)^(N-n)`, exact support
    /// `0..=N`.
    Binomial { trials: u32, prob: f64, theta: f64 },
    /// Super-Poissonian: `|C_n|^2 = C(n+W-1,n) q^n (1-q)^W`.
    NegativeBinomial { w: u32, q: f64, theta: f64 },
}

impl StatisticsSpec {
    pub fn validate(&self) -> Result<()> {
        let check_theta = |theta: f64| {
            if theta.is_finite() {
                Ok(())
            } else {
                Err(Error::NonFinite {
                    context: "phase ramp theta",
                })
            }
        };
        match self {
            Self::Custom { amplitudes } => {
                if amplitudes.is_empty() {
                    return Err(Error::ParamOutOfRange(
                        "custom amplitudes must be non-empty".into(),
                    ));
                }
                Ok(())
            }
            Self::Coherent { alpha_mag, theta } => {
                if !alpha_mag.is_finite() || *alpha_mag < 0.0 {
                    return Err(Error::ParamOutOfRange(format!(
                        "coherent amplitude magnitude {alpha_mag} must be finite and >= 0"
                    )));
                }
                check_theta(*theta)
            }
            Self::Binomial { prob, theta, .. } => {
                if !prob.is_finite() || !(0.0..=1.0).contains(prob) {
                    return Err(Error::ParamOutOfRange(format!(
                        "binomial probability {prob} must lie in [0, 1]"
                    )));
                }
                check_theta(*theta)
            }
            Self::NegativeBinomial { w, q, theta } => {
                if *w < 1 {
                    return Err(Error::ParamOutOfRange(
                        "negative-binomial W must be >= 1".into(),
                    ));
                }
                if !q.is_finite() || !(0.0..1.0).contains(q) {
                    return Err(Error::ParamOutOfRange(format!(
                        "negative-binomial q {q} must lie in [0, 1)"
                    )));
                }
                check_theta(*theta)
            }
        }
    }

    /// The phase-ramp parameter, reported mod 2*pi. `None` for custom states.
    pub fn theta(&self) -> Option<f64> {
        match self {
            Self::Custom { .. } => None,
            Self::Coherent { theta, .. }
            | Self::Binomial { theta, .. }
            | Self::NegativeBinomial { theta, .. } => Some(theta.rem_euclid(TAU)),
        }
    }
}

/// How much probability mass the truncation dropped and how many slots the
/// state uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    pub tail_mass: f64,
    pub dim_used: usize,
}

/// Builds the normalized amplitude vector for a family, auto-sizing the
/// dimension so the truncated probability mass stays within `tail_tol`.
/// Finite-support families get their exact dimension.
pub fn amplitudes(spec: &StatisticsSpec, tail_tol: f64) -> Result<(FockState, TailReport)> {
    amplitudes_with_min_dim(spec, tail_tol, 0)
}

/// Like [`amplitudes`] but never returns fewer than `min_dim` slots; for
/// infinite-support families the extra slots carry the family's actual tail
/// amplitudes rather than zeros. Used to study truncation sensitivity.
pub fn amplitudes_with_min_dim(
    spec: &StatisticsSpec,
    tail_tol: f64,
    min_dim: usize,
) -> Result<(FockState, TailReport)> {
    amplitudes_with_limits(spec, tail_tol, min_dim, tolerances::DEFAULT_MAX_DIM)
}

/// Full control over the truncation window: at least `min_dim` slots, never
/// more than `max_dim`. Auto-sizing that cannot reach `tail_tol` within
/// `max_dim` is an error rather than a silently degraded state.
pub fn amplitudes_with_limits(
    spec: &StatisticsSpec,
    tail_tol: f64,
    min_dim: usize,
    max_dim: usize,
) -> Result<(FockState, TailReport)> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "tail tolerance {tail_tol} must lie in (0, 1)"
        )));
    }
    spec.validate()?;
    let max_dim = max_dim.max(min_dim).max(1);

    let (raw, tail_mass): (Vec<Complex64>, f64) = match spec {
        StatisticsSpec::Custom { amplitudes } => {
            let mut amps = amplitudes.clone();
            if amps.len() < min_dim {
                amps.resize(min_dim, Complex64::new(0.0, 0.0));
            }
            (amps, 0.0)
        }
        StatisticsSpec::Coherent { alpha_mag, theta } => {
            let alpha = Complex64::from_polar(*alpha_mag, *theta);
            let mut amps = Vec::new();
            let mut c = Complex64::new((-alpha_mag * alpha_mag / 2.0).exp(), 0.0);
            let mut cumulative = 0.0;
            let mut n = 0usize;
            loop {
                amps.push(c);
                cumulative += c.norm_sqr();
                let tail = (1.0 - cumulative).max(0.0);
                if tail <= tail_tol && amps.len() >= min_dim.max(1) {
                    break (amps, tail);
                }
                if amps.len() >= max_dim {
                    return Err(Error::TailUnreachable {
                        tail,
                        tol: tail_tol,
                        max_dim,
                    });
                }
                c = c * alpha / ((n + 1) as f64).sqrt();
                n += 1;
            }
        }
        StatisticsSpec::Binomial {
            trials,
            prob,
            theta,
        } => {
            let n_trials = *trials as usize;
            let dim = (n_trials + 1).max(min_dim);
            let mut amps = vec![Complex64::new(0.0, 0.0); dim];
            for (n, pmf) in binomial_pmfs(n_trials, *prob).into_iter().enumerate() {
                amps[n] = Complex64::from_polar(pmf.sqrt(), n as f64 * theta);
            }
            (amps, 0.0)
        }
        StatisticsSpec::NegativeBinomial { w, q, theta } => {
            // ln pmf(0) = W ln(1-q); ln pmf(n+1) = ln pmf(n) + ln(q (n+W)/(n+1)).
            // The accumulator stays in log space, so no factorial is ever
            // materialized no matter how large W or the support get.
            let mut amps = Vec::new();
            let mut cumulative = 0.0;
            let mut n = 0usize;
            let mut ln_pmf = *w as f64 * (1.0 - q).ln();
            let ln_q = if *q > 0.0 { q.ln() } else { f64::NEG_INFINITY };
            loop {
                let pmf = if *q == 0.0 {
                    if n == 0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    ln_pmf.exp()
                };
                amps.push(Complex64::from_polar(pmf.sqrt(), n as f64 * theta));
                cumulative += pmf;
                let tail = (1.0 - cumulative).max(0.0);
                if tail <= tail_tol && amps.len() >= min_dim.max(1) {
                    break (amps, tail);
                }
                if amps.len() >= max_dim {
                    return Err(Error::TailUnreachable {
                        tail,
                        tol: tail_tol,
                        max_dim,
                    });
                }
                ln_pmf += ((n + *w as usize) as f64 / (n + 1) as f64).ln() + ln_q;
                n += 1;
            }
        }
    };

    let dim_used = raw.len();
    let state = FockState::from_amplitudes(raw)?;
    Ok((
        state,
        TailReport {
            tail_mass,
            dim_used,
        },
    ))
}

/// `sum_n n |C_n|^2` for a normalized state.
pub fn mean_photon(psi: &FockState) -> f64 {
    (0..psi.dim())
        .map(|n| n as f64 * psi.amplitude(n).norm_sqr())
        .sum()
}

/// Mandel Q parameter `(<n^2> - <n>^2 - <n>) / <n>`. Negative means
/// sub-Poissonian, zero Poissonian, positive super-Poissonian. Undefined for
/// zero mean photon number.
pub fn mandel_q(psi: &FockState) -> Result<f64> {
    let mean = mean_photon(psi);
    if mean <= 0.0 {
        return Err(Error::ZeroMeanPhoton);
    }
    let second: f64 = (0..psi.dim())
        .map(|n| (n * n) as f64 * psi.amplitude(n).norm_sqr())
        .sum();
    Ok((second - mean * mean - mean) / mean)
}

/// Binomial pmf over the full support, evaluated in log space:
/// `ln pmf(0) = N ln(1-p)`, then
/// `ln pmf(n+1) = ln pmf(n) + ln((N-n)/(n+1)) + ln(p/(1-p))`, so large `N`
/// never forms a factorial. Degenerate endpoints are handled directly.
fn binomial_pmfs(trials: usize, p: f64) -> Vec<f64> {
    let mut pmfs = vec![0.0; trials + 1];
    if p == 0.0 {
        pmfs[0] = 1.0;
        return pmfs;
    }
    if p == 1.0 {
        pmfs[trials] = 1.0;
        return pmfs;
    }
    let ln_odds = (p / (1.0 - p)).ln();
    let mut ln_pmf = trials as f64 * (1.0 - p).ln();
    for (n, pmf) in pmfs.iter_mut().enumerate() {
        *pmf = ln_pmf.exp();
        if n < trials {
            ln_pmf += ((trials - n) as f64 / (n + 1) as f64).ln() + ln_odds;
        }
    }
    pmfs
}
