//! Dynamical, geometric, and measured total phases over one gauge period,
//! plus the cyclicity-defect diagnostic.
//!
//! With `f(t) = lambda*t` and `lambda*T = 2*pi`, the dynamical phase is
//! `gamma = -T <H>` and the closed-form geometric phase is
//! `beta = 2*pi + T <H>` written out over the amplitudes, so
//! `gamma + beta = 2*pi` holds as exact algebra. The quadrature route
//! re-derives `beta` from sampled trajectories through finite differences
//! and shares no algebra with the closed form; it is the independent check.
//!
//! Generic evolutions are not cyclic: `|psi(T)>` need not be a phase times
//! `|psi(0)>`. The measured total phase and the cyclicity defect are
//! reported side by side with the gauge identity, without reconciliation.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{decompose, SpectralDecomposition};
use crate::fock::FockState;
use crate::hamiltonian::{
    build_hamiltonian, lambda_and_period, BandedHermitianOperator, GaugeSchedule, QesParams,
};
use crate::statistics::{amplitudes, StatisticsSpec};
use crate::tolerances;

/// `gamma = -T <psi0|H|psi0>` (the integrand is constant because `H` is
/// time-independent). See [`dynamical_phase_quadrature`] for the
/// cross-validating trajectory integral.
pub fn dynamical_phase(
    h: &BandedHermitianOperator,
    psi0: &FockState,
    schedule: &GaugeSchedule,
) -> Result<f64> {
    Ok(-schedule.period() * h.expectation(psi0)?)
}

/// `gamma` by composite Simpson over `<H>` along the sampled trajectory.
/// Cross-validation only; it should match [`dynamical_phase`] to roundoff.
pub fn dynamical_phase_quadrature(
    h: &BandedHermitianOperator,
    sd: &SpectralDecomposition,
    psi0: &FockState,
    schedule: &GaugeSchedule,
    steps: usize,
) -> Result<f64> {
    let samples = sd.sample_trajectory(psi0, schedule, steps)?;
    let dt = schedule.period() / steps as f64;
    let mut acc = 0.0;
    for (k, sample) in samples.iter().enumerate() {
        let weight = simpson_weight(k, steps);
        acc += weight * h.expectation(&sample.state)?;
    }
    Ok(-acc * dt / 3.0)
}

fn simpson_weight(k: usize, steps: usize) -> f64 {
    if k == 0 || k == steps {
        1.0
    } else if k % 2 == 1 {
        4.0
    } else {
        2.0
    }
}

/// The pieces of the closed-form geometric phase.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormBreakdown {
    /// `sum_n |C_n|^2 sum_p eps_p n^p`.
    pub diagonal_sum: f64,
    /// Sum of the two off-diagonal series. They are conjugates term by term,
    /// so the imaginary part is a pure bug detector.
    pub cross_sum: Complex64,
    pub beta: f64,
}

/// Closed-form geometric phase
/// `beta = 2*pi + T * [sum_n |C_n|^2 sum_p eps_p n^p
///                     + sum_n conj(C_{n-2}) C_n sum_s A_s (n-2)^s sqrt(n(n-1))
///                     + sum_n conj(C_{n+2}) C_n sum_s A_s n^s sqrt((n+1)(n+2))]`.
///
/// Amplitudes beyond the truncation are treated as zero; for the two
/// quadrature routes to agree, the state's support should sit at least two
/// slots below the cutoff ([`full_report`] pads states to guarantee that).
pub fn geometric_phase_closed(params: &QesParams, psi0: &FockState) -> Result<f64> {
    Ok(closed_form_breakdown(params, psi0)?.beta)
}

/// Computes the closed form and exposes its internals for verification.
pub fn closed_form_breakdown(params: &QesParams, psi0: &FockState) -> Result<ClosedFormBreakdown> {
    let schedule = lambda_and_period(params)?;
    let dim = psi0.dim();
    let amps = psi0.amplitudes();

    let diagonal_sum: f64 = (0..dim)
        .map(|n| amps[n].norm_sqr() * params.diag_entry(n))
        .sum();

    // The raising series (pairing |n> with |n+2>) and the lowering series
    // (pairing |m> with |m-2>, m = n+2) run over the same index set with the
    // same real weight, so accumulating them in one loop keeps the partial
    // sums exact conjugates in floating point.
    let mut raising_series = Complex64::new(0.0, 0.0);
    let mut lowering_series = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for n in 0..dim.saturating_sub(2) {
        let weight = params.band_entry(n);
        let up = amps[n + 2].conj() * amps[n] * weight;
        let down = amps[n].conj() * amps[n + 2] * weight;
        raising_series += up;
        lowering_series += down;
        scale += up.norm() + down.norm();
    }
    let cross_sum = raising_series + lowering_series;

    let threshold = tolerances::CLOSED_FORM_RESIDUE * scale.max(1.0);
    if !(cross_sum.im.abs() <= threshold) {
        return Err(Error::ResidueTooLarge {
            residue: cross_sum.im.abs(),
            threshold,
            context: "closed-form off-diagonal series",
        });
    }

    Ok(ClosedFormBreakdown {
        diagonal_sum,
        cross_sum,
        beta: TAU + schedule.period() * (diagonal_sum + cross_sum.re),
    })
}

/// Geometric phase by the independent quadrature route: gauged trajectory
/// samples, `d|psi~>/dt` by second-order central differences (one-sided
/// second-order stencils at the endpoints), `<psi~| i d/dt |psi~>` integrated
/// by composite Simpson.
///
/// This deliberately avoids the analytic relation
/// `i d|psi~>/dt = (lambda + H)|psi~>` so it shares no algebra with the
/// closed form. The error is second order in `T/steps`.
pub fn geometric_phase_quadrature(
    sd: &SpectralDecomposition,
    psi0: &FockState,
    schedule: &GaugeSchedule,
    steps: usize,
) -> Result<f64> {
    if steps < 16 || !steps.is_multiple_of(2) {
        return Err(Error::StepCount {
            steps,
            reason: "the phase quadrature needs an even step count >= 16",
        });
    }
    let samples = sd.sample_trajectory(psi0, schedule, steps)?;
    let dt = schedule.period() / steps as f64;
    let two_dt = 2.0 * dt;
    let i = Complex64::new(0.0, 1.0);

    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=steps {
        let derivative = if k == 0 {
            (samples[1].gauged_state.amplitudes().scale(4.0)
                - samples[0].gauged_state.amplitudes().scale(3.0)
                - samples[2].gauged_state.amplitudes())
            .unscale(two_dt)
        } else if k == steps {
            (samples[k].gauged_state.amplitudes().scale(3.0)
                - samples[k - 1].gauged_state.amplitudes().scale(4.0)
                + samples[k - 2].gauged_state.amplitudes())
            .unscale(two_dt)
        } else {
            (samples[k + 1].gauged_state.amplitudes() - samples[k - 1].gauged_state.amplitudes())
                .unscale(two_dt)
        };
        let integrand = i * samples[k].gauged_state.amplitudes().dotc(&derivative);
        acc += integrand.scale(simpson_weight(k, steps));
    }
    let integral = acc.scale(dt / 3.0);

    if !(integral.im.abs() <= tolerances::QUADRATURE_RESIDUE) {
        return Err(Error::ResidueTooLarge {
            residue: integral.im.abs(),
            threshold: tolerances::QUADRATURE_RESIDUE,
            context: "phase quadrature integral",
        });
    }
    Ok(integral.re)
}

/// Closed-form geometric phase specialized to a coherent input:
/// `beta = 2*pi + T exp(-|alpha|^2) sum_n (|alpha|^(2n)/n!)
///         [sum_p eps_p n^p + sum_s 2|alpha|^2 A_s n^s cos(2 theta)]`,
/// summed until the Poisson tail drops below `tail_tol`.
pub fn geometric_phase_coherent(
    params: &QesParams,
    alpha_mag: f64,
    theta: f64,
    tail_tol: f64,
) -> Result<f64> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::ParamOutOfRange(format!(
            "tail tolerance {tail_tol} must lie in (0, 1)"
        )));
    }
    if !alpha_mag.is_finite() || alpha_mag < 0.0 {
        return Err(Error::ParamOutOfRange(format!(
            "coherent amplitude magnitude {alpha_mag} must be finite and >= 0"
        )));
    }
    let schedule = lambda_and_period(params)?;
    let alpha_sq = alpha_mag * alpha_mag;
    let cos_2theta = (2.0 * theta).cos();

    let mut pmf = (-alpha_sq).exp();
    let mut cumulative = 0.0;
    let mut acc = 0.0;
    let mut n = 0usize;
    loop {
        let bracket = params.diag_entry(n) + 2.0 * alpha_sq * params.a_poly(n) * cos_2theta;
        acc += pmf * bracket;
        cumulative += pmf;
        if 1.0 - cumulative <= tail_tol {
            break;
        }
        if n + 1 >= tolerances::DEFAULT_MAX_DIM {
            return Err(Error::TailUnreachable {
                tail: (1.0 - cumulative).max(0.0),
                tol: tail_tol,
                max_dim: tolerances::DEFAULT_MAX_DIM,
            });
        }
        pmf *= alpha_sq / (n + 1) as f64;
        n += 1;
    }
    Ok(TAU + schedule.period() * acc)
}

/// Measured total phase and cyclicity defect of an evolution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CyclicityCheck {
    /// `arg <psi0|psi_T>` in `(-pi, pi]`; zero when undefined.
    pub phi_measured: f64,
    /// `|psi_T - exp(i phi) psi0|_2` at the best-fit phase; zero exactly for
    /// a cyclic evolution, `sqrt(2)` for orthogonal states.
    pub defect: f64,
    /// False when `|<psi0|psi_T>|` is too small for the phase to mean
    /// anything.
    pub phase_defined: bool,
}

/// Compares the evolved state against the initial one.
pub fn total_phase_and_cyclicity(psi0: &FockState, psi_t: &FockState) -> Result<CyclicityCheck> {
    let overlap = psi0.inner(psi_t)?;
    let phase_defined = overlap.norm() >= tolerances::OVERLAP_DEFINED;
    let phi_measured = if phase_defined {
        let arg = overlap.arg();
        if arg <= -PI {
            arg + TAU
        } else {
            arg
        }
    } else {
        0.0
    };
    let fitted = psi0.amplitudes() * Complex64::from_polar(1.0, phi_measured);
    let defect = (psi_t.amplitudes() - fitted).norm();
    Ok(CyclicityCheck {
        phi_measured,
        defect,
        phase_defined,
    })
}

/// Everything the engine can say about one parameter point.
///
/// `beta` values are plain reals, never reduced mod 2*pi (the closed form is
/// `2*pi` plus an unbounded term); `beta_closed_mod_2pi` is a display
/// companion only.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseReport {
    pub lambda: f64,
    pub period_t: f64,
    pub gamma_dynamical: f64,
    pub beta_closed: f64,
    pub beta_closed_mod_2pi: f64,
    pub beta_quadrature: f64,
    pub beta_coherent: Option<f64>,
    /// `gamma + beta_closed`; equals `2*pi` up to roundoff by construction.
    pub phi_gauge_identity: f64,
    pub phi_measured: f64,
    pub phase_defined: bool,
    pub cyclicity_defect: f64,
    pub quadrature_steps: usize,
}

/// Runs the whole pipeline for one parameter point: builds the initial state
/// (padded two slots per off-diagonal order above its support so operator
/// application never touches the cutoff), the Hamiltonian, and every phase
/// quantity, and asserts the gauge identity.
pub fn full_report(
    params: &QesParams,
    spec: &StatisticsSpec,
    steps: usize,
    tail_tol: f64,
) -> Result<PhaseReport> {
    let schedule = lambda_and_period(params)?;
    let (state, _tail) = amplitudes(spec, tail_tol)?;
    let dim = state.dim() + params.support_margin();
    let psi0 = state.zero_padded(dim)?;

    let h = build_hamiltonian(params, dim)?;
    let sd = decompose(&h)?;

    let gamma_dynamical = dynamical_phase(&h, &psi0, &schedule)?;
    let beta_closed = geometric_phase_closed(params, &psi0)?;
    let phi_gauge_identity = gamma_dynamical + beta_closed;
    let identity_defect = (phi_gauge_identity - TAU).abs();
    if !(identity_defect <= tolerances::GAUGE_IDENTITY) {
        return Err(Error::GaugeIdentity {
            value: phi_gauge_identity,
            defect: identity_defect,
            threshold: tolerances::GAUGE_IDENTITY,
        });
    }

    let beta_quadrature = geometric_phase_quadrature(&sd, &psi0, &schedule, steps)?;
    let beta_coherent = match spec {
        StatisticsSpec::Coherent { alpha_mag, theta } => Some(geometric_phase_coherent(
            params, *alpha_mag, *theta, tail_tol,
        )?),
        _ => None,
    };

    let psi_t = sd.evolve(&psi0, schedule.period())?;
    let cyclicity = total_phase_and_cyclicity(&psi0, &psi_t)?;

    Ok(PhaseReport {
        lambda: schedule.lambda(),
        period_t: schedule.period(),
        gamma_dynamical,
        beta_closed,
        beta_closed_mod_2pi: beta_closed.rem_euclid(TAU),
        beta_quadrature,
        beta_coherent,
        phi_gauge_identity,
        phi_measured: cyclicity.phi_measured,
        phase_defined: cyclicity.phase_defined,
        cyclicity_defect: cyclicity.defect,
        quadrature_steps: steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::predicted_quadrature_phase;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn setup(
        epsilon: Vec<f64>,
        a_coeff: Vec<f64>,
        dim: usize,
    ) -> (
        QesParams,
        BandedHermitianOperator,
        SpectralDecomposition,
        GaugeSchedule,
    ) {
        let params = QesParams::new(epsilon, a_coeff).unwrap();
        let h = build_hamiltonian(&params, dim).unwrap();
        let sd = decompose(&h).unwrap();
        let schedule = lambda_and_period(&params).unwrap();
        (params, h, sd, schedule)
    }

    fn zero_padded_superposition(entries: &[(usize, Complex64)], dim: usize) -> FockState {
        let mut amps = vec![c(0.0, 0.0); dim];
        for &(n, z) in entries {
            amps[n] = z;
        }
        FockState::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn dynamical_phase_vacuum() {
        let (_, h, _, schedule) = setup(vec![1.0], vec![1.0], 8);
        let psi = FockState::basis(8, 0).unwrap();
        let gamma = dynamical_phase(&h, &psi, &schedule).unwrap();
        assert_abs_diff_eq!(gamma, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn dynamical_phase_single_photon() {
        let (_, h, sd, schedule) = setup(vec![1.0], vec![1.0], 8);
        let psi = FockState::basis(8, 1).unwrap();
        let gamma = dynamical_phase(&h, &psi, &schedule).unwrap();
        assert_abs_diff_eq!(gamma, -TAU, epsilon = 1e-12);
        let gamma_quad = dynamical_phase_quadrature(&h, &sd, &psi, &schedule, 64).unwrap();
        assert_abs_diff_eq!(gamma_quad, gamma, epsilon = 1e-10);
    }

    #[test]
    fn dynamical_phase_superposition() {
        let (_, h, sd, schedule) = setup(vec![0.0], vec![1.0], 8);
        let inv = 1.0 / 2.0f64.sqrt();
        let psi = zero_padded_superposition(&[(0, c(inv, 0.0)), (2, c(inv, 0.0))], 8);
        let gamma = dynamical_phase(&h, &psi, &schedule).unwrap();
        assert_abs_diff_eq!(gamma, -TAU * 2.0f64.sqrt(), epsilon = 1e-12);
        let gamma_quad = dynamical_phase_quadrature(&h, &sd, &psi, &schedule, 64).unwrap();
        assert_abs_diff_eq!(gamma_quad, gamma, epsilon = 1e-10);
    }

    #[test]
    fn closed_form_vacuum() {
        let params = QesParams::new(vec![1.0], vec![1.0]).unwrap();
        let psi = FockState::basis(8, 0).unwrap();
        let beta = geometric_phase_closed(&params, &psi).unwrap();
        assert_abs_diff_eq!(beta, TAU, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_single_photon() {
        // beta = 2*pi + T*eps_1*1, off-diagonal terms vanish on a basis state.
        let params = QesParams::new(vec![1.0], vec![1.0]).unwrap();
        let psi = FockState::basis(8, 1).unwrap();
        let beta = geometric_phase_closed(&params, &psi).unwrap();
        assert_abs_diff_eq!(beta, 2.0 * TAU, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_cross_terms() {
        // (|0> + |2>)/sqrt(2), eps = 0, A0 = 1: the two n = 2 cross terms
        // each contribute sqrt(2)/2, so beta = 2*pi (1 + sqrt(2)).
        let params = QesParams::new(vec![0.0], vec![1.0]).unwrap();
        let inv = 1.0 / 2.0f64.sqrt();
        let psi = zero_padded_superposition(&[(0, c(inv, 0.0)), (2, c(inv, 0.0))], 8);
        let beta = geometric_phase_closed(&params, &psi).unwrap();
        assert_abs_diff_eq!(beta, TAU * (1.0 + 2.0f64.sqrt()), epsilon = 1e-12);
    }

    #[test]
    fn quadrature_matches_spectral_prediction() {
        let cases: Vec<(QesParams, FockState)> = vec![
            (
                QesParams::new(vec![1.0], vec![1.0]).unwrap(),
                FockState::basis(12, 0).unwrap(),
            ),
            (
                QesParams::new(vec![1.0], vec![1.0]).unwrap(),
                FockState::basis(12, 1).unwrap(),
            ),
            (
                QesParams::new(vec![0.0], vec![1.0]).unwrap(),
                zero_padded_superposition(
                    &[
                        (0, c(1.0 / 2.0f64.sqrt(), 0.0)),
                        (2, c(1.0 / 2.0f64.sqrt(), 0.0)),
                    ],
                    12,
                ),
            ),
        ];
        for (params, psi) in cases {
            let h = build_hamiltonian(&params, psi.dim()).unwrap();
            let sd = decompose(&h).unwrap();
            let schedule = lambda_and_period(&params).unwrap();
            let beta_c = geometric_phase_closed(&params, &psi).unwrap();
            let steps = 1024;
            let beta_q = geometric_phase_quadrature(&sd, &psi, &schedule, steps).unwrap();
            let beta_pred = predicted_quadrature_phase(&sd, &psi, &schedule, steps).unwrap();
            // The pipeline reproduces its spectral prediction to roundoff...
            assert!(
                (beta_q - beta_pred).abs() <= 1e-10 * (1.0 + beta_c.abs()),
                "quadrature {beta_q} vs prediction {beta_pred}"
            );
            // ...and the gap to the closed form is exactly the predicted
            // finite-difference error, second order in dt.
            let gap = (beta_q - beta_c).abs();
            let predicted_gap = (beta_pred - beta_c).abs();
            assert!(
                (gap - predicted_gap).abs() <= 1e-10 * (1.0 + beta_c.abs()),
                "gap {gap} vs predicted gap {predicted_gap}"
            );
        }
    }

    #[test]
    fn quadrature_error_halves_quadratically() {
        let params = QesParams::new(vec![0.0], vec![1.0]).unwrap();
        let inv = 1.0 / 2.0f64.sqrt();
        let psi = zero_padded_superposition(&[(0, c(inv, 0.0)), (2, c(inv, 0.0))], 16);
        let h = build_hamiltonian(&params, 16).unwrap();
        let sd = decompose(&h).unwrap();
        let schedule = lambda_and_period(&params).unwrap();
        let beta_c = geometric_phase_closed(&params, &psi).unwrap();

        let mut errors = Vec::new();
        for steps in [128usize, 256, 512, 1024] {
            let beta_q = geometric_phase_quadrature(&sd, &psi, &schedule, steps).unwrap();
            errors.push((beta_q - beta_c).abs());
        }
        for pair in errors.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!(
                (3.4..4.6).contains(&ratio),
                "halving dt should shrink the error ~4x, got {ratio}"
            );
        }
    }

    #[test]
    fn quadrature_band_only_vacuum() {
        // A-only Hamiltonian on the vacuum: beta = 2*pi exactly in closed
        // form; the finite-difference route carries its second-order error,
        // which the spectral prediction reproduces to roundoff.
        let params = QesParams::new(vec![], vec![1.0]).unwrap();
        let psi = FockState::basis(8, 0).unwrap();
        let h = build_hamiltonian(&params, 8).unwrap();
        let sd = decompose(&h).unwrap();
        let schedule = lambda_and_period(&params).unwrap();
        let beta_q = geometric_phase_quadrature(&sd, &psi, &schedule, 256).unwrap();
        let beta_pred = predicted_quadrature_phase(&sd, &psi, &schedule, 256).unwrap();
        assert!((beta_q - TAU).abs() <= 1e-2);
        assert!((beta_q - beta_pred).abs() <= 1e-11);
    }

    #[test]
    fn quadrature_step_validation() {
        let (_, _, sd, schedule) = setup(vec![1.0], vec![1.0], 8);
        let psi = FockState::basis(8, 0).unwrap();
        assert!(geometric_phase_quadrature(&sd, &psi, &schedule, 8).is_err());
        assert!(geometric_phase_quadrature(&sd, &psi, &schedule, 17).is_err());
    }

    #[test]
    fn coherent_vacuum_limit() {
        let params = QesParams::new(vec![1.0], vec![0.1]).unwrap();
        let beta = geometric_phase_coherent(&params, 0.0, 0.0, 1e-12).unwrap();
        assert_abs_diff_eq!(beta, TAU, epsilon = 1e-12);
    }

    #[test]
    fn coherent_quarter_pi_kills_band_terms() {
        // cos(2 theta) = 0 at theta = pi/4; with eps = [1], A = [0.1] and
        // |alpha|^2 = 1 the Poisson mean gives beta = 2*pi + 20*pi = 22*pi.
        let params = QesParams::new(vec![1.0], vec![0.1]).unwrap();
        let beta = geometric_phase_coherent(&params, 1.0, PI / 4.0, 1e-12).unwrap();
        assert_abs_diff_eq!(beta, 22.0 * PI, epsilon = 1e-6);
    }

    #[test]
    fn coherent_route_matches_closed_route() {
        let params = QesParams::new(vec![1.0], vec![0.1]).unwrap();
        for alpha_mag in [0.5, 1.0, 2.0] {
            for k in 0..8 {
                let theta = k as f64 * PI / 4.0;
                let spec = StatisticsSpec::Coherent { alpha_mag, theta };
                let (state, _) = amplitudes(&spec, 1e-12).unwrap();
                let psi = state.zero_padded(state.dim() + 2).unwrap();
                let closed = geometric_phase_closed(&params, &psi).unwrap();
                let coherent = geometric_phase_coherent(&params, alpha_mag, theta, 1e-12).unwrap();
                assert!(
                    (closed - coherent).abs() <= 1e-8,
                    "alpha_mag {alpha_mag}, theta {theta}: {closed} vs {coherent}"
                );
            }
        }
    }

    #[test]
    fn total_phase_constructed_cyclic_case() {
        let psi0 = FockState::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let psi_t = psi0.with_global_phase(0.3);
        let check = total_phase_and_cyclicity(&psi0, &psi_t).unwrap();
        assert!(check.phase_defined);
        assert_abs_diff_eq!(check.phi_measured, 0.3, epsilon = 1e-14);
        assert!(check.defect <= 1e-14);
    }

    #[test]
    fn total_phase_orthogonal_states() {
        let psi0 = FockState::basis(4, 0).unwrap();
        let psi_t = FockState::basis(4, 1).unwrap();
        let check = total_phase_and_cyclicity(&psi0, &psi_t).unwrap();
        assert!(!check.phase_defined);
        assert_abs_diff_eq!(check.defect, 2.0f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn total_phase_range_is_half_open() {
        let psi0 = FockState::basis(2, 0).unwrap();
        let psi_t = psi0.with_global_phase(PI);
        let check = total_phase_and_cyclicity(&psi0, &psi_t).unwrap();
        assert!(check.phi_measured > -PI && check.phi_measured <= PI);
        assert_abs_diff_eq!(check.phi_measured.abs(), PI, epsilon = 1e-12);
    }

    #[test]
    fn generic_instance_has_nonzero_defect() {
        let params = QesParams::new(vec![0.3], vec![0.4]).unwrap();
        let spec = StatisticsSpec::Coherent {
            alpha_mag: 1.0,
            theta: 0.3,
        };
        let report = full_report(&params, &spec, 64, 1e-12).unwrap();
        assert!(report.cyclicity_defect > 0.0);
        assert!(report.phase_defined);
    }

    #[test]
    fn full_report_trivial_vacuum() {
        let params = QesParams::new(vec![1.0], vec![1.0]).unwrap();
        let spec = StatisticsSpec::Custom {
            amplitudes: vec![c(1.0, 0.0)],
        };
        let report = full_report(&params, &spec, 64, 1e-12).unwrap();
        assert_abs_diff_eq!(report.gamma_dynamical, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(report.beta_closed, TAU, epsilon = 1e-12);
        assert_abs_diff_eq!(report.phi_gauge_identity, TAU, epsilon = 1e-12);
        assert!(report.beta_coherent.is_none());
    }

    #[test]
    fn full_report_coherent_routes_agree() {
        let params = QesParams::new(vec![1.0], vec![0.1]).unwrap();
        let spec = StatisticsSpec::Coherent {
            alpha_mag: 1.0,
            theta: 0.0,
        };
        let report = full_report(&params, &spec, 128, 1e-12).unwrap();
        let coherent = report.beta_coherent.expect("coherent route populated");
        assert!((coherent - report.beta_closed).abs() <= 1e-8);
        assert!((report.gamma_dynamical + report.beta_closed - TAU).abs() <= 1e-10);
    }

    #[test]
    fn full_report_binomial_routes_consistent() {
        let params = QesParams::new(vec![1.0], vec![1.0]).unwrap();
        let spec = StatisticsSpec::Binomial {
            trials: 4,
            prob: 0.5,
            theta: 0.0,
        };
        let steps = 2048;
        let report = full_report(&params, &spec, steps, 1e-12).unwrap();
        assert!((report.gamma_dynamical + report.beta_closed - TAU).abs() <= 1e-10);
        assert!(report.beta_coherent.is_none());

        // The quadrature route differs from the closed form by exactly the
        // predicted finite-difference error.
        let (state, _) = amplitudes(&spec, 1e-12).unwrap();
        let psi0 = state
            .zero_padded(state.dim() + params.support_margin())
            .unwrap();
        let h = build_hamiltonian(&params, psi0.dim()).unwrap();
        let sd = decompose(&h).unwrap();
        let schedule = lambda_and_period(&params).unwrap();
        let predicted = predicted_quadrature_phase(&sd, &psi0, &schedule, steps).unwrap();
        assert!(
            (report.beta_quadrature - predicted).abs() <= 1e-9 * (1.0 + report.beta_closed.abs())
        );
    }

    fn amplitude_vec() -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3..14)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        // The two off-diagonal series stay conjugate for arbitrary complex
        // amplitude vectors; their sum has no imaginary part.
        #[test]
        fn cross_sum_is_real(raw in amplitude_vec(), a0 in 0.05f64..1.5, a1 in -0.5f64..0.5) {
            let params = QesParams::new(vec![0.2], vec![a0, a1]).unwrap();
            if params.lambda() <= 0.0 {
                return Ok(());
            }
            let amps: Vec<Complex64> = raw.iter().map(|&(re, im)| c(re, im)).collect();
            let psi = match FockState::from_amplitudes(amps) {
                Ok(p) => p,
                Err(_) => return Ok(()),
            };
            let breakdown = closed_form_breakdown(&params, &psi).unwrap();
            prop_assert!(breakdown.cross_sum.im.abs() <= 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        // A global phase on the amplitudes moves nothing in the report.
        #[test]
        fn global_phase_invariance(raw in amplitude_vec(), chi in 0.0f64..TAU) {
            let params = QesParams::new(vec![0.3], vec![0.5]).unwrap();
            let amps: Vec<Complex64> = raw.iter().map(|&(re, im)| c(re, im)).collect();
            let base = match FockState::from_amplitudes(amps) {
                Ok(p) => p,
                Err(_) => return Ok(()),
            };
            let shifted = base.with_global_phase(chi);
            let spec_a = StatisticsSpec::Custom {
                amplitudes: base.amplitudes().iter().copied().collect(),
            };
            let spec_b = StatisticsSpec::Custom {
                amplitudes: shifted.amplitudes().iter().copied().collect(),
            };
            let ra = full_report(&params, &spec_a, 64, 1e-12).unwrap();
            let rb = full_report(&params, &spec_b, 64, 1e-12).unwrap();
            prop_assert!((ra.gamma_dynamical - rb.gamma_dynamical).abs() <= 1e-10);
            prop_assert!((ra.beta_closed - rb.beta_closed).abs() <= 1e-10);
            prop_assert!((ra.beta_quadrature - rb.beta_quadrature).abs() <= 1e-10);
            prop_assert!((ra.phi_measured - rb.phi_measured).abs() <= 1e-10);
            prop_assert!((ra.cyclicity_defect - rb.cyclicity_defect).abs() <= 1e-10);
        }
    }
}
