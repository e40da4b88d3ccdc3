//! Independent construction oracles used by the verification harness and the
//! test suite. Nothing here shares code with the closed-form builders it
//! checks against.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::evolution::SpectralDecomposition;
use crate::fock::FockState;
use crate::hamiltonian::{GaugeSchedule, QesParams};

/// Dense lowering matrix on `dim` slots: `a[n][n+1] = sqrt(n+1)`.
pub fn lowering_matrix(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for n in 0..dim.saturating_sub(1) {
        a[(n, n + 1)] = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    a
}

/// The Hamiltonian assembled by composing full-size ladder matrices on a
/// padded space and truncating back to `dim` slots. Interior rows (those the
/// padding shields from the cutoff) match the banded closed-form builder;
/// boundary rows generally do not, which is why the library never builds
/// operators this way.
pub fn ladder_composed_dense(params: &QesParams, dim: usize) -> DMatrix<Complex64> {
    let pad = dim + 2 * params.a_coeff.len().max(1);
    let a = lowering_matrix(pad);
    let r = a.adjoint();
    let number = &r * &a;

    let mut h = DMatrix::from_element(pad, pad, Complex64::new(0.0, 0.0));
    let mut number_pow = number.clone();
    for &eps in &params.epsilon {
        h += &number_pow * Complex64::new(eps, 0.0);
        number_pow = &number_pow * &number;
    }
    let a_sq = &a * &a;
    let r_sq = &r * &r;
    let mut number_pow = DMatrix::identity(pad, pad);
    for &coeff in &params.a_coeff {
        let pair = &number_pow * &a_sq + &r_sq * &number_pow;
        h += pair * Complex64::new(coeff, 0.0);
        number_pow = &number_pow * &number;
    }
    h.view((0, 0), (dim, dim)).into_owned()
}

/// Exact value of the discrete phase quadrature, evaluated spectrally.
///
/// In the eigenbasis the gauged trajectory is a sum of pure phases
/// `exp(-i omega_j t)` with `omega_j = lambda + E_j`, so the central
/// difference returns `sin(omega h)/h` per mode, the one-sided endpoint
/// stencils return `(4 sin(omega h) - sin(2 omega h))/(2h)`, and the Simpson
/// weights put `T - 2h/3` on the (constant) interior value and `2h/3` on the
/// endpoints. Only pipeline roundoff separates this number from
/// [`crate::phase::geometric_phase_quadrature`]; the difference between this
/// number and the closed-form phase is the provable second-order
/// finite-difference error.
pub fn predicted_quadrature_phase(
    sd: &SpectralDecomposition,
    psi0: &FockState,
    schedule: &GaugeSchedule,
    steps: usize,
) -> Result<f64> {
    let modes = sd.modes(psi0)?;
    let period = schedule.period();
    let h = period / steps as f64;
    let mut interior = 0.0;
    let mut endpoint = 0.0;
    for (c, &e) in modes.iter().zip(sd.eigenvalues().iter()) {
        let weight = c.norm_sqr();
        let x = (schedule.lambda() + e) * h;
        interior += weight * x.sin() / h;
        endpoint += weight * (4.0 * x.sin() - (2.0 * x).sin()) / (2.0 * h);
    }
    Ok((period - 2.0 * h / 3.0) * interior + (2.0 * h / 3.0) * endpoint)
}
