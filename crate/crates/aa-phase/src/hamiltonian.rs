//! The anharmonic Bose Hamiltonian
//! `H = sum_p eps_p (a^dag a)^p + sum_s A_s [(a^dag a)^s a^2 + a^dag^2 (a^dag a)^s]`
//! as a banded Hermitian operator (bands at offsets 0 and +-2 only), plus the
//! gauge schedule `f(t) = lambda*t` with `lambda = sum_s A_s` and
//! `lambda*T = 2*pi`.
//!
//! Units: `m = 1, omega = 1, hbar = 1`. Both coefficient families are real;
//! the two summands of each `A_s` term are mutual adjoints, so Hermiticity
//! holds exactly iff `A_s` is real.
//!
//! Bands are built from the closed formulas below, never by multiplying
//! truncated ladder matrices, so truncation cannot break Hermiticity at the
//! boundary rows.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::tolerances;

/// Coefficients of the Hamiltonian family: `epsilon[p-1]` multiplies
/// `(a^dag a)^p` for `p = 1..=p0`, `a_coeff[s]` multiplies the `s`-th
/// off-diagonal pair for `s = 0..=s0`. Either list may be empty (that sum is
/// absent). The convention `0^0 = 1` applies in `n^s`: the `s = 0` term of
/// `(a^dag a)^s` is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct QesParams {
    pub epsilon: Vec<f64>,
    pub a_coeff: Vec<f64>,
}

impl QesParams {
    pub fn new(epsilon: Vec<f64>, a_coeff: Vec<f64>) -> Result<Self> {
        let params = Self { epsilon, a_coeff };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self
            .epsilon
            .iter()
            .chain(self.a_coeff.iter())
            .any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite {
                context: "Hamiltonian coefficients",
            });
        }
        Ok(())
    }

    /// Gauge rate `lambda = sum_s A_s`.
    pub fn lambda(&self) -> f64 {
        self.a_coeff.iter().sum()
    }

    /// Diagonal entry `sum_p eps_p n^p`.
    pub fn diag_entry(&self, n: usize) -> f64 {
        let x = n as f64;
        self.epsilon
            .iter()
            .enumerate()
            .map(|(i, &e)| e * x.powi(i as i32 + 1))
            .sum()
    }

    /// `sum_s A_s n^s` with `0^0 = 1`.
    pub fn a_poly(&self, n: usize) -> f64 {
        let x = n as f64;
        self.a_coeff
            .iter()
            .enumerate()
            .map(|(s, &a)| a * x.powi(s as i32))
            .sum()
    }

    /// Off-diagonal entry coupling `|n>` and `|n+2>`:
    /// `sum_s A_s n^s sqrt((n+1)(n+2))`.
    pub fn band_entry(&self, n: usize) -> f64 {
        self.a_poly(n) * (((n + 1) * (n + 2)) as f64).sqrt()
    }

    /// Extra Fock slots to keep above a state's support so that applying `H`
    /// never reaches the truncation boundary.
    pub fn support_margin(&self) -> usize {
        2 * self.a_coeff.len().max(1)
    }
}

/// Hermitian operator with nonzero bands only at offsets 0 and +-2:
/// `H[n][n] = diag[n]`, `H[n+2][n] = band2[n]`, `H[n][n+2] = conj(band2[n])`.
/// Each band entry is stored once, so Hermiticity is exact by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedHermitianOperator {
    diag: Vec<f64>,
    band2: Vec<Complex64>,
}

impl BandedHermitianOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn band2(&self) -> &[Complex64] {
        &self.band2
    }

    /// Dense `(N+1) x (N+1)` matrix reproducing the banded entries exactly.
    pub fn dense_form(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for n in 0..dim {
            m[(n, n)] = Complex64::new(self.diag[n], 0.0);
        }
        for (n, &b) in self.band2.iter().enumerate() {
            m[(n + 2, n)] = b;
            m[(n, n + 2)] = b.conj();
        }
        m
    }

    /// `H|psi>` through the bands. Unnormalized output.
    pub fn apply(&self, psi: &FockState) -> Result<FockState> {
        let dim = self.dim();
        if psi.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: psi.dim(),
                context: "operator application",
            });
        }
        let amps = psi.amplitudes();
        let mut out = nalgebra::DVector::from_element(dim, Complex64::new(0.0, 0.0));
        for n in 0..dim {
            out[n] = self.diag[n] * amps[n];
        }
        for (n, &b) in self.band2.iter().enumerate() {
            out[n + 2] += b * amps[n];
            out[n] += b.conj() * amps[n + 2];
        }
        Ok(FockState::from_raw(out))
    }

    /// `<psi|H|psi>` as a real number. The imaginary residue of the
    /// sesquilinear form is checked against the accumulated term scale and
    /// discarded; a visible residue means the operator is not Hermitian.
    pub fn expectation(&self, psi: &FockState) -> Result<f64> {
        let h_psi = self.apply(psi)?;
        let amps = psi.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for n in 0..self.dim() {
            let term = amps[n].conj() * h_psi.amplitudes()[n];
            acc += term;
            scale += term.norm();
        }
        let threshold = tolerances::EXPECTATION_RESIDUE * scale.max(1.0);
        if !(acc.im.abs() <= threshold) {
            return Err(Error::ResidueTooLarge {
                residue: acc.im.abs(),
                threshold,
                context: "Hermitian expectation value",
            });
        }
        Ok(acc.re)
    }
}

/// Builds the banded operator on `dim` Fock slots.
///
/// `diag[n] = sum_p eps_p n^p`; `band2[n] = sum_s A_s n^s sqrt((n+1)(n+2))`
/// for `n = 0..=dim-3`.
pub fn build_hamiltonian(params: &QesParams, dim: usize) -> Result<BandedHermitianOperator> {
    params.validate()?;
    let has_band = params.a_coeff.iter().any(|&a| a != 0.0);
    if dim == 0 || (has_band && dim < 3) {
        return Err(Error::InvalidDimension {
            dim,
            reason: "the off-diagonal pair needs at least 3 Fock slots",
        });
    }
    let diag = (0..dim).map(|n| params.diag_entry(n)).collect();
    let band2 = (0..dim.saturating_sub(2))
        .map(|n| Complex64::new(params.band_entry(n), 0.0))
        .collect();
    Ok(BandedHermitianOperator { diag, band2 })
}

/// The gauge schedule `f(t) = lambda*t` over one period `T = 2*pi/lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeSchedule {
    lambda: f64,
    period: f64,
}

impl GaugeSchedule {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// `f(t) = lambda * t`.
    pub fn gauge_phase(&self, t: f64) -> f64 {
        self.lambda * t
    }
}

/// `lambda = sum_s A_s` and `T = 2*pi/lambda`. Errors for `lambda <= 0`,
/// where the period construction is undefined.
pub fn lambda_and_period(params: &QesParams) -> Result<GaugeSchedule> {
    params.validate()?;
    let lambda = params.lambda();
    if !(lambda > 0.0) {
        return Err(Error::GaugeUndefined { lambda });
    }
    Ok(GaugeSchedule {
        lambda,
        period: TAU / lambda,
    })
}
