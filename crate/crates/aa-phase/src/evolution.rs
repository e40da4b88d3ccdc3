//! Exact time evolution under the time-independent Hamiltonian via Hermitian
//! eigendecomposition, and the gauge transform producing the single-valued
//! state `|psi~(t)> = exp(-i lambda t)|psi(t)>`.
//!
//! Spectral propagation is exact for time-independent operators, so the
//! finite-difference phase quadrature downstream sees quadrature error only,
//! not integrator error. Dimensions stay small enough (couple of thousand at
//! the cap, typically well under 256) that a dense eigensolve is the simple
//! and adequate choice.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockState;
use crate::hamiltonian::{BandedHermitianOperator, GaugeSchedule};
use crate::tolerances;

/// Eigendecomposition `H = U diag(E) U^dag` with ascending eigenvalues and
/// unitary `U`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

/// One point of a sampled trajectory: the evolved state and its gauged
/// (single-valued) representative.
#[derive(Debug, Clone)]
pub struct TrajectorySample {
    pub time: f64,
    pub state: FockState,
    pub gauged_state: FockState,
}

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation phases the pivot `M[p][q] = r exp(i phi)` real and applies
/// the classic symmetric Jacobi rotation, accumulated into the eigenvector
/// matrix. Convergence is quadratic once the off-diagonal mass is small; the
/// banded inputs here start nearly diagonal already. Returns unsorted
/// eigenvalues and the accumulated unitary.
fn jacobi_hermitian_eigen(mut m: DMatrix<Complex64>) -> Option<(DVector<f64>, DMatrix<Complex64>)> {
    let dim = m.nrows();
    let mut q: DMatrix<Complex64> = DMatrix::identity(dim, dim);
    let frobenius = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if frobenius == 0.0 {
        return Some((DVector::zeros(dim), q));
    }
    let target = f64::EPSILON * frobenius;
    const MAX_SWEEPS: usize = 64;

    for sweep in 0..=MAX_SWEEPS {
        let off = (0..dim)
            .flat_map(|p| ((p + 1)..dim).map(move |qq| (p, qq)))
            .map(|(p, qq)| m[(p, qq)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= target {
            let eigenvalues = DVector::from_iterator(dim, (0..dim).map(|k| m[(k, k)].re));
            return Some((eigenvalues, q));
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        for p in 0..dim {
            for qq in (p + 1)..dim {
                let pivot = m[(p, qq)];
                let r = pivot.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = pivot / r; // exp(i phi)
                let alpha = m[(p, p)].re;
                let beta = m[(qq, qq)].re;
                let tau = (beta - alpha) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sp = phase.scale(s); // s * exp(i phi)
                let sp_conj = sp.conj();

                // Columns p, q of M and the accumulated unitary.
                for k in 0..dim {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, qq)];
                    m[(k, p)] = mkp.scale(c) - sp_conj * mkq;
                    m[(k, qq)] = sp * mkp + mkq.scale(c);

                    let qkp = q[(k, p)];
                    let qkq = q[(k, qq)];
                    q[(k, p)] = qkp.scale(c) - sp_conj * qkq;
                    q[(k, qq)] = sp * qkp + qkq.scale(c);
                }
                // Rows p, q.
                for k in 0..dim {
                    let mpk = m[(p, k)];
                    let mqk = m[(qq, k)];
                    m[(p, k)] = mpk.scale(c) - sp * mqk;
                    m[(qq, k)] = sp_conj * mpk + mqk.scale(c);
                }
                // Pin the algebraically exact entries.
                m[(p, qq)] = Complex64::new(0.0, 0.0);
                m[(qq, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(qq, qq)] = Complex64::new(m[(qq, qq)].re, 0.0);
            }
        }
    }
    None
}

/// Decomposes the operator and validates the result: reconstruction residual
/// `<= 1e-10 * (1 + max|E|)` in max-norm and orthonormality defect
/// `<= 1e-11`.
pub fn decompose(op: &BandedHermitianOperator) -> Result<SpectralDecomposition> {
    let dim = op.dim();
    let dense = op.dense_form();
    let (raw_eigenvalues, raw_eigenvectors) =
        jacobi_hermitian_eigen(dense.clone()).ok_or_else(|| Error::Eigensolver {
            dim,
            detail: "Jacobi iteration did not converge".to_string(),
        })?;

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| raw_eigenvalues[i].total_cmp(&raw_eigenvalues[j]));

    let eigenvalues = DVector::from_iterator(dim, order.iter().map(|&i| raw_eigenvalues[i]));
    let mut eigenvectors = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (col, &src) in order.iter().enumerate() {
        let mut column = raw_eigenvectors.column(src).clone_owned();
        // Phase convention for reproducible output: the largest-magnitude
        // component is made real and positive.
        let mut pivot = 0;
        for k in 1..dim {
            if column[k].norm_sqr() > column[pivot].norm_sqr() {
                pivot = k;
            }
        }
        let z = column[pivot];
        if z.norm() > 0.0 {
            column *= z.conj() / z.norm();
        }
        eigenvectors.set_column(col, &column);
    }

    let sd = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    };

    let max_eig = sd.eigenvalues.iter().fold(0.0f64, |m, &e| m.max(e.abs()));
    let recon = sd.reconstruction_residual(&dense);
    if !(recon <= tolerances::EIGEN_RECONSTRUCTION * (1.0 + max_eig)) {
        return Err(Error::Eigensolver {
            dim,
            detail: format!(
                "reconstruction residual {recon:e} exceeds {:e} * (1 + {max_eig:e})",
                tolerances::EIGEN_RECONSTRUCTION
            ),
        });
    }
    let ortho = sd.orthonormality_defect();
    if !(ortho <= tolerances::EIGEN_ORTHONORMALITY) {
        return Err(Error::Eigensolver {
            dim,
            detail: format!(
                "orthonormality defect {ortho:e} exceeds {:e}",
                tolerances::EIGEN_ORTHONORMALITY
            ),
        });
    }
    Ok(sd)
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// Max-norm of `U diag(E) U^dag - H`.
    pub fn reconstruction_residual(&self, dense: &DMatrix<Complex64>) -> f64 {
        let dim = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..dim {
            let e = Complex64::new(self.eigenvalues[j], 0.0);
            for i in 0..dim {
                scaled[(i, j)] *= e;
            }
        }
        let rebuilt = scaled * self.eigenvectors.adjoint();
        (rebuilt - dense)
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Max-norm of `U^dag U - I`.
    pub fn orthonormality_defect(&self) -> f64 {
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[(i, j)] - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }

    /// Eigenbasis coefficients `U^dag psi`.
    pub fn modes(&self, psi: &FockState) -> Result<DVector<Complex64>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: psi.dim(),
                context: "spectral projection",
            });
        }
        Ok(self.eigenvectors.adjoint() * psi.amplitudes())
    }

    /// State at time `t` from precomputed eigenbasis coefficients.
    pub fn state_from_modes(&self, modes: &DVector<Complex64>, t: f64) -> FockState {
        let rotated = DVector::from_iterator(
            self.dim(),
            modes
                .iter()
                .zip(self.eigenvalues.iter())
                .map(|(&c, &e)| c * Complex64::from_polar(1.0, -e * t)),
        );
        FockState::from_raw(&self.eigenvectors * rotated)
    }

    /// `exp(-i H t) |psi0>`.
    pub fn evolve(&self, psi0: &FockState, t: f64) -> Result<FockState> {
        let modes = self.modes(psi0)?;
        Ok(self.state_from_modes(&modes, t))
    }

    /// `steps + 1` samples at `t_k = k*T/steps`, each carrying the evolved
    /// state and its gauged representative. `steps` must be even (Simpson
    /// compatible) and at least 2.
    pub fn sample_trajectory(
        &self,
        psi0: &FockState,
        schedule: &GaugeSchedule,
        steps: usize,
    ) -> Result<Vec<TrajectorySample>> {
        if steps < 2 || !steps.is_multiple_of(2) {
            return Err(Error::StepCount {
                steps,
                reason: "trajectory sampling needs an even step count >= 2",
            });
        }
        let modes = self.modes(psi0)?;
        let period = schedule.period();
        let mut samples = Vec::with_capacity(steps + 1);
        for k in 0..=steps {
            let t = k as f64 * period / steps as f64;
            let state = self.state_from_modes(&modes, t);
            let gauged_state = gauge_transform(&state, schedule.lambda(), t);
            samples.push(TrajectorySample {
                time: t,
                state,
                gauged_state,
            });
        }
        Ok(samples)
    }
}

/// `exp(-i lambda t) |psi>`: the representative that is single-valued over
/// one gauge period.
pub fn gauge_transform(psi: &FockState, lambda: f64, t: f64) -> FockState {
    let factor = Complex64::from_polar(1.0, -lambda * t);
    FockState::from_raw(psi.amplitudes() * factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_hamiltonian, lambda_and_period, QesParams};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_operator_spectrum() {
        let params = QesParams::new(vec![1.0], vec![]).unwrap();
        let h = build_hamiltonian(&params, 6).unwrap();
        let sd = decompose(&h).unwrap();
        for n in 0..6 {
            assert_abs_diff_eq!(sd.eigenvalues()[n], n as f64, epsilon = 1e-12);
        }
        // Identity eigenvectors up to phase; the convention fixes the phase.
        for n in 0..6 {
            assert_abs_diff_eq!(sd.eigenvectors()[(n, n)].re, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn three_level_band_spectrum() {
        // dim 3, A0 = 1: |0> and |2> couple with sqrt(2); |1> is untouched.
        // Characteristic polynomial of the 2x2 block gives +-sqrt(2).
        let params = QesParams::new(vec![0.0], vec![1.0]).unwrap();
        let h = build_hamiltonian(&params, 3).unwrap();
        let sd = decompose(&h).unwrap();
        let want = [-(2.0f64.sqrt()), 0.0, 2.0f64.sqrt()];
        for (got, want) in sd.eigenvalues().iter().zip(want) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn reconstruction_on_generic_instance() {
        let params = QesParams::new(vec![0.4, -0.1], vec![0.3, 0.2]).unwrap();
        let h = build_hamiltonian(&params, 24).unwrap();
        let sd = decompose(&h).unwrap();
        let max_eig = sd.eigenvalues().iter().fold(0.0f64, |m, &e| m.max(e.abs()));
        assert!(sd.reconstruction_residual(&h.dense_form()) <= 1e-10 * (1.0 + max_eig));
        assert!(sd.orthonormality_defect() <= 1e-11);
    }

    #[test]
    fn evolve_identity_at_zero_time() {
        let params = QesParams::new(vec![0.5], vec![0.7]).unwrap();
        let h = build_hamiltonian(&params, 8).unwrap();
        let sd = decompose(&h).unwrap();
        let psi = FockState::from_amplitudes(vec![
            c(0.5, 0.1),
            c(0.0, 0.4),
            c(0.3, 0.0),
            c(0.0, 0.0),
            c(0.2, -0.2),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
        ])
        .unwrap();
        let evolved = sd.evolve(&psi, 0.0).unwrap();
        for n in 0..8 {
            assert!((evolved.amplitude(n) - psi.amplitude(n)).norm() <= 1e-14);
        }
    }

    #[test]
    fn stationary_basis_state_under_diagonal_operator() {
        let params = QesParams::new(vec![1.3], vec![]).unwrap();
        let h = build_hamiltonian(&params, 5).unwrap();
        let sd = decompose(&h).unwrap();
        let psi = FockState::basis(5, 3).unwrap();
        let t = 0.8;
        let evolved = sd.evolve(&psi, t).unwrap();
        let want = Complex64::from_polar(1.0, -1.3 * 3.0 * t);
        assert!((evolved.amplitude(3) - want).norm() <= 1e-13);
    }

    #[test]
    fn semigroup_property() {
        let params = QesParams::new(vec![0.2, 0.05], vec![0.4, 0.1]).unwrap();
        let h = build_hamiltonian(&params, 12).unwrap();
        let sd = decompose(&h).unwrap();
        let psi = FockState::from_amplitudes(
            (0..12)
                .map(|n| c(1.0 / (n as f64 + 1.0), 0.3 / (n as f64 + 2.0)))
                .collect(),
        )
        .unwrap();
        let t = 2.7;
        let once = sd.evolve(&psi, t).unwrap();
        let half = sd.evolve(&psi, t / 2.0).unwrap();
        let twice = sd.evolve(&half, t / 2.0).unwrap();
        for n in 0..12 {
            assert!((once.amplitude(n) - twice.amplitude(n)).norm() <= 1e-10);
        }
        assert_abs_diff_eq!(once.norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn energy_conservation_along_trajectory() {
        let params = QesParams::new(vec![0.3], vec![0.5]).unwrap();
        let h = build_hamiltonian(&params, 10).unwrap();
        let sd = decompose(&h).unwrap();
        let schedule = lambda_and_period(&params).unwrap();
        let psi = FockState::from_amplitudes(
            (0..10)
                .map(|n| {
                    if n < 5 {
                        c(1.0, -0.2 * n as f64)
                    } else {
                        c(0.0, 0.0)
                    }
                })
                .collect(),
        )
        .unwrap();
        let e0 = h.expectation(&psi).unwrap();
        let samples = sd.sample_trajectory(&psi, &schedule, 16).unwrap();
        for s in &samples {
            assert!((s.state.norm() - 1.0).abs() <= 1e-10);
            assert!((s.gauged_state.norm() - 1.0).abs() <= 1e-10);
            let e = h.expectation(&s.state).unwrap();
            assert!((e - e0).abs() <= 1e-9 * (1.0 + e0.abs()));
        }
    }

    #[test]
    fn gauge_transform_phases() {
        let psi = FockState::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let unchanged = gauge_transform(&psi, 1.0, 0.0);
        assert_eq!(unchanged.amplitude(0), psi.amplitude(0));

        let full_cycle = gauge_transform(&psi, 1.0, TAU);
        for n in 0..2 {
            assert!((full_cycle.amplitude(n) - psi.amplitude(n)).norm() <= 1e-14);
        }

        let half_cycle = gauge_transform(&psi, 1.0, PI);
        for n in 0..2 {
            assert!((half_cycle.amplitude(n) + psi.amplitude(n)).norm() <= 1e-14);
        }
        // Magnitudes never change.
        for n in 0..2 {
            assert!((half_cycle.amplitude(n).norm() - psi.amplitude(n).norm()).abs() <= 1e-15);
        }
    }

    #[test]
    fn trajectory_endpoints_and_step_validation() {
        let params = QesParams::new(vec![0.1], vec![0.5]).unwrap();
        let h = build_hamiltonian(&params, 6).unwrap();
        let sd = decompose(&h).unwrap();
        let schedule = lambda_and_period(&params).unwrap();
        let psi = FockState::basis(6, 1).unwrap();

        let samples = sd.sample_trajectory(&psi, &schedule, 2).unwrap();
        assert_eq!(samples.len(), 3);
        assert_eq!(samples[0].time, 0.0);
        assert_abs_diff_eq!(samples[1].time, schedule.period() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(samples[2].time, schedule.period(), epsilon = 1e-15);
        for n in 0..6 {
            assert!((samples[0].state.amplitude(n) - psi.amplitude(n)).norm() <= 1e-14);
        }

        assert!(sd.sample_trajectory(&psi, &schedule, 3).is_err());
        assert!(sd.sample_trajectory(&psi, &schedule, 0).is_err());
    }
}
