//! Truncated Fock-space primitives: complex state vectors, ladder-operator
//! actions, inner products.
//!
//! The truncation at index `N = dim - 1` is a hard cutoff. Operators never
//! grow the space; the raising action reports the squared magnitude it drops
//! past the cutoff as leakage instead of silently discarding it.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A state in the number basis `|0>, ..., |N>`.
///
/// Factories normalize; operator actions ([`FockState::lowered`],
/// [`FockState::raised`]) return unnormalized vectors by design.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amps: DVector<Complex64>,
}

impl FockState {
    /// Normalized state from raw amplitudes.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDimension {
                dim: 0,
                reason: "a Fock state needs at least one amplitude",
            });
        }
        if amps.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "Fock amplitudes",
            });
        }
        let v = DVector::from_vec(amps);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            amps: v.unscale(norm),
        })
    }

    /// The basis state `|n>` in a space of the given dimension.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                dim,
                reason: "dimension must be at least 1",
            });
        }
        if n >= dim {
            return Err(Error::ParamOutOfRange(format!(
                "basis index {n} outside dimension {dim}"
            )));
        }
        let mut amps = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        amps[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Wraps an already-computed vector without normalizing (operator
    /// outputs, propagator results).
    pub(crate) fn from_raw(amps: DVector<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Renormalized copy.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            amps: self.amps.unscale(norm),
        })
    }

    /// Same state in a larger space, new slots zero.
    pub fn zero_padded(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::InvalidDimension {
                dim,
                reason: "padding target smaller than the current dimension",
            });
        }
        let mut amps = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        amps.rows_mut(0, self.dim()).copy_from(&self.amps);
        Ok(Self { amps })
    }

    /// Multiplies every amplitude by `exp(i*chi)`.
    pub fn with_global_phase(&self, chi: f64) -> Self {
        let factor = Complex64::from_polar(1.0, chi);
        Self {
            amps: &self.amps * factor,
        }
    }

    /// `<self|other> = sum_n conj(self_n) * other_n`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
                context: "inner product",
            });
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Action of the annihilation operator: output amplitude at `n` is
    /// `sqrt(n+1) * C_{n+1}`. Unnormalized.
    pub fn lowered(&self) -> Self {
        let dim = self.dim();
        let mut out = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        for n in 0..dim - 1 {
            out[n] = ((n + 1) as f64).sqrt() * self.amps[n + 1];
        }
        Self { amps: out }
    }

    /// Action of the creation operator: output amplitude at `n` is
    /// `sqrt(n) * C_{n-1}`. Unnormalized.
    ///
    /// The component that would land at `N + 1` is dropped; its squared
    /// magnitude `(N+1)*|C_N|^2` is returned as leakage.
    pub fn raised(&self) -> (Self, f64) {
        let dim = self.dim();
        let mut out = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        for n in 1..dim {
            out[n] = (n as f64).sqrt() * self.amps[n - 1];
        }
        let leakage = dim as f64 * self.amps[dim - 1].norm_sqr();
        (Self { amps: out }, leakage)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_vacuum_is_one() {
        let v = FockState::basis(4, 0).unwrap();
        let ip = v.inner(&v).unwrap();
        assert_eq!(ip, c(1.0, 0.0));
    }

    #[test]
    fn inner_orthogonal_basis_states() {
        let a = FockState::basis(4, 0).unwrap();
        let b = FockState::basis(4, 1).unwrap();
        assert_eq!(a.inner(&b).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn inner_conjugate_symmetry() {
        // (|0> + i|1>)/sqrt(2) against |1>
        let u = FockState::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let v = FockState::basis(2, 1).unwrap();
        let uv = u.inner(&v).unwrap();
        let vu = v.inner(&u).unwrap();
        let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
        assert_abs_diff_eq!(uv.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(uv.im, -inv_sqrt2, epsilon = 1e-15);
        assert_eq!(uv, vu.conj());
    }

    #[test]
    fn inner_dimension_mismatch() {
        let a = FockState::basis(3, 0).unwrap();
        let b = FockState::basis(4, 0).unwrap();
        assert!(matches!(a.inner(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn lowering_annihilates_vacuum() {
        let v = FockState::basis(5, 0).unwrap();
        let out = v.lowered();
        assert_eq!(out.norm(), 0.0);
    }

    #[test]
    fn lowering_one_gives_vacuum() {
        let v = FockState::basis(5, 1).unwrap();
        let out = v.lowered();
        assert_eq!(out.amplitude(0), c(1.0, 0.0));
        assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn lowering_four_scales_by_two() {
        let v = FockState::basis(6, 4).unwrap();
        let out = v.lowered();
        assert_abs_diff_eq!(out.amplitude(3).re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn raising_vacuum_gives_one() {
        let v = FockState::basis(5, 0).unwrap();
        let (out, leak) = v.raised();
        assert_eq!(out.amplitude(1), c(1.0, 0.0));
        assert_eq!(leak, 0.0);
    }

    #[test]
    fn raising_three_scales_by_two() {
        let v = FockState::basis(6, 3).unwrap();
        let (out, leak) = v.raised();
        assert_abs_diff_eq!(out.amplitude(4).re, 2.0, epsilon = 1e-15);
        assert_eq!(leak, 0.0);
    }

    #[test]
    fn raising_top_of_truncation_leaks() {
        // dim 1: the only slot is the top; a^dag drops sqrt(1)|1> entirely.
        let v = FockState::basis(1, 0).unwrap();
        let (out, leak) = v.raised();
        assert_eq!(out.norm(), 0.0);
        assert_abs_diff_eq!(leak, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn factories_normalize() {
        let s = FockState::from_amplitudes(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-12);
        assert!(FockState::from_amplitudes(vec![c(0.0, 0.0)]).is_err());
        assert!(FockState::from_amplitudes(vec![]).is_err());
        assert!(FockState::from_amplitudes(vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn zero_padding_preserves_amplitudes() {
        let s = FockState::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let p = s.zero_padded(5).unwrap();
        assert_eq!(p.dim(), 5);
        assert_eq!(p.amplitude(1), s.amplitude(1));
        assert_eq!(p.amplitude(4), c(0.0, 0.0));
        assert!(s.zero_padded(1).is_err());
    }

    fn amplitude_vec(max_dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..max_dim)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        // <u|a^dag v> = conj(<v|a u>) for states supported >= 2 below the cutoff.
        #[test]
        fn adjointness(u_raw in amplitude_vec(24), v_raw in amplitude_vec(24)) {
            let dim = u_raw.len().max(v_raw.len()) + 2;
            let build = |raw: &[(f64, f64)]| {
                let mut amps: Vec<Complex64> =
                    raw.iter().map(|&(re, im)| c(re, im)).collect();
                amps.resize(dim, c(0.0, 0.0));
                FockState::from_amplitudes(amps)
            };
            let (u, v) = match (build(&u_raw), build(&v_raw)) {
                (Ok(u), Ok(v)) => (u, v),
                _ => return Ok(()), // all-zero draw
            };
            let (raised_v, leak) = v.raised();
            prop_assert_eq!(leak, 0.0);
            let lhs = u.inner(&raised_v).unwrap();
            let rhs = v.inner(&u.lowered()).unwrap().conj();
            prop_assert!((lhs - rhs).norm() < 1e-12);
        }

        // <psi| a^dag a psi> recovers sum_n n |C_n|^2.
        #[test]
        fn number_recovery(raw in amplitude_vec(24)) {
            let dim = raw.len() + 2;
            let mut amps: Vec<Complex64> = raw.iter().map(|&(re, im)| c(re, im)).collect();
            amps.resize(dim, c(0.0, 0.0));
            let psi = match FockState::from_amplitudes(amps) {
                Ok(p) => p,
                Err(_) => return Ok(()),
            };
            let (number_applied, leak) = psi.lowered().raised();
            prop_assert_eq!(leak, 0.0);
            let got = psi.inner(&number_applied).unwrap();
            let want: f64 = (0..psi.dim())
                .map(|n| n as f64 * psi.amplitude(n).norm_sqr())
                .sum();
            prop_assert!((got.re - want).abs() < 1e-12);
            prop_assert!(got.im.abs() < 1e-12);
        }
    }
}
