//! Centralized numerical tolerances.
//!
//! Every threshold used by the library and its verification harness lives
//! here, with a note on where it comes from. Values that depend on the
//! problem (tail tolerance, quadrature step count) are run parameters
//! instead and flow through [`crate::config::RunConfig`].

/// Norm defect allowed on any state produced by a factory or an explicit
/// normalization. Normalization is a single scale, so this is pure f64
/// roundoff with a wide margin.
pub const STATE_NORM: f64 = 1e-12;

/// Imaginary residue allowed in a Hermitian expectation value before the
/// operator is considered broken. The residue is scaled by the absolute sum
/// of the accumulated terms, so the threshold is relative to the natural
/// cancellation scale.
pub const EXPECTATION_RESIDUE: f64 = 1e-10;

/// Imaginary residue allowed in the paired off-diagonal sums of the
/// closed-form geometric phase. The two sums are exact conjugates term by
/// term, so anything visibly nonzero signals an amplitude-handling bug.
pub const CLOSED_FORM_RESIDUE: f64 = 1e-10;

/// Imaginary residue allowed in the finite-difference phase integral.
pub const QUADRATURE_RESIDUE: f64 = 1e-8;

/// Max-norm reconstruction defect `|U E U^dag - H|` of an eigendecomposition,
/// relative to `1 + max|E|`.
pub const EIGEN_RECONSTRUCTION: f64 = 1e-10;

/// Max-norm orthonormality defect `|U^dag U - I|` of an eigendecomposition.
pub const EIGEN_ORTHONORMALITY: f64 = 1e-11;

/// Norm drift allowed along a unitary trajectory.
pub const NORM_PRESERVATION: f64 = 1e-10;

/// Energy drift allowed along a trajectory under a time-independent
/// Hamiltonian, relative to `1 + |<H>_0|`.
pub const ENERGY_CONSERVATION: f64 = 1e-9;

/// Absolute defect allowed in the gauge identity `gamma + beta_closed = 2*pi`.
/// The identity is exact algebra; the two sides are computed through
/// different summation orders, so only roundoff separates them.
pub const GAUGE_IDENTITY: f64 = 1e-10;

/// Overlap magnitude below which the measured total phase `arg<psi0|psi_T>`
/// is reported as undefined.
pub const OVERLAP_DEFINED: f64 = 1e-12;

/// Exact-construction checks (band sparsity, Hermiticity of the dense form)
/// use zero tolerance; interior agreement with the ladder-matrix composition
/// oracle allows accumulated roundoff of the dense products.
pub const LADDER_COMPOSITION: f64 = 1e-12;

/// Agreement between the trajectory quadrature and its spectral prediction,
/// relative to `1 + |beta|`. The prediction evaluates the same discrete sum
/// analytically, so only pipeline roundoff separates the two.
pub const QUADRATURE_PREDICTION: f64 = 1e-9;

/// Default hard cap on auto-sized Fock dimensions.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Default probability mass allowed beyond the truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Default number of quadrature intervals.
pub const DEFAULT_QUADRATURE_STEPS: usize = 1024;
