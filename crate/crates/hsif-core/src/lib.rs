//! Frame-theoretic analysis of shift-invariant spaces on the Heisenberg
//! group `H^n`.
//!
//! The library certifies, for compactly supported box-type generators,
//! whether the lattice translate system `{L_(2k,l,m) phi_j}` is an
//! orthonormal system, a Bessel sequence, a (Parseval) frame or a Riesz
//! basis, and constructs/validates oblique and canonical dual generators.
//! Every Fourier-side criterion is expressed through the bracket profiles
//! `G_{k,l}(lambda)` of the group-Fourier fibers and is cross-checked
//! against a direct-integration oracle on `L^2(H^n)`.
//!
//! The analytic core is generic over the floating-point scalar (`f32` or
//! `f64`) through [`Scalar`]; the concrete aliases below pin `f64`, which
//! the spectral/decision layer and the CLI use throughout.

pub mod boxfn;
pub mod bracket;
pub mod dual;
pub mod error;
pub mod fiber;
pub mod frame;
pub mod geometry;
pub mod grid;
pub mod group;
pub mod oracle;
pub mod params;
pub mod quad;
pub mod report;
pub mod scalar;

pub use boxfn::{left_translate, BoxFunction, ShearedBoxTerm};
pub use bracket::{
    bracket, bracket_table, bracket_tail_bound, condition_c_check, cross_orthogonality_check,
    g_fast, g_kernel, g_profile, omega_set, overlapping_kl, BracketProfile, BracketTable,
    ConditionCReport, CrossOrthReport, KernelSumQuad, OmegaSet,
};
pub use dual::{
    biorthogonality_check, canonical_dual, frame_operator_apply, mixed_bracket_condition,
    oblique_dual_check, overcompleteness_test, reproduction_check, BiorthOutcome, DualCandidate,
    FrameOperatorHandle,
};
pub use error::{Error, Result};
pub use fiber::{
    fiber_inner, fiber_inner_kernel, fiber_vector, fiber_vector_inner, fiber_vector_norm_sq,
    plane_inner, plane_norm_sq, sample_weyl_kernel, t_fiber, twisted_translate, weyl_kernel,
    FiberVector, KernelIntegral, KernelQuad, KernelSample, PhaseBoxTerm, PlaneFunction,
};
pub use frame::{
    bessel_test, decomposition_norm_check, fiber_gram, g00_samples, frame_test,
    orthonormality_test, parseval_normalize, parseval_test, rho_isometry_check, riesz_test,
    AnalysisParams, AnalysisReport, FiberMultiplierFunction, LatticeCoeffs, Verdict,
};
pub use geometry::{AffineForm, Interval};
pub use grid::LambdaGrid;
pub use group::{group_inv, group_mul, lattice_ball, GroupPoint, LatticePoint};
pub use oracle::{
    gram_matrix, inner_product_direct, norm_sq_direct, translate_inner_map, GramMatrix,
    GramOptions, OracleQuad,
};
pub use scalar::Scalar;

/// Concrete scalar used by the decision layer and the CLI.
pub type Real = f64;
/// Complex numbers over [`Real`].
pub type C64 = num_complex::Complex<f64>;
/// Box generator over [`Real`].
pub type BoxFn = BoxFunction<Real>;
/// Plane fiber over [`Real`].
pub type PlaneFn = PlaneFunction<Real>;
/// Group point over [`Real`].
pub type Point = GroupPoint<Real>;
