//! Numeric defaults used across the analysis operations.
//!
//! Every tunable constant lives in this table so reports and the CLI can
//! echo one consistent set of parameters.
//!
//! | constant | value | used for |
//! |---|---|---|
//! | `GRID_SIZE` | 64 | lambda-grid points per analysis |
//! | `GRID_OFFSET` | 0.37 | offset grid `(i + 0.37)/M`, dodging dyadic zeros |
//! | `RMAX` | 1000 | fiber index truncation in bracket sums |
//! | `LATTICE_N` | 2 | oracle Gram truncation radius |
//! | `TOL_FOURIER` | 1e-3 | tolerance on fiber-side (bracket) criteria |
//! | `TOL_ORACLE` | 1e-9 | tolerance on direct-integration criteria |
//! | `ORACLE_QUAD_ORDER` | 16 | Gauss-Legendre order per split subinterval |
//! | `GRAM_ROW_CAP` | 2048 | memory guard on Gram rows `J(2N+1)^(2n+1)` |
//! | `OMEGA_EPS_REL` | 1e-6 | relative threshold defining Omega membership |
//! | `FRAME_INF_TOL` | 1e-3 | lower frame bound below this means "not a frame" |
//! | `CG_TOL` | 1e-10 | conjugate-gradient relative residual |
//! | `KERNEL_RADIUS` | 200.0 | xi-truncation of the kernel-path validation |
//! | `KERNEL_STEP` | 0.01 | midpoint step of the kernel-path validation |

/// Default lambda-grid size `M`.
pub const GRID_SIZE: usize = 64;
/// Default grid offset: sample points are `(i + GRID_OFFSET) / M`.
pub const GRID_OFFSET: f64 = 0.37;
/// Default truncation of the fiber sums over `r`.
pub const RMAX: usize = 1000;
/// Default lattice truncation radius for oracle Gram matrices.
pub const LATTICE_N: i64 = 2;
/// Default tolerance for Fourier-side (bracket) verdicts.
pub const TOL_FOURIER: f64 = 1e-3;
/// Default tolerance for oracle (direct integration) verdicts.
pub const TOL_ORACLE: f64 = 1e-9;
/// Gauss-Legendre order used by the oracle on each split subinterval.
pub const ORACLE_QUAD_ORDER: usize = 16;
/// Memory guard: maximum number of Gram rows.
pub const GRAM_ROW_CAP: usize = 2048;
/// Omega membership threshold relative to `max G_00`.
pub const OMEGA_EPS_REL: f64 = 1e-6;
/// A lower frame bound below this threshold is reported as "not a frame".
pub const FRAME_INF_TOL: f64 = 1e-3;
/// Conjugate-gradient relative residual tolerance.
pub const CG_TOL: f64 = 1e-10;
/// Default xi-radius of the Hilbert-Schmidt kernel quadrature.
pub const KERNEL_RADIUS: f64 = 200.0;
/// Default midpoint step of the Hilbert-Schmidt kernel quadrature.
pub const KERNEL_STEP: f64 = 0.01;
/// Lattice escalation schedule for oracle cross-checks.
pub const N_ESCALATION: [i64; 2] = [2, 4];
