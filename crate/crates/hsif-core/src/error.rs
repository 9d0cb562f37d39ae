//! Error type shared by all analysis operations.

use std::fmt;

/// Errors reported by the analysis operations.
///
/// Pure arithmetic (group law, translations, closed-form inner products)
/// never fails; errors arise from mismatched operands, invalid parameters
/// and resource guards.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operands live on Heisenberg groups of different dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// A parameter is outside its admissible range.
    InvalidParameter { name: &'static str, reason: String },
    /// The fiber parameter must satisfy `lambda in (0, 1]`.
    LambdaOutOfRange { lambda: f64 },
    /// The Weyl-transform fiber at `mu = 0` is not defined.
    ZeroFiberParameter,
    /// Truncated Gram matrix would exceed the configured row cap.
    GramCapExceeded { rows: usize, cap: usize },
    /// Two fiber vectors were combined with different `lambda` or `rmax`.
    FiberVectorMismatch { reason: String },
    /// A generator does not generate a frame, so the requested dual does
    /// not exist; carries the observed lower spectral witness.
    NotAFrame { inf_g: f64, lambda: f64 },
    /// The set where `G_{0,0}` is nonzero is empty.
    EmptyOmega,
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected n = {expected}, got n = {got}")
            }
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::LambdaOutOfRange { lambda } => {
                write!(f, "lambda = {lambda} outside (0, 1]")
            }
            Error::ZeroFiberParameter => write!(f, "fiber parameter mu must be nonzero"),
            Error::GramCapExceeded { rows, cap } => {
                write!(f, "Gram matrix would have {rows} rows, exceeding the cap {cap}")
            }
            Error::FiberVectorMismatch { reason } => {
                write!(f, "fiber vector mismatch: {reason}")
            }
            Error::NotAFrame { inf_g, lambda } => write!(
                f,
                "not a frame: inf G_00 over Omega is {inf_g:.3e} (attained near lambda = {lambda})"
            ),
            Error::EmptyOmega => write!(f, "Omega is empty: G_00 vanishes on the whole grid"),
        }
    }
}

impl std::error::Error for Error {}
