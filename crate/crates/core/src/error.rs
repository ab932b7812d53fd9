use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// A coordinate of the eigenvalue vector that carries no randomness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterministicDirection {
    /// 0-based coordinate index into `eta`.
    pub index: usize,
    /// The value the coordinate is pinned to (its mean).
    pub forced_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidDimension {
        n: usize,
    },
    InvalidParameter {
        name: &'static str,
        index: Option<usize>,
        reason: &'static str,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// The covariance has deterministic directions, so the density lives on a
    /// lower-dimensional support.
    SingularCovariance {
        rank: usize,
        dim: usize,
        deterministic: Vec<DeterministicDirection>,
    },
    /// A single mixture component has zero variance.
    SingularComponent {
        index: usize,
    },
    NotPositiveSemidefinite {
        index: usize,
        pivot: f64,
    },
    /// `solve` was handed a right-hand side with weight along a null direction.
    NullSpaceComponent {
        index: usize,
        residual: f64,
    },
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    UnsupportedMean {
        max_abs: f64,
    },
    Domain {
        what: &'static str,
        value: f64,
    },
    InsufficientData {
        needed: usize,
        found: usize,
    },
    EmptyInput,
    Accuracy {
        estimate: f64,
        error_bound: f64,
    },
}

impl Error {
    /// True for failures caused by degenerate or ill-conditioned numerics
    /// rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularCovariance { .. }
                | Error::SingularComponent { .. }
                | Error::NotPositiveSemidefinite { .. }
                | Error::NullSpaceComponent { .. }
                | Error::UnsupportedMean { .. }
                | Error::Accuracy { .. }
        )
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension { n } => write!(f, "invalid dimension {n}, need n >= 1"),
            Error::InvalidParameter {
                name,
                index: Some(i),
                reason,
            } => write!(f, "invalid parameter {name}[{i}]: {reason}"),
            Error::InvalidParameter {
                name,
                index: None,
                reason,
            } => write!(f, "invalid parameter {name}: {reason}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::SingularCovariance {
                rank,
                dim,
                deterministic,
            } => {
                write!(
                    f,
                    "singular covariance (rank {rank} of {dim}); deterministic coordinates:"
                )?;
                for d in deterministic {
                    write!(f, " eta[{}]={}", d.index, d.forced_value)?;
                }
                Ok(())
            }
            Error::SingularComponent { index } => write!(
                f,
                "mixture component for eigenvalue {index} has zero variance; \
                 exclude forced-real eigenvalues or use the epsilon scenario"
            ),
            Error::NotPositiveSemidefinite { index, pivot } => {
                write!(f, "matrix is not positive semidefinite (pivot {pivot} at {index})")
            }
            Error::NullSpaceComponent { index, residual } => write!(
                f,
                "right-hand side has a component {residual} along null direction {index}"
            ),
            Error::Capacity { what, requested, limit } => write!(f, "{what}: {requested} exceeds the limit {limit}"),
            Error::UnsupportedMean { max_abs } => {
                write!(f, "density requires a zero mean vector (max |nu| = {max_abs})")
            }
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::InsufficientData { needed, found } => {
                write!(f, "need at least {needed} samples, got {found}")
            }
            Error::EmptyInput => f.write_str("empty input"),
            Error::Accuracy { estimate, error_bound } => write!(
                f,
                "quadrature did not converge (estimate {estimate}, error bound {error_bound})"
            ),
        }
    }
}

impl core::error::Error for Error {}
