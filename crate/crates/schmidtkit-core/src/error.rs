//! Error type shared by all modules.

use core::fmt;

/// Failure modes of the numerical routines.
///
/// Every error carries enough context to be rendered as a one-line message;
/// the CLI layer maps these onto machine-readable error objects.
#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Matrix or vector dimensions are inconsistent with the operation.
    DimensionMismatch {
        expected: usize,
        found: usize,
        context: &'static str,
    },
    /// A matrix expected to be Hermitian deviates from its adjoint by more
    /// than the symmetrization tolerance.
    NotHermitian { asymmetry: f64 },
    /// An operator expected to be positive semidefinite has a negative
    /// eigenvalue beyond the allowance.
    NotPositive { min_eigenvalue: f64 },
    /// A state vector is not normalized.
    NotNormalized { norm: f64 },
    /// A trace-one constraint is violated.
    TraceNotOne { trace: f64 },
    /// An iterative routine failed to converge.
    ConvergenceFailure { context: &'static str },
    /// A map expected to be unital is not.
    NotUnital { deviation: f64 },
    /// A map expected to be completely positive has a negative Choi
    /// eigenvalue.
    NotCompletelyPositive { min_choi_eigenvalue: f64 },
    /// An operator does not commute with the dilated representation.
    NotInCommutant { deviation: f64 },
    /// An operator lies outside the unit interval `0 ≤ q ≤ 1`.
    OutsideUnitInterval { min: f64, max: f64 },
    /// A map is not cp-dominated by the reference map.
    NotDominated { min_choi_eigenvalue: f64 },
    /// A least-squares reconstruction left a residual above the threshold.
    ResidualTooLarge { residual: f64 },
    /// The supplied action failed a linearity spot check.
    NonlinearAction { deviation: f64 },
    /// A pure state was required but a mixed one was supplied.
    PurityRequired,
    /// A POVM fails positivity or normalization.
    InvalidPovm { deviation: f64 },
    /// A correlation window exceeds the configured maximum.
    WindowTooLarge { length: usize, max: usize },
    /// A scalar parameter is outside its admissible range.
    InvalidParameter { context: &'static str },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::DimensionMismatch {
                expected,
                found,
                context,
            } => write!(
                f,
                "dimension mismatch in {context}: expected {expected}, found {found}"
            ),
            CoreError::NotHermitian { asymmetry } => {
                write!(f, "matrix is not Hermitian (asymmetry {asymmetry:.3e})")
            }
            CoreError::NotPositive { min_eigenvalue } => write!(
                f,
                "operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})"
            ),
            CoreError::NotNormalized { norm } => {
                write!(f, "vector is not normalized (norm {norm:.12})")
            }
            CoreError::TraceNotOne { trace } => {
                write!(f, "trace is not one (trace {trace:.12})")
            }
            CoreError::ConvergenceFailure { context } => {
                write!(f, "iteration failed to converge in {context}")
            }
            CoreError::NotUnital { deviation } => {
                write!(f, "map is not unital (deviation {deviation:.3e})")
            }
            CoreError::NotCompletelyPositive {
                min_choi_eigenvalue,
            } => write!(
                f,
                "map is not completely positive (min Choi eigenvalue {min_choi_eigenvalue:.3e})"
            ),
            CoreError::NotInCommutant { deviation } => write!(
                f,
                "operator is not in the commutant (deviation {deviation:.3e})"
            ),
            CoreError::OutsideUnitInterval { min, max } => write!(
                f,
                "operator is outside the unit interval (spectrum in [{min:.3e}, {max:.3e}])"
            ),
            CoreError::NotDominated {
                min_choi_eigenvalue,
            } => write!(
                f,
                "map is not cp-dominated (min Choi eigenvalue of difference {min_choi_eigenvalue:.3e})"
            ),
            CoreError::ResidualTooLarge { residual } => {
                write!(f, "reconstruction residual too large ({residual:.3e})")
            }
            CoreError::NonlinearAction { deviation } => {
                write!(f, "supplied action is not linear (deviation {deviation:.3e})")
            }
            CoreError::PurityRequired => write!(f, "operation requires a pure state"),
            CoreError::InvalidPovm { deviation } => {
                write!(f, "invalid POVM (deviation {deviation:.3e})")
            }
            CoreError::WindowTooLarge { length, max } => {
                write!(f, "window length {length} exceeds configured maximum {max}")
            }
            CoreError::InvalidParameter { context } => {
                write!(f, "invalid parameter: {context}")
            }
        }
    }
}

impl core::error::Error for CoreError {}
