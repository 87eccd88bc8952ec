//! Numerical tolerances used across the toolkit.

use crate::{CoreError, Result};

/// Relative asymmetry above which a matrix is rejected as non-Hermitian
/// instead of being silently symmetrized.
pub const HERMITIAN_ASYM_TOL: f64 = 1e-12;

/// Cutoffs for rank decisions and positivity allowances.
///
/// `rank_tol` is applied relative to the largest singular value (or
/// eigenvalue) of the matrix at hand; `psd_tol` is the absolute amount of
/// negativity tolerated in eigenvalues of nominally positive operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rank_tol: f64,
    pub psd_tol: f64,
}

impl Tolerance {
    pub fn new(rank_tol: f64, psd_tol: f64) -> Result<Self> {
        if !(rank_tol > 0.0) || !(psd_tol > 0.0) {
            return Err(CoreError::InvalidParameter {
                context: "tolerances must be strictly positive",
            });
        }
        Ok(Tolerance { rank_tol, psd_tol })
    }
}

impl Default for Tolerance {
    /// Double precision with conditioning headroom.
    fn default() -> Self {
        Tolerance {
            rank_tol: 1e-9,
            psd_tol: 1e-9,
        }
    }
}
