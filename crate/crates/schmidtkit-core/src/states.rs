//! Pure and mixed bipartite states at finite dimension.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::linalg::{eigh, partial_trace, svd, Side};
use crate::matrix::{outer, vec_norm, C64, ComplexMatrix};
use crate::tolerance::{Tolerance, HERMITIAN_ASYM_TOL};
use crate::{CoreError, Result};

const NORM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;

/// Normalized vector on `C^dA ⊗ C^dB`, amplitudes indexed row-major by
/// `(i, j) ↦ i·dB + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteVector {
    dims: (usize, usize),
    amplitudes: Vec<C64>,
}

impl BipartiteVector {
    pub fn new(dims: (usize, usize), amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dims.0 * dims.1 {
            return Err(CoreError::DimensionMismatch {
                expected: dims.0 * dims.1,
                found: amplitudes.len(),
                context: "BipartiteVector::new",
            });
        }
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(CoreError::NotNormalized { norm });
        }
        Ok(BipartiteVector { dims, amplitudes })
    }

    /// Normalizes the amplitudes before constructing.
    pub fn normalized(dims: (usize, usize), amplitudes: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if norm <= 0.0 {
            return Err(CoreError::NotNormalized { norm });
        }
        let amps = amplitudes.iter().map(|a| a / norm).collect();
        Self::new(dims, amps)
    }

    /// Product basis state `|i⟩ ⊗ |j⟩`.
    pub fn basis_state(dims: (usize, usize), i: usize, j: usize) -> Result<Self> {
        let mut amps = alloc::vec![C64::new(0.0, 0.0); dims.0 * dims.1];
        amps[i * dims.1 + j] = C64::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    /// Maximally entangled vector `Σ_i |ii⟩/√d` on `d ⊗ d`.
    pub fn maximally_entangled(d: usize) -> Self {
        let mut amps = alloc::vec![C64::new(0.0, 0.0); d * d];
        let w = 1.0 / (d as f64).sqrt();
        for i in 0..d {
            amps[i * d + i] = C64::new(w, 0.0);
        }
        BipartiteVector {
            dims: (d, d),
            amplitudes: amps,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Amplitudes reshaped into the `dA × dB` coefficient matrix.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_vector(self.dims.0, self.dims.1, &self.amplitudes)
            .expect("length checked at construction")
    }

    /// Rank-one projector `|Ψ⟩⟨Ψ|` on the joint space.
    pub fn projector(&self) -> ComplexMatrix {
        outer(&self.amplitudes, &self.amplitudes)
    }

    /// Expectation `⟨Ψ| a⊗b |Ψ⟩`.
    pub fn product_expectation(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
        let (da, db) = self.dims;
        debug_assert_eq!(a.rows(), da);
        debug_assert_eq!(b.rows(), db);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..da {
            for k in 0..db {
                let amp = self.amplitudes[i * db + k].conj();
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..da {
                    let aij = a[(i, j)];
                    if aij.norm_sqr() == 0.0 {
                        continue;
                    }
                    for l in 0..db {
                        acc += amp * aij * b[(k, l)] * self.amplitudes[j * db + l];
                    }
                }
            }
        }
        acc
    }

    /// Marginal density operator on the kept side.
    pub fn marginal(&self, keep: Side, tol: &Tolerance) -> Result<DensityOperator> {
        let traced = match keep {
            Side::A => Side::B,
            Side::B => Side::A,
        };
        let rho = partial_trace(&self.projector(), self.dims, traced)?;
        DensityOperator::new(rho, tol)
    }
}

/// Schmidt decomposition data: decreasing coefficients above the rank
/// cutoff, isometric bases, and the rank.
#[derive(Debug, Clone)]
pub struct SchmidtData {
    pub coefficients: Vec<f64>,
    /// `dA × rank` isometry of left Schmidt vectors.
    pub left_basis: ComplexMatrix,
    /// `dB × rank` isometry of right Schmidt vectors.
    pub right_basis: ComplexMatrix,
    pub rank: usize,
    /// Set when coefficients below the cutoff carried more mass than 1e-12
    /// and the remainder was renormalized.
    pub renormalized: bool,
}

impl SchmidtData {
    /// Reassembles `Σ λ_i (left_i ⊗ right_i)`.
    pub fn reconstruct(&self, dims: (usize, usize)) -> Vec<C64> {
        let (da, db) = dims;
        let mut amps = alloc::vec![C64::new(0.0, 0.0); da * db];
        for t in 0..self.rank {
            let l = self.left_basis.column(t);
            let r = self.right_basis.column(t);
            for i in 0..da {
                for j in 0..db {
                    amps[i * db + j] += l[i] * r[j] * self.coefficients[t];
                }
            }
        }
        amps
    }
}

/// Schmidt decomposition of a normalized bipartite vector.
///
/// Under coefficient degeneracy the bases are whatever the SVD produces; no
/// canonical rotation is applied, so downstream consumers must compare
/// basis-invariant quantities only.
pub fn schmidt_decompose(v: &BipartiteVector, tol: &Tolerance) -> Result<SchmidtData> {
    let m = v.coefficient_matrix();
    let dec = svd(&m)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    let rank = dec
        .singular_values
        .iter()
        .filter(|&&s| s > tol.rank_tol * smax)
        .count();
    let mut coefficients: Vec<f64> = dec.singular_values[..rank].to_vec();
    let dropped: f64 = dec.singular_values[rank..]
        .iter()
        .map(|s| s * s)
        .sum();
    let mut renormalized = false;
    if dropped > 1e-12 {
        let kept: f64 = coefficients.iter().map(|s| s * s).sum();
        let scale = 1.0 / kept.sqrt();
        for c in coefficients.iter_mut() {
            *c *= scale;
        }
        renormalized = true;
    }
    let (da, db) = v.dims();
    let mut left = ComplexMatrix::zeros(da, rank);
    let mut right = ComplexMatrix::zeros(db, rank);
    for t in 0..rank {
        left.set_column(t, &dec.u.column(t));
        // A = U Σ V†, so the right Schmidt vectors are the conjugated V
        // columns: Ψ = Σ σ_t u_t ⊗ conj(v_t).
        let vc: Vec<C64> = dec.v.column(t).iter().map(|x| x.conj()).collect();
        right.set_column(t, &vc);
    }
    Ok(SchmidtData {
        coefficients,
        left_basis: left,
        right_basis: right,
        rank,
        renormalized,
    })
}

/// Hermitian, positive semidefinite, trace-one operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity (symmetrizing below the asymmetry tolerance),
    /// positivity within `psd_tol` and unit trace.
    pub fn new(matrix: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        if !matrix.is_square() {
            return Err(CoreError::DimensionMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
                context: "DensityOperator::new",
            });
        }
        let scale = matrix.max_abs().max(1e-300);
        let asym = matrix.asymmetry();
        if asym > HERMITIAN_ASYM_TOL * scale {
            return Err(CoreError::NotHermitian { asymmetry: asym });
        }
        let m = matrix.hermitian_part();
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(CoreError::TraceNotOne { trace: tr });
        }
        let eig = eigh(&m)?;
        if let Some(&min) = eig.values.last() {
            if min < -tol.psd_tol {
                return Err(CoreError::NotPositive {
                    min_eigenvalue: min,
                });
            }
        }
        Ok(DensityOperator {
            dim: m.rows(),
            matrix: m,
        })
    }

    pub fn pure(v: &[C64]) -> Result<Self> {
        let norm = vec_norm(v);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(CoreError::NotNormalized { norm });
        }
        Ok(DensityOperator {
            dim: v.len(),
            matrix: outer(v, v),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            dim,
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn expectation(&self, a: &ComplexMatrix) -> C64 {
        (&self.matrix * a).trace()
    }

    /// Eigendecomposition restricted to eigenvalues above the rank cutoff,
    /// decreasing.
    pub fn spectral_data(&self, tol: &Tolerance) -> Result<(Vec<f64>, ComplexMatrix)> {
        let eig = eigh(&self.matrix)?;
        let lmax = eig.values.first().copied().unwrap_or(0.0);
        let r = eig
            .values
            .iter()
            .filter(|&&l| l > tol.rank_tol * lmax)
            .count();
        let mut vectors = ComplexMatrix::zeros(self.dim, r);
        for t in 0..r {
            vectors.set_column(t, &eig.vectors.column(t));
        }
        Ok((eig.values[..r].to_vec(), vectors))
    }
}

/// Number of eigenvalues above the rank cutoff; realizes the rank of a
/// state on a finite matrix algebra.
pub fn rank_of_state(rho: &DensityOperator, tol: &Tolerance) -> Result<usize> {
    let (vals, _) = rho.spectral_data(tol)?;
    Ok(vals.len())
}

/// Dimension of the order interval `[0, ρ]` inside the dual space, i.e.
/// `rank(ρ)²`. The commutant-dimension route through the GNS representation
/// is available as [`order_interval_dim_via_commutant`] and is used as the
/// independent oracle in tests.
pub fn order_interval_dim(rho: &DensityOperator, tol: &Tolerance) -> Result<usize> {
    let r = rank_of_state(rho, tol)?;
    Ok(r * r)
}

/// Order-interval dimension computed as the commutant dimension of the GNS
/// representation, via the commutator null space. Cost grows like
/// `(dim·rank)⁶`, so this is for cross-validation rather than bulk use.
pub fn order_interval_dim_via_commutant(
    rho: &DensityOperator,
    tol: &Tolerance,
) -> Result<usize> {
    let gns = crate::cpmaps::gns_of_state(rho, tol)?;
    let d = gns.space_dim;
    // Two generic algebra generators determine the commutant; using the
    // full matrix-unit family would only slow the null-space solve down.
    let n = rho.dim();
    let mut s = crate::rng::SeedStream::new(0x6e5_0c0de);
    let g1 = gns.represent(&s.random_hermitian(n));
    let g2 = gns.represent(&s.random_hermitian(n));
    let basis = crate::linalg::null_space_of_commutator_system(&[g1, g2], d)?;
    Ok(basis.len())
}

/// Canonical purification `Σ √p_i Φ_i ⊗ |i⟩` of `ρ` in dims `(dim, rank)`.
pub fn purify(rho: &DensityOperator, tol: &Tolerance) -> Result<BipartiteVector> {
    let (vals, vecs) = rho.spectral_data(tol)?;
    let r = vals.len();
    let n = rho.dim();
    let mut amps = alloc::vec![C64::new(0.0, 0.0); n * r];
    for (t, &p) in vals.iter().enumerate() {
        let phi = vecs.column(t);
        let w = p.max(0.0).sqrt();
        for i in 0..n {
            amps[i * r + t] += phi[i] * w;
        }
    }
    BipartiteVector::normalized((n, r), amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn schmidt_of_maximally_entangled() {
        let v = BipartiteVector::maximally_entangled(2);
        let sd = schmidt_decompose(&v, &tol()).unwrap();
        assert_eq!(sd.rank, 2);
        assert!((sd.coefficients[0] - 0.70711).abs() < 1e-5);
        assert!((sd.coefficients[1] - 0.70711).abs() < 1e-5);
    }

    #[test]
    fn schmidt_of_product_state() {
        let v = BipartiteVector::basis_state((2, 2), 0, 1).unwrap();
        let sd = schmidt_decompose(&v, &tol()).unwrap();
        assert_eq!(sd.rank, 1);
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_form_analytic_coefficients() {
        let amps = alloc::vec![
            c(0.7f64.sqrt(), 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.3f64.sqrt(), 0.0)
        ];
        let v = BipartiteVector::new((2, 2), amps).unwrap();
        let sd = schmidt_decompose(&v, &tol()).unwrap();
        assert!((sd.coefficients[0] - 0.83666).abs() < 1e-5);
        assert!((sd.coefficients[1] - 0.54772).abs() < 1e-5);
    }

    #[test]
    fn schmidt_reconstruction() {
        let mut s = crate::rng::SeedStream::new(5);
        let amps = s.random_unit_vector(12);
        let v = BipartiteVector::new((3, 4), amps.clone()).unwrap();
        let sd = schmidt_decompose(&v, &tol()).unwrap();
        let rec = sd.reconstruct((3, 4));
        let err: f64 = rec
            .iter()
            .zip(amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-9);
    }

    #[test]
    fn rejects_unnormalized() {
        let amps = alloc::vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(
            BipartiteVector::new((2, 2), amps),
            Err(CoreError::NotNormalized { .. })
        ));
    }

    #[test]
    fn rank_of_state_examples() {
        let t = tol();
        assert_eq!(
            rank_of_state(&DensityOperator::maximally_mixed(2), &t).unwrap(),
            2
        );
        let pure = DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(rank_of_state(&pure, &t).unwrap(), 1);
        let rho = DensityOperator::new(
            ComplexMatrix::diag_real(&[0.5, 0.3, 0.2, 0.0]),
            &t,
        )
        .unwrap();
        assert_eq!(rank_of_state(&rho, &t).unwrap(), 3);
    }

    #[test]
    fn rank_rejects_non_psd() {
        let m = ComplexMatrix::diag_real(&[1.2, -0.2]);
        assert!(matches!(
            DensityOperator::new(m, &tol()),
            Err(CoreError::NotPositive { .. })
        ));
    }

    #[test]
    fn order_interval_examples() {
        let t = tol();
        assert_eq!(
            order_interval_dim(&DensityOperator::maximally_mixed(2), &t).unwrap(),
            4
        );
        let pure = DensityOperator::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(order_interval_dim(&pure, &t).unwrap(), 1);
    }

    #[test]
    fn order_interval_commutant_oracle_rank3_on_m4() {
        let t = tol();
        let rho = DensityOperator::new(
            ComplexMatrix::diag_real(&[0.5, 0.3, 0.2, 0.0]),
            &t,
        )
        .unwrap();
        assert_eq!(order_interval_dim(&rho, &t).unwrap(), 9);
        assert_eq!(order_interval_dim_via_commutant(&rho, &t).unwrap(), 9);
    }

    #[test]
    fn purify_round_trips() {
        let t = tol();
        let rho = DensityOperator::new(ComplexMatrix::diag_real(&[0.7, 0.3]), &t).unwrap();
        let psi = purify(&rho, &t).unwrap();
        assert_eq!(psi.dims(), (2, 2));
        let marg = psi.marginal(Side::A, &t).unwrap();
        assert!((marg.matrix() - rho.matrix()).max_abs() < 1e-9);
        let sd = schmidt_decompose(&psi, &t).unwrap();
        assert_eq!(sd.rank, 2);
    }

    #[test]
    fn purify_pure_state_has_rank_one() {
        let t = tol();
        let rho = DensityOperator::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let psi = purify(&rho, &t).unwrap();
        assert_eq!(psi.dims(), (2, 1));
        let sd = schmidt_decompose(&psi, &t).unwrap();
        assert_eq!(sd.rank, 1);
        // |0⟩ ⊗ |env⟩ up to phase
        assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn purify_maximally_mixed_is_maximally_entangled() {
        let t = tol();
        let rho = DensityOperator::maximally_mixed(2);
        let psi = purify(&rho, &t).unwrap();
        let sd = schmidt_decompose(&psi, &t).unwrap();
        assert_eq!(sd.rank, 2);
        assert!((sd.coefficients[0] - sd.coefficients[1]).abs() < 1e-12);
    }
}
