//! Completely positive map calculus.
//!
//! Maps are kept in the Heisenberg picture (unital maps are the primary
//! objects) and stored through their Choi matrix
//! `C = Σ_ij E_ij ⊗ T(E_ij)`; complete positivity is certified by the
//! spectrum of `C`. Kraus operators come from the Choi eigendecomposition
//! with the eigenvalue cutoff `rank_tol`, ordered by decreasing eigenvalue,
//! and minimal Stinespring dilations are assembled from them. On top of the
//! dilation sits the bijection `S = V† Q π(·) V` between maps cp-dominated
//! by `T` and the unit interval of the commutant of the dilated
//! representation.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::linalg::{eigh, kron, lstsq, null_space_of_commutator_system, partial_trace, Side};
use crate::matrix::{vec_dot, C64, ComplexMatrix};
use crate::rng::SeedStream;
use crate::states::{purify, BipartiteVector, DensityOperator};
use crate::tolerance::Tolerance;
use crate::{CoreError, Result};

const UNITAL_TOL: f64 = 1e-9;
const COMMUTANT_TOL: f64 = 1e-9;
const BACKWARD_RESIDUAL_TOL: f64 = 1e-7;

/// Linear map between matrix algebras, stored as a Choi matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CPMap {
    in_dim: usize,
    out_dim: usize,
    choi: ComplexMatrix,
}

impl CPMap {
    /// Wraps a Choi matrix of size `(in_dim·out_dim)²`.
    pub fn from_choi(in_dim: usize, out_dim: usize, choi: ComplexMatrix) -> Result<Self> {
        let d = in_dim * out_dim;
        if choi.rows() != d || choi.cols() != d {
            return Err(CoreError::DimensionMismatch {
                expected: d,
                found: choi.rows(),
                context: "CPMap::from_choi",
            });
        }
        Ok(CPMap {
            in_dim,
            out_dim,
            choi,
        })
    }

    /// Builds the map from its action on the matrix-unit basis, verifying
    /// linearity of the supplied action on a random spanning combination.
    pub fn from_action(
        in_dim: usize,
        out_dim: usize,
        action: impl Fn(&ComplexMatrix) -> ComplexMatrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        let map = Self::from_action_unchecked(in_dim, out_dim, &action);
        // Linearity spot check: compare the direct action on a random input
        // with the linear extension encoded in the Choi matrix.
        let mut s = SeedStream::new(0x11ea_11ea);
        let probe = s.ginibre(in_dim, in_dim);
        let direct = action(&probe);
        let extended = map.apply(&probe)?;
        let dev = (&direct - &extended).max_abs();
        let scale = direct.max_abs().max(1.0);
        if dev > 1e-8 * scale + tol.psd_tol {
            return Err(CoreError::NonlinearAction { deviation: dev });
        }
        Ok(map)
    }

    fn from_action_unchecked(
        in_dim: usize,
        out_dim: usize,
        action: &impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Self {
        let d = in_dim * out_dim;
        let mut choi = ComplexMatrix::zeros(d, d);
        for i in 0..in_dim {
            for j in 0..in_dim {
                let out = action(&ComplexMatrix::matrix_unit(in_dim, i, j));
                debug_assert_eq!(out.rows(), out_dim);
                for a in 0..out_dim {
                    for b in 0..out_dim {
                        choi[(i * out_dim + a, j * out_dim + b)] = out[(a, b)];
                    }
                }
            }
        }
        CPMap {
            in_dim,
            out_dim,
            choi,
        }
    }

    /// Map given by Kraus operators `a ↦ Σ K_k† a K_k` (`K_k` are
    /// `in_dim × out_dim`).
    pub fn from_kraus(in_dim: usize, out_dim: usize, kraus: &[ComplexMatrix]) -> Result<Self> {
        for k in kraus {
            if k.rows() != in_dim || k.cols() != out_dim {
                return Err(CoreError::DimensionMismatch {
                    expected: in_dim,
                    found: k.rows(),
                    context: "CPMap::from_kraus",
                });
            }
        }
        let apply = |a: &ComplexMatrix| {
            let mut out = ComplexMatrix::zeros(out_dim, out_dim);
            for k in kraus {
                out = &out + &(&(&k.adjoint() * a) * k);
            }
            out
        };
        Ok(Self::from_action_unchecked(in_dim, out_dim, &apply))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_action_unchecked(dim, dim, &|a: &ComplexMatrix| a.clone())
    }

    /// State `a ↦ tr(ρ a)` viewed as a CP map into the scalars.
    pub fn from_state(rho: &DensityOperator) -> Self {
        let m = rho.matrix().clone();
        Self::from_action_unchecked(rho.dim(), 1, &|a: &ComplexMatrix| {
            let mut out = ComplexMatrix::zeros(1, 1);
            out[(0, 0)] = (&m * a).trace();
            out
        })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    /// Applies the map: `T(a) = Σ_ij a_ij T(E_ij)` read off the Choi blocks.
    pub fn apply(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.in_dim || a.cols() != self.in_dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.in_dim,
                found: a.rows(),
                context: "CPMap::apply",
            });
        }
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for i in 0..self.in_dim {
            for j in 0..self.in_dim {
                let aij = a[(i, j)];
                if aij.norm_sqr() == 0.0 {
                    continue;
                }
                for r in 0..self.out_dim {
                    for c in 0..self.out_dim {
                        out[(r, c)] += aij * self.choi[(i * self.out_dim + r, j * self.out_dim + c)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Smallest eigenvalue of the Choi matrix.
    pub fn min_choi_eigenvalue(&self) -> Result<f64> {
        let eig = eigh(&self.choi)?;
        Ok(eig.values.last().copied().unwrap_or(0.0))
    }

    /// Complete positivity via Choi's theorem.
    pub fn is_completely_positive(&self, tol: &Tolerance) -> Result<bool> {
        let scale = self.choi.max_abs().max(1.0);
        Ok(self.min_choi_eigenvalue()? >= -tol.psd_tol * scale)
    }

    pub fn unital_deviation(&self) -> Result<f64> {
        let img = self.apply(&ComplexMatrix::identity(self.in_dim))?;
        Ok((&img - &ComplexMatrix::identity(self.out_dim)).max_abs())
    }

    pub fn is_unital(&self) -> Result<bool> {
        Ok(self.unital_deviation()? <= UNITAL_TOL)
    }

    /// Trace preservation of the Schrödinger-picture dual: the partial
    /// trace of the Choi matrix over the output factor equals the identity.
    pub fn is_trace_preserving(&self) -> Result<bool> {
        let red = partial_trace(&self.choi, (self.in_dim, self.out_dim), Side::B)?;
        Ok((&red - &ComplexMatrix::identity(self.in_dim)).max_abs() <= UNITAL_TOL)
    }

    /// Kraus operators ordered by decreasing Choi eigenvalue; eigenvalues
    /// below `rank_tol` relative to the largest are dropped.
    pub fn kraus(&self, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
        let eig = eigh(&self.choi)?;
        let lmax = eig.values.first().copied().unwrap_or(0.0).max(0.0);
        let scale = self.choi.max_abs().max(1.0);
        let mut out = Vec::new();
        for (k, &lam) in eig.values.iter().enumerate() {
            if lam <= tol.rank_tol * lmax {
                if lam < -tol.psd_tol * scale {
                    return Err(CoreError::NotCompletelyPositive {
                        min_choi_eigenvalue: lam,
                    });
                }
                continue;
            }
            let x = ComplexMatrix::from_vector(self.in_dim, self.out_dim, &eig.vectors.column(k))?;
            out.push(x.conj().scale_re(lam.sqrt()));
        }
        Ok(out)
    }

    /// Choi rank = minimal Kraus number.
    pub fn choi_rank(&self, tol: &Tolerance) -> Result<usize> {
        Ok(self.kraus(tol)?.len())
    }

    /// `other ≤cp self` within the positivity allowance.
    pub fn dominates(&self, other: &CPMap, tol: &Tolerance) -> Result<bool> {
        if self.in_dim != other.in_dim || self.out_dim != other.out_dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.in_dim,
                found: other.in_dim,
                context: "CPMap::dominates",
            });
        }
        let diff = CPMap::from_choi(self.in_dim, self.out_dim, &self.choi - &other.choi)?;
        diff.is_completely_positive(tol)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &CPMap) -> Result<CPMap> {
        if other.out_dim != self.in_dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.in_dim,
                found: other.out_dim,
                context: "CPMap::compose",
            });
        }
        let mut blocks: Vec<ComplexMatrix> = Vec::with_capacity(other.in_dim * other.in_dim);
        for i in 0..other.in_dim {
            for j in 0..other.in_dim {
                let mid = other.apply(&ComplexMatrix::matrix_unit(other.in_dim, i, j))?;
                blocks.push(self.apply(&mid)?);
            }
        }
        let d = other.in_dim * self.out_dim;
        let mut choi = ComplexMatrix::zeros(d, d);
        for i in 0..other.in_dim {
            for j in 0..other.in_dim {
                let blk = &blocks[i * other.in_dim + j];
                for a in 0..self.out_dim {
                    for b in 0..self.out_dim {
                        choi[(i * self.out_dim + a, j * self.out_dim + b)] = blk[(a, b)];
                    }
                }
            }
        }
        CPMap::from_choi(other.in_dim, self.out_dim, choi)
    }
}

/// Builds a CP map from a linear action on the matrix-unit basis, setting
/// the complete-positivity verdict from the Choi spectrum.
pub fn choi_of(
    action: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    in_dim: usize,
    out_dim: usize,
    tol: &Tolerance,
) -> Result<CPMap> {
    CPMap::from_action(in_dim, out_dim, action, tol)
}

/// Minimal Stinespring dilation `T(a) = V† (a ⊗ 1_env) V` of a unital CP
/// map; `env_dim` equals the Choi rank.
#[derive(Debug, Clone)]
pub struct StinespringDilation {
    /// Isometry from `C^out` into `C^in ⊗ C^env`, stored as an
    /// `(in·env) × out` matrix.
    pub isometry: ComplexMatrix,
    pub in_dim: usize,
    pub out_dim: usize,
    pub env_dim: usize,
}

impl StinespringDilation {
    /// The dilated representation `a ↦ a ⊗ 1_env`.
    pub fn represent(&self, a: &ComplexMatrix) -> ComplexMatrix {
        kron(a, &ComplexMatrix::identity(self.env_dim))
    }

    /// Reconstructs the compressed map `a ↦ V†(a⊗1)V`.
    pub fn compress(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let va = &self.represent(a) * &self.isometry;
        &self.isometry.adjoint() * &va
    }
}

pub fn minimal_stinespring(t: &CPMap, tol: &Tolerance) -> Result<StinespringDilation> {
    if !t.is_completely_positive(tol)? {
        return Err(CoreError::NotCompletelyPositive {
            min_choi_eigenvalue: t.min_choi_eigenvalue()?,
        });
    }
    let dev = t.unital_deviation()?;
    if dev > UNITAL_TOL {
        return Err(CoreError::NotUnital { deviation: dev });
    }
    let kraus = t.kraus(tol)?;
    let env = kraus.len();
    let mut v = ComplexMatrix::zeros(t.in_dim() * env, t.out_dim());
    for (k, kr) in kraus.iter().enumerate() {
        // V ψ = Σ_k (K_k ψ) ⊗ |k⟩
        for i in 0..t.in_dim() {
            for b in 0..t.out_dim() {
                v[(i * env + k, b)] = kr[(i, b)];
            }
        }
    }
    Ok(StinespringDilation {
        isometry: v,
        in_dim: t.in_dim(),
        out_dim: t.out_dim(),
        env_dim: env,
    })
}

/// GNS data of a state on a matrix algebra, realized through the canonical
/// purification: the representation space is `C^dim ⊗ C^rank`, the algebra
/// acts as `a ↦ a ⊗ 1`, and the cyclic vector is the purification.
#[derive(Debug, Clone)]
pub struct GNSData {
    pub space_dim: usize,
    pub algebra_dim: usize,
    pub rank: usize,
    pub cyclic_vector: Vec<C64>,
}

impl GNSData {
    pub fn represent(&self, a: &ComplexMatrix) -> ComplexMatrix {
        kron(a, &ComplexMatrix::identity(self.rank))
    }

    /// `⟨Ω, π(a) Ω⟩`.
    pub fn state_value(&self, a: &ComplexMatrix) -> C64 {
        let pa = self.represent(a).apply(&self.cyclic_vector);
        vec_dot(&self.cyclic_vector, &pa)
    }
}

pub fn gns_of_state(rho: &DensityOperator, tol: &Tolerance) -> Result<GNSData> {
    let psi = purify(rho, tol)?;
    let (n, r) = psi.dims();
    Ok(GNSData {
        space_dim: n * r,
        algebra_dim: n,
        rank: r,
        cyclic_vector: psi.amplitudes().to_vec(),
    })
}

/// Canonical purification re-exported alongside the GNS data.
pub fn gns_purification(rho: &DensityOperator, tol: &Tolerance) -> Result<BipartiteVector> {
    purify(rho, tol)
}

fn commutant_basis(dilation: &StinespringDilation) -> Result<Vec<ComplexMatrix>> {
    let d = dilation.in_dim * dilation.env_dim;
    // Two generic Hermitian generators of the matrix algebra suffice and
    // keep the null-space solve small; the dimension of the result is
    // checked against the structural value env_dim² and the full
    // matrix-unit family is used as a fallback.
    let mut s = SeedStream::new(0xc0_a1ce);
    let g1 = dilation.represent(&s.random_hermitian(dilation.in_dim));
    let g2 = dilation.represent(&s.random_hermitian(dilation.in_dim));
    let basis = null_space_of_commutator_system(&[g1, g2], d)?;
    if basis.len() == dilation.env_dim * dilation.env_dim {
        return Ok(basis);
    }
    let mut gens = Vec::new();
    for i in 0..dilation.in_dim {
        for j in 0..dilation.in_dim {
            gens.push(dilation.represent(&ComplexMatrix::matrix_unit(dilation.in_dim, i, j)));
        }
    }
    null_space_of_commutator_system(&gens, d)
}

/// `S = V† Q π(·) V` for `Q` in the unit interval of the commutant of the
/// dilated representation.
pub fn radon_nikodym_forward(
    t: &CPMap,
    q: &ComplexMatrix,
    dilation: &StinespringDilation,
    tol: &Tolerance,
) -> Result<CPMap> {
    let d = dilation.in_dim * dilation.env_dim;
    if q.rows() != d || q.cols() != d {
        return Err(CoreError::DimensionMismatch {
            expected: d,
            found: q.rows(),
            context: "radon_nikodym_forward",
        });
    }
    let eig = eigh(q)?;
    let max = eig.values.first().copied().unwrap_or(0.0);
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -tol.psd_tol || max > 1.0 + tol.psd_tol {
        return Err(CoreError::OutsideUnitInterval { min, max });
    }
    // q must commute with the dilated representation.
    for i in 0..dilation.in_dim {
        for j in 0..dilation.in_dim {
            let g = dilation.represent(&ComplexMatrix::matrix_unit(dilation.in_dim, i, j));
            let dev = (&(&g * q) - &(q * &g)).max_abs();
            if dev > COMMUTANT_TOL {
                return Err(CoreError::NotInCommutant { deviation: dev });
            }
        }
    }
    let vt = dilation.isometry.adjoint();
    let action = |a: &ComplexMatrix| {
        let qa = q * &dilation.represent(a);
        &(&vt * &qa) * &dilation.isometry
    };
    CPMap::from_choi(
        t.in_dim(),
        t.out_dim(),
        CPMap::from_action_unchecked(t.in_dim(), t.out_dim(), &action).choi,
    )
}

/// Recovers `Q` from `s ≤cp t` by solving the matrix-element system on the
/// spanning set `{π(E_ij) V ψ_k}` by least squares. A residual above 1e-7
/// is an error.
pub fn radon_nikodym_backward(t: &CPMap, s: &CPMap, tol: &Tolerance) -> Result<ComplexMatrix> {
    if !t.dominates(s, tol)? {
        let diff = CPMap::from_choi(t.in_dim(), t.out_dim(), t.choi() - s.choi())?;
        return Err(CoreError::NotDominated {
            min_choi_eigenvalue: diff.min_choi_eigenvalue()?,
        });
    }
    let dilation = minimal_stinespring(t, tol)?;
    let basis = commutant_basis(&dilation)?;
    let n = t.in_dim();
    let out = t.out_dim();

    // Spanning vectors w_{(i,j,k)} = π(E_ij) V e_k.
    let mut spanning: Vec<Vec<C64>> = Vec::with_capacity(n * n * out);
    for i in 0..n {
        for j in 0..n {
            let rep = dilation.represent(&ComplexMatrix::matrix_unit(n, i, j));
            let pv = &rep * &dilation.isometry;
            for k in 0..out {
                spanning.push(pv.column(k));
            }
        }
    }
    // Precompute s on the matrix-unit basis.
    let mut s_units: Vec<ComplexMatrix> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            s_units.push(s.apply(&ComplexMatrix::matrix_unit(n, i, j))?);
        }
    }

    let rows = spanning.len() * spanning.len();
    let cols = basis.len();
    let mut a = ComplexMatrix::zeros(rows, cols);
    let mut rhs = vec![C64::new(0.0, 0.0); rows];
    let mut row = 0;
    for (ri, wr) in spanning.iter().enumerate() {
        let (i, j, k) = unflatten(ri, n, out);
        for (ci, wc) in spanning.iter().enumerate() {
            let (ip, jp, kp) = unflatten(ci, n, out);
            for (alpha, b) in basis.iter().enumerate() {
                let bw = b.apply(wc);
                a[(row, alpha)] = vec_dot(wr, &bw);
            }
            // ⟨ψ_k, S(E_ij† E_i'j') ψ_k'⟩ with E_ij† E_i'j' = δ_{ii'} E_jj'
            rhs[row] = if i == ip {
                s_units[j * n + jp][(k, kp)]
            } else {
                C64::new(0.0, 0.0)
            };
            row += 1;
        }
    }
    let (coeffs, residual) = lstsq(&a, &rhs, tol.rank_tol)?;
    let scale = t.choi().max_abs().max(1.0);
    if residual > BACKWARD_RESIDUAL_TOL * scale {
        return Err(CoreError::ResidualTooLarge { residual });
    }
    let d = dilation.in_dim * dilation.env_dim;
    let mut q = ComplexMatrix::zeros(d, d);
    for (alpha, b) in basis.iter().enumerate() {
        q = &q + &b.scale(coeffs[alpha]);
    }
    let q = q.hermitian_part();
    let eig = eigh(&q)?;
    let max = eig.values.first().copied().unwrap_or(0.0);
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min < -10.0 * tol.psd_tol || max > 1.0 + 10.0 * tol.psd_tol {
        return Err(CoreError::OutsideUnitInterval { min, max });
    }
    Ok(q)
}

fn unflatten(idx: usize, n: usize, out: usize) -> (usize, usize, usize) {
    let k = idx % out;
    let rest = idx / out;
    (rest / n, rest % n, k)
}

/// Outcome of a sampled complete-positivity check.
#[derive(Debug, Clone)]
pub struct CpCheckOutcome {
    pub pass: bool,
    pub min_eigenvalue_seen: f64,
    /// PSD input witnessing the violation, when one was found.
    pub counterexample: Option<ComplexMatrix>,
}

/// Verifies positivity preservation of `id_level ⊗ λ` on randomly sampled
/// PSD inputs. `action` must be *-linear from `M_dom` to `M_cod`.
pub fn complete_positivity_check(
    action: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    dom_dim: usize,
    cod_dim: usize,
    level: usize,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<CpCheckOutcome> {
    if level < 1 {
        return Err(CoreError::InvalidParameter {
            context: "complete_positivity_check requires level ≥ 1",
        });
    }
    let mut rng = SeedStream::new(seed);
    let big = level * dom_dim;
    let mut min_seen = f64::INFINITY;
    for _ in 0..trials {
        let x = rng.random_psd(big);
        // amplified action: apply λ blockwise
        let mut y = ComplexMatrix::zeros(level * cod_dim, level * cod_dim);
        for bi in 0..level {
            for bj in 0..level {
                let block = ComplexMatrix::from_fn(dom_dim, dom_dim, |i, j| {
                    x[(bi * dom_dim + i, bj * dom_dim + j)]
                });
                let out = action(&block);
                for i in 0..cod_dim {
                    for j in 0..cod_dim {
                        y[(bi * cod_dim + i, bj * cod_dim + j)] = out[(i, j)];
                    }
                }
            }
        }
        let eig = eigh(&y.hermitian_part())?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        let scale = y.max_abs().max(1.0);
        min_seen = min_seen.min(min);
        if min < -tol.psd_tol * scale {
            return Ok(CpCheckOutcome {
                pass: false,
                min_eigenvalue_seen: min,
                counterexample: Some(x),
            });
        }
    }
    Ok(CpCheckOutcome {
        pass: true,
        min_eigenvalue_seen: min_seen,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn choi_of_identity_channel() {
        let t = choi_of(|a| a.clone(), 2, 2, &tol()).unwrap();
        // Σ |ii⟩⟨jj|: rank 1, trace 2
        assert_eq!(t.choi_rank(&tol()).unwrap(), 1);
        assert!((t.choi().trace().re - 2.0).abs() < 1e-12);
        assert!(t.is_completely_positive(&tol()).unwrap());
        assert!(t.is_unital().unwrap());
    }

    #[test]
    fn choi_of_full_depolarization() {
        let t = choi_of(
            |a| ComplexMatrix::identity(2).scale(a.trace() * 0.5),
            2,
            2,
            &tol(),
        )
        .unwrap();
        assert!((t.choi() - &ComplexMatrix::identity(4).scale_re(0.5)).max_abs() < 1e-12);
        assert_eq!(t.choi_rank(&tol()).unwrap(), 4);
    }

    #[test]
    fn choi_of_transpose_is_not_cp() {
        let t = choi_of(|a| a.transpose(), 2, 2, &tol()).unwrap();
        assert!(!t.is_completely_positive(&tol()).unwrap());
        assert!(t.min_choi_eigenvalue().unwrap() < -0.4);
    }

    #[test]
    fn nonlinear_action_is_rejected() {
        let r = CPMap::from_action(2, 2, |a| &a.clone() * a, &tol());
        assert!(matches!(r, Err(CoreError::NonlinearAction { .. })));
    }

    #[test]
    fn stinespring_identity_channel() {
        let t = CPMap::identity(2);
        let d = minimal_stinespring(&t, &tol()).unwrap();
        assert_eq!(d.env_dim, 1);
        let vtv = &d.isometry.adjoint() * &d.isometry;
        assert!((&vtv - &ComplexMatrix::identity(2)).max_abs() < 1e-9);
    }

    #[test]
    fn stinespring_depolarization_env_dim() {
        let t = choi_of(
            |a| ComplexMatrix::identity(2).scale(a.trace() * 0.5),
            2,
            2,
            &tol(),
        )
        .unwrap();
        let d = minimal_stinespring(&t, &tol()).unwrap();
        assert_eq!(d.env_dim, 4);
        // reconstruction on a basis
        for i in 0..2 {
            for j in 0..2 {
                let e = ComplexMatrix::matrix_unit(2, i, j);
                let dev = (&d.compress(&e) - &t.apply(&e).unwrap()).max_abs();
                assert!(dev < 1e-9);
            }
        }
    }

    #[test]
    fn stinespring_of_pure_state_is_gns() {
        let rho = DensityOperator::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let t = CPMap::from_state(&rho);
        let d = minimal_stinespring(&t, &tol()).unwrap();
        assert_eq!(d.in_dim * d.env_dim, 2);
        let gns = gns_of_state(&rho, &tol()).unwrap();
        assert_eq!(gns.space_dim, 2);
        assert!((gns.cyclic_vector[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gns_examples() {
        let t = tol();
        let gns = gns_of_state(&DensityOperator::maximally_mixed(2), &t).unwrap();
        assert_eq!(gns.space_dim, 4);
        let rho = DensityOperator::new(ComplexMatrix::diag_real(&[0.7, 0.3]), &t).unwrap();
        let gns = gns_of_state(&rho, &t).unwrap();
        assert_eq!(gns.space_dim, 4);
        let e00 = ComplexMatrix::matrix_unit(2, 0, 0);
        assert!((gns.state_value(&e00).re - 0.7).abs() < 1e-9);
        // state reproduction on the full basis
        for i in 0..2 {
            for j in 0..2 {
                let e = ComplexMatrix::matrix_unit(2, i, j);
                let got = gns.state_value(&e);
                let want = rho.expectation(&e);
                assert!((got - want).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn gns_cyclicity_spans_space() {
        let t = tol();
        let rho = DensityOperator::new(ComplexMatrix::diag_real(&[0.6, 0.4]), &t).unwrap();
        let gns = gns_of_state(&rho, &t).unwrap();
        let mut cols: Vec<Vec<C64>> = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let e = ComplexMatrix::matrix_unit(2, i, j);
                cols.push(gns.represent(&e).apply(&gns.cyclic_vector));
            }
        }
        let m = ComplexMatrix::from_columns(gns.space_dim, &cols);
        assert_eq!(crate::linalg::matrix_rank(&m, 1e-9), gns.space_dim);
    }

    #[test]
    fn rn_forward_identity_and_zero() {
        let t = tol();
        let rho = DensityOperator::maximally_mixed(2);
        let tmap = CPMap::from_state(&rho);
        let dil = minimal_stinespring(&tmap, &t).unwrap();
        let d = dil.in_dim * dil.env_dim;
        let s_id = radon_nikodym_forward(&tmap, &ComplexMatrix::identity(d), &dil, &t).unwrap();
        assert!((s_id.choi() - tmap.choi()).max_abs() < 1e-9);
        let s_zero = radon_nikodym_forward(&tmap, &ComplexMatrix::zeros(d, d), &dil, &t).unwrap();
        assert!(s_zero.choi().max_abs() < 1e-12);
    }

    #[test]
    fn rn_forward_rejects_bad_q() {
        let t = tol();
        let rho = DensityOperator::maximally_mixed(2);
        let tmap = CPMap::from_state(&rho);
        let dil = minimal_stinespring(&tmap, &t).unwrap();
        let d = dil.in_dim * dil.env_dim;
        let too_big = ComplexMatrix::identity(d).scale_re(2.0);
        assert!(matches!(
            radon_nikodym_forward(&tmap, &too_big, &dil, &t),
            Err(CoreError::OutsideUnitInterval { .. })
        ));
        // not in the commutant: a rank-one projector onto e_0 mixes the
        // system factor
        let mut p = ComplexMatrix::zeros(d, d);
        p[(0, 0)] = C64::new(1.0, 0.0);
        assert!(matches!(
            radon_nikodym_forward(&tmap, &p, &dil, &t),
            Err(CoreError::NotInCommutant { .. })
        ));
    }

    #[test]
    fn rn_forward_rank_one_commutant_projection() {
        // maximally mixed state on M₂ as a CP map to scalars; a rank-one
        // projection in the commutant yields a positive functional with
        // S(1) = 1/2.
        let t = tol();
        let rho = DensityOperator::maximally_mixed(2);
        let tmap = CPMap::from_state(&rho);
        let dil = minimal_stinespring(&tmap, &t).unwrap();
        // commutant of a⊗1 on C²⊗C² is 1⊗M₂; take 1⊗|0⟩⟨0|
        let q = kron(
            &ComplexMatrix::identity(2),
            &ComplexMatrix::matrix_unit(2, 0, 0),
        );
        let s = radon_nikodym_forward(&tmap, &q, &dil, &t).unwrap();
        let val = s.apply(&ComplexMatrix::identity(2)).unwrap();
        assert!((val[(0, 0)].re - 0.5).abs() < 1e-9);
        // direct evaluation oracle: ⟨Ω, π(1) Q Ω⟩ with Ω the purification
        let gns = gns_of_state(&rho, &t).unwrap();
        let qo = q.apply(&gns.cyclic_vector);
        let direct = vec_dot(&gns.cyclic_vector, &qo);
        assert!((val[(0, 0)] - direct).norm() < 1e-9);
    }

    #[test]
    fn rn_backward_trivial_cases() {
        let t = tol();
        let rho = DensityOperator::maximally_mixed(2);
        let tmap = CPMap::from_state(&rho);
        let dil = minimal_stinespring(&tmap, &t).unwrap();
        let d = dil.in_dim * dil.env_dim;
        // s = t → Q = 1
        let q = radon_nikodym_backward(&tmap, &tmap, &t).unwrap();
        assert!((&q - &ComplexMatrix::identity(d)).max_abs() < 1e-8);
        // s = t/2 → Q = 1/2
        let half = CPMap::from_choi(2, 1, tmap.choi().scale_re(0.5)).unwrap();
        let q = radon_nikodym_backward(&tmap, &half, &t).unwrap();
        assert!((&q - &ComplexMatrix::identity(d).scale_re(0.5)).max_abs() < 1e-8);
    }

    #[test]
    fn rn_backward_rejects_undominated() {
        let t = tol();
        let rho = DensityOperator::maximally_mixed(2);
        let tmap = CPMap::from_state(&rho);
        let double = CPMap::from_choi(2, 1, tmap.choi().scale_re(2.0)).unwrap();
        assert!(matches!(
            radon_nikodym_backward(&tmap, &double, &t),
            Err(CoreError::NotDominated { .. })
        ));
    }

    #[test]
    fn cp_check_identity_passes_transpose_fails() {
        let t = tol();
        let ok = complete_positivity_check(|a| a.clone(), 2, 2, 2, 50, 1, &t).unwrap();
        assert!(ok.pass);
        let bad = complete_positivity_check(|a| a.transpose(), 2, 2, 2, 200, 1, &t).unwrap();
        assert!(!bad.pass);
        assert!(bad.counterexample.is_some());
    }
}
