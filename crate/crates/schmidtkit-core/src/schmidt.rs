//! Equivalent Schmidt-rank computations for finite bipartite states, with
//! the canonical compression and factorization constructions behind them.
//!
//! For a pure state the toolkit computes the entanglement dimension six
//! ways and checks that they coincide:
//!
//! * (A) the vector Schmidt rank of the implementing vector,
//! * (B) the square root of the joint dimension of the constructed minimal
//!   commuting-pair compression,
//! * (C) the side dimension of the tensor-split compression construction,
//! * (D) the smallest `k` admitting a factorization of the conditioned-state
//!   map through `M_k` (constructive at `k`, with a linear-rank witness
//!   refuting smaller `k`),
//! * (E) the rank of both marginals,
//! * (F) the square root of the order-interval dimension of both marginals.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::cpmaps::CPMap;
use crate::linalg::{kron, matrix_rank, Side};
use crate::matrix::{C64, ComplexMatrix};
use crate::states::{
    order_interval_dim, rank_of_state, schmidt_decompose, BipartiteVector, DensityOperator,
    SchmidtData,
};
use crate::tolerance::Tolerance;
use crate::{CoreError, Result};

const CORRELATION_TOL: f64 = 1e-9;
const FACTOR_RESIDUAL_TOL: f64 = 1e-8;

/// Pure or mixed state of a finite bipartite system `M_dA ⊗ M_dB`.
#[derive(Debug, Clone)]
pub enum FiniteBipartiteState {
    Pure(BipartiteVector),
    Mixed {
        dims: (usize, usize),
        rho: DensityOperator,
    },
}

impl FiniteBipartiteState {
    pub fn mixed(dims: (usize, usize), rho: DensityOperator, _tol: &Tolerance) -> Result<Self> {
        if rho.dim() != dims.0 * dims.1 {
            return Err(CoreError::DimensionMismatch {
                expected: dims.0 * dims.1,
                found: rho.dim(),
                context: "FiniteBipartiteState::mixed",
            });
        }
        Ok(FiniteBipartiteState::Mixed { dims, rho })
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            FiniteBipartiteState::Pure(v) => v.dims(),
            FiniteBipartiteState::Mixed { dims, .. } => *dims,
        }
    }

    pub fn as_pure(&self) -> Result<&BipartiteVector> {
        match self {
            FiniteBipartiteState::Pure(v) => Ok(v),
            FiniteBipartiteState::Mixed { .. } => Err(CoreError::PurityRequired),
        }
    }

    /// `ω(a ⊗ b)`.
    pub fn expectation(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
        match self {
            FiniteBipartiteState::Pure(v) => v.product_expectation(a, b),
            FiniteBipartiteState::Mixed { rho, .. } => rho.expectation(&kron(a, b)),
        }
    }

    pub fn marginal(&self, keep: Side, tol: &Tolerance) -> Result<DensityOperator> {
        match self {
            FiniteBipartiteState::Pure(v) => v.marginal(keep, tol),
            FiniteBipartiteState::Mixed { dims, rho } => {
                let traced = match keep {
                    Side::A => Side::B,
                    Side::B => Side::A,
                };
                let m = crate::linalg::partial_trace(rho.matrix(), *dims, traced)?;
                DensityOperator::new(m, tol)
            }
        }
    }
}

/// Transfer matrix of the conditioned-state map `a ↦ ω(a ⊗ ·)`:
/// rows indexed by the `M_dB` matrix-unit basis, columns by the `M_dA` one.
pub fn transfer_matrix(omega: &FiniteBipartiteState) -> ComplexMatrix {
    let (da, db) = omega.dims();
    let mut m = ComplexMatrix::zeros(db * db, da * da);
    for i in 0..da {
        for j in 0..da {
            let ea = ComplexMatrix::matrix_unit(da, i, j);
            for a in 0..db {
                for b in 0..db {
                    let eb = ComplexMatrix::matrix_unit(db, a, b);
                    m[(a * db + b, i * da + j)] = omega.expectation(&ea, &eb);
                }
            }
        }
    }
    m
}

/// Numerical rank of the conditioned-state map; equals `SR²` on pure
/// states and never increases under local operations.
pub fn correlation_rank(omega: &FiniteBipartiteState, tol: &Tolerance) -> usize {
    matrix_rank(&transfer_matrix(omega), tol.rank_tol)
}

/// Pair of unital CP compressions into `M_k` with a `k⊗k` vector emulating
/// every product correlation of the original state.
#[derive(Debug, Clone)]
pub struct Compression {
    pub c_a: CPMap,
    pub c_b: CPMap,
    pub k: usize,
    pub psi: BipartiteVector,
}

impl Compression {
    /// `⟨Ψ| C_A(a) ⊗ C_B(b) |Ψ⟩`.
    pub fn emulate(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
        let ca = self.c_a.apply(a)?;
        let cb = self.c_b.apply(b)?;
        Ok(self.psi.product_expectation(&ca, &cb))
    }

    /// Largest deviation from the original correlations over the full
    /// product matrix-unit basis.
    pub fn max_correlation_deviation(&self, omega: &FiniteBipartiteState) -> Result<f64> {
        let (da, db) = omega.dims();
        let mut worst: f64 = 0.0;
        for i in 0..da {
            for j in 0..da {
                let ea = ComplexMatrix::matrix_unit(da, i, j);
                let ca = self.c_a.apply(&ea)?;
                for a in 0..db {
                    for b in 0..db {
                        let eb = ComplexMatrix::matrix_unit(db, a, b);
                        let cb = self.c_b.apply(&eb)?;
                        let got = self.psi.product_expectation(&ca, &cb);
                        let want = omega.expectation(&ea, &eb);
                        worst = worst.max((got - want).norm());
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Checks that `{(C_A(a)⊗1)Ψ}` and `{(1⊗C_B(b))Ψ}` each span the whole
    /// `k⊗k` space.
    pub fn is_cyclic(&self, tol: &Tolerance) -> Result<bool> {
        let k = self.k;
        let ik = ComplexMatrix::identity(k);
        let (da, db) = (self.c_a.in_dim(), self.c_b.in_dim());
        let mut cols_a: Vec<Vec<C64>> = Vec::with_capacity(da * da);
        for i in 0..da {
            for j in 0..da {
                let op = kron(&self.c_a.apply(&ComplexMatrix::matrix_unit(da, i, j))?, &ik);
                cols_a.push(op.apply(self.psi.amplitudes()));
            }
        }
        let span_a = matrix_rank(&ComplexMatrix::from_columns(k * k, &cols_a), tol.rank_tol);
        let mut cols_b: Vec<Vec<C64>> = Vec::with_capacity(db * db);
        for a in 0..db {
            for b in 0..db {
                let op = kron(&ik, &self.c_b.apply(&ComplexMatrix::matrix_unit(db, a, b))?);
                cols_b.push(op.apply(self.psi.amplitudes()));
            }
        }
        let span_b = matrix_rank(&ComplexMatrix::from_columns(k * k, &cols_b), tol.rank_tol);
        Ok(span_a == k * k && span_b == k * k)
    }
}

/// Minimal compression of a pure state, built by compressing each side with
/// the projection onto its local Schmidt support: in the Schmidt bases
/// `C_j = P_j (·) P_j` and the emulating vector carries the Schmidt
/// coefficients.
pub fn minimal_compression(
    omega: &FiniteBipartiteState,
    tol: &Tolerance,
) -> Result<Compression> {
    let v = omega.as_pure()?;
    let sd = schmidt_decompose(v, tol)?;
    let comp = compression_from_schmidt(v, &sd, tol)?;
    let dev = comp.max_correlation_deviation(omega)?;
    if dev > CORRELATION_TOL {
        return Err(CoreError::ResidualTooLarge { residual: dev });
    }
    Ok(comp)
}

fn compression_from_schmidt(
    v: &BipartiteVector,
    sd: &SchmidtData,
    tol: &Tolerance,
) -> Result<Compression> {
    let k = sd.rank;
    let u = sd.left_basis.clone();
    let w = sd.right_basis.clone();
    let ua = u.adjoint();
    let wa = w.adjoint();
    let c_a = CPMap::from_action(v.dims().0, k, |a| &(&ua * a) * &u, tol)?;
    let c_b = CPMap::from_action(v.dims().1, k, |b| &(&wa * b) * &w, tol)?;
    let mut amps = vec![C64::new(0.0, 0.0); k * k];
    for (t, &lam) in sd.coefficients.iter().enumerate() {
        amps[t * k + t] = C64::new(lam, 0.0);
    }
    let psi = BipartiteVector::normalized((k, k), amps)?;
    Ok(Compression { c_a, c_b, k, psi })
}

/// Linear map from `M_k` into functionals on `M_d`, stored through the
/// matrices `G(x)` with `β(x)(b) = tr(G(x)·b)`.
#[derive(Debug, Clone)]
pub struct DualValuedMap {
    in_dim: usize,
    out_dim: usize,
    /// `G(E_ij)` in row-major `(i,j)` order.
    units: Vec<ComplexMatrix>,
}

impl DualValuedMap {
    pub fn from_functional_action(
        in_dim: usize,
        out_dim: usize,
        mut value: impl FnMut(&ComplexMatrix, &ComplexMatrix) -> C64,
    ) -> Self {
        let mut units = Vec::with_capacity(in_dim * in_dim);
        for i in 0..in_dim {
            for j in 0..in_dim {
                let x = ComplexMatrix::matrix_unit(in_dim, i, j);
                // G with tr(G E_ab) = value(x, E_ab), i.e. G_ba = value(x, E_ab)
                let mut g = ComplexMatrix::zeros(out_dim, out_dim);
                for a in 0..out_dim {
                    for b in 0..out_dim {
                        g[(b, a)] = value(&x, &ComplexMatrix::matrix_unit(out_dim, a, b));
                    }
                }
                units.push(g);
            }
        }
        DualValuedMap {
            in_dim,
            out_dim,
            units,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Functional matrix `G(x)`; the functional is `b ↦ tr(G(x) b)`.
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut g = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for i in 0..self.in_dim {
            for j in 0..self.in_dim {
                let xij = x[(i, j)];
                if xij.norm_sqr() == 0.0 {
                    continue;
                }
                g = &g + &self.units[i * self.in_dim + j].scale(xij);
            }
        }
        g
    }

    pub fn evaluate(&self, x: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
        (&self.apply(x) * b).trace()
    }

    /// Complete positivity with respect to the dual matrix order: the map
    /// `b ↦ [β(E_ij)(b)]_{ij}` from `M_d` to `M_k` must be CP, which is
    /// certified through its Choi matrix.
    pub fn is_completely_positive(&self, tol: &Tolerance) -> Result<bool> {
        let d = self.out_dim;
        let k = self.in_dim;
        let mut choi = ComplexMatrix::zeros(d * k, d * k);
        for a in 0..d {
            for b in 0..d {
                let eb = ComplexMatrix::matrix_unit(d, a, b);
                for i in 0..k {
                    for j in 0..k {
                        let val = (&self.units[i * k + j] * &eb).trace();
                        choi[(a * k + i, b * k + j)] = val;
                    }
                }
            }
        }
        let m = CPMap::from_choi(d, k, choi)?;
        m.is_completely_positive(tol)
    }

    /// `β(1)` as a functional matrix.
    pub fn unit_image(&self) -> ComplexMatrix {
        self.apply(&ComplexMatrix::identity(self.in_dim))
    }
}

/// Completely positive factorization of the conditioned-state map through
/// `M_k`: `β(α(a))(b) = ω(a ⊗ b)` with `α` unital and `β(1)` a state.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub alpha: CPMap,
    pub beta: DualValuedMap,
    pub k: usize,
}

impl Factorization {
    /// `β(α(a))(b)`.
    pub fn evaluate(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
        let mid = self.alpha.apply(a)?;
        Ok(self.beta.evaluate(&mid, b))
    }

    pub fn max_deviation(&self, omega: &FiniteBipartiteState) -> Result<f64> {
        let (da, db) = omega.dims();
        let mut worst: f64 = 0.0;
        for i in 0..da {
            for j in 0..da {
                let ea = ComplexMatrix::matrix_unit(da, i, j);
                let mid = self.alpha.apply(&ea)?;
                let func = self.beta.apply(&mid);
                for a in 0..db {
                    for b in 0..db {
                        let got = func[(b, a)];
                        let want =
                            omega.expectation(&ea, &ComplexMatrix::matrix_unit(db, a, b));
                        worst = worst.max((got - want).norm());
                    }
                }
            }
        }
        Ok(worst)
    }
}

/// Result of asking for a factorization through `M_k`.
#[derive(Debug, Clone)]
pub enum FactorOutcome {
    Feasible(Factorization),
    /// Refused because the linear rank of the conditioned-state map already
    /// exceeds `k²`.
    Infeasible { witness_rank: usize },
}

/// Factorization of the conditioned-state map through `M_k`: constructive
/// (by padding the minimal compression) for `k ≥ SR`, with a rank witness
/// below.
pub fn factor_through(
    omega: &FiniteBipartiteState,
    k: usize,
    tol: &Tolerance,
) -> Result<FactorOutcome> {
    if k < 1 {
        return Err(CoreError::InvalidParameter {
            context: "factor_through requires k ≥ 1",
        });
    }
    let v = omega.as_pure()?;
    let sd = schmidt_decompose(v, tol)?;
    let sr = sd.rank;
    if k < sr {
        let witness_rank = correlation_rank(omega, tol);
        return Ok(FactorOutcome::Infeasible { witness_rank });
    }
    let comp = compression_from_schmidt(v, &sd, tol)?;
    let (da, _db) = v.dims();
    // Pad the compressed side into M_k: embed the SR-dimensional corner and
    // route the complement through the marginal expectation so α stays
    // unital.
    let marg_a = v.marginal(Side::A, tol)?;
    let mut w = ComplexMatrix::zeros(k, sr);
    for t in 0..sr {
        w[(t, t)] = C64::new(1.0, 0.0);
    }
    let wt = w.adjoint();
    let corner_defect = &ComplexMatrix::identity(k) - &(&w * &wt);
    let c_a = comp.c_a.clone();
    let rho_a = marg_a.matrix().clone();
    let alpha = CPMap::from_action(
        da,
        k,
        |a| {
            let core = &(&w * &c_a.apply(a).expect("dims fixed")) * &wt;
            let scalar = (&rho_a * a).trace();
            &core + &corner_defect.scale(scalar)
        },
        tol,
    )?;
    let c_b = comp.c_b.clone();
    let psi = comp.psi.clone();
    let beta = DualValuedMap::from_functional_action(k, v.dims().1, |x, b| {
        let inner = &(&wt * x) * &w;
        let cb = c_b.apply(b).expect("dims fixed");
        psi.product_expectation(&inner, &cb)
    });
    let fac = Factorization { alpha, beta, k };
    let dev = fac.max_deviation(omega)?;
    if dev > FACTOR_RESIDUAL_TOL {
        return Err(CoreError::ResidualTooLarge { residual: dev });
    }
    Ok(FactorOutcome::Feasible(fac))
}

/// The six equivalent entanglement-dimension computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SixWays {
    pub def_a: usize,
    pub def_b: usize,
    pub def_c: usize,
    pub def_d: usize,
    pub def_e: usize,
    pub def_f: usize,
    pub agree: bool,
}

impl SixWays {
    pub fn value(&self) -> Option<usize> {
        if self.agree {
            Some(self.def_a)
        } else {
            None
        }
    }
}

fn exact_isqrt(n: usize) -> Option<usize> {
    let mut r = 0usize;
    while r * r < n {
        r += 1;
    }
    if r * r == n {
        Some(r)
    } else {
        None
    }
}

/// Computes the Schmidt rank of a pure state along all six routes and
/// cross-checks their agreement.
pub fn schmidt_rank_all_ways(
    omega: &FiniteBipartiteState,
    tol: &Tolerance,
) -> Result<SixWays> {
    let v = omega.as_pure()?;

    // (A) vector Schmidt rank of the implementing vector.
    let sd = schmidt_decompose(v, tol)?;
    let def_a = sd.rank;

    // (C) tensor-split compression construction, verified down to its
    // cyclicity property.
    let comp = minimal_compression(omega, tol)?;
    if !comp.is_cyclic(tol)? {
        return Err(CoreError::InvalidParameter {
            context: "constructed compression is not cyclic",
        });
    }
    let def_c = comp.k;

    // (B) same data viewed as a commuting-pair compression on K = C^k ⊗ C^k;
    // the rank is the square root of dim K.
    let def_b = {
        let dim_k = comp.k * comp.k;
        // commuting ranges: spot-check on a pair of generic elements
        let mut s = crate::rng::SeedStream::new(0xb00_b1e5);
        let ga = comp.c_a.apply(&s.random_hermitian(v.dims().0))?;
        let gb = comp.c_b.apply(&s.random_hermitian(v.dims().1))?;
        let lifted_a = kron(&ga, &ComplexMatrix::identity(comp.k));
        let lifted_b = kron(&ComplexMatrix::identity(comp.k), &gb);
        let commutator = (&(&lifted_a * &lifted_b) - &(&lifted_b * &lifted_a)).max_abs();
        if commutator > CORRELATION_TOL {
            return Err(CoreError::NotInCommutant {
                deviation: commutator,
            });
        }
        exact_isqrt(dim_k).expect("k·k is a square")
    };

    // (D) smallest k admitting a factorization: the linear rank of the
    // conditioned-state map fixes the candidate, which is then realized
    // constructively.
    let gamma_rank = correlation_rank(omega, tol);
    let def_d = match exact_isqrt(gamma_rank) {
        Some(r) => r,
        None => {
            return Err(CoreError::InvalidParameter {
                context: "conditioned-state map rank is not a perfect square on a pure state",
            })
        }
    };
    match factor_through(omega, def_d, tol)? {
        FactorOutcome::Feasible(_) => {}
        FactorOutcome::Infeasible { .. } => {
            return Err(CoreError::InvalidParameter {
                context: "factorization infeasible at the rank-determined dimension",
            })
        }
    }

    // (E) rank of both marginals.
    let marg_a = omega.marginal(Side::A, tol)?;
    let marg_b = omega.marginal(Side::B, tol)?;
    let rank_a = rank_of_state(&marg_a, tol)?;
    let rank_b = rank_of_state(&marg_b, tol)?;
    if rank_a != rank_b {
        return Err(CoreError::InvalidParameter {
            context: "marginal ranks differ on a pure state",
        });
    }
    let def_e = rank_a;

    // (F) square root of the order-interval dimension of both marginals.
    let oi_a = order_interval_dim(&marg_a, tol)?;
    let oi_b = order_interval_dim(&marg_b, tol)?;
    let def_f = match (exact_isqrt(oi_a), exact_isqrt(oi_b)) {
        (Some(x), Some(y)) if x == y => x,
        _ => {
            return Err(CoreError::InvalidParameter {
                context: "order-interval dimensions are not matching squares",
            })
        }
    };

    let agree = def_a == def_b
        && def_a == def_c
        && def_a == def_d
        && def_a == def_e
        && def_a == def_f;
    Ok(SixWays {
        def_a,
        def_b,
        def_c,
        def_d,
        def_e,
        def_f,
        agree,
    })
}

/// One-system-finite normal form: the canonical purification of the A
/// marginal together with the unique unital CP map `T_B` into `M_r`
/// reproducing all correlations,
/// `⟨i|T_B(b)|j⟩ = (p_i p_j)^{-1/2} ω(|Φ_i⟩⟨Φ_j| ⊗ b)`.
pub fn bob_joins_alice(
    omega: &FiniteBipartiteState,
    tol: &Tolerance,
) -> Result<(BipartiteVector, CPMap)> {
    let v = omega.as_pure()?;
    let (da, db) = v.dims();
    let marg = v.marginal(Side::A, tol)?;
    let (p, phi) = marg.spectral_data(tol)?;
    let r = p.len();
    // Ψ = Σ √p_i Φ_i ⊗ |i⟩
    let mut amps = vec![C64::new(0.0, 0.0); da * r];
    for (t, &pt) in p.iter().enumerate() {
        let col = phi.column(t);
        for i in 0..da {
            amps[i * r + t] += col[i] * pt.sqrt();
        }
    }
    let psi = BipartiteVector::normalized((da, r), amps)?;

    let t_b = CPMap::from_action(
        db,
        r,
        |b| {
            ComplexMatrix::from_fn(r, r, |i, j| {
                let proj = crate::matrix::outer(&phi.column(i), &phi.column(j));
                v.product_expectation(&proj, b) / (p[i] * p[j]).sqrt()
            })
        },
        tol,
    )?;
    Ok((psi, t_b))
}

/// Verifies that `target` is distillable from `omega` through the supplied
/// local maps, i.e. `ω(D_A(a) ⊗ D_B(b)) = ⟨Ψ|a⊗b|Ψ⟩` on a full product
/// basis. On success, the Schmidt rank of the target is checked to be a
/// lower bound for the source's (when the source is pure).
pub fn distill_check(
    omega: &FiniteBipartiteState,
    d_a: &CPMap,
    d_b: &CPMap,
    target: &BipartiteVector,
    tol: &Tolerance,
) -> Result<bool> {
    let (da, db) = omega.dims();
    let (ka, kb) = target.dims();
    if d_a.in_dim() != ka || d_a.out_dim() != da || d_b.in_dim() != kb || d_b.out_dim() != db {
        return Err(CoreError::DimensionMismatch {
            expected: ka,
            found: d_a.in_dim(),
            context: "distill_check",
        });
    }
    let mut worst: f64 = 0.0;
    for i in 0..ka {
        for j in 0..ka {
            let a = ComplexMatrix::matrix_unit(ka, i, j);
            let da_img = d_a.apply(&a)?;
            for s in 0..kb {
                for t in 0..kb {
                    let b = ComplexMatrix::matrix_unit(kb, s, t);
                    let db_img = d_b.apply(&b)?;
                    let got = omega.expectation(&da_img, &db_img);
                    let want = target.product_expectation(&a, &b);
                    worst = worst.max((got - want).norm());
                }
            }
        }
    }
    if worst > CORRELATION_TOL {
        return Ok(false);
    }
    if let Ok(v) = omega.as_pure() {
        let sr_source = schmidt_decompose(v, tol)?.rank;
        let sr_target = schmidt_decompose(target, tol)?.rank;
        if sr_target > sr_source {
            return Err(CoreError::InvalidParameter {
                context: "distilled Schmidt rank exceeds the source rank",
            });
        }
    }
    Ok(true)
}

/// Tensor product of two pure bipartite states, with the `(A₁A₂)|(B₁B₂)`
/// grouping of the four factors.
pub fn tensor_pure(v: &BipartiteVector, w: &BipartiteVector) -> Result<BipartiteVector> {
    let (a1, b1) = v.dims();
    let (a2, b2) = w.dims();
    let mut amps = vec![C64::new(0.0, 0.0); a1 * a2 * b1 * b2];
    for i1 in 0..a1 {
        for j1 in 0..b1 {
            let x = v.amplitudes()[i1 * b1 + j1];
            if x.norm_sqr() == 0.0 {
                continue;
            }
            for i2 in 0..a2 {
                for j2 in 0..b2 {
                    let y = w.amplitudes()[i2 * b2 + j2];
                    let row = i1 * a2 + i2;
                    let col = j1 * b2 + j2;
                    amps[row * (b1 * b2) + col] = x * y;
                }
            }
        }
    }
    BipartiteVector::normalized((a1 * a2, b1 * b2), amps)
}

/// Pulls a state back through local unital CP maps (Heisenberg picture):
/// the result is the state `(a', b') ↦ ω(T_A(a') ⊗ T_B(b'))` on the domain
/// algebras, returned as a density operator (it is mixed in general).
pub fn pull_back(
    omega: &FiniteBipartiteState,
    t_a: &CPMap,
    t_b: &CPMap,
    tol: &Tolerance,
) -> Result<FiniteBipartiteState> {
    let (da, db) = omega.dims();
    if t_a.out_dim() != da || t_b.out_dim() != db {
        return Err(CoreError::DimensionMismatch {
            expected: da,
            found: t_a.out_dim(),
            context: "pull_back",
        });
    }
    let (ka, kb) = (t_a.in_dim(), t_b.in_dim());
    // density with tr(ρ'(E_ij ⊗ E_st)) = ω(T_A(E_ij) ⊗ T_B(E_st));
    // with the trace pairing the matrix element is ρ'_{(j,t),(i,s)}.
    let mut m = ComplexMatrix::zeros(ka * kb, ka * kb);
    for i in 0..ka {
        for j in 0..ka {
            let ta_img = t_a.apply(&ComplexMatrix::matrix_unit(ka, i, j))?;
            for s in 0..kb {
                for t in 0..kb {
                    let tb_img = t_b.apply(&ComplexMatrix::matrix_unit(kb, s, t))?;
                    let val = omega.expectation(&ta_img, &tb_img);
                    m[(j * kb + t, i * kb + s)] = val;
                }
            }
        }
    }
    let rho = DensityOperator::new(m, tol)?;
    FiniteBipartiteState::mixed((ka, kb), rho, tol)
}
