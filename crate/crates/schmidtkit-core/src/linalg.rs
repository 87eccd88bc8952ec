//! Linear-algebra kernel: Kronecker products, partial traces, Jacobi SVD and
//! Hermitian eigendecomposition, least squares, commutant null spaces.
//!
//! The decompositions are one- and two-sided Jacobi iterations. For the
//! matrix sizes this toolkit works with (a few hundred at most) they are
//! accurate to full relative precision and fast enough; convergence failures
//! surface as explicit errors.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::matrix::{vec_norm, C64, ComplexMatrix};
use crate::tolerance::{Tolerance, HERMITIAN_ASYM_TOL};
use crate::{CoreError, Result};

const MAX_JACOBI_SWEEPS: usize = 60;

/// Which tensor factor an operation acts on (or removes).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Partial trace of an operator on `C^dA ⊗ C^dB`; `side` names the factor
/// that is traced out.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: (usize, usize),
    side: Side,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if m.rows() != da * db || m.cols() != da * db {
        return Err(CoreError::DimensionMismatch {
            expected: da * db,
            found: m.rows(),
            context: "partial_trace",
        });
    }
    match side {
        Side::B => {
            let mut out = ComplexMatrix::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..db {
                        acc += m[(i * db + k, j * db + k)];
                    }
                    out[(i, j)] = acc;
                }
            }
            Ok(out)
        }
        Side::A => {
            let mut out = ComplexMatrix::zeros(db, db);
            for k in 0..db {
                for l in 0..db {
                    let mut acc = C64::new(0.0, 0.0);
                    for i in 0..da {
                        acc += m[(i * db + k, i * db + l)];
                    }
                    out[(k, l)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// Thin singular value decomposition `m = U · diag(σ) · V†`.
///
/// `u` is `rows×k` and `v` is `cols×k` with `k = min(rows, cols)`; the
/// singular values are nonnegative and decreasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows() < m.cols() {
        let s = svd(&m.adjoint())?;
        return Ok(Svd {
            u: s.v,
            singular_values: s.singular_values,
            v: s.u,
        });
    }
    let rows = m.rows();
    let n = m.cols();
    if n == 0 {
        return Ok(Svd {
            u: ComplexMatrix::zeros(rows, 0),
            singular_values: Vec::new(),
            v: ComplexMatrix::zeros(0, 0),
        });
    }

    // One-sided Jacobi: orthogonalize column pairs of a working copy.
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut max_rel = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let app: f64 = w[p].iter().map(|x| x.norm_sqr()).sum();
                let aqq: f64 = w[q].iter().map(|x| x.norm_sqr()).sum();
                let apq: C64 = w[p].iter().zip(w[q].iter()).map(|(a, b)| a.conj() * b).sum();
                let denom = (app * aqq).sqrt();
                if denom == 0.0 {
                    continue;
                }
                let rel = apq.norm() / denom;
                max_rel = max_rel.max(rel);
                if rel < 1e-15 {
                    continue;
                }
                let g = apq.norm();
                let phase = apq / g;
                let zeta = (aqq - app) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let phase_c = phase.conj();
                for i in 0..rows {
                    let up = w[p][i];
                    let uq = w[q][i] * phase_c;
                    w[p][i] = up * c - uq * s;
                    w[q][i] = up * s + uq * c;
                }
                for i in 0..n {
                    let vp = v[p][i];
                    let vq = v[q][i] * phase_c;
                    v[p][i] = vp * c - vq * s;
                    v[q][i] = vp * s + vq * c;
                }
            }
        }
        if max_rel < 1e-14 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(CoreError::ConvergenceFailure { context: "svd" });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = w.iter().map(|col| vec_norm(col)).collect();
    order.sort_by(|&a, &b| norms[b].partial_cmp(&norms[a]).unwrap());

    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut v_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let max_norm = norms[order[0]];
    for &j in &order {
        sigma.push(norms[j]);
        v_cols.push(v[j].clone());
        if norms[j] > max_norm * 1e-300 + 1e-300 {
            u_cols.push(w[j].iter().map(|x| x / norms[j]).collect());
        } else {
            u_cols.push(vec![C64::new(0.0, 0.0); rows]);
        }
    }
    // Replace any zero U columns by an orthonormal completion so that U
    // stays isometric even for rank-deficient input.
    complete_orthonormal(&mut u_cols, rows);

    Ok(Svd {
        u: ComplexMatrix::from_columns(rows, &u_cols),
        singular_values: sigma,
        v: ComplexMatrix::from_columns(n, &v_cols),
    })
}

fn complete_orthonormal(cols: &mut [Vec<C64>], dim: usize) {
    for j in 0..cols.len() {
        if vec_norm(&cols[j]) > 0.5 {
            continue;
        }
        // Gram-Schmidt a standard basis vector against the existing columns.
        'candidates: for b in 0..dim {
            let mut cand = vec![C64::new(0.0, 0.0); dim];
            cand[b] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for (k, other) in cols.iter().enumerate() {
                    if k == j || vec_norm(other) < 0.5 {
                        continue;
                    }
                    let ip: C64 = other.iter().zip(cand.iter()).map(|(a, b)| a.conj() * b).sum();
                    for i in 0..dim {
                        cand[i] -= ip * other[i];
                    }
                }
            }
            let nrm = vec_norm(&cand);
            if nrm > 1e-6 {
                for x in cand.iter_mut() {
                    *x /= nrm;
                }
                cols[j] = cand;
                break 'candidates;
            }
        }
    }
}

/// Hermitian eigendecomposition with eigenvalues in decreasing order.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Columns are the orthonormal eigenvectors, ordered like `values`.
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of a Hermitian matrix by two-sided Jacobi rotations.
///
/// Asymmetry below `HERMITIAN_ASYM_TOL` relative to the largest entry is
/// removed by symmetrization `(M + M†)/2`; anything larger is an error
/// rather than being silently repaired.
pub fn eigh(m: &ComplexMatrix) -> Result<Eigh> {
    if !m.is_square() {
        return Err(CoreError::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
            context: "eigh",
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Eigh {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let scale = m.max_abs();
    let asym = m.asymmetry();
    if scale > 0.0 && asym > HERMITIAN_ASYM_TOL * scale {
        return Err(CoreError::NotHermitian { asymmetry: asym });
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let norm = a.frobenius_norm().max(1e-300);
    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() < 1e-14 * norm {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = a[(p, q)];
                let g = gamma.norm();
                if g < 1e-18 * norm {
                    continue;
                }
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let phase_c = phase.conj();
                // A <- G† A G with G acting on the (p,q) plane.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)] * phase_c;
                    a[(i, p)] = aip * c - aiq * s;
                    a[(i, q)] = aip * s + aiq * c;
                }
                for i in 0..n {
                    let api = a[(p, i)];
                    let aqi = a[(q, i)] * phase;
                    a[(p, i)] = api * c - aqi * s;
                    a[(q, i)] = api * s + aqi * c;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)] * phase_c;
                    v[(i, p)] = vip * c - viq * s;
                    v[(i, q)] = vip * s + viq * c;
                }
            }
        }
    }
    if !converged {
        return Err(CoreError::ConvergenceFailure { context: "eigh" });
    }

    let mut pairs: Vec<(f64, usize)> = (0..n).map(|i| (a[(i, i)].re, i)).collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let values: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (new_j, (_, old_j)) in pairs.iter().enumerate() {
        let col = v.column(*old_j);
        vecs.set_column(new_j, &col);
    }
    Ok(Eigh {
        values,
        vectors: vecs,
    })
}

/// Number of singular values above `rank_tol` relative to the largest.
pub fn rank_from_singular_values(s: &[f64], rank_tol: f64) -> usize {
    let max = s.first().copied().unwrap_or(0.0);
    if max <= 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rank_tol * max).count()
}

/// Numerical rank by column-pivoted orthogonalization.
///
/// Equivalent to counting singular values above `rank_tol` relative to the
/// largest, but with cost `O(rows·cols·rank)`, which matters for the large
/// correlation matrices produced by window sweeps.
pub fn matrix_rank(m: &ComplexMatrix, rank_tol: f64) -> usize {
    let n = m.cols();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| m.column(j)).collect();
    let mut norms: Vec<f64> = cols.iter().map(|c| vec_norm(c)).collect();
    let max0 = norms.iter().cloned().fold(0.0, f64::max);
    if max0 <= 0.0 {
        return 0;
    }
    let thresh = rank_tol * max0;
    let mut rank = 0;
    let mut used = vec![false; n];
    loop {
        let mut best = usize::MAX;
        let mut best_norm = thresh;
        for j in 0..n {
            if !used[j] && norms[j] > best_norm {
                best_norm = norms[j];
                best = j;
            }
        }
        if best == usize::MAX {
            break;
        }
        used[best] = true;
        rank += 1;
        let nrm = vec_norm(&cols[best]);
        let pivot: Vec<C64> = cols[best].iter().map(|x| x / nrm).collect();
        for j in 0..n {
            if used[j] {
                continue;
            }
            // Two passes of orthogonalization keep the residuals clean.
            for _ in 0..2 {
                let ip: C64 = pivot
                    .iter()
                    .zip(cols[j].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (x, p) in cols[j].iter_mut().zip(pivot.iter()) {
                    *x -= ip * p;
                }
            }
            norms[j] = vec_norm(&cols[j]);
        }
    }
    rank
}

/// Minimum-norm least-squares solution of `a·x = b` via the SVD
/// pseudoinverse; returns `(x, residual_norm)`.
pub fn lstsq(a: &ComplexMatrix, b: &[C64], rank_tol: f64) -> Result<(Vec<C64>, f64)> {
    if a.rows() != b.len() {
        return Err(CoreError::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
            context: "lstsq",
        });
    }
    let dec = svd(a)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    let mut x = vec![C64::new(0.0, 0.0); a.cols()];
    for (k, &s) in dec.singular_values.iter().enumerate() {
        if s <= rank_tol * smax || s == 0.0 {
            continue;
        }
        let uk = dec.u.column(k);
        let coeff: C64 = uk.iter().zip(b.iter()).map(|(u, y)| u.conj() * y).sum();
        let coeff = coeff / s;
        let vk = dec.v.column(k);
        for i in 0..x.len() {
            x[i] += coeff * vk[i];
        }
    }
    let ax = a.apply(&x);
    let res: f64 = ax
        .iter()
        .zip(b.iter())
        .map(|(p, q)| (p - q).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((x, res))
}

/// Orthonormal basis (Hilbert–Schmidt inner product) of
/// `{X : [X, g] = 0 for all generators g}` inside `M_dim`.
///
/// The basis size is the commutant dimension of the *-algebra generated by
/// the `generators` (the adjoints are adjoined automatically, so a
/// non-self-adjoint generating set still yields the algebra commutant).
pub fn null_space_of_commutator_system(
    generators: &[ComplexMatrix],
    dim: usize,
) -> Result<Vec<ComplexMatrix>> {
    for g in generators {
        if g.rows() != dim || g.cols() != dim {
            return Err(CoreError::DimensionMismatch {
                expected: dim,
                found: g.rows(),
                context: "null_space_of_commutator_system",
            });
        }
    }
    let d2 = dim * dim;
    // vec(XG - GX) = (I ⊗ G^T - G ⊗ I) vec(X) in row-major vectorization.
    // Accumulate the normal matrix N = Σ_g L_g† L_g and read the commutant
    // off its kernel.
    let mut normal = ComplexMatrix::zeros(d2, d2);
    let id = ComplexMatrix::identity(dim);
    let mut gens: Vec<ComplexMatrix> = Vec::new();
    for g in generators {
        gens.push(g.clone());
        let ga = g.adjoint();
        if (&ga - g).max_abs() > 1e-14 * g.max_abs().max(1.0) {
            gens.push(ga);
        }
    }
    for g in &gens {
        let l = &kron(&id, &g.transpose()) - &kron(g, &id);
        let lt = l.adjoint();
        normal = &normal + &(&lt * &l);
    }
    let eig = eigh(&normal)?;
    let lmax = eig.values.first().copied().unwrap_or(0.0).max(1e-300);
    let mut basis = Vec::new();
    for (k, &lam) in eig.values.iter().enumerate() {
        // Eigenvalues of the normal matrix are squared singular values.
        if lam <= (1e-10 * lmax).max(1e-24) {
            let col = eig.vectors.column(k);
            basis.push(ComplexMatrix::from_vector(dim, dim, &col)?);
        }
    }
    basis.reverse();
    Ok(basis)
}

/// Operator sign of a Hermitian matrix: eigenvalues map to ±1, with zero
/// eigenvalues sent to +1 so that repeated runs stay deterministic.
pub fn sign_operator(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let s = if eig.values[k] < 0.0 { -1.0 } else { 1.0 };
        let col = eig.vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * s;
            }
        }
    }
    Ok(out)
}

/// Square root of a positive semidefinite Hermitian matrix. Eigenvalues in
/// `[-psd_tol, 0)` are clipped to zero; anything lower is an error.
pub fn sqrtm_psd(m: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let eig = eigh(m)?;
    let scale = eig.values.first().copied().unwrap_or(0.0).max(1.0);
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lam = eig.values[k];
        if lam < -tol.psd_tol * scale {
            return Err(CoreError::NotPositive {
                min_eigenvalue: lam,
            });
        }
        let r = lam.max(0.0).sqrt();
        let col = eig.vectors.column(k);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += col[i] * col[j].conj() * r;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::vec_dot;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_basis_projectors() {
        let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
        assert_eq!(kron(&p0, &p1), ComplexMatrix::diag_real(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn kron_vec_pauli_x_oracle() {
        // (X ⊗ X) vec(I)/√2 against a quadruple-loop index oracle.
        let x = ComplexMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let vec_i: Vec<C64> = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
            .iter()
            .map(|z| z / 2f64.sqrt())
            .collect();
        let fast = kron(&x, &x).apply(&vec_i);
        let mut slow = vec![c(0.0, 0.0); 4];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        slow[i * 2 + k] += x[(i, j)] * x[(k, l)] * vec_i[j * 2 + l];
                    }
                }
            }
        }
        for (f, s) in fast.iter().zip(slow.iter()) {
            assert!((f - s).norm() < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(0.5, 0.2), c(0.5, -0.2), c(2.0, 0.0)])
            .unwrap();
        let b = ComplexMatrix::from_vec(2, 2, vec![c(0.7, 0.0), c(0.1, 0.3), c(0.1, -0.3), c(0.3, 0.0)])
            .unwrap();
        let prod = kron(&a, &b);
        let ta = partial_trace(&prod, (2, 2), Side::B).unwrap();
        let expected = a.scale(b.trace());
        assert!((&ta - &expected).max_abs() < 1e-14);
        let tb = partial_trace(&prod, (2, 2), Side::A).unwrap();
        assert!((&tb - &b.scale(a.trace())).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_maximally_entangled() {
        let amp = 1.0 / 2f64.sqrt();
        let psi = vec![c(amp, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(amp, 0.0)];
        let rho = crate::matrix::outer(&psi, &psi);
        let marg = partial_trace(&rho, (2, 2), Side::B).unwrap();
        assert!((&marg - &ComplexMatrix::identity(2).scale_re(0.5)).max_abs() < 1e-14);
    }

    #[test]
    fn partial_trace_schmidt_form() {
        let psi = vec![c(0.7f64.sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.3f64.sqrt(), 0.0)];
        let rho = crate::matrix::outer(&psi, &psi);
        let marg = partial_trace(&rho, (2, 2), Side::B).unwrap();
        assert!((&marg - &ComplexMatrix::diag_real(&[0.7, 0.3])).max_abs() < 1e-14);
    }

    #[test]
    fn svd_identity_and_diag() {
        let s = svd(&ComplexMatrix::identity(2)).unwrap();
        assert!((s.singular_values[0] - 1.0).abs() < 1e-14);
        assert!((s.singular_values[1] - 1.0).abs() < 1e-14);

        let d = ComplexMatrix::diag_real(&[3.0, 0.0]);
        let s = svd(&d).unwrap();
        assert!((s.singular_values[0] - 3.0).abs() < 1e-14);
        assert!(s.singular_values[1].abs() < 1e-14);
    }

    #[test]
    fn svd_reconstructs_random_rectangular() {
        let mut rng = crate::rng::SeedStream::new(42);
        let m = ComplexMatrix::from_fn(3, 4, |_, _| c(rng.next_gaussian(), rng.next_gaussian()));
        let dec = svd(&m).unwrap();
        let k = dec.singular_values.len();
        let mut rec = ComplexMatrix::zeros(3, 4);
        for t in 0..k {
            let u = dec.u.column(t);
            let v = dec.v.column(t);
            for i in 0..3 {
                for j in 0..4 {
                    rec[(i, j)] += u[i] * v[j].conj() * dec.singular_values[t];
                }
            }
        }
        assert!((&rec - &m).max_abs() < 1e-10 * m.max_abs());
        // isometry checks
        let utu = &dec.u.adjoint() * &dec.u;
        assert!((&utu - &ComplexMatrix::identity(k)).max_abs() < 1e-12);
        let vtv = &dec.v.adjoint() * &dec.v;
        assert!((&vtv - &ComplexMatrix::identity(k)).max_abs() < 1e-12);
    }

    #[test]
    fn eigh_known_spectrum() {
        let m = ComplexMatrix::from_vec(
            2,
            2,
            vec![c(2.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(2.0, 0.0)],
        )
        .unwrap();
        let e = eigh(&m).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
        // eigenvector property
        for k in 0..2 {
            let v = e.vectors.column(k);
            let mv = m.apply(&v);
            for i in 0..2 {
                assert!((mv[i] - v[i] * e.values[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigh_rejects_asymmetric() {
        let m = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
            .unwrap();
        assert!(matches!(eigh(&m), Err(CoreError::NotHermitian { .. })));
    }

    #[test]
    fn commutant_of_full_matrix_algebra_is_scalars() {
        let mut gens = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                gens.push(ComplexMatrix::matrix_unit(2, i, j));
            }
        }
        let basis = null_space_of_commutator_system(&gens, 2).unwrap();
        assert_eq!(basis.len(), 1);
        // the single element is I/√2 up to phase
        let b = &basis[0];
        let offdiag = b[(0, 1)].norm() + b[(1, 0)].norm();
        assert!(offdiag < 1e-10);
        assert!((b[(0, 0)] - b[(1, 1)]).norm() < 1e-10);
    }

    #[test]
    fn commutant_of_identity_is_everything() {
        let basis =
            null_space_of_commutator_system(&[ComplexMatrix::identity(2)], 2).unwrap();
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn commutant_of_generic_diagonal() {
        // Direct enumeration: 2×2 matrices commuting with diag(1,2) are the
        // diagonal ones, a 2-dimensional space.
        let basis =
            null_space_of_commutator_system(&[ComplexMatrix::diag_real(&[1.0, 2.0])], 2).unwrap();
        assert_eq!(basis.len(), 2);
        for b in &basis {
            assert!(b[(0, 1)].norm() < 1e-10);
            assert!(b[(1, 0)].norm() < 1e-10);
        }
    }

    #[test]
    fn lstsq_solves_consistent_system() {
        let a = ComplexMatrix::from_vec(3, 2, vec![
            c(1.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(1.0, 0.0),
            c(1.0, 0.0), c(1.0, 0.0),
        ])
        .unwrap();
        let x_true = vec![c(1.0, -1.0), c(2.0, 0.5)];
        let b = a.apply(&x_true);
        let (x, res) = lstsq(&a, &b, 1e-12).unwrap();
        assert!(res < 1e-12);
        for (u, v) in x.iter().zip(x_true.iter()) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn pivoted_rank_agrees_with_svd_rank() {
        let mut rng = crate::rng::SeedStream::new(7);
        // rank-2 matrix built from outer products
        let u1: Vec<C64> = (0..5).map(|_| c(rng.next_gaussian(), rng.next_gaussian())).collect();
        let u2: Vec<C64> = (0..5).map(|_| c(rng.next_gaussian(), rng.next_gaussian())).collect();
        let v1: Vec<C64> = (0..7).map(|_| c(rng.next_gaussian(), rng.next_gaussian())).collect();
        let v2: Vec<C64> = (0..7).map(|_| c(rng.next_gaussian(), rng.next_gaussian())).collect();
        let m = &crate::matrix::outer(&u1, &v1) + &crate::matrix::outer(&u2, &v2);
        assert_eq!(matrix_rank(&m, 1e-9), 2);
        let s = svd(&m).unwrap();
        assert_eq!(rank_from_singular_values(&s.singular_values, 1e-9), 2);
    }

    #[test]
    fn sign_operator_sends_zero_to_plus_one() {
        let m = ComplexMatrix::diag_real(&[2.0, 0.0, -3.0]);
        let s = sign_operator(&m).unwrap();
        assert!((&s - &ComplexMatrix::diag_real(&[1.0, 1.0, -1.0])).max_abs() < 1e-12);
    }

    #[test]
    fn orthonormal_completion_keeps_isometry() {
        // rank-1 tall matrix: U must still have orthonormal columns.
        let one = vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)];
        let m = crate::matrix::outer(&one, &[c(1.0, 0.0), c(0.0, -2.0)]);
        let dec = svd(&m).unwrap();
        let u0 = dec.u.column(0);
        let u1 = dec.u.column(1);
        assert!((vec_norm(&u0) - 1.0).abs() < 1e-12);
        assert!((vec_norm(&u1) - 1.0).abs() < 1e-12);
        assert!(vec_dot(&u0, &u1).norm() < 1e-10);
    }
}
