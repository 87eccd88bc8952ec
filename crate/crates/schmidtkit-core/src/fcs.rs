//! Finitely correlated states on translation-invariant spin chains.
//!
//! A spec is a bond algebra `M_n`, a unital CP transfer map
//! `𝔼 : M_d ⊗ M_n → M_n` and a stationary boundary state `ρ` on `M_n`.
//! Window expectations are the nested compositions
//! `ω(a_1 ⊗ … ⊗ a_m) = ρ(𝔼_{a_1} ∘ … ∘ 𝔼_{a_m}(1))` with
//! `𝔼_a := 𝔼(a ⊗ ·)`.
//!
//! The engine works with C*-specs only (the conditioned-functional space is
//! realized inside `M_n`); purity of the generated state is not certified,
//! only estimated by a spectral primitivity heuristic, so reduced bond
//! dimensions are reported as Schmidt-rank certificates under a purity
//! assumption.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::cpmaps::CPMap;
use crate::linalg::{kron, matrix_rank, svd};
use crate::matrix::{C64, ComplexMatrix};
use crate::states::DensityOperator;
use crate::tolerance::Tolerance;
use crate::{CoreError, Result};

/// Default cap on correlation-window lengths.
pub const DEFAULT_MAX_WINDOW: usize = 12;

const SPEC_TOL: f64 = 1e-9;

/// Bond dimension, site dimension, transfer map and stationary boundary
/// state of a translation-invariant chain.
#[derive(Debug, Clone)]
pub struct FCSSpec {
    site_dim: usize,
    bond_dim: usize,
    transfer: CPMap,
    boundary: DensityOperator,
}

impl FCSSpec {
    /// Validates dimensions, unitality of the transfer map and
    /// stationarity of the boundary state.
    pub fn new(
        site_dim: usize,
        bond_dim: usize,
        transfer: CPMap,
        boundary: DensityOperator,
        tol: &Tolerance,
    ) -> Result<Self> {
        if transfer.in_dim() != site_dim * bond_dim || transfer.out_dim() != bond_dim {
            return Err(CoreError::DimensionMismatch {
                expected: site_dim * bond_dim,
                found: transfer.in_dim(),
                context: "FCSSpec transfer dims",
            });
        }
        if boundary.dim() != bond_dim {
            return Err(CoreError::DimensionMismatch {
                expected: bond_dim,
                found: boundary.dim(),
                context: "FCSSpec boundary dims",
            });
        }
        if !transfer.is_completely_positive(tol)? {
            return Err(CoreError::NotCompletelyPositive {
                min_choi_eigenvalue: transfer.min_choi_eigenvalue()?,
            });
        }
        let spec = FCSSpec {
            site_dim,
            bond_dim,
            transfer,
            boundary,
        };
        let unital_dev = spec.unitality_deviation()?;
        if unital_dev > SPEC_TOL {
            return Err(CoreError::NotUnital {
                deviation: unital_dev,
            });
        }
        let stat_dev = spec.stationarity_deviation()?;
        if stat_dev > SPEC_TOL {
            return Err(CoreError::InvalidParameter {
                context: "boundary state is not stationary for the transfer map",
            });
        }
        Ok(spec)
    }

    pub fn site_dim(&self) -> usize {
        self.site_dim
    }

    pub fn bond_dim(&self) -> usize {
        self.bond_dim
    }

    pub fn transfer(&self) -> &CPMap {
        &self.transfer
    }

    pub fn boundary(&self) -> &DensityOperator {
        &self.boundary
    }

    /// `𝔼_a(x) = 𝔼(a ⊗ x)`.
    pub fn step(&self, a: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.rows() != self.site_dim || a.cols() != self.site_dim {
            return Err(CoreError::DimensionMismatch {
                expected: self.site_dim,
                found: a.rows(),
                context: "FCSSpec::step site operator",
            });
        }
        self.transfer.apply(&kron(a, x))
    }

    fn unitality_deviation(&self) -> Result<f64> {
        let img = self.step(
            &ComplexMatrix::identity(self.site_dim),
            &ComplexMatrix::identity(self.bond_dim),
        )?;
        Ok((&img - &ComplexMatrix::identity(self.bond_dim)).max_abs())
    }

    fn stationarity_deviation(&self) -> Result<f64> {
        let id_site = ComplexMatrix::identity(self.site_dim);
        let n = self.bond_dim;
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for l in 0..n {
                let e = ComplexMatrix::matrix_unit(n, k, l);
                let lhs = self.boundary.expectation(&self.step(&id_site, &e)?);
                let rhs = self.boundary.expectation(&e);
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok(worst)
    }
}

/// Finite list of site observables filling a contiguous window.
#[derive(Debug, Clone)]
pub struct CorrelationWindow {
    operators: Vec<ComplexMatrix>,
}

impl CorrelationWindow {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_max(operators, DEFAULT_MAX_WINDOW)
    }

    pub fn with_max(operators: Vec<ComplexMatrix>, max_window: usize) -> Result<Self> {
        if operators.len() > max_window {
            return Err(CoreError::WindowTooLarge {
                length: operators.len(),
                max: max_window,
            });
        }
        Ok(CorrelationWindow { operators })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}

/// Evaluates a window expectation by nesting the transfer map from the
/// rightmost site inward and pairing with the boundary state.
pub fn evaluate(spec: &FCSSpec, window: &CorrelationWindow) -> Result<C64> {
    let mut x = ComplexMatrix::identity(spec.bond_dim);
    for a in window.operators().iter().rev() {
        x = spec.step(a, &x)?;
    }
    Ok(spec.boundary.expectation(&x))
}

/// Rank of the correlation matrix `ω(a_L ⊗ a_R)` over full matrix-unit
/// product bases of a left and a right window. Stabilizes at most at
/// `bond_dim²` for a C*-spec.
pub fn conditioned_space_dim(
    spec: &FCSSpec,
    left_window: usize,
    right_window: usize,
    tol: &Tolerance,
) -> Result<usize> {
    conditioned_space_dim_with_max(spec, left_window, right_window, DEFAULT_MAX_WINDOW, tol)
}

pub fn conditioned_space_dim_with_max(
    spec: &FCSSpec,
    left_window: usize,
    right_window: usize,
    max_window: usize,
    tol: &Tolerance,
) -> Result<usize> {
    for len in [left_window, right_window] {
        if len > max_window {
            return Err(CoreError::WindowTooLarge {
                length: len,
                max: max_window,
            });
        }
    }
    let d = spec.site_dim;
    let n = spec.bond_dim;
    let units: Vec<ComplexMatrix> = (0..d * d)
        .map(|t| ComplexMatrix::matrix_unit(d, t / d, t % d))
        .collect();

    // Right-conditioned operators 𝔼_{a_1}(… 𝔼_{a_q}(1)) for all unit chains.
    let mut rights: Vec<ComplexMatrix> = vec![ComplexMatrix::identity(n)];
    for _ in 0..right_window {
        let mut next = Vec::with_capacity(rights.len() * units.len());
        for e in &units {
            for x in &rights {
                next.push(spec.step(e, x)?);
            }
        }
        rights = next;
    }
    // Left functionals ρ(𝔼_{a_1}(… 𝔼_{a_p}(·))) as trace-pairing matrices.
    let unit_images: Vec<ComplexMatrix> = {
        let mut out = Vec::with_capacity(units.len() * n * n);
        for e in &units {
            for k in 0..n {
                for l in 0..n {
                    out.push(spec.step(e, &ComplexMatrix::matrix_unit(n, k, l))?);
                }
            }
        }
        out
    };
    let mut lefts: Vec<ComplexMatrix> = vec![spec.boundary.matrix().clone()];
    for _ in 0..left_window {
        let mut next = Vec::with_capacity(lefts.len() * units.len());
        for (ei, _) in units.iter().enumerate() {
            for g in &lefts {
                // G' with tr(G' x) = tr(G 𝔼_e(x))
                let mut gp = ComplexMatrix::zeros(n, n);
                for k in 0..n {
                    for l in 0..n {
                        let img = &unit_images[ei * n * n + k * n + l];
                        gp[(l, k)] = (g * img).trace();
                    }
                }
                next.push(gp);
            }
        }
        lefts = next;
    }

    let mut m = ComplexMatrix::zeros(lefts.len(), rights.len());
    for (i, g) in lefts.iter().enumerate() {
        for (j, x) in rights.iter().enumerate() {
            m[(i, j)] = (g * x).trace();
        }
    }
    Ok(matrix_rank(&m, tol.rank_tol))
}

/// Orthonormal (Hilbert–Schmidt) spanning set of the space reached from the
/// bond identity by iterated `𝔼_a` images, `a` over the site matrix units.
pub fn reachable_space(spec: &FCSSpec, _tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
    let d = spec.site_dim;
    let n = spec.bond_dim;
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    let mut frontier = vec![ComplexMatrix::identity(n)];
    frontier = add_to_span(&mut basis, &frontier);
    while !frontier.is_empty() && basis.len() < n * n {
        let mut next = Vec::new();
        for x in &frontier {
            for i in 0..d {
                for j in 0..d {
                    next.push(spec.step(&ComplexMatrix::matrix_unit(d, i, j), x)?);
                }
            }
        }
        frontier = add_to_span(&mut basis, &next);
    }
    Ok(basis)
}

/// Orthogonalizes `candidates` against `basis`, appending genuinely new
/// directions; returns the accepted elements.
fn add_to_span(basis: &mut Vec<ComplexMatrix>, candidates: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let mut accepted = Vec::new();
    for c in candidates {
        let scale = c.frobenius_norm();
        if scale <= 1e-14 {
            continue;
        }
        let mut v = c.clone();
        for _ in 0..2 {
            for b in basis.iter() {
                let ip = b.hs_dot(&v);
                v = &v - &b.scale(ip);
            }
        }
        let res = v.frobenius_norm();
        if res > 1e-10 * scale.max(1.0) {
            let v = v.scale_re(1.0 / res);
            basis.push(v.clone());
            accepted.push(v);
        }
    }
    accepted
}

/// Outcome of the spectral primitivity heuristic on `𝔼_1`.
#[derive(Debug, Clone, Copy)]
pub struct PurityHeuristic {
    /// True when the modulus-1 eigenvalue of `𝔼_1` appears unique and
    /// simple (second-largest modulus estimated below `1 - 1e-6`).
    pub primitive: bool,
    pub second_eigenvalue_modulus: f64,
}

/// Estimates the second-largest eigenvalue modulus of `𝔼_1` by power
/// iteration on the complement of the fixed point. The fixed direction is
/// deflated with the stationary pairing, which the transfer map preserves.
pub fn purity_heuristic(spec: &FCSSpec) -> Result<PurityHeuristic> {
    let n = spec.bond_dim;
    if n == 1 {
        return Ok(PurityHeuristic {
            primitive: true,
            second_eigenvalue_modulus: 0.0,
        });
    }
    let id_site = ComplexMatrix::identity(spec.site_dim);
    let id = ComplexMatrix::identity(n);
    let rho = spec.boundary.matrix().clone();
    let deflate = |x: &ComplexMatrix| {
        let w = (&rho * x).trace();
        x - &id.scale(w)
    };
    let mut rng = crate::rng::SeedStream::new(0xfc5_0001);
    let mut v = deflate(&rng.ginibre(n, n));
    let mut norm = v.frobenius_norm().max(1e-300);
    v = v.scale_re(1.0 / norm);
    let mut ratios: Vec<f64> = Vec::new();
    for _ in 0..400 {
        let w = deflate(&spec.step(&id_site, &v)?);
        norm = w.frobenius_norm();
        if norm < 1e-200 {
            return Ok(PurityHeuristic {
                primitive: true,
                second_eigenvalue_modulus: 0.0,
            });
        }
        ratios.push(norm);
        v = w.scale_re(1.0 / norm);
    }
    let tail = &ratios[ratios.len() - 50..];
    let mean: f64 = tail.iter().map(|r| r.ln()).sum::<f64>() / tail.len() as f64;
    let modulus = mean.exp();
    Ok(PurityHeuristic {
        primitive: modulus < 1.0 - 1e-6,
        second_eigenvalue_modulus: modulus,
    })
}

/// Report accompanying a minimized spec.
#[derive(Debug, Clone)]
pub struct MinimizationReport {
    pub original_bond_dim: usize,
    /// Doubles as the Schmidt-rank certificate for a pure C*-spec; purity
    /// itself is only estimated.
    pub reduced_bond_dim: usize,
    pub purity: PurityHeuristic,
}

/// Reduces the bond dimension by (i) restricting to the support of the
/// stationary boundary state and (ii) collapsing to a product spec when the
/// reachable space of iterated `𝔼_a` images of the identity is
/// one-dimensional. The returned spec generates the same window
/// correlations.
pub fn minimize_representation(
    spec: &FCSSpec,
    tol: &Tolerance,
) -> Result<(FCSSpec, MinimizationReport)> {
    let original = spec.bond_dim;
    let mut current = spec.clone();
    loop {
        if let Some(reduced) = support_restriction(&current, tol)? {
            current = reduced;
            continue;
        }
        if current.bond_dim > 1 && reachable_space(&current, tol)?.len() == 1 {
            current = product_collapse(&current, tol)?;
            continue;
        }
        break;
    }
    let purity = purity_heuristic(&current)?;
    let report = MinimizationReport {
        original_bond_dim: original,
        reduced_bond_dim: current.bond_dim,
        purity,
    };
    Ok((current, report))
}

fn support_restriction(spec: &FCSSpec, tol: &Tolerance) -> Result<Option<FCSSpec>> {
    let (vals, vecs) = spec.boundary.spectral_data(tol)?;
    let r = vals.len();
    let n = spec.bond_dim;
    if r >= n {
        return Ok(None);
    }
    let w = vecs; // n × r isometry onto the support
    let wt = w.adjoint();
    let lift = kron(&ComplexMatrix::identity(spec.site_dim), &w);
    let lift_t = lift.adjoint();
    let transfer = CPMap::from_action(
        spec.site_dim * r,
        r,
        |z| {
            let big = &(&lift * z) * &lift_t;
            let img = spec.transfer.apply(&big).expect("dims fixed");
            &(&wt * &img) * &w
        },
        tol,
    )?;
    let mut rho_small = &(&wt * spec.boundary.matrix()) * &w;
    let tr = rho_small.trace().re;
    rho_small = rho_small.scale_re(1.0 / tr);
    let boundary = DensityOperator::new(rho_small.hermitian_part(), tol)?;
    Ok(Some(FCSSpec::new(
        spec.site_dim,
        r,
        transfer,
        boundary,
        tol,
    )?))
}

fn product_collapse(spec: &FCSSpec, tol: &Tolerance) -> Result<FCSSpec> {
    // every 𝔼_a(1) is a multiple of 1, so the state is the product of the
    // one-site marginal φ(a) = ρ(𝔼_a(1))
    let d = spec.site_dim;
    let id = ComplexMatrix::identity(spec.bond_dim);
    let mut phi = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let img = spec.step(&ComplexMatrix::matrix_unit(d, i, j), &id)?;
            phi[(j, i)] = spec.boundary.expectation(&img);
        }
    }
    product_spec_from_functional(&phi, tol)
}

/// Bond-1 spec generating the product state with one-site marginal
/// `a ↦ tr(G a)`.
pub fn product_spec_from_functional(g: &ComplexMatrix, tol: &Tolerance) -> Result<FCSSpec> {
    let d = g.rows();
    let gg = g.clone();
    let transfer = CPMap::from_action(
        d,
        1,
        move |z| {
            let mut out = ComplexMatrix::zeros(1, 1);
            out[(0, 0)] = (&gg * z).trace();
            out
        },
        tol,
    )?;
    let boundary = DensityOperator::new(ComplexMatrix::identity(1), tol)?;
    FCSSpec::new(d, 1, transfer, boundary, tol)
}

/// Bond-1 spec of the product state with the given one-site density
/// operator.
pub fn product_spec(site_state: &DensityOperator, tol: &Tolerance) -> Result<FCSSpec> {
    product_spec_from_functional(site_state.matrix(), tol)
}

/// Solves for a stationary boundary state of a unital transfer map by a
/// null-space computation on the dual of `𝔼_1`.
pub fn stationary_boundary(
    transfer: &CPMap,
    site_dim: usize,
    bond_dim: usize,
    tol: &Tolerance,
) -> Result<DensityOperator> {
    let n = bond_dim;
    let id_site = ComplexMatrix::identity(site_dim);
    // dual superoperator: σ ↦ σ' with σ'_{lk} = tr(σ 𝔼_1(E_kl))
    let mut images = Vec::with_capacity(n * n);
    for k in 0..n {
        for l in 0..n {
            images.push(transfer.apply(&kron(&id_site, &ComplexMatrix::matrix_unit(n, k, l)))?);
        }
    }
    let mut dual = ComplexMatrix::zeros(n * n, n * n);
    for s in 0..n {
        for t in 0..n {
            let sigma = ComplexMatrix::matrix_unit(n, s, t);
            for k in 0..n {
                for l in 0..n {
                    let val = (&sigma * &images[k * n + l]).trace();
                    dual[(l * n + k, s * n + t)] = val;
                }
            }
        }
    }
    let m = &dual - &ComplexMatrix::identity(n * n);
    let dec = svd(&m)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0).max(1.0);
    let mut best: Option<DensityOperator> = None;
    let mut best_min = f64::NEG_INFINITY;
    for (idx, &s) in dec.singular_values.iter().enumerate() {
        if s > 1e-9 * smax {
            continue;
        }
        let candidate = ComplexMatrix::from_vector(n, n, &dec.v.column(idx))?;
        for sign in [1.0, -1.0] {
            let h = candidate.scale_re(sign).hermitian_part();
            let tr = h.trace().re;
            if tr.abs() < 1e-12 {
                continue;
            }
            let h = h.scale_re(1.0 / tr);
            if let Ok(eig) = crate::linalg::eigh(&h) {
                let min = eig.values.last().copied().unwrap_or(0.0);
                if min > best_min {
                    best_min = min;
                    if min > -tol.psd_tol {
                        best = DensityOperator::new(h, tol).ok();
                    }
                }
            }
        }
    }
    best.ok_or(CoreError::InvalidParameter {
        context: "no positive stationary boundary state found",
    })
}

/// Bond-2 spec of the spin-1 valence-bond chain, generated by the isometry
/// with components `A_{+1} = √(2/3) σ₊`, `A_0 = -√(1/3) σ_z`,
/// `A_{-1} = -√(2/3) σ₋`, with maximally mixed boundary.
pub fn aklt_spec(tol: &Tolerance) -> Result<FCSSpec> {
    let mut v = ComplexMatrix::zeros(6, 2);
    for (s, a) in aklt_site_tensors().iter().enumerate() {
        for b in 0..2 {
            for c in 0..2 {
                // V ξ = Σ_s |s⟩ ⊗ (A_s ξ)
                v[(s * 2 + b, c)] = a[(b, c)];
            }
        }
    }
    let transfer = CPMap::from_kraus(6, 2, &[v])?;
    let boundary = DensityOperator::maximally_mixed(2);
    FCSSpec::new(3, 2, transfer, boundary, tol)
}

/// The bond operators `A_s` of the valence-bond chain.
pub fn aklt_site_tensors() -> [ComplexMatrix; 3] {
    let s23 = (2.0f64 / 3.0).sqrt();
    let s13 = (1.0f64 / 3.0).sqrt();
    let zero = C64::new(0.0, 0.0);
    [
        ComplexMatrix::from_vec(2, 2, vec![zero, C64::new(s23, 0.0), zero, zero])
            .expect("2x2 literal"),
        ComplexMatrix::from_vec(
            2,
            2,
            vec![C64::new(-s13, 0.0), zero, zero, C64::new(s13, 0.0)],
        )
        .expect("2x2 literal"),
        ComplexMatrix::from_vec(2, 2, vec![zero, zero, C64::new(-s23, 0.0), zero])
            .expect("2x2 literal"),
    ]
}

/// The AKLT spec padded with a decoupled third bond direction carrying no
/// boundary weight; minimization must strip it back to bond dimension 2.
pub fn aklt_spec_padded(tol: &Tolerance) -> Result<FCSSpec> {
    let base = aklt_spec(tol)?;
    pad_with_decoupled_block(&base, tol)
}

/// Block-diagonally pads a spec with an extra one-dimensional bond block
/// fed by a fixed site state, leaving the boundary weight on the original
/// block.
pub fn pad_with_decoupled_block(spec: &FCSSpec, tol: &Tolerance) -> Result<FCSSpec> {
    let d = spec.site_dim;
    let n = spec.bond_dim;
    let np = n + 1;
    // embedding isometry C^n → C^{n+1}
    let mut w = ComplexMatrix::zeros(np, n);
    for t in 0..n {
        w[(t, t)] = C64::new(1.0, 0.0);
    }
    let lift = kron(&ComplexMatrix::identity(d), &w);
    let lift_t = lift.adjoint();
    let corner = ComplexMatrix::matrix_unit(np, n, n);
    // the decoupled block reads out a fixed pure site state
    let mut site_state = ComplexMatrix::zeros(d, d);
    site_state[(0, 0)] = C64::new(1.0, 0.0);
    let probe = kron(&site_state, &corner);
    let inner = spec.transfer.clone();
    let wt = w.adjoint();
    let corner_out = corner.clone();
    let transfer = CPMap::from_action(
        d * np,
        np,
        move |z| {
            let small = &(&lift_t * z) * &lift;
            let img = inner.apply(&small).expect("dims fixed");
            let main = &(&w * &img) * &wt;
            let scalar = (&probe * z).trace();
            &main + &corner_out.scale(scalar)
        },
        tol,
    )?;
    let mut rho = ComplexMatrix::zeros(np, np);
    for k in 0..n {
        for l in 0..n {
            rho[(k, l)] = spec.boundary.matrix()[(k, l)];
        }
    }
    let boundary = DensityOperator::new(rho, tol)?;
    FCSSpec::new(d, np, transfer, boundary, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStream;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn random_site_state(rng: &mut SeedStream, d: usize) -> DensityOperator {
        DensityOperator::new(rng.random_density_matrix(d, d), &tol()).unwrap()
    }

    #[test]
    fn identity_window_evaluates_to_one() {
        let spec = aklt_spec(&tol()).unwrap();
        let win = CorrelationWindow::new(vec![ComplexMatrix::identity(3); 5]).unwrap();
        let v = evaluate(&spec, &win).unwrap();
        assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-14);
    }

    #[test]
    fn product_spec_factorizes() {
        let mut rng = SeedStream::new(2);
        let phi = random_site_state(&mut rng, 3);
        let spec = product_spec(&phi, &tol()).unwrap();
        let a = rng.random_hermitian(3);
        let b = rng.random_hermitian(3);
        let va = phi.expectation(&a);
        let vb = phi.expectation(&b);
        let win = CorrelationWindow::new(vec![a, b]).unwrap();
        let v = evaluate(&spec, &win).unwrap();
        assert!((v - va * vb).norm() < 1e-10);
    }

    #[test]
    fn window_too_large_is_an_error() {
        let ops = vec![ComplexMatrix::identity(3); DEFAULT_MAX_WINDOW + 1];
        assert!(matches!(
            CorrelationWindow::new(ops),
            Err(CoreError::WindowTooLarge { .. })
        ));
    }

    #[test]
    fn evaluate_rejects_wrong_site_dims() {
        let spec = aklt_spec(&tol()).unwrap();
        let win = CorrelationWindow::new(vec![ComplexMatrix::identity(2)]).unwrap();
        assert!(matches!(
            evaluate(&spec, &win),
            Err(CoreError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn translation_invariance_under_identity_padding() {
        let spec = aklt_spec(&tol()).unwrap();
        let mut rng = SeedStream::new(5);
        let a = rng.random_hermitian(3);
        let b = rng.random_hermitian(3);
        let id = ComplexMatrix::identity(3);
        let base = evaluate(
            &spec,
            &CorrelationWindow::new(vec![a.clone(), b.clone()]).unwrap(),
        )
        .unwrap();
        let padded_right = evaluate(
            &spec,
            &CorrelationWindow::new(vec![a.clone(), b.clone(), id.clone(), id.clone()]).unwrap(),
        )
        .unwrap();
        let padded_left = evaluate(
            &spec,
            &CorrelationWindow::new(vec![id.clone(), id.clone(), a, b]).unwrap(),
        )
        .unwrap();
        assert!((base - padded_right).norm() < 1e-12);
        assert!((base - padded_left).norm() < 1e-12);
    }

    #[test]
    fn evaluate_is_multilinear_in_window_operators() {
        let spec = aklt_spec(&tol()).unwrap();
        let mut rng = SeedStream::new(6);
        let a1 = rng.ginibre(3, 3);
        let a2 = rng.ginibre(3, 3);
        let b = rng.ginibre(3, 3);
        let lam = C64::new(0.3, -1.2);
        let combo = &a1 + &a2.scale(lam);
        let lhs = evaluate(
            &spec,
            &CorrelationWindow::new(vec![combo, b.clone()]).unwrap(),
        )
        .unwrap();
        let v1 = evaluate(
            &spec,
            &CorrelationWindow::new(vec![a1, b.clone()]).unwrap(),
        )
        .unwrap();
        let v2 = evaluate(&spec, &CorrelationWindow::new(vec![a2, b]).unwrap()).unwrap();
        assert!((lhs - (v1 + lam * v2)).norm() < 1e-10);
    }

    #[test]
    fn aklt_matches_brute_force_contraction() {
        // independent oracle: explicit sum over all bond-operator chains,
        // ω(a_1⊗…⊗a_m) = Σ_{s⃗,t⃗} (Π_i a_i[s_i,t_i]) tr(ρ A_{s1}†…A_{sm}† A_{tm}…A_{t1})
        let t = tol();
        let spec = aklt_spec(&t).unwrap();
        let a_ops = aklt_site_tensors();
        let mut rng = SeedStream::new(77);
        for m in 1usize..=8 {
            let window: Vec<ComplexMatrix> = (0..m).map(|_| rng.random_hermitian(3)).collect();
            let fast = evaluate(&spec, &CorrelationWindow::new(window.clone()).unwrap()).unwrap();

            let n_chains = 3usize.pow(m as u32);
            let digits = |mut c: usize| -> Vec<usize> {
                let mut d = vec![0usize; m];
                for pos in (0..m).rev() {
                    d[pos] = c % 3;
                    c /= 3;
                }
                d
            };
            // ρ·A_{s1}†·…·A_{sm}†
            let rho = spec.boundary().matrix().clone();
            let left: Vec<ComplexMatrix> = (0..n_chains)
                .map(|c| {
                    let mut acc = rho.clone();
                    for &s in &digits(c) {
                        acc = &acc * &a_ops[s].adjoint();
                    }
                    acc
                })
                .collect();
            // A_{tm}·…·A_{t1} — note the reversed order
            let right: Vec<ComplexMatrix> = (0..n_chains)
                .map(|c| {
                    let mut acc = ComplexMatrix::identity(2);
                    for &s in digits(c).iter().rev() {
                        acc = &acc * &a_ops[s];
                    }
                    acc
                })
                .collect();
            let mut slow = C64::new(0.0, 0.0);
            for (si, l) in left.iter().enumerate() {
                let sdig = digits(si);
                for (ti, r) in right.iter().enumerate() {
                    let tdig = digits(ti);
                    let mut coeff = C64::new(1.0, 0.0);
                    for pos in 0..m {
                        coeff *= window[pos][(sdig[pos], tdig[pos])];
                    }
                    if coeff.norm_sqr() == 0.0 {
                        continue;
                    }
                    slow += coeff * (l * r).trace();
                }
            }
            assert!(
                (fast - slow).norm() < 1e-9,
                "window length {m}: {fast:?} vs {slow:?}"
            );
        }
    }

    #[test]
    fn conditioned_space_dim_product_is_one() {
        let mut rng = SeedStream::new(9);
        let phi = random_site_state(&mut rng, 2);
        let spec = product_spec(&phi, &tol()).unwrap();
        for (l, r) in [(1, 1), (2, 2), (3, 3)] {
            assert_eq!(conditioned_space_dim(&spec, l, r, &tol()).unwrap(), 1);
        }
    }

    #[test]
    fn conditioned_space_dim_aklt_stabilizes_at_four() {
        let spec = aklt_spec(&tol()).unwrap();
        assert_eq!(conditioned_space_dim(&spec, 2, 2, &tol()).unwrap(), 4);
        assert_eq!(conditioned_space_dim(&spec, 3, 3, &tol()).unwrap(), 4);
    }

    #[test]
    fn conditioned_space_dim_bounded_by_bond_squared() {
        let t = tol();
        let mut rng = SeedStream::new(13);
        let kraus = rng.random_unital_cp_kraus(2 * 3, 3, 3);
        let transfer = CPMap::from_kraus(6, 3, &kraus).unwrap();
        let boundary = stationary_boundary(&transfer, 2, 3, &t).unwrap();
        let spec = FCSSpec::new(2, 3, transfer, boundary, &t).unwrap();
        let d11 = conditioned_space_dim(&spec, 1, 1, &t).unwrap();
        let d22 = conditioned_space_dim(&spec, 2, 2, &t).unwrap();
        assert!(d22 <= 9, "conditioned dimension {d22} exceeds bond_dim²");
        assert!(d11 <= d22, "monotone in window length");
    }

    #[test]
    fn minimize_padded_product_to_bond_one() {
        let t = tol();
        let mut rng = SeedStream::new(15);
        let phi = random_site_state(&mut rng, 2);
        let base = product_spec(&phi, &t).unwrap();
        let padded = pad_with_decoupled_block(&base, &t).unwrap();
        assert_eq!(padded.bond_dim(), 2);
        let (reduced, report) = minimize_representation(&padded, &t).unwrap();
        assert_eq!(report.reduced_bond_dim, 1);
        assert_eq!(reduced.bond_dim(), 1);
    }

    #[test]
    fn minimize_depolarizing_full_support_to_product() {
        // a transfer sending everything to a scalar multiple of the bond
        // identity has a full-rank stationary state; only the reachability
        // collapse can reduce it
        let t = tol();
        let mut rng = SeedStream::new(19);
        let phi = random_site_state(&mut rng, 2);
        let rho0 = random_site_state(&mut rng, 3);
        let probe = kron(phi.matrix(), rho0.matrix());
        let n = 3;
        let transfer = CPMap::from_action(
            2 * n,
            n,
            move |z| ComplexMatrix::identity(n).scale((&probe * z).trace()),
            &t,
        )
        .unwrap();
        let spec = FCSSpec::new(2, 3, transfer, rho0.clone(), &t).unwrap();
        let (reduced, report) = minimize_representation(&spec, &t).unwrap();
        assert_eq!(report.reduced_bond_dim, 1);
        let mut rng2 = SeedStream::new(20);
        for len in 1..=4 {
            let ops: Vec<ComplexMatrix> = (0..len).map(|_| rng2.random_hermitian(2)).collect();
            let w = CorrelationWindow::new(ops).unwrap();
            let a = evaluate(&spec, &w).unwrap();
            let b = evaluate(&reduced, &w).unwrap();
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn minimize_already_minimal_spec_is_fixed_point() {
        let t = tol();
        let mut rng = SeedStream::new(23);
        let kraus = rng.random_unital_cp_kraus(2 * 2, 2, 3);
        let transfer = CPMap::from_kraus(4, 2, &kraus).unwrap();
        let boundary = stationary_boundary(&transfer, 2, 2, &t).unwrap();
        let spec = FCSSpec::new(2, 2, transfer, boundary, &t).unwrap();
        let (_, report) = minimize_representation(&spec, &t).unwrap();
        assert_eq!(report.reduced_bond_dim, 2);
    }

    #[test]
    fn aklt_purity_heuristic_is_primitive() {
        let spec = aklt_spec(&tol()).unwrap();
        let p = purity_heuristic(&spec).unwrap();
        assert!(p.primitive);
        // transfer spectrum of the valence-bond chain: second eigenvalue
        // modulus 1/3
        assert!((p.second_eigenvalue_modulus - 1.0 / 3.0).abs() < 1e-3);
    }

    #[test]
    fn minimize_padded_aklt_and_preserve_correlations() {
        let t = tol();
        let padded = aklt_spec_padded(&t).unwrap();
        assert_eq!(padded.bond_dim(), 3);
        let (reduced, report) = minimize_representation(&padded, &t).unwrap();
        assert_eq!(report.reduced_bond_dim, 2);
        let mut rng = SeedStream::new(29);
        for len in 1..=10 {
            let ops: Vec<ComplexMatrix> = (0..len).map(|_| rng.random_hermitian(3)).collect();
            let w = CorrelationWindow::new(ops).unwrap();
            let a = evaluate(&padded, &w).unwrap();
            let b = evaluate(&reduced, &w).unwrap();
            assert!((a - b).norm() < 1e-8, "length {len}");
        }
    }
}
