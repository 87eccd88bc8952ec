//! Deterministic random generation for seesaw restarts and sampling.
//!
//! All randomness flows from a single `u64` seed. `derive_seed` is a
//! counter-based splitter (SplitMix64 over `seed ⊕ tag`), so independent
//! subcomputations get decorrelated streams while staying reproducible.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::linalg::{eigh, sqrtm_psd};
use crate::matrix::{C64, ComplexMatrix};
use crate::tolerance::Tolerance;

/// Splits a base seed into an independent stream seed for `tag`.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded stream of uniform and Gaussian variates.
pub struct SeedStream {
    rng: ChaCha8Rng,
    cached_gaussian: Option<f64>,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        SeedStream {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cached_gaussian: None,
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn next_uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box–Muller.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(g) = self.cached_gaussian.take() {
            return g;
        }
        let mut u1 = self.next_uniform();
        while u1 <= 1e-300 {
            u1 = self.next_uniform();
        }
        let u2 = self.next_uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * core::f64::consts::PI * u2;
        self.cached_gaussian = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn next_complex_gaussian(&mut self) -> C64 {
        C64::new(self.next_gaussian(), self.next_gaussian())
    }

    /// Matrix with i.i.d. complex Gaussian entries.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| self.next_complex_gaussian())
    }

    /// Normalized random vector of length `n`.
    pub fn random_unit_vector(&mut self, n: usize) -> Vec<C64> {
        loop {
            let v: Vec<C64> = (0..n).map(|_| self.next_complex_gaussian()).collect();
            let norm = crate::matrix::vec_norm(&v);
            if norm > 1e-6 {
                return v.iter().map(|x| x / norm).collect();
            }
        }
    }

    /// Haar-random unitary via Gram–Schmidt of a Ginibre matrix with phase
    /// fixing.
    pub fn random_unitary(&mut self, n: usize) -> ComplexMatrix {
        let g = self.ginibre(n, n);
        let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
        for j in 0..n {
            for _ in 0..2 {
                for k in 0..j {
                    let prev = cols[k].clone();
                    let ip: C64 = prev
                        .iter()
                        .zip(cols[j].iter())
                        .map(|(a, b)| a.conj() * b)
                        .sum();
                    for (x, p) in cols[j].iter_mut().zip(prev.iter()) {
                        *x -= ip * p;
                    }
                }
            }
            let norm = crate::matrix::vec_norm(&cols[j]);
            let phase = cols[j][0] / cols[j][0].norm().max(1e-300);
            for x in cols[j].iter_mut() {
                *x = *x / (norm * phase);
            }
        }
        ComplexMatrix::from_columns(n, &cols)
    }

    /// Random Hermitian matrix (GUE-like, unnormalized).
    pub fn random_hermitian(&mut self, n: usize) -> ComplexMatrix {
        let g = self.ginibre(n, n);
        (&g + &g.adjoint()).scale_re(0.5)
    }

    /// Hermitian contraction: spectrum clipped into `[-1, 1]`.
    pub fn random_hermitian_contraction(&mut self, n: usize) -> ComplexMatrix {
        let h = self.random_hermitian(n);
        let eig = eigh(&h).expect("random hermitian is hermitian");
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let lam = eig.values[k].max(-1.0).min(1.0);
            let col = eig.vectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += col[i] * col[j].conj() * lam;
                }
            }
        }
        out
    }

    /// Random density operator of the given rank (trace one, PSD).
    pub fn random_density_matrix(&mut self, dim: usize, rank: usize) -> ComplexMatrix {
        let g = self.ginibre(dim, rank.max(1).min(dim));
        let m = &g * &g.adjoint();
        let tr = m.trace().re;
        m.scale_re(1.0 / tr)
    }

    /// Random unital completely positive map `M_in → M_out` in Kraus form
    /// `a ↦ Σ K_k† a K_k` with `Σ K_k† K_k = 1`.
    pub fn random_unital_cp_kraus(
        &mut self,
        in_dim: usize,
        out_dim: usize,
        n_kraus: usize,
    ) -> Vec<ComplexMatrix> {
        let raw: Vec<ComplexMatrix> = (0..n_kraus.max(1))
            .map(|_| self.ginibre(in_dim, out_dim))
            .collect();
        let mut s = ComplexMatrix::zeros(out_dim, out_dim);
        for k in &raw {
            s = &s + &(&k.adjoint() * k);
        }
        // normalize: K'_k = K_k S^{-1/2}
        let eig = eigh(&s).expect("gram matrix is hermitian");
        let mut s_inv_sqrt = ComplexMatrix::zeros(out_dim, out_dim);
        for t in 0..out_dim {
            let lam = eig.values[t].max(1e-12);
            let col = eig.vectors.column(t);
            for i in 0..out_dim {
                for j in 0..out_dim {
                    s_inv_sqrt[(i, j)] += col[i] * col[j].conj() / lam.sqrt();
                }
            }
        }
        raw.iter().map(|k| k * &s_inv_sqrt).collect()
    }

    /// Random PSD matrix normalized to unit trace-scale (not trace one).
    pub fn random_psd(&mut self, dim: usize) -> ComplexMatrix {
        let g = self.ginibre(dim, dim);
        let m = &g * &g.adjoint();
        m.scale_re(1.0 / (dim as f64))
    }
}

/// PSD square root helper re-exported for callers that already hold a
/// tolerance.
pub fn psd_sqrt(m: &ComplexMatrix, tol: &Tolerance) -> crate::Result<ComplexMatrix> {
    sqrtm_psd(m, tol)
}
