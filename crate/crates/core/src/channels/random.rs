//! Seeded random states, unitaries and channels.
//!
//! All samplers draw from `ChaCha8Rng` seeded with the caller's `u64`, so a
//! given seed reproduces bit-identical output on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DensityMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::numerics::{c, ComplexMatrix, C64};

/// The generator used throughout the crate.
pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finaliser; derives independent child seeds from `(seed, index)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn gaussian_c(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_c(rng))
}

/// Orthonormalises the columns of `m` (modified Gram–Schmidt, positive diagonal of R).
fn orthonormal_columns(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (rows, cols) = m.shape();
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = m.column(j);
        // two passes keep the columns orthogonal to rounding level
        for _ in 0..2 {
            for u in &q {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= proj * ui;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidArgument("rank-deficient Gaussian sample".into()));
        }
        q.push(v.into_iter().map(|z| z / norm).collect());
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| q[j][i]))
}

/// Haar-random unitary of size `n`.
pub fn random_unitary_with(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    loop {
        if let Ok(u) = orthonormal_columns(&gaussian_matrix(n, n, rng)) {
            return u;
        }
    }
}

pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(n, &mut rng(seed))
}

/// Hilbert–Schmidt random state `GG†/Tr(GG†)`.
pub fn random_density_with(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = gaussian_matrix(dim, dim, rng);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    DensityMatrix::from_unchecked(w.scale(1.0 / tr))
}

pub fn random_density(dim: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(random_density_with(dim, &mut rng(seed)))
}

/// Haar-random pure state vector.
pub fn random_pure_vector(dim: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim).map(|_| gaussian_c(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        v[0] = c(1.0, 0.0);
        return v;
    }
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Random channel with `rank` Kraus elements, obtained by slicing a random
/// isometry `C^{dim_in} → C^{rank·dim_out}`.
pub fn random_channel_with(
    dim_in: usize,
    dim_out: usize,
    rank: usize,
    rng: &mut impl Rng,
) -> Result<KrausChannel> {
    if rank == 0 || dim_in == 0 || dim_out == 0 {
        return Err(Error::InvalidArgument(
            "dimensions and rank must be at least 1".into(),
        ));
    }
    if rank * dim_out < dim_in {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} too small for an isometry from dimension {dim_in} into {}",
            rank * dim_out
        )));
    }
    let v = loop {
        if let Ok(v) = orthonormal_columns(&gaussian_matrix(rank * dim_out, dim_in, rng)) {
            break v;
        }
    };
    let kraus = (0..rank)
        .map(|k| ComplexMatrix::from_fn(dim_out, dim_in, |i, j| v[(k * dim_out + i, j)]))
        .collect();
    KrausChannel::new(kraus)
}

pub fn random_channel(dim_in: usize, dim_out: usize, rank: usize, seed: u64) -> Result<KrausChannel> {
    random_channel_with(dim_in, dim_out, rank, &mut rng(seed))
}

/// Random mixed-unitary channel: `n_terms` Haar unitaries with Dirichlet-like weights.
pub fn random_mixed_unitary_with(dim: usize, n_terms: usize, rng: &mut impl Rng) -> KrausChannel {
    let raw: Vec<f64> = (0..n_terms.max(1))
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let probs: Vec<f64> = raw.iter().map(|p| p / total).collect();
    let unitaries: Vec<ComplexMatrix> = probs.iter().map(|_| random_unitary_with(dim, rng)).collect();
    super::mixed_unitary(&probs, &unitaries).expect("Haar samples are unitary")
}

pub fn random_mixed_unitary(dim: usize, n_terms: usize, seed: u64) -> KrausChannel {
    random_mixed_unitary_with(dim, n_terms, &mut rng(seed))
}

/// Unitary conjugation by a Haar-random unitary.
pub fn random_unitary_channel(dim: usize, rng: &mut impl Rng) -> KrausChannel {
    KrausChannel::unitary(random_unitary_with(dim, rng)).expect("Haar samples are unitary")
}
