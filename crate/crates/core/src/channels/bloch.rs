use super::{choi_to_kraus, ChoiMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::numerics::{kron, pauli, ComplexMatrix, Mat3, Vec3};

/// Affine action `r ↦ a + M r` of a qubit channel on Bloch vectors, with
/// `a_i = ½ Σ Tr(σ_i K K†)` and `M_ij = ½ Σ Tr(σ_i K σ_j K†)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAffine {
    pub a: Vec3,
    pub m: Mat3,
}

impl BlochAffine {
    pub fn from_channel(ch: &KrausChannel) -> Result<Self> {
        if !ch.is_qubit() {
            return Err(Error::Dimension(format!(
                "Bloch representation needs a qubit channel, got {}->{}",
                ch.dim_in(),
                ch.dim_out()
            )));
        }
        let s = pauli();
        let image_of_identity = ch.apply_operator(&ComplexMatrix::identity(2));
        let a = Vec3::from_fn(|i, _| 0.5 * s[i].matmul(&image_of_identity).trace().re);
        let images: Vec<ComplexMatrix> = s.iter().map(|sj| ch.apply_operator(sj)).collect();
        let m = Mat3::from_fn(|i, j| 0.5 * s[i].matmul(&images[j]).trace().re);
        Ok(Self { a, m })
    }

    pub fn apply(&self, r: &Vec3) -> Vec3 {
        self.a + self.m * r
    }

    /// Largest `|a + M r|` over `n` Fibonacci-lattice unit vectors.
    pub fn max_sampled_image_norm(&self, n: usize) -> f64 {
        fibonacci_sphere(n)
            .iter()
            .map(|r| self.apply(r).norm())
            .fold(0.0, f64::max)
    }

    /// Choi matrix of the linear extension: `Φ(I) = I + a·σ`, `Φ(σ_j) = Σ_i M_ij σ_i`.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let s = pauli();
        let id = ComplexMatrix::identity(2);
        let mut phi_id = id.clone();
        for (si, ai) in s.iter().zip(self.a.iter()) {
            phi_id += &si.scale(*ai);
        }
        let phi_sigma: Vec<ComplexMatrix> = (0..3)
            .map(|j| {
                let mut acc = ComplexMatrix::zeros(2, 2);
                for (i, si) in s.iter().enumerate() {
                    acc += &si.scale(self.m[(i, j)]);
                }
                acc
            })
            .collect();
        // |i⟩⟨j| = ½ (Tr(|i⟩⟨j|) I + Σ_k Tr(σ_k |i⟩⟨j|) σ_k)
        let mut choi = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                let e = ComplexMatrix::unit(2, i, j);
                let mut image = phi_id.scale_c(e.trace());
                for k in 0..3 {
                    image += &phi_sigma[k].scale_c(s[k].matmul(&e).trace());
                }
                choi += &kron(&e, &image.scale(0.5));
            }
        }
        choi
    }

    /// Reconstructs a Kraus channel; fails when the affine map is not completely positive.
    pub fn to_channel(&self) -> Result<KrausChannel> {
        let choi = ChoiMatrix::new(2, 2, self.choi_matrix())?;
        choi_to_kraus(&choi)
    }
}

/// Quasi-uniform points on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            Vec3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}
