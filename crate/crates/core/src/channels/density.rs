use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, pauli, ComplexMatrix, Vec3, C64};
use crate::tolerance::TOL;

/// A quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState(format!(
                "non-square {}x{} matrix",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let eig = hermitian_eig(&matrix)?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TOL.state || tr.im.abs() > TOL.state {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        if eig.min() < -TOL.state {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                eig.min()
            )));
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
        })
    }

    /// Wraps a matrix known to be a state up to rounding (e.g. a channel output).
    pub(crate) fn from_unchecked(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
        }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::from_unchecked(ComplexMatrix::outer(&v, &v)))
    }

    /// `|k⟩⟨k|` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        Self::from_unchecked(ComplexMatrix::unit(dim, k, k))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_unchecked(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// Qubit state `(I + r·σ)/2`; requires `|r| ≤ 1`.
    pub fn from_bloch(r: &Vec3) -> Result<Self> {
        if r.norm() > 1.0 + TOL.state {
            return Err(Error::InvalidState(format!(
                "Bloch vector of length {} outside the unit ball",
                r.norm()
            )));
        }
        Ok(Self::from_unchecked(bloch_operator(r)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Bloch vector `r_i = Tr(ρ σ_i)` of a qubit state.
    pub fn bloch_vector(&self) -> Result<Vec3> {
        if self.dim() != 2 {
            return Err(Error::Dimension(format!(
                "Bloch vector of a {}-dimensional state",
                self.dim()
            )));
        }
        let s = pauli();
        Ok(Vec3::new(
            s[0].matmul(&self.matrix).trace().re,
            s[1].matmul(&self.matrix).trace().re,
            s[2].matmul(&self.matrix).trace().re,
        ))
    }

    /// Eigenvalues, descending, with the tiny negative rounding noise clamped to zero.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eig(&self.matrix)
            .expect("density matrices are Hermitian")
            .values
            .into_iter()
            .map(|l| if (-TOL.state..0.0).contains(&l) { 0.0 } else { l })
            .collect()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.inner_re(&self.matrix)
    }
}

/// `(I + v·σ)/2` without any length check.
pub(crate) fn bloch_operator(v: &Vec3) -> ComplexMatrix {
    let s = pauli();
    let mut m = ComplexMatrix::identity(2);
    for (k, sk) in s.iter().enumerate() {
        m += &sk.scale(v[k]);
    }
    m.scale(0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, ONE};

    #[test]
    fn rejects_bad_trace_and_negative_states() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag_real(&[1.5, -0.5])).is_err());
        let nh = ComplexMatrix::from_rows(&[&[c(0.5, 0.0), ONE], &[c(0.0, 0.0), c(0.5, 0.0)]]);
        assert!(DensityMatrix::new(nh).is_err());
    }

    #[test]
    fn bloch_round_trip() {
        let r = Vec3::new(0.3, -0.2, 0.5);
        let rho = DensityMatrix::from_bloch(&r).unwrap();
        assert!((rho.bloch_vector().unwrap() - r).norm() < 1e-15);
        assert!(DensityMatrix::from_bloch(&Vec3::new(1.0, 1.0, 0.0)).is_err());
    }
}
