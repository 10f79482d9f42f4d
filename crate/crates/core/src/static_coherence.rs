//! Static total-coherence measures. All logarithms are base 2.
//!
//! Total coherence is basis independent: the only incoherent state is the
//! maximally mixed one, so both measures here are functions of the spectrum.

use std::fmt;
use std::str::FromStr;

use crate::channels::DensityMatrix;
use crate::error::{Error, Result};
use crate::numerics::hermitian_eig;
use crate::tolerance::TOL;

/// Which static measure a max-increase computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StaticMeasureId {
    /// `Tr ρ² − 1/n`
    C2,
    /// `log₂ n − S(ρ)`
    CRE,
}

impl StaticMeasureId {
    pub fn evaluate(self, rho: &DensityMatrix) -> f64 {
        match self {
            Self::C2 => c2(rho),
            Self::CRE => c_re(rho),
        }
    }
}

impl fmt::Display for StaticMeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::C2 => "c2",
            Self::CRE => "cre",
        })
    }
}

impl FromStr for StaticMeasureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c2" => Ok(Self::C2),
            "cre" | "c_re" => Ok(Self::CRE),
            other => Err(Error::InvalidArgument(format!("unknown static measure {other:?}"))),
        }
    }
}

/// `−x log₂ x` with `0 log 0 = 0`.
pub(crate) fn eta_log(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Shannon entropy (bits) of a probability vector; tiny negatives count as zero.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().map(|&x| eta_log(x)).sum()
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.spectrum()).max(0.0)
}

pub fn c2(rho: &DensityMatrix) -> f64 {
    (rho.purity() - 1.0 / rho.dim() as f64).max(0.0)
}

pub fn c_re(rho: &DensityMatrix) -> f64 {
    ((rho.dim() as f64).log2() - entropy(rho)).max(0.0)
}

/// `true` when the spectrum of `output` is majorised by that of `input`:
/// every partial sum of the descending eigenvalues of `output` is at most
/// the matching partial sum of `input` plus `tol`.
pub fn is_majorized_by(output: &DensityMatrix, input: &DensityMatrix, tol: f64) -> bool {
    let sums = |rho: &DensityMatrix| {
        let mut s = rho.spectrum();
        s.sort_by(|a, b| b.total_cmp(a));
        s.iter()
            .scan(0.0, |acc, x| {
                *acc += x;
                Some(*acc)
            })
            .collect::<Vec<f64>>()
    };
    output.dim() == input.dim() && sums(output).iter().zip(sums(input)).all(|(o, i)| *o <= i + tol)
}

/// Quantum relative entropy `S(ρ‖σ)` in bits, evaluated in the eigenbasis of σ.
///
/// Returns `f64::INFINITY` when ρ has weight above `1e-10` on an eigenvector
/// of σ with eigenvalue below `1e-12`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "relative entropy of {}- and {}-dimensional states",
            rho.dim(),
            sigma.dim()
        )));
    }
    relative_entropy_matrices(rho.matrix(), sigma.matrix())
}

/// Same as [`relative_entropy`] on raw positive matrices (used on channel outputs).
pub(crate) fn relative_entropy_matrices(
    rho: &crate::numerics::ComplexMatrix,
    sigma: &crate::numerics::ComplexMatrix,
) -> Result<f64> {
    let es = hermitian_eig(&sigma.hermitian_part())?;
    let er = hermitian_eig(&rho.hermitian_part())?;
    // Tr ρ log σ = Σ_k ⟨s_k|ρ|s_k⟩ log λ_k
    let mut cross = 0.0;
    for (k, &lambda) in es.values.iter().enumerate() {
        let v = es.vector(k);
        let rv = rho.mul_vec(&v);
        let weight: f64 = v.iter().zip(&rv).map(|(a, b)| (a.conj() * b).re).sum();
        if lambda < TOL.support_kernel {
            if weight > TOL.support_weight {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * lambda.log2();
    }
    let neg_entropy: f64 = -er.values.iter().map(|&l| eta_log(l.max(0.0))).sum::<f64>();
    Ok((neg_entropy - cross).max(0.0))
}
