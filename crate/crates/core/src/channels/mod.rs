//! Quantum channels in Kraus, Choi and (for qubits) Bloch-affine form.
//!
//! The Choi matrix is unnormalised with the input factor first:
//! `J = Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|)`, so `Tr_B J = I` for trace-preserving maps
//! and `Tr_A J = I` for unital ones.

mod bloch;
mod density;
pub mod json;
pub mod random;

pub use bloch::{fibonacci_sphere, BlochAffine};
pub use density::DensityMatrix;
pub use random::{random_channel, random_density};

use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_eig, kron, partial_trace, pauli, spectral_norm, ComplexMatrix, Subsystem,
};
use crate::tolerance::TOL;

/// Trace-preservation and unitality of a Kraus set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub is_cptp: bool,
    pub is_unital: bool,
    /// `‖Σ K†K − I‖_∞`
    pub tp_residual: f64,
    /// `‖Σ KK† − I‖_∞`, infinite when input and output dimensions differ.
    pub unital_residual: f64,
}

/// Checks a raw Kraus list. Any Kraus list is completely positive, so
/// CPTP reduces to the trace-preservation residual.
pub fn validate(kraus: &[ComplexMatrix]) -> Result<ValidationReport> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
    let (dout, din) = first.shape();
    if let Some(k) = kraus.iter().position(|k| k.shape() != (dout, din)) {
        return Err(Error::Dimension(format!(
            "Kraus element {k} has shape {:?}, expected {:?}",
            kraus[k].shape(),
            (dout, din)
        )));
    }
    let mut tp = ComplexMatrix::identity(din).scale(-1.0);
    for k in kraus {
        tp += &k.adjoint().matmul(k);
    }
    let tp_residual = spectral_norm(&tp.hermitian_part())?;
    let unital_residual = if din == dout {
        let mut un = ComplexMatrix::identity(dout).scale(-1.0);
        for k in kraus {
            un += &k.matmul(&k.adjoint());
        }
        spectral_norm(&un.hermitian_part())?
    } else {
        f64::INFINITY
    };
    let is_cptp = tp_residual <= TOL.channel;
    Ok(ValidationReport {
        is_cptp,
        is_unital: unital_residual <= TOL.channel,
        tp_residual,
        unital_residual,
    })
}

/// A completely positive, trace-preserving map `ρ ↦ Σ K ρ K†`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
    tp_residual: f64,
}

impl KrausChannel {
    /// Requires trace preservation within `1e-8`.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tp_tolerance(kraus, TOL.channel)
    }

    /// Accepts Kraus sets whose trace-preservation residual is at most `tol`.
    ///
    /// Used for operators quoted to a few decimals, whose residual sits far
    /// above rounding level; the residual is kept in [`Self::tp_residual`].
    pub fn with_tp_tolerance(kraus: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let report = validate(&kraus)?;
        if report.tp_residual > tol {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving: residual {:.3e} exceeds {:.1e}",
                report.tp_residual, tol
            )));
        }
        let (dim_out, dim_in) = kraus[0].shape();
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
            tp_residual: report.tp_residual,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(vec![ComplexMatrix::identity(dim)]).expect("identity is CPTP")
    }

    /// Conjugation by a unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        check_unitary(&u)?;
        Self::new(vec![u])
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn tp_residual(&self) -> f64 {
        self.tp_residual
    }

    pub fn is_qubit(&self) -> bool {
        self.dim_in == 2 && self.dim_out == 2
    }

    pub fn validation(&self) -> ValidationReport {
        validate(&self.kraus).expect("shapes checked at construction")
    }

    pub fn is_unital(&self) -> bool {
        self.validation().is_unital
    }

    /// Applies the map to an arbitrary operator (no state checks).
    pub fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += &k.conjugate(x);
        }
        out
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::Dimension(format!(
                "channel input dimension {} but state dimension {}",
                self.dim_in,
                rho.dim()
            )));
        }
        Ok(DensityMatrix::from_unchecked(self.apply_operator(rho.matrix())))
    }

    /// `(Φ ⊗ id_R)` applied to an operator on `A ⊗ R` (system first).
    pub fn apply_on_system(&self, x: &ComplexMatrix, dim_ref: usize) -> ComplexMatrix {
        let id = ComplexMatrix::identity(dim_ref);
        let mut out = ComplexMatrix::zeros(self.dim_out * dim_ref, self.dim_out * dim_ref);
        for k in &self.kraus {
            out += &kron(k, &id).conjugate(x);
        }
        out
    }

    /// `(id_R ⊗ Φ)` applied to an operator on `R ⊗ A` (reference first, matching the Choi layout).
    pub fn apply_with_reference(&self, x: &ComplexMatrix, dim_ref: usize) -> ComplexMatrix {
        let id = ComplexMatrix::identity(dim_ref);
        let mut out = ComplexMatrix::zeros(self.dim_out * dim_ref, self.dim_out * dim_ref);
        for k in &self.kraus {
            out += &kron(&id, k).conjugate(x);
        }
        out
    }

    pub fn choi(&self) -> ChoiMatrix {
        kraus_to_choi(self)
    }

    pub fn bloch_affine(&self) -> Result<BlochAffine> {
        BlochAffine::from_channel(self)
    }

    /// Choi-Frobenius distance to another channel.
    pub fn choi_distance(&self, other: &Self) -> Result<f64> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(Error::Dimension("channels act on different spaces".into()));
        }
        Ok(self.choi().matrix().distance(other.choi().matrix()))
    }

    /// Equality as maps (Choi distance ≤ 1e-7).
    pub fn same_map(&self, other: &Self) -> bool {
        self.choi_distance(other)
            .map(|d| d <= TOL.channel_equal)
            .unwrap_or(false)
    }
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::InvalidArgument("unitary must be square".into()));
    }
    let dev = (u.matmul(&u.adjoint()) - ComplexMatrix::identity(u.rows())).max_abs();
    if dev > TOL.unitary {
        return Err(Error::InvalidArgument(format!(
            "matrix is not unitary (deviation {dev:.3e})"
        )));
    }
    Ok(())
}

/// Choi matrix `J = Σ |i⟩⟨j| ⊗ E(|i⟩⟨j|)` of a channel.
#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    dim_in: usize,
    dim_out: usize,
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// Validates positivity and `Tr_B J = I`.
    pub fn new(dim_in: usize, dim_out: usize, matrix: ComplexMatrix) -> Result<Self> {
        let n = dim_in * dim_out;
        if matrix.shape() != (n, n) {
            return Err(Error::Dimension(format!(
                "Choi matrix of shape {:?} for dimensions {dim_in}->{dim_out}",
                matrix.shape()
            )));
        }
        let eig = hermitian_eig(&matrix)?;
        if eig.min() < -TOL.choi_psd {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix not positive semidefinite (min eigenvalue {:.3e})",
                eig.min()
            )));
        }
        let tp = partial_trace(&matrix, dim_in, dim_out, Subsystem::B)?
            - ComplexMatrix::identity(dim_in);
        if tp.max_abs() > TOL.channel {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix not trace preserving (residual {:.3e})",
                tp.max_abs()
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Scales the underlying matrix; the result is generally not a channel,
    /// only a positive operator with the same block layout.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            matrix: self.matrix.scale(s),
        }
    }
}

pub fn kraus_to_choi(ch: &KrausChannel) -> ChoiMatrix {
    let (din, dout) = (ch.dim_in, ch.dim_out);
    let n = din * dout;
    let mut j = ComplexMatrix::zeros(n, n);
    for k in &ch.kraus {
        for i in 0..din {
            for a in 0..dout {
                let x = k[(a, i)];
                for jj in 0..din {
                    for b in 0..dout {
                        j[(i * dout + a, jj * dout + b)] += x * k[(b, jj)].conj();
                    }
                }
            }
        }
    }
    ChoiMatrix {
        dim_in: din,
        dim_out: dout,
        matrix: j,
    }
}

/// Kraus operators from the spectral decomposition of the Choi matrix;
/// eigenvalues below `1e-9` are dropped.
pub fn choi_to_kraus(j: &ChoiMatrix) -> Result<KrausChannel> {
    let eig = hermitian_eig(&j.matrix)?;
    if eig.min() < -TOL.choi_psd {
        return Err(Error::InvalidChannel(format!(
            "Choi matrix not positive semidefinite (min eigenvalue {:.3e})",
            eig.min()
        )));
    }
    let (din, dout) = (j.dim_in, j.dim_out);
    let kraus: Vec<ComplexMatrix> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > TOL.kraus_drop)
        .map(|(k, &l)| {
            let v = eig.vector(k);
            let s = l.sqrt();
            ComplexMatrix::from_fn(dout, din, |a, i| v[i * dout + a] * s)
        })
        .collect();
    if kraus.is_empty() {
        return Err(Error::InvalidChannel("Choi matrix is zero".into()));
    }
    // The dropped eigenvalues shift Σ K†K by at most their sum.
    let dropped: f64 = eig.values.iter().filter(|&&l| l <= TOL.kraus_drop).map(|l| l.abs()).sum();
    KrausChannel::with_tp_tolerance(kraus, TOL.channel.max(2.0 * dropped + TOL.channel))
}

/// Amplitude damping with decay probability `eta`:
/// `K0 = diag(1, √(1−η))`, `K1 = √η |0⟩⟨1|`.
pub fn amplitude_damping(eta: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidArgument(format!(
            "damping parameter {eta} outside [0, 1]"
        )));
    }
    let k0 = ComplexMatrix::diag_real(&[1.0, (1.0 - eta).sqrt()]);
    let k1 = ComplexMatrix::from_real_rows(&[&[0.0, eta.sqrt()], &[0.0, 0.0]]);
    KrausChannel::new(vec![k0, k1])
}

/// Kraus list of amplitude damping with the off-diagonal entry `η` instead of `√η`.
/// This is not trace preserving for `0 < η < 1`; kept for validation tests.
pub fn amplitude_damping_unrooted_kraus(eta: f64) -> Vec<ComplexMatrix> {
    vec![
        ComplexMatrix::diag_real(&[1.0, (1.0 - eta).sqrt()]),
        ComplexMatrix::from_real_rows(&[&[0.0, eta], &[0.0, 0.0]]),
    ]
}

/// `Σ_k p_k U_k ρ U_k†`.
pub fn mixed_unitary(probs: &[f64], unitaries: &[ComplexMatrix]) -> Result<KrausChannel> {
    if probs.is_empty() || probs.len() != unitaries.len() {
        return Err(Error::InvalidArgument(format!(
            "{} probabilities for {} unitaries",
            probs.len(),
            unitaries.len()
        )));
    }
    if probs.iter().any(|&p| p.is_nan() || p < 0.0) {
        return Err(Error::InvalidArgument("negative probability".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > TOL.probability {
        return Err(Error::InvalidArgument(format!(
            "probabilities sum to {total}"
        )));
    }
    for u in unitaries {
        check_unitary(u)?;
    }
    let kraus = probs
        .iter()
        .zip(unitaries)
        .map(|(&p, u)| u.scale(p.sqrt()))
        .collect();
    KrausChannel::new(kraus)
}

/// Unitary conjugations by `I, σ_x, σ_y, σ_z`.
pub fn pauli_channel(probs: [f64; 4]) -> Result<KrausChannel> {
    let [sx, sy, sz] = pauli();
    mixed_unitary(&probs, &[ComplexMatrix::identity(2), sx, sy, sz])
}

/// Completely depolarising qubit channel `ρ ↦ I/2`.
pub fn completely_depolarizing_qubit() -> KrausChannel {
    pauli_channel([0.25; 4]).expect("Pauli twirl is CPTP")
}

/// `outer ∘ inner`.
pub fn compose(outer: &KrausChannel, inner: &KrausChannel) -> Result<KrausChannel> {
    if outer.dim_in != inner.dim_out {
        return Err(Error::Dimension(format!(
            "cannot compose {}->{} after {}->{}",
            outer.dim_in, outer.dim_out, inner.dim_in, inner.dim_out
        )));
    }
    let kraus = outer
        .kraus
        .iter()
        .flat_map(|a| inner.kraus.iter().map(move |b| a.matmul(b)))
        .collect();
    let tol = outer.tp_residual + inner.tp_residual + TOL.channel;
    KrausChannel::with_tp_tolerance(kraus, tol)
}

/// `a ⊗ b`.
pub fn tensor(a: &KrausChannel, b: &KrausChannel) -> Result<KrausChannel> {
    let kraus = a
        .kraus
        .iter()
        .flat_map(|x| b.kraus.iter().map(move |y| kron(x, y)))
        .collect();
    let tol = a.tp_residual + b.tp_residual + TOL.channel;
    KrausChannel::with_tp_tolerance(kraus, tol)
}

/// Convex combination `p·a + (1−p)·b` as the union of `√p`-scaled Kraus sets.
pub fn mixture(p: f64, a: &KrausChannel, b: &KrausChannel) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("weight {p} outside [0, 1]")));
    }
    if a.dim_in != b.dim_in || a.dim_out != b.dim_out {
        return Err(Error::Dimension("mixing channels on different spaces".into()));
    }
    let kraus = a
        .kraus
        .iter()
        .map(|k| k.scale(p.sqrt()))
        .chain(b.kraus.iter().map(|k| k.scale((1.0 - p).sqrt())))
        .collect();
    let tol = a.tp_residual.max(b.tp_residual) + TOL.channel;
    KrausChannel::with_tp_tolerance(kraus, tol)
}
