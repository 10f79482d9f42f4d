//! Numeric thresholds shared across the crate.
//!
//! Every comparison against a fixed threshold goes through [`TOL`] so the
//! values live in one place.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max abs deviation of `h - h†` accepted as Hermitian.
    pub hermitian: f64,
    /// Trace-preservation / unitality residual for channel flags.
    pub channel: f64,
    /// Minimum eigenvalue accepted for a Choi matrix.
    pub choi_psd: f64,
    /// Eigenvalues of a Choi matrix below this are dropped when extracting Kraus operators.
    pub kraus_drop: f64,
    /// State eigenvalue floor / trace deviation.
    pub state: f64,
    /// Unitarity check for mixed-unitary constructors.
    pub unitary: f64,
    /// Probability-vector normalisation.
    pub probability: f64,
    /// Kernel threshold on the second argument of a relative entropy.
    pub support_kernel: f64,
    /// Weight of the first argument on that kernel that makes the divergence infinite.
    pub support_weight: f64,
    /// Channel equality via Choi Frobenius distance.
    pub channel_equal: f64,
    /// Singular values above `1 - guard` disable the closed-form T2 branch.
    pub singular_guard: f64,
    /// POVM effect bounds.
    pub povm: f64,
    /// Trace-preservation residual accepted when loading channels for measurement,
    /// covering Kraus operators quoted to four decimals.
    pub quoted_tp: f64,
}

pub const TOL: Tolerances = Tolerances {
    hermitian: 1e-10,
    channel: 1e-8,
    choi_psd: 1e-8,
    kraus_drop: 1e-9,
    state: 1e-10,
    unitary: 1e-8,
    probability: 1e-10,
    support_kernel: 1e-12,
    support_weight: 1e-10,
    channel_equal: 1e-7,
    singular_guard: 1e-6,
    povm: 1e-9,
    quoted_tp: 1e-3,
};
