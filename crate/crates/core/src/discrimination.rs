//! Two-channel discrimination: Helstrom measurements, optimal entangled
//! inputs from the diamond-norm program, and a seeded Monte-Carlo simulator.
//!
//! The simulator draws from `ChaCha8Rng`. Shots are split into chunks of
//! [`CHUNK`]; chunk `k` uses seed `derive_seed(seed, k)`, so the result depends
//! only on `(shots, seed)` and not on the thread schedule.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use crate::channels::random::{derive_seed, rng};
use crate::channels::{DensityMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::measures::sphere_max;
use crate::numerics::{hermitian_eig, partial_trace, trace_norm, ComplexMatrix, Subsystem, ONE};
use crate::sdp::{build_diamond_norm, names, solve, SdpStatus};
use crate::tolerance::TOL;

/// Shots per independently seeded chunk.
pub const CHUNK: usize = 4096;

/// Optimal two-outcome measurement for a pair of states with prior `λ` on the first.
#[derive(Debug, Clone)]
pub struct Helstrom {
    /// Effect for the guess "first state"; the complement guesses the second.
    pub povm_effect: ComplexMatrix,
    pub predicted_success: f64,
}

/// Everything needed to run (or predict) one discrimination experiment.
#[derive(Debug, Clone)]
pub struct DiscriminationSetup {
    pub prior_lambda: f64,
    /// Input on `R ⊗ A` (reference first); `dim_ref == 1` means no reference.
    pub input_state: DensityMatrix,
    pub dim_ref: usize,
    pub povm_effect: ComplexMatrix,
    pub predicted_success: f64,
    /// `fallback = 1` when the maximally entangled input replaced the SDP input.
    pub diagnostics: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialStats {
    pub shots: u64,
    pub successes: u64,
    pub empirical: f64,
    pub stderr: f64,
}

impl TrialStats {
    pub fn new(shots: u64, successes: u64) -> Self {
        let empirical = successes as f64 / shots as f64;
        Self {
            shots,
            successes,
            empirical,
            stderr: (empirical * (1.0 - empirical) / shots as f64).sqrt(),
        }
    }

    /// `(empirical − predicted) / stderr`; 0 when both agree exactly.
    pub fn z_score(&self, predicted: f64) -> f64 {
        let diff = self.empirical - predicted;
        if diff == 0.0 {
            0.0
        } else if self.stderr > 0.0 {
            diff / self.stderr
        } else {
            // a deterministic outcome: one binomial unit at this shot count
            diff / (1.0 / self.shots as f64).sqrt()
        }
    }
}

/// Projector onto the nonnegative eigenspace of `λρ₁ − (1−λ)ρ₂`; success `½(1 + ‖λρ₁ − (1−λ)ρ₂‖₁)`.
pub fn helstrom(rho1: &DensityMatrix, rho2: &DensityMatrix, lambda: f64) -> Result<Helstrom> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::Dimension(format!(
            "states of dimension {} and {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!("prior {lambda} outside [0, 1]")));
    }
    let gamma = &rho1.matrix().scale(lambda) - &rho2.matrix().scale(1.0 - lambda);
    let eig = hermitian_eig(&gamma)?;
    let keep: Vec<f64> = eig.values.iter().map(|&v| if v >= 0.0 { 1.0 } else { 0.0 }).collect();
    let norm: f64 = eig.values.iter().map(|v| v.abs()).sum();
    Ok(Helstrom {
        povm_effect: eig.reconstruct_with(&keep).hermitian_part(),
        predicted_success: (0.5 * (1.0 + norm)).clamp(0.5, 1.0),
    })
}

fn check_pair(ch1: &KrausChannel, ch2: &KrausChannel) -> Result<()> {
    if ch1.dim_in() != ch2.dim_in() || ch1.dim_out() != ch2.dim_out() {
        return Err(Error::Dimension(format!(
            "channels {}->{} and {}->{}",
            ch1.dim_in(),
            ch1.dim_out(),
            ch2.dim_in(),
            ch2.dim_out()
        )));
    }
    Ok(())
}

/// `(√ρ ⊗ I) Φ₊ (√ρ ⊗ I)` on `R ⊗ A` with unnormalised `Φ₊ = Σ |ii⟩⟨jj|`.
fn purification(rho: &ComplexMatrix) -> Result<DensityMatrix> {
    let d = rho.rows();
    let s = rho.hermitian_fn(|v| v.max(0.0).sqrt())?;
    let mut phi = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            phi[(i * d + i, j * d + j)] = ONE;
        }
    }
    let k = crate::numerics::kron(&s, &ComplexMatrix::identity(d));
    Ok(DensityMatrix::from_unchecked(k.conjugate(&phi)))
}

/// Input state `ρ` of the diamond-norm program on `J(ch1) − J(ch2)`, if usable.
fn diamond_input(ch1: &KrausChannel, ch2: &KrausChannel) -> Option<ComplexMatrix> {
    let (da, db) = (ch1.dim_in(), ch1.dim_out());
    let delta = ch1.choi().matrix() - ch2.choi().matrix();
    let p = build_diamond_norm(&delta, da, db).ok()?;
    let sol = solve(&p, 1e-9, 200).ok()?;
    if sol.status != SdpStatus::Optimal {
        return None;
    }
    let rho = sol.multiplier(names::SLACK_NORM).hermitian_part();
    let eig = hermitian_eig(&rho).ok()?;
    let clipped: Vec<f64> = eig.values.iter().map(|v| v.max(0.0)).collect();
    let tr: f64 = clipped.iter().sum();
    (tr > TOL.state).then(|| eig.reconstruct_with(&clipped).scale(1.0 / tr))
}

fn setup_from_input(
    ch1: &KrausChannel,
    ch2: &KrausChannel,
    input: DensityMatrix,
    dim_ref: usize,
    diagnostics: BTreeMap<String, f64>,
) -> Result<DiscriminationSetup> {
    let out1 = DensityMatrix::from_unchecked(ch1.apply_with_reference(input.matrix(), dim_ref));
    let out2 = DensityMatrix::from_unchecked(ch2.apply_with_reference(input.matrix(), dim_ref));
    let h = helstrom(&out1, &out2, 0.5)?;
    Ok(DiscriminationSetup {
        prior_lambda: 0.5,
        input_state: input,
        dim_ref,
        povm_effect: h.povm_effect,
        predicted_success: h.predicted_success,
        diagnostics,
    })
}

/// Entangled strategy at `λ = ½` with the input read off the diamond-norm dual;
/// its predicted success is `½ + ¼‖ch1 − ch2‖⋄`.
pub fn optimal_setup(ch1: &KrausChannel, ch2: &KrausChannel) -> Result<DiscriminationSetup> {
    check_pair(ch1, ch2)?;
    let d = ch1.dim_in();
    let (rho, fallback) = match diamond_input(ch1, ch2) {
        Some(rho) => (rho, 0.0),
        None => (ComplexMatrix::identity(d).scale(1.0 / d as f64), 1.0),
    };
    let input = purification(&rho)?;
    let mut diagnostics = BTreeMap::from([("fallback".to_string(), fallback)]);
    let reduced = partial_trace(input.matrix(), d, d, Subsystem::B)?;
    diagnostics.insert("input_purity".into(), reduced.inner_re(&reduced));
    setup_from_input(ch1, ch2, input, d, diagnostics)
}

/// Strategy without a reference system for qubit channels: the pure input
/// maximising `‖(ch1 − ch2)(ψ)‖₁`, so the predicted success is `½ + ¼` of the
/// induced trace norm of the difference.
pub fn unentangled_setup(ch1: &KrausChannel, ch2: &KrausChannel) -> Result<DiscriminationSetup> {
    check_pair(ch1, ch2)?;
    crate::measures::require_qubit(ch1, "unentangled discrimination")?;
    let (b1, b2) = (ch1.bloch_affine()?, ch2.bloch_affine()?);
    let (_, r) = sphere_max(&(b1.a - b2.a), &(b1.m - b2.m));
    let input = DensityMatrix::from_bloch(&r)?;
    setup_from_input(ch1, ch2, input, 1, BTreeMap::new())
}

/// Monte-Carlo run of the protocol: draw `Z` with `P(Z = 1) = λ`, send the
/// input through `ch_Z ⊗ id_R`, measure the effect, count correct guesses.
pub fn simulate(
    ch1: &KrausChannel,
    ch2: &KrausChannel,
    setup: &DiscriminationSetup,
    shots: u64,
    seed: u64,
) -> Result<TrialStats> {
    check_pair(ch1, ch2)?;
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let input = setup.input_state.matrix();
    if input.rows() != ch1.dim_in() * setup.dim_ref {
        return Err(Error::Dimension("input state does not match the channels".into()));
    }
    let born = |ch: &KrausChannel| -> f64 {
        let out = ch.apply_with_reference(input, setup.dim_ref);
        setup.povm_effect.matmul(&out).trace().re.clamp(0.0, 1.0)
    };
    // probability of guessing "1" given each channel
    let (p1, p2) = (born(ch1), born(ch2));
    let lambda = setup.prior_lambda;
    let chunks = shots.div_ceil(CHUNK as u64);
    let successes: u64 = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let n = (shots - k * CHUNK as u64).min(CHUNK as u64);
            let mut r = rng(derive_seed(seed, k));
            let mut wins = 0u64;
            for _ in 0..n {
                let first = r.random::<f64>() < lambda;
                let guess_first = r.random::<f64>() < if first { p1 } else { p2 };
                wins += u64::from(first == guess_first);
            }
            wins
        })
        .sum();
    Ok(TrialStats::new(shots, successes))
}

/// `½ + ¼‖(ch1 − ch2) ⊗ id (φ)‖₁` for a given input on `R ⊗ A`.
pub fn success_at(ch1: &KrausChannel, ch2: &KrausChannel, input: &DensityMatrix, dim_ref: usize) -> Result<f64> {
    check_pair(ch1, ch2)?;
    let diff = &ch1.apply_with_reference(input.matrix(), dim_ref) - &ch2.apply_with_reference(input.matrix(), dim_ref);
    Ok(0.5 + 0.25 * trace_norm(&diff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::amplitude_damping;
    use crate::measures::{t_diamond, t_one, OptimizerConfig};
    use crate::numerics::{c, pauli};

    fn plus() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(h, 0.0), c(h, 0.0)]).unwrap()
    }

    #[test]
    fn helstrom_examples() {
        let z0 = DensityMatrix::basis(2, 0);
        let z1 = DensityMatrix::basis(2, 1);
        assert!((helstrom(&z0, &z0, 0.5).unwrap().predicted_success - 0.5).abs() < 1e-12);
        assert!((helstrom(&z0, &z1, 0.5).unwrap().predicted_success - 1.0).abs() < 1e-12);
        let h = helstrom(&z0, &plus(), 0.5).unwrap();
        assert!((h.predicted_success - (0.5 + 2f64.sqrt() / 4.0)).abs() < 1e-12);
        let e = hermitian_eig(&h.povm_effect).unwrap();
        assert!(e.min() > -TOL.povm && e.max() < 1.0 + TOL.povm);
        assert!(helstrom(&z0, &DensityMatrix::basis(3, 0), 0.5).is_err());
        assert!(helstrom(&z0, &z1, 1.5).is_err());
    }

    #[test]
    fn helstrom_general_prior() {
        let z0 = DensityMatrix::basis(2, 0);
        let h = helstrom(&z0, &plus(), 0.3).unwrap();
        // success of the effect equals the closed form
        let direct = 0.3 * h.povm_effect.matmul(z0.matrix()).trace().re
            + 0.7 * (1.0 - h.povm_effect.matmul(plus().matrix()).trace().re);
        assert!((direct - h.predicted_success).abs() < 1e-12);
    }

    #[test]
    fn optimal_setup_examples() {
        let id = KrausChannel::identity(2);
        let x = KrausChannel::unitary(pauli()[0].clone()).unwrap();
        assert!((optimal_setup(&id, &id).unwrap().predicted_success - 0.5).abs() < 1e-6);
        assert!((optimal_setup(&id, &x).unwrap().predicted_success - 1.0).abs() < 1e-6);

        let ad = amplitude_damping(0.8).unwrap();
        let td = t_diamond(&ad).unwrap();
        let w = td.witness_channel.clone().unwrap();
        let s = optimal_setup(&ad, &w).unwrap();
        assert!((s.predicted_success - (0.5 + 0.25 * td.value)).abs() < 2e-3, "{}", s.predicted_success);
        assert_eq!(s.diagnostics["fallback"], 0.0);
        let direct = success_at(&ad, &w, &s.input_state, s.dim_ref).unwrap();
        assert!((direct - s.predicted_success).abs() < 1e-9);
    }

    #[test]
    fn simulation_is_deterministic_and_unbiased() {
        let id = KrausChannel::identity(2);
        let s = optimal_setup(&id, &id).unwrap();
        let a = simulate(&id, &id, &s, 100_000, 5).unwrap();
        assert_eq!(a, simulate(&id, &id, &s, 100_000, 5).unwrap());
        assert!(a.z_score(0.5).abs() < 3.0);
        assert_eq!(a.empirical, a.successes as f64 / a.shots as f64);

        let x = KrausChannel::unitary(pauli()[0].clone()).unwrap();
        let s = optimal_setup(&id, &x).unwrap();
        let b = simulate(&id, &x, &s, 100_000, 5).unwrap();
        assert!((b.empirical - 1.0).abs() <= 3.0 * b.stderr + 1e-12);
        assert!(simulate(&id, &x, &s, 0, 5).is_err());
    }

    #[test]
    fn unentangled_strategy_matches_induced_norm() {
        let ad = amplitude_damping(0.8).unwrap();
        let r = t_one(&ad, &OptimizerConfig::default()).unwrap();
        let w = r.witness_channel.unwrap();
        let s = unentangled_setup(&ad, &w).unwrap();
        assert!((s.predicted_success - (0.5 + 0.25 * r.value)).abs() < 2e-3);
    }
}
