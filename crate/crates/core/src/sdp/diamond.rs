//! Diamond-norm programs built on Choi matrices (input system `A` first).

use std::collections::BTreeMap;

use super::problem::{BlockVar, Equality, Objective, ScalarVar, SdpProblem, StartPoint, Term};
use crate::channels::ChoiMatrix;
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, kron, partial_trace, ComplexMatrix, Subsystem, ONE, ZERO};

/// `{I_A ⊗ ⟨b|}` so that `Tr_B X = Σ_b A_b X A_b†`.
pub fn trace_b_ops(d_a: usize, d_b: usize) -> Vec<ComplexMatrix> {
    (0..d_b)
        .map(|b| kron(&ComplexMatrix::identity(d_a), &bra(d_b, b)))
        .collect()
}

/// `{⟨a| ⊗ I_B}` so that `Tr_A X = Σ_a A_a X A_a†`.
pub fn trace_a_ops(d_a: usize, d_b: usize) -> Vec<ComplexMatrix> {
    (0..d_a)
        .map(|a| kron(&bra(d_a, a), &ComplexMatrix::identity(d_b)))
        .collect()
}

/// Row vector `⟨k|` of length `n`.
fn bra(n: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(1, n, |_, j| if j == k { ONE } else { ZERO })
}

/// Names of the variables and constraints of the diamond programs.
pub mod names {
    pub const Z: &str = "Z";
    pub const W: &str = "W";
    pub const S1: &str = "S1";
    pub const S2: &str = "S2";
    pub const A: &str = "a";
    pub const SLACK_CHOI: &str = "slack_choi";
    pub const SLACK_NORM: &str = "slack_norm";
    pub const TP: &str = "tp";
    pub const UNITAL: &str = "unital";
}

fn lambda_max(m: &ComplexMatrix) -> f64 {
    hermitian_eig(&m.hermitian_part()).map_or(0.0, |e| e.max())
}

/// Distance `min_W ‖J − W‖⋄` over unital channels `W`, as
///
/// ```text
/// min a   s.t.  Z + W − S1 = J,   a·I_A − 2 Tr_B Z − S2 = 0,
///               Tr_B W = I_A,      Tr_A W = I_B,   Z, W, S1, S2 ⪰ 0,  a ≥ 0.
/// ```
///
/// The optimal multiplier of the first equality is the dual operator `X` and
/// that of the second is the input state `ρ` with `0 ⪯ X ⪯ 2ρ⊗I_B`.
pub fn build_diamond_unital(j: &ChoiMatrix) -> Result<SdpProblem> {
    let (d_a, d_b) = (j.dim_in(), j.dim_out());
    if d_a != d_b {
        return Err(Error::Dimension(format!(
            "unital distance needs equal dimensions, got {d_a}->{d_b}"
        )));
    }
    let n = d_a * d_b;
    let jm = j.matrix();
    let id_ab = ComplexMatrix::identity(n);
    let id_a = ComplexMatrix::identity(d_a);
    let id_b = ComplexMatrix::identity(d_b);
    let tr_b = trace_b_ops(d_a, d_b);
    let tr_a = trace_a_ops(d_a, d_b);
    use names::*;

    let equalities = vec![
        Equality {
            name: SLACK_CHOI.into(),
            terms: vec![
                Term::identity(Z, 1.0, n),
                Term::identity(W, 1.0, n),
                Term::identity(S1, -1.0, n),
            ],
            rhs: jm.clone(),
        },
        Equality {
            name: SLACK_NORM.into(),
            terms: vec![
                Term::scalar(A, id_a.clone()),
                Term::block_ops(Z, -2.0, tr_b.clone()),
                Term::identity(S2, -1.0, d_a),
            ],
            rhs: ComplexMatrix::zeros(d_a, d_a),
        },
        Equality {
            name: TP.into(),
            terms: vec![Term::block_ops(W, 1.0, tr_b.clone())],
            rhs: id_a.clone(),
        },
        Equality {
            name: UNITAL.into(),
            terms: vec![Term::block_ops(W, 1.0, tr_a)],
            rhs: id_b.clone(),
        },
    ];

    // strictly feasible primal and dual points
    let z = &id_ab + jm;
    let w = id_ab.scale(1.0 / d_b as f64);
    let s1 = &(&z + &w) - jm;
    let trz = partial_trace(&z, d_a, d_b, Subsystem::B)?;
    let a = 2.0 * lambda_max(&trz) + 1.0;
    let s2 = &id_a.scale(a) - &trz.scale(2.0);
    let half = id_ab.scale(0.5 / d_a as f64);
    let start = StartPoint {
        blocks: BTreeMap::from([
            (Z.into(), z),
            (W.into(), w),
            (S1.into(), s1),
            (S2.into(), s2),
        ]),
        scalars: BTreeMap::from([(A.into(), a)]),
        multipliers: BTreeMap::from([
            (SLACK_CHOI.into(), half),
            (SLACK_NORM.into(), id_a.scale(0.5 / d_a as f64)),
            (TP.into(), id_a.scale(-1.0)),
            (UNITAL.into(), id_b.scale(-1.0)),
        ]),
    };

    Ok(SdpProblem {
        psd_blocks: vec![
            BlockVar { name: Z.into(), size: n },
            BlockVar { name: W.into(), size: n },
            BlockVar { name: S1.into(), size: n },
            BlockVar { name: S2.into(), size: d_a },
        ],
        scalars: vec![ScalarVar {
            name: A.into(),
            nonnegative: true,
        }],
        objective: Objective {
            blocks: vec![],
            scalars: vec![(A.into(), 1.0)],
        },
        equalities,
        start: Some(start),
    })
}

/// Diamond norm `‖Δ‖⋄` of a Hermiticity-preserving map given by its Choi matrix:
///
/// ```text
/// min a   s.t.  Z − S1 = Δ,   a·I_A − 2 Tr_B Z − S2 = 0,   Z, S1, S2 ⪰ 0,  a ≥ 0.
/// ```
pub fn build_diamond_norm(delta: &ComplexMatrix, d_a: usize, d_b: usize) -> Result<SdpProblem> {
    let n = d_a * d_b;
    if delta.shape() != (n, n) {
        return Err(Error::Dimension(format!(
            "Choi difference of shape {:?} for dimensions {d_a}->{d_b}",
            delta.shape()
        )));
    }
    if !delta.is_hermitian(1e-10) {
        return Err(Error::NotHermitian {
            deviation: delta.hermitian_deviation(),
        });
    }
    let delta = delta.hermitian_part();
    let id_ab = ComplexMatrix::identity(n);
    let id_a = ComplexMatrix::identity(d_a);
    let tr_b = trace_b_ops(d_a, d_b);
    use names::*;

    let shift = hermitian_eig(&delta)?.values.iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0;
    let z = id_ab.scale(shift);
    let s1 = &z - &delta;
    let trz = partial_trace(&z, d_a, d_b, Subsystem::B)?;
    let a = 2.0 * lambda_max(&trz) + 1.0;
    let s2 = &id_a.scale(a) - &trz.scale(2.0);
    let start = StartPoint {
        blocks: BTreeMap::from([(Z.into(), z), (S1.into(), s1), (S2.into(), s2)]),
        scalars: BTreeMap::from([(A.into(), a)]),
        multipliers: BTreeMap::from([
            (SLACK_CHOI.into(), id_ab.scale(0.5 / d_a as f64)),
            (SLACK_NORM.into(), id_a.scale(0.5 / d_a as f64)),
        ]),
    };

    Ok(SdpProblem {
        psd_blocks: vec![
            BlockVar { name: Z.into(), size: n },
            BlockVar { name: S1.into(), size: n },
            BlockVar { name: S2.into(), size: d_a },
        ],
        scalars: vec![ScalarVar {
            name: A.into(),
            nonnegative: true,
        }],
        objective: Objective {
            blocks: vec![],
            scalars: vec![(A.into(), 1.0)],
        },
        equalities: vec![
            Equality {
                name: SLACK_CHOI.into(),
                terms: vec![Term::identity(Z, 1.0, n), Term::identity(S1, -1.0, n)],
                rhs: delta,
            },
            Equality {
                name: SLACK_NORM.into(),
                terms: vec![
                    Term::scalar(A, id_a.clone()),
                    Term::block_ops(Z, -2.0, tr_b),
                    Term::identity(S2, -1.0, d_a),
                ],
                rhs: ComplexMatrix::zeros(d_a, d_a),
            },
        ],
        start: Some(start),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{amplitude_damping, kraus_to_choi, KrausChannel};
    use crate::sdp::{solve, verify, SdpStatus};

    pub(crate) fn appendix_channel() -> KrausChannel {
        let k0 = ComplexMatrix::from_real_rows(&[&[-0.5084, -0.5495], &[0.5318, -0.5108]]);
        let k1 = ComplexMatrix::from_real_rows(&[&[0.6701, 0.0846], &[0.0981, -0.6558]]);
        KrausChannel::with_tp_tolerance(vec![k0, k1], crate::tolerance::TOL.quoted_tp).unwrap()
    }

    #[test]
    fn identity_is_at_distance_zero() {
        let p = build_diamond_unital(&KrausChannel::identity(2).choi()).unwrap();
        let s = solve(&p, 1e-8, 200).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        assert!(s.primal_objective.abs() < 1e-7, "{}", s.primal_objective);
    }

    #[test]
    fn amplitude_damping_values() {
        for eta in [0.1, 0.5, 0.8, 1.0] {
            let p = build_diamond_unital(&kraus_to_choi(&amplitude_damping(eta).unwrap())).unwrap();
            let s = solve(&p, 1e-8, 200).unwrap();
            assert_eq!(s.status, SdpStatus::Optimal, "eta {eta}");
            let r = verify(&p, &s).unwrap();
            assert!(r.max_residual() < 1e-6, "{r:?}");
            assert!(s.gap.abs() <= 1e-8);
            println!("AD({eta}) -> {} in {} iterations", s.primal_objective, s.iterations);
        }
    }

    #[test]
    fn appendix_channel_value() {
        let p = build_diamond_unital(&appendix_channel().choi()).unwrap();
        let s = solve(&p, 1e-8, 200).unwrap();
        assert_eq!(s.status, SdpStatus::Optimal);
        println!("appendix -> {} gap {} iters {}", s.primal_objective, s.gap, s.iterations);
        assert!((s.primal_objective - 0.02645).abs() < 1e-4);
    }
}
