// Diamond-norm distance to the unital channels by the interior-point SDP,
// with an independent residual check of the returned primal and dual points.

use dyncoh::channels::{amplitude_damping, KrausChannel};
use dyncoh::error::Result;
use dyncoh::numerics::ComplexMatrix;
use dyncoh::sdp::{build_diamond_unital, names, solve, verify, SdpStatus};
use dyncoh::tolerance::TOL;

pub struct DiamondRun {
    pub label: String,
    pub value: f64,
    pub dual: f64,
    pub gap: f64,
    pub max_residual: f64,
    pub iterations: usize,
    pub status: SdpStatus,
}

/// Kraus operators quoted to four decimals; trace preserving only to about `1e-4`.
pub fn four_decimal_channel() -> Result<KrausChannel> {
    let k0 = ComplexMatrix::from_real_rows(&[&[-0.5084, -0.5495], &[0.5318, -0.5108]]);
    let k1 = ComplexMatrix::from_real_rows(&[&[0.6701, 0.0846], &[0.0981, -0.6558]]);
    KrausChannel::with_tp_tolerance(vec![k0, k1], TOL.quoted_tp)
}

pub fn run_example() -> Result<Vec<DiamondRun>> {
    let mut channels = vec![("four-decimal example".to_string(), four_decimal_channel()?)];
    for eta in [0.2, 0.8] {
        channels.push((format!("amplitude damping {eta}"), amplitude_damping(eta)?));
    }
    channels
        .into_iter()
        .map(|(label, ch)| {
            let p = build_diamond_unital(&ch.choi())?;
            let sol = solve(&p, 1e-8, 200)?;
            let check = verify(&p, &sol)?;
            assert_eq!(sol.block(names::W).rows(), 4);
            Ok(DiamondRun {
                label,
                value: sol.primal_objective,
                dual: sol.dual_objective,
                gap: sol.gap,
                max_residual: check.max_residual(),
                iterations: sol.iterations,
                status: sol.status,
            })
        })
        .collect()
}

fn main() -> Result<()> {
    for r in run_example()? {
        println!(
            "{:24} value={:.10} dual={:.10} gap={:.2e} residual={:.2e} iterations={} {:?}",
            r.label, r.value, r.dual, r.gap, r.max_residual, r.iterations, r.status
        );
    }
    Ok(())
}
