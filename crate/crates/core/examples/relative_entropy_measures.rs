// Relative-entropy measures: the largest coherence increase, the channel
// divergence and the divergence distance to the unital channels.

use dyncoh::channels::{amplitude_damping, completely_depolarizing_qubit, KrausChannel};
use dyncoh::error::Result;
use dyncoh::measures::{channel_divergence, delta_c_max, t_re, OptimizerConfig};
use dyncoh::static_coherence::StaticMeasureId;

pub struct RelativeEntropyRow {
    pub eta: f64,
    pub increase: f64,
    pub distance: f64,
    pub certified: bool,
}

pub struct RelativeEntropyRun {
    pub rows: Vec<RelativeEntropyRow>,
    /// `D(id ‖ dep)`, `D(AD(1) ‖ dep)`, `D(dep ‖ id)`.
    pub divergences: [f64; 3],
}

pub fn run_example() -> Result<RelativeEntropyRun> {
    let cfg = OptimizerConfig::default();
    let mut rows = Vec::new();
    for eta in [0.0, 0.5, 1.0] {
        let ch = amplitude_damping(eta)?;
        let tre = t_re(&ch, &cfg)?;
        rows.push(RelativeEntropyRow {
            eta,
            increase: delta_c_max(&ch, StaticMeasureId::CRE, &cfg)?.value,
            distance: tre.value,
            certified: tre.diagnostics.get("certified") == Some(&1.0),
        });
    }
    let id = KrausChannel::identity(2);
    let dep = completely_depolarizing_qubit();
    let divergences = [
        channel_divergence(&id, &dep, &cfg)?,
        channel_divergence(&amplitude_damping(1.0)?, &dep, &cfg)?,
        channel_divergence(&dep, &id, &cfg)?,
    ];
    Ok(RelativeEntropyRun { rows, divergences })
}

fn main() -> Result<()> {
    let run = run_example()?;
    for r in &run.rows {
        println!(
            "eta={:.1} increase={:.6} distance={:.6} certified={}",
            r.eta, r.increase, r.distance, r.certified
        );
    }
    println!(
        "D(id||dep)={} D(AD(1)||dep)={} D(dep||id)={}",
        run.divergences[0], run.divergences[1], run.divergences[2]
    );
    Ok(())
}
