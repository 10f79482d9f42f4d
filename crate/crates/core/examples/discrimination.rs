// Discriminating amplitude damping from its nearest unital channel: the
// simulated success rate against `1/2 + T_diamond/4`.

use dyncoh::channels::{amplitude_damping, KrausChannel};
use dyncoh::discrimination::{optimal_setup, simulate, unentangled_setup, TrialStats};
use dyncoh::error::Result;
use dyncoh::measures::{t_diamond, t_one, OptimizerConfig};
use dyncoh::numerics::pauli;

pub struct Experiment {
    pub label: &'static str,
    pub predicted: f64,
    pub bound: f64,
    pub stats: TrialStats,
}

pub fn run_example() -> Result<Vec<Experiment>> {
    let shots = 100_000;
    let ad = amplitude_damping(0.8)?;
    let td = t_diamond(&ad)?;
    let nearest = td.witness_channel.clone().expect("SDP witness");
    let entangled = optimal_setup(&ad, &nearest)?;

    let t1 = t_one(&ad, &OptimizerConfig::default())?;
    let nearest_1 = t1.witness_channel.clone().expect("numeric witness");
    let plain = unentangled_setup(&ad, &nearest_1)?;

    let id = KrausChannel::identity(2);
    let flip = KrausChannel::unitary(pauli()[0].clone())?;
    let perfect = optimal_setup(&id, &flip)?;

    Ok(vec![
        Experiment {
            label: "AD(0.8) vs nearest unital, entangled",
            predicted: entangled.predicted_success,
            bound: 0.5 + 0.25 * td.value,
            stats: simulate(&ad, &nearest, &entangled, shots, 1)?,
        },
        Experiment {
            label: "AD(0.8) vs nearest unital, no reference",
            predicted: plain.predicted_success,
            bound: 0.5 + 0.25 * t1.value,
            stats: simulate(&ad, &nearest_1, &plain, shots, 2)?,
        },
        Experiment {
            label: "identity vs bit flip",
            predicted: perfect.predicted_success,
            bound: 1.0,
            stats: simulate(&id, &flip, &perfect, shots, 3)?,
        },
    ])
}

fn main() -> Result<()> {
    for e in run_example()? {
        println!(
            "{:42} predicted={:.6} bound={:.6} empirical={:.5} z={:+.2}",
            e.label,
            e.predicted,
            e.bound,
            e.stats.empirical,
            e.stats.z_score(e.predicted)
        );
    }
    Ok(())
}
