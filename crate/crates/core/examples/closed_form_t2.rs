// Closed-form maximal purity increase of amplitude damping against the
// multistart numeric search over input states.

use dyncoh::channels::amplitude_damping;
use dyncoh::error::Result;
use dyncoh::measures::{delta_c_max, t2_closed_form, OptimizerConfig};
use dyncoh::static_coherence::StaticMeasureId;

pub struct T2Point {
    pub eta: f64,
    pub closed_form: f64,
    pub numeric: f64,
    /// Bloch vector of the maximising input.
    pub witness: [f64; 3],
}

pub fn run_example() -> Result<Vec<T2Point>> {
    let cfg = OptimizerConfig::default();
    (0..=10)
        .map(|k| {
            let eta = k as f64 / 10.0;
            let ch = amplitude_damping(eta)?;
            let exact = t2_closed_form(&ch)?;
            let numeric = delta_c_max(&ch, StaticMeasureId::C2, &cfg)?;
            let witness = match &exact.witness_state {
                Some(rho) => rho.bloch_vector()?.into(),
                None => [0.0; 3],
            };
            Ok(T2Point {
                eta,
                closed_form: exact.value,
                numeric: numeric.value,
                witness,
            })
        })
        .collect()
}

fn main() -> Result<()> {
    println!("{:>5} {:>12} {:>12} {:>10}", "eta", "closed", "numeric", "witness z");
    for p in run_example()? {
        println!("{:5.2} {:12.8} {:12.8} {:10.6}", p.eta, p.closed_form, p.numeric, p.witness[2]);
    }
    Ok(())
}
