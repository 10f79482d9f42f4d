// Builds the standard channel families, checks trace preservation and
// unitality, and round-trips each through the channel file format.

use dyncoh::channels::json::ChannelFile;
use dyncoh::channels::{
    amplitude_damping, amplitude_damping_unrooted_kraus, completely_depolarizing_qubit, pauli_channel, random_channel,
    validate, KrausChannel, ValidationReport,
};
use dyncoh::error::Result;
use dyncoh::numerics::pauli;

pub fn run_example() -> Result<Vec<(String, ValidationReport)>> {
    let mut kraus_sets = vec![
        ("identity".to_string(), KrausChannel::identity(2).kraus().to_vec()),
        ("pauli-x".to_string(), KrausChannel::unitary(pauli()[0].clone())?.kraus().to_vec()),
        ("dephasing".to_string(), pauli_channel([0.7, 0.0, 0.0, 0.3])?.kraus().to_vec()),
        ("depolarizing".to_string(), completely_depolarizing_qubit().kraus().to_vec()),
        ("random 2x2 rank 3".to_string(), random_channel(2, 2, 3, 7)?.kraus().to_vec()),
        ("amplitude damping unrooted 0.5".to_string(), amplitude_damping_unrooted_kraus(0.5)),
    ];
    for eta in [0.0, 0.5, 1.0] {
        kraus_sets.push((format!("amplitude damping {eta}"), amplitude_damping(eta)?.kraus().to_vec()));
    }
    let mut reports = Vec::new();
    for (name, kraus) in kraus_sets {
        let text = ChannelFile::from_kraus(Some(name.clone()), &kraus).to_json();
        let back = ChannelFile::parse(&text)?.kraus_matrices();
        assert_eq!(back, kraus, "file round trip must be exact");
        reports.push((name, validate(&kraus)?));
    }
    Ok(reports)
}

fn main() -> Result<()> {
    for (name, r) in run_example()? {
        println!(
            "{name:32} cptp={:5} unital={:5} tp_residual={:.2e} unital_residual={:.2e}",
            r.is_cptp, r.is_unital, r.tp_residual, r.unital_residual
        );
    }
    Ok(())
}
