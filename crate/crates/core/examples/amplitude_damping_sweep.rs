// Every measure across the amplitude-damping family, written as sweep CSV.

use dyncoh::channels::amplitude_damping;
use dyncoh::cli::{csv_row, grid, SWEEP_HEADER};
use dyncoh::error::Result;
use dyncoh::measures::{MeasureId, OptimizerConfig};

pub fn run_example() -> Result<String> {
    let cfg = OptimizerConfig {
        multistart_count: 8,
        ..OptimizerConfig::default()
    };
    let mut csv = format!("{SWEEP_HEADER}\n");
    for eta in grid(0.0, 1.0, 0.25).expect("valid grid") {
        let ch = amplitude_damping(eta)?;
        for m in MeasureId::ALL {
            let rep = m.evaluate(&ch, &cfg, 1e-8)?;
            csv.push_str(&csv_row(eta, m, &rep));
            csv.push('\n');
        }
    }
    Ok(csv)
}

fn main() -> Result<()> {
    print!("{}", run_example()?);
    Ok(())
}
