// The resource-measure axioms on random instances: faithfulness on
// mixed-unitary channels, convexity of the closed form, monotonicity under
// free pre- and post-processing, and majorisation by unital channels.

use dyncoh::channels::random::{random_channel, random_density, random_mixed_unitary};
use dyncoh::channels::{amplitude_damping, compose, mixture};
use dyncoh::error::Result;
use dyncoh::measures::{t2_closed_form, t_diamond};
use dyncoh::static_coherence::is_majorized_by;

#[derive(Debug, Default)]
pub struct AxiomReport {
    /// Largest T2 and T_diamond over mixed-unitary channels.
    pub faithfulness_max: f64,
    /// Smallest `p T2(a) + (1-p) T2(b) - T2(mix)`.
    pub convexity_slack: f64,
    /// Largest `T(free ∘ ch ∘ free) - T(ch)` for T2 and T_diamond.
    pub monotonicity_excess: (f64, f64),
    pub majorization_holds: bool,
    /// T2 of AD(0.1), which must be positive.
    pub damping_t2: f64,
}

pub fn run_example() -> Result<AxiomReport> {
    let trials = 10;
    let mut r = AxiomReport {
        convexity_slack: f64::INFINITY,
        monotonicity_excess: (f64::NEG_INFINITY, f64::NEG_INFINITY),
        majorization_holds: true,
        ..AxiomReport::default()
    };
    for s in 0..trials {
        let mu = random_mixed_unitary(2, 3, 100 + s);
        r.faithfulness_max = r
            .faithfulness_max
            .max(t2_closed_form(&mu)?.value)
            .max(t_diamond(&mu)?.value);

        let (a, b) = (random_channel(2, 2, 2, 200 + s)?, random_channel(2, 2, 3, 300 + s)?);
        for p in [0.25, 0.5, 0.75] {
            let mix = t2_closed_form(&mixture(p, &a, &b)?)?.value;
            let bound = p * t2_closed_form(&a)?.value + (1.0 - p) * t2_closed_form(&b)?.value;
            r.convexity_slack = r.convexity_slack.min(bound - mix);
        }

        let (pre, post) = (random_mixed_unitary(2, 2, 400 + s), random_mixed_unitary(2, 2, 500 + s));
        let processed = compose(&post, &compose(&a, &pre)?)?;
        r.monotonicity_excess.0 = r
            .monotonicity_excess
            .0
            .max(t2_closed_form(&processed)?.value - t2_closed_form(&a)?.value);
        r.monotonicity_excess.1 = r
            .monotonicity_excess
            .1
            .max(t_diamond(&processed)?.value - t_diamond(&a)?.value);

        let rho = random_density(2, 600 + s)?;
        r.majorization_holds &= is_majorized_by(&mu.apply(&rho)?, &rho, 1e-9);
    }
    r.damping_t2 = t2_closed_form(&amplitude_damping(0.1)?)?.value;
    Ok(r)
}

fn main() -> Result<()> {
    println!("{:#?}", run_example()?);
    Ok(())
}
