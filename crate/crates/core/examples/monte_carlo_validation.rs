//! Checks the closed-form outage and usage against the HARQ event
//! simulator.

use urllc_mc::outage::{mc_outage, succ_first, LinkBlerProfile};
use urllc_mc::sim::{Metric, Numerology, Simulator};

fn main() -> urllc_mc::error::Result<()> {
    let trials = 2_000_000;
    let link = LinkBlerProfile::new(0.03, 0.05, 0.03, 0.05, 0.004)?;
    for m in 1..=2 {
        let sim = Simulator::new(vec![link; m], Numerology::default())?;
        let tally = sim.run(trials, 2024, false)?;
        let outage = sim.summarize(Metric::Outage, &tally, 2024)?;
        let usage = sim.summarize(Metric::MeanUsage, &tally, 2024)?;
        println!(
            "{m} link(s): outage {:.4e} ± {:.1e} (closed form {:.4e}), usage {:.5} ± {:.1e} (closed form {:.5})",
            outage.mean,
            outage.ci_half_width_95,
            mc_outage(&vec![link; m])?,
            usage.mean,
            usage.ci_half_width_95,
            m as f64 * (2.0 - succ_first(&link))
        );
    }
    Ok(())
}
