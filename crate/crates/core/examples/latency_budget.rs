//! Mini-slot numerologies against a 1 ms budget, and the simulated
//! latency distribution of delivered packets.

use urllc_mc::outage::LinkBlerProfile;
use urllc_mc::sim::{latency_budget_check, Metric, Numerology, Simulator};

fn main() -> urllc_mc::error::Result<()> {
    for symbols in [2, 4, 7, 14] {
        let num = Numerology {
            symbols_per_tti: symbols,
            ..Numerology::default()
        };
        let (worst, fits) = latency_budget_check(&num, 1.0);
        println!(
            "{symbols:>2} symbols: tti {:.4} ms, worst case with one retransmission {worst:.3} ms, fits: {fits}",
            num.tti_duration_ms()
        );
    }

    let link = LinkBlerProfile::symmetric(0.05, 0.1, 0.0)?;
    let sim = Simulator::new(vec![link], Numerology::default())?;
    let tally = sim.run(500_000, 7, true)?;
    for q in [0.5, 0.9, 0.99, 1.0] {
        let e = sim.summarize(Metric::LatencyQuantile(q), &tally, 7)?;
        println!("latency quantile {q:>4}: {:.4} ms", e.mean);
    }
    Ok(())
}
