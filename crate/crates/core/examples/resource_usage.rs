//! Expected channel uses at 1e-5 outage for single and multi connectivity,
//! with the distribution of usage under duplication.

use urllc_mc::fbl::FblContext;
use urllc_mc::outage::ChaseModel;
use urllc_mc::resource::{usage_at_reliability, usage_distribution_mc};
use urllc_mc::solver::BlerPolicy;
use urllc_mc::Scheme;

fn main() -> urllc_mc::error::Result<()> {
    for db in [0.0, 10.0] {
        let ctx = FblContext::from_db(256, db)?;
        let sc = usage_at_reliability(
            Scheme::Sc,
            1,
            1e-5,
            &ctx,
            BlerPolicy::Equal,
            ChaseModel::Zero,
        )?;
        let mc = usage_at_reliability(
            Scheme::Mc,
            2,
            1e-5,
            &ctx,
            BlerPolicy::Equal,
            ChaseModel::Zero,
        )?;
        println!(
            "{db:>4} dB  SC: bler {:.4}% R {:.2} U {:.2} | MC(2): bler {:.3}% R {:.2} U {:.2} | SC saves {:.1}%",
            100.0 * sc.bler_target,
            sc.channel_use_single,
            sc.total_usage,
            100.0 * mc.bler_target,
            mc.channel_use_single,
            mc.total_usage,
            100.0 * (1.0 - sc.total_usage / mc.total_usage)
        );
    }

    let dist = usage_distribution_mc(3, 80.88, 0.935476)?;
    println!("three links, R = 80.88:");
    for (uses, p) in dist.support() {
        println!("  {uses:>8.2} channel uses with probability {p:.6}");
    }
    println!("  mean {:.2}", dist.mean());
    Ok(())
}
