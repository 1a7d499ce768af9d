//! Per-transmission BLER target needed for a 1e-5 outage, for one link and
//! for packet duplication over two and three links.

use urllc_mc::outage::ChaseCombiningSpec;
use urllc_mc::solver::{solve_bler, BlerPolicy};
use urllc_mc::Scheme;

fn main() -> urllc_mc::error::Result<()> {
    let zero = ChaseCombiningSpec::zero();
    for policy in [BlerPolicy::Equal, BlerPolicy::Half] {
        for (scheme, m) in [(Scheme::Sc, 1), (Scheme::Mc, 2), (Scheme::Mc, 3)] {
            let r = solve_bler(scheme, m, 1e-5, policy, &zero)?;
            println!(
                "{:<6} {scheme} m={m}: p_d = {:.4}%  p_m = {:.4}%  outage = {:.4e}  ({} steps)",
                policy.label(),
                100.0 * r.p_d,
                100.0 * r.p_m,
                r.achieved_outage,
                r.iterations
            );
        }
    }
    Ok(())
}
