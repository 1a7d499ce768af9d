//! How a packet gets through one HARQ link: first transmission, timeout
//! retransmission or NACK-triggered combined retransmission.

use urllc_mc::outage::{mc_outage, sc_outage, LinkBlerProfile};

fn main() -> urllc_mc::error::Result<()> {
    let link = LinkBlerProfile::new(0.01, 0.1, 0.01, 0.1, 0.001)?;
    let b = sc_outage(&link);
    println!("first transmission   {:.6e}", b.p_succ_first);
    println!("timeout retransmit   {:.6e}", b.p_succ_timeout_retx);
    println!("NACK retransmit      {:.6e}", b.p_succ_nack_retx);
    println!("outage               {:.6e}", b.p_out);

    for m in 1..=3 {
        println!(
            "{m} duplicated link(s): outage {:.3e}",
            mc_outage(&vec![link; m])?
        );
    }
    Ok(())
}
