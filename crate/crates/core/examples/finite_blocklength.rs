//! Channel uses needed for a 32-byte payload at several SINRs and block
//! error rates, and the error rate reached with a given budget.

use urllc_mc::fbl::FblContext;

fn main() -> urllc_mc::error::Result<()> {
    println!(
        "{:>8} {:>10} {:>12} {:>12}",
        "sinr_db", "bler", "channel_use", "shannon"
    );
    for db in [0.0, 5.0, 10.0, 20.0] {
        let ctx = FblContext::from_db(256, db)?;
        for bler in [1e-2, 1e-3, 1e-5] {
            let r = ctx.channel_use(bler)?;
            let shannon = 256.0 / ctx.capacity();
            println!("{db:>8.1} {bler:>10.0e} {r:>12.2} {shannon:>12.2}");
        }
    }

    let ctx = FblContext::from_db(256, 10.0)?;
    for r in [80.0, 85.0, 90.0, 100.0] {
        println!("R = {r:>5}: bler = {:.3e}", ctx.achieved_bler(r)?);
    }
    Ok(())
}
