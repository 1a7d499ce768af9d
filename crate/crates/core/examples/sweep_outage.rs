//! Outage against data BLER for single and duplicated links with the
//! metadata BLER at half the data BLER, written as CSV to stdout.

use urllc_mc::scenario::{cmd_sweep, parse_scenario, SweepScale, SweepSpec, SweepVariable};

fn main() -> urllc_mc::error::Result<()> {
    let spec = SweepSpec {
        variable: SweepVariable::PD,
        start: 1e-4,
        stop: 1e-1,
        points: 13,
        scale: SweepScale::Log10,
    };
    for (scheme, m) in [("SC", 1), ("MC", 2), ("MC", 3)] {
        let cfg = parse_scenario(&format!(
            r#"{{"scheme": "{scheme}", "m_nodes": {m}, "policy": {{"kind": "HALF"}}}}"#
        ))?;
        let table = cmd_sweep(&cfg, &spec)?;
        print!("{}", table.to_csv());
    }
    Ok(())
}
