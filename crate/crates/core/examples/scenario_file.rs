//! Runs outage, solve and resource commands for a JSON scenario read from
//! the path given as first argument, or a built-in two-node scenario.

use urllc_mc::scenario::cli::read_scenario;
use urllc_mc::scenario::{cmd_outage, cmd_resource, parse_scenario, resource_table};

const BUILT_IN: &str = r#"{
  "scheme": "MC",
  "m_nodes": 2,
  "sinr_db_per_node": [10, 6],
  "target_outage": 1e-5,
  "policy": {"kind": "HALF"}
}"#;

fn main() -> urllc_mc::error::Result<()> {
    let cfg = match std::env::args_os().nth(1) {
        Some(path) => read_scenario(path.as_ref())?,
        None => parse_scenario(BUILT_IN)?,
    };
    print!("{}", cmd_outage(&cfg)?.table(&cfg).to_pretty());
    println!();
    print!("{}", resource_table(&cfg, &cmd_resource(&cfg)?).to_pretty());
    Ok(())
}
