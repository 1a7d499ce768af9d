//! Regenerates the reference CSV tables into a directory (default
//! `results/`).

use std::path::PathBuf;

use urllc_mc::scenario::cmd_reproduce;

fn main() -> urllc_mc::error::Result<()> {
    let dir = std::env::args_os()
        .nth(1)
        .map_or_else(|| PathBuf::from("results"), PathBuf::from);
    for path in cmd_reproduce(&dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
