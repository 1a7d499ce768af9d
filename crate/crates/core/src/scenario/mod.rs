//! Scenario files, sweeps, CSV output and the command-line front end.

pub mod cli;
mod commands;
mod config;
pub mod reproduce;
mod table;

pub use commands::{
    cmd_outage, cmd_resource, cmd_simulate, cmd_solve, cmd_sweep, resource_table, solve_table,
    OutageResult, SimulatedMetric, SimulationReport, SweepScale, SweepSpec, SweepVariable,
};
pub use config::{parse_scenario, ScenarioConfig};
pub use reproduce::cmd_reproduce;
pub use table::{num, Table};
