//! Reliability and resource dimensioning for URLLC downlink transmission
//! over one link (single connectivity) or with PDCP packet duplication over
//! several links (multi connectivity), each link allowing one HARQ
//! retransmission with Chase combining.
//!
//! The crate is organised bottom-up:
//!
//! * [`fbl`] Gaussian tail function and the finite-blocklength normal
//!   approximation (channel uses needed for a payload at a given BLER).
//! * [`outage`] closed-form success paths and outage of one link, and the
//!   product law for duplicated transmission.
//! * [`solver`] inverts the outage model to find the BLER target meeting a
//!   reliability requirement.
//! * [`resource`] expected and distributional channel usage including
//!   retransmissions.
//! * [`sim`] Monte Carlo simulator of the HARQ event tree with latency
//!   sampling, used as an independent check of the closed forms.
//! * [`scenario`] configuration files, sweeps, CSV output and the
//!   command-line front end.
//!
//! ```
//! use urllc_mc::{solver::{solve_bler, BlerPolicy}, outage::ChaseCombiningSpec, Scheme};
//!
//! let sc = solve_bler(Scheme::Sc, 1, 1e-5, BlerPolicy::Equal, &ChaseCombiningSpec::zero()).unwrap();
//! assert!((sc.p_d - 1.826e-3).abs() < 1e-5);
//! ```

pub mod error;
pub mod fbl;
pub mod outage;
pub mod resource;
pub mod scenario;
pub mod sim;
pub mod solver;

use serde::{Deserialize, Serialize};

pub use error::{Error, Result};

/// Transmission scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Single connectivity: one serving node.
    #[serde(rename = "SC", alias = "sc")]
    Sc,
    /// Multi connectivity: the packet is duplicated over `m` nodes.
    #[serde(rename = "MC", alias = "mc")]
    Mc,
}

impl Scheme {
    /// Number of transmitting nodes, checking that `m` fits the scheme.
    pub fn nodes(self, m: u32) -> Result<usize> {
        match (self, m) {
            (_, 0) => Err(Error::validation("m_nodes", "must be at least 1")),
            (Scheme::Sc, 1) => Ok(1),
            (Scheme::Sc, _) => Err(Error::validation(
                "m_nodes",
                "single connectivity uses exactly one node",
            )),
            (Scheme::Mc, m) => Ok(m as usize),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Sc => "SC",
            Scheme::Mc => "MC",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
