//! Closed-form delivery and outage probabilities for one link with a single
//! HARQ retransmission, and for packet duplication over several links.
//!
//! A transmission is split into separately coded metadata and data. Three
//! success paths exist on one link:
//!
//! * first transmission decoded;
//! * metadata lost, the HARQ timer expires and the retransmission is decoded
//!   on its own (no combining is possible without the metadata);
//! * metadata decoded but data lost, a NACK triggers a retransmission that is
//!   Chase-combined with the first copy.
//!
//! Everything else is an outage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbl::FblContext;

/// Error probabilities of one link for both transmissions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBlerProfile {
    p_m1: f64,
    p_d1: f64,
    p_m2: f64,
    p_d2: f64,
    p_c: f64,
}

impl LinkBlerProfile {
    /// Metadata/data BLER of the first and second transmission and the data
    /// error probability after combining.
    ///
    /// All values must be in `[0, 1]` and the combined error may not exceed
    /// either single-transmission data error.
    pub fn new(p_m1: f64, p_d1: f64, p_m2: f64, p_d2: f64, p_c: f64) -> Result<Self> {
        for (name, v) in [
            ("p_m1", p_m1),
            ("p_d1", p_d1),
            ("p_m2", p_m2),
            ("p_d2", p_d2),
            ("p_c", p_c),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Invariant(format!(
                    "{name} = {v} is not a probability"
                )));
            }
        }
        if p_c > p_d1 {
            return Err(Error::Invariant(format!(
                "combined error p_c = {p_c} exceeds first-transmission data error p_d1 = {p_d1}"
            )));
        }
        if p_c > p_d2 {
            return Err(Error::Invariant(format!(
                "combined error p_c = {p_c} exceeds second-transmission data error p_d2 = {p_d2}"
            )));
        }
        Ok(Self {
            p_m1,
            p_d1,
            p_m2,
            p_d2,
            p_c,
        })
    }

    /// Same metadata and data BLER on both transmissions.
    pub fn symmetric(p_m: f64, p_d: f64, p_c: f64) -> Result<Self> {
        Self::new(p_m, p_d, p_m, p_d, p_c)
    }

    /// An error-free link.
    pub fn perfect() -> Self {
        Self {
            p_m1: 0.0,
            p_d1: 0.0,
            p_m2: 0.0,
            p_d2: 0.0,
            p_c: 0.0,
        }
    }

    pub fn p_m1(&self) -> f64 {
        self.p_m1
    }
    pub fn p_d1(&self) -> f64 {
        self.p_d1
    }
    pub fn p_m2(&self) -> f64 {
        self.p_m2
    }
    pub fn p_d2(&self) -> f64 {
        self.p_d2
    }
    pub fn p_c(&self) -> f64 {
        self.p_c
    }
}

/// Residual data error after Chase combining.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ChaseModel {
    /// Combining always recovers the packet.
    #[default]
    #[serde(alias = "ZERO")]
    Zero,
    /// Independent failures: `p_c = p_d1·p_d2`.
    #[serde(alias = "PRODUCT")]
    Product,
    /// Normal approximation evaluated at the combined SINR `γ₁ + γ₂` with the
    /// same blocklength as a single transmission.
    #[serde(alias = "FINITE_BLOCKLENGTH")]
    FiniteBlocklength,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaseCombiningSpec {
    pub model: ChaseModel,
    pub context: Option<FblContext>,
}

impl ChaseCombiningSpec {
    pub fn new(model: ChaseModel, context: Option<FblContext>) -> Result<Self> {
        if model == ChaseModel::FiniteBlocklength && context.is_none() {
            return Err(Error::Config(
                "the finite-blocklength combining model needs a payload/SINR context".into(),
            ));
        }
        Ok(Self { model, context })
    }

    pub fn zero() -> Self {
        Self {
            model: ChaseModel::Zero,
            context: None,
        }
    }

    pub fn product() -> Self {
        Self {
            model: ChaseModel::Product,
            context: None,
        }
    }

    pub fn finite_blocklength(context: FblContext) -> Self {
        Self {
            model: ChaseModel::FiniteBlocklength,
            context: Some(context),
        }
    }
}

/// Residual error after combining two copies with data errors `p_d1` and
/// `p_d2`.
///
/// `channel_uses` is the size of each copy and is only read by the
/// finite-blocklength model, which assumes both copies arrive at the
/// context's SINR.
pub fn chase_bler(
    spec: &ChaseCombiningSpec,
    p_d1: f64,
    p_d2: f64,
    channel_uses: Option<f64>,
) -> Result<f64> {
    match spec.model {
        ChaseModel::Zero => Ok(0.0),
        ChaseModel::Product => Ok(p_d1 * p_d2),
        ChaseModel::FiniteBlocklength => {
            let ctx = spec.context.ok_or_else(|| {
                Error::Config("finite-blocklength combining needs a context".into())
            })?;
            let r = channel_uses.ok_or_else(|| {
                Error::Config("finite-blocklength combining needs the channel-use count".into())
            })?;
            let combined = ctx.with_sinr(2.0 * ctx.sinr_linear())?;
            combined.achieved_bler(r)
        }
    }
}

/// Probability mass of the four terminal classes of one link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageBreakdown {
    pub p_succ_first: f64,
    pub p_succ_timeout_retx: f64,
    pub p_succ_nack_retx: f64,
    pub p_out: f64,
}

impl OutageBreakdown {
    pub fn total(&self) -> f64 {
        self.p_succ_first + self.p_succ_timeout_retx + self.p_succ_nack_retx + self.p_out
    }
}

pub fn succ_first(profile: &LinkBlerProfile) -> f64 {
    (1.0 - profile.p_m1) * (1.0 - profile.p_d1)
}

/// Metadata lost on the first attempt, retransmission decoded alone.
pub fn succ_retx_timeout(profile: &LinkBlerProfile) -> f64 {
    profile.p_m1 * (1.0 - profile.p_m2) * (1.0 - profile.p_d2)
}

/// Data lost on the first attempt, recovered by combining with the
/// retransmission.
pub fn succ_retx_nack(profile: &LinkBlerProfile) -> f64 {
    (1.0 - profile.p_m1) * (1.0 - profile.p_m2) * (profile.p_d1 - profile.p_c)
}

/// Success probability through the retransmission, in factored form.
pub fn succ_retx_total(profile: &LinkBlerProfile) -> f64 {
    let p = profile;
    let factored = (1.0 - p.p_m2) * (p.p_m1 * (1.0 - p.p_d2) + (1.0 - p.p_m1) * (p.p_d1 - p.p_c));
    debug_assert!(
        (factored - (succ_retx_timeout(p) + succ_retx_nack(p))).abs() <= 1e-15,
        "factored and summed retransmission success disagree"
    );
    factored
}

/// Breakdown of one link into its success paths and outage.
///
/// The outage is summed over the failure leaves directly rather than formed
/// as `1 − successes`, which keeps full relative precision at very small
/// outage values. Both are the same quantity.
pub fn sc_outage(profile: &LinkBlerProfile) -> OutageBreakdown {
    let p = profile;
    let first = succ_first(p);
    let timeout = succ_retx_timeout(p);
    let nack = succ_retx_nack(p);
    let retx_fails = 1.0 - (1.0 - p.p_m2) * (1.0 - p.p_d2);
    let p_out = p.p_m1 * retx_fails + (1.0 - p.p_m1) * (p.p_d1 * p.p_m2 + (1.0 - p.p_m2) * p.p_c);
    debug_assert!((p_out - (1.0 - first - succ_retx_total(p))).abs() <= 1e-12);
    OutageBreakdown {
        p_succ_first: first,
        p_succ_timeout_retx: timeout,
        p_succ_nack_retx: nack,
        p_out,
    }
}

/// Outage with the packet duplicated over independent links: lost only if
/// every link fails.
pub fn mc_outage(profiles: &[LinkBlerProfile]) -> Result<f64> {
    if profiles.is_empty() {
        return Err(Error::domain("multi-connectivity needs at least one link"));
    }
    Ok(profiles.iter().map(|p| sc_outage(p).p_out).product())
}
