//! Radio-resource usage including the HARQ retransmission.
//!
//! A link spends `R` channel uses on the first transmission and another `R`
//! whenever the first attempt fails. With duplication over `M` links every
//! link retransmits on its own failure even if another link already
//! delivered the packet, so the usage is `(M + n)·R` with `n` binomially
//! distributed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fbl::FblContext;
use crate::outage::{succ_first, ChaseCombiningSpec, ChaseModel, LinkBlerProfile};
use crate::solver::{build_profile, solve_bler_nodes, BlerPolicy, SolverOptions};
use crate::Scheme;

/// Expected single-link usage `(2 − P₁)·r`, where `P₁` is the
/// first-transmission success probability.
pub fn usage_sc(r: f64, p_succ_first: f64) -> f64 {
    (2.0 - p_succ_first) * r
}

/// Expected usage with `m` duplicated links, `m·(2 − P₁)·r`.
pub fn usage_mc(m: u32, r: f64, p_succ_first: f64) -> f64 {
    f64::from(m) * usage_sc(r, p_succ_first)
}

/// Normalised usage in multiples of one transmission.
pub fn normalized_usage(scheme: Scheme, m: u32, profile: &LinkBlerProfile) -> Result<f64> {
    let nodes = scheme.nodes(m)? as u32;
    Ok(usage_mc(nodes, 1.0, succ_first(profile)))
}

/// Discrete distribution of total channel uses in one delivery round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UsageDistribution {
    support: Vec<(f64, f64)>,
}

impl UsageDistribution {
    /// Usage of `m` links each spending `r` per transmission, each link
    /// retransmitting independently with probability `1 − p_succ_first`.
    pub fn multi_connectivity(m: u32, r: f64, p_succ_first: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("at least one link is required"));
        }
        if r.is_nan() || r <= 0.0 {
            return Err(Error::domain(format!(
                "channel uses must be positive, got {r}"
            )));
        }
        if !(0.0..=1.0).contains(&p_succ_first) {
            return Err(Error::domain(format!(
                "p_succ_first must be a probability, got {p_succ_first}"
            )));
        }
        let fail = 1.0 - p_succ_first;
        let mut binom = 1.0;
        let support = (0..=m)
            .map(|n| {
                if n > 0 {
                    binom = binom * f64::from(m - n + 1) / f64::from(n);
                }
                let w = binom * p_succ_first.powi((m - n) as i32) * fail.powi(n as i32);
                (f64::from(m + n) * r, w)
            })
            .collect();
        Ok(Self { support })
    }

    /// `(channel_uses, probability)` pairs, increasing in channel uses.
    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().map(|(u, p)| u * p).sum()
    }

    pub fn total_probability(&self) -> f64 {
        self.support.iter().map(|(_, p)| p).sum()
    }
}

pub fn usage_distribution_mc(m: u32, r: f64, p_succ_first: f64) -> Result<UsageDistribution> {
    UsageDistribution::multi_connectivity(m, r, p_succ_first)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UsageReport {
    pub scheme: Scheme,
    pub m_nodes: u32,
    /// Data BLER target per transmission.
    pub bler_target: f64,
    pub meta_bler: f64,
    pub achieved_outage: f64,
    /// Channel uses of one transmission (first link when links differ).
    pub channel_use_single: f64,
    pub channel_use_per_node: Vec<f64>,
    /// Expected channel uses including retransmissions, all links.
    pub total_usage: f64,
    /// Channel uses of one metadata transmission, when requested. Reported
    /// alongside, never added to `total_usage`.
    pub metadata_channel_use: Option<f64>,
}

impl UsageReport {
    /// Adds the channel uses a separately coded metadata block of
    /// `metadata_bits` would need at the solved metadata BLER, on the
    /// context's SINR.
    pub fn with_metadata(mut self, metadata_bits: u32, ctx: &FblContext) -> Result<Self> {
        let meta_ctx = FblContext::new(metadata_bits, ctx.sinr_linear())?;
        self.metadata_channel_use = Some(meta_ctx.channel_use(self.meta_bler)?);
        Ok(self)
    }
}

/// BLER target, per-transmission channel uses and total expected usage to
/// reach `target_outage` with `m` links at the same SINR.
pub fn usage_at_reliability(
    scheme: Scheme,
    m: u32,
    target_outage: f64,
    ctx: &FblContext,
    policy: BlerPolicy,
    chase: ChaseModel,
) -> Result<UsageReport> {
    let nodes = scheme.nodes(m)?;
    let contexts = vec![*ctx; nodes];
    usage_at_reliability_nodes(scheme, &contexts, target_outage, policy, chase)
}

/// As [`usage_at_reliability`] with one context per link, so links can see
/// different SINRs. All links share the BLER target; each link gets the
/// channel-use count its own SINR requires.
pub fn usage_at_reliability_nodes(
    scheme: Scheme,
    contexts: &[FblContext],
    target_outage: f64,
    policy: BlerPolicy,
    chase: ChaseModel,
) -> Result<UsageReport> {
    let m = u32::try_from(contexts.len()).map_err(|_| Error::domain("too many links"))?;
    scheme.nodes(m)?;
    let chases = contexts
        .iter()
        .map(|c| ChaseCombiningSpec::new(chase, Some(*c)))
        .collect::<Result<Vec<_>>>()?;
    let solved = solve_bler_nodes(target_outage, policy, &chases, &SolverOptions::default())?;

    let mut per_node = Vec::with_capacity(contexts.len());
    let mut total = 0.0;
    for (ctx, spec) in contexts.iter().zip(&chases) {
        let r = ctx.channel_use(solved.p_d)?;
        let profile = build_profile(solved.p_d, policy, spec)?;
        total += usage_sc(r, succ_first(&profile));
        per_node.push(r);
    }
    Ok(UsageReport {
        scheme,
        m_nodes: m,
        bler_target: solved.p_d,
        meta_bler: solved.p_m,
        achieved_outage: solved.achieved_outage,
        channel_use_single: per_node[0],
        channel_use_per_node: per_node,
        total_usage: total,
        metadata_channel_use: None,
    })
}
