//! BLER target required to reach an end-to-end outage.
//!
//! Metadata and data BLER are tied together by a [`BlerPolicy`], both
//! transmissions use the same targets, and the outage is then a monotone
//! function of the data BLER alone. The root is found by bisection on
//! `log₁₀(p_d)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outage::{chase_bler, mc_outage, ChaseCombiningSpec, ChaseModel, LinkBlerProfile};
use crate::Scheme;

/// Link between the metadata BLER and the data BLER.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlerPolicy {
    /// `p_m = p_d`
    #[serde(alias = "EQUAL")]
    Equal,
    /// `p_m = p_d / 2`
    #[serde(alias = "HALF")]
    Half,
    /// `p_m` fixed independently of `p_d`.
    #[serde(alias = "FIXED_META")]
    FixedMeta { fixed_meta: f64 },
}

impl BlerPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BlerPolicy::FixedMeta { fixed_meta } if !(fixed_meta > 0.0 && fixed_meta < 1.0) => {
                Err(Error::validation(
                    "policy.fixed_meta",
                    format!("must lie in (0, 1), got {fixed_meta}"),
                ))
            }
            _ => Ok(()),
        }
    }

    pub fn meta_bler(&self, p_d: f64) -> f64 {
        match *self {
            BlerPolicy::Equal => p_d,
            BlerPolicy::Half => 0.5 * p_d,
            BlerPolicy::FixedMeta { fixed_meta } => fixed_meta,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            BlerPolicy::Equal => "EQUAL".into(),
            BlerPolicy::Half => "HALF".into(),
            BlerPolicy::FixedMeta { fixed_meta } => format!("FIXED_META({fixed_meta})"),
        }
    }
}

/// Link profile with identical targets on both transmissions, metadata
/// BLER from `policy` and combined error from `chase`.
///
/// For the finite-blocklength combining model the channel-use count is
/// first derived from the context at `p_d`.
pub fn build_profile(
    p_d: f64,
    policy: BlerPolicy,
    chase: &ChaseCombiningSpec,
) -> Result<LinkBlerProfile> {
    if !(p_d > 0.0 && p_d < 1.0) {
        return Err(Error::domain(format!(
            "data BLER must lie in (0, 1), got {p_d}"
        )));
    }
    policy.validate()?;
    let p_m = policy.meta_bler(p_d);
    let channel_uses = match (chase.model, chase.context) {
        (ChaseModel::FiniteBlocklength, Some(ctx)) => Some(ctx.channel_use(p_d)?),
        (ChaseModel::FiniteBlocklength, None) => {
            return Err(Error::Config(
                "finite-blocklength combining needs a payload/SINR context".into(),
            ))
        }
        _ => None,
    };
    let p_c = chase_bler(chase, p_d, p_d, channel_uses)?;
    LinkBlerProfile::symmetric(p_m, p_d, p_c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveResult {
    pub p_d: f64,
    pub p_m: f64,
    pub achieved_outage: f64,
    pub iterations: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub lower: f64,
    pub upper: f64,
    pub max_iterations: u32,
    /// Accepted outage error relative to the target.
    pub rel_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            lower: 1e-9,
            upper: 0.4999,
            max_iterations: 200,
            rel_tolerance: 1e-3,
        }
    }
}

/// Data BLER for which `scheme` over `m` identical links reaches `target`.
pub fn solve_bler(
    scheme: Scheme,
    m: u32,
    target: f64,
    policy: BlerPolicy,
    chase: &ChaseCombiningSpec,
) -> Result<SolveResult> {
    let nodes = scheme.nodes(m)?;
    let chases = vec![*chase; nodes];
    solve_bler_nodes(target, policy, &chases, &SolverOptions::default())
}

/// General form: one combining spec per link, so links may differ in SINR
/// when the finite-blocklength combining model is in use.
pub fn solve_bler_nodes(
    target: f64,
    policy: BlerPolicy,
    chases: &[ChaseCombiningSpec],
    opts: &SolverOptions,
) -> Result<SolveResult> {
    if !(target > 1e-12 && target < 0.25) {
        return Err(Error::domain(format!(
            "target outage must lie in (1e-12, 0.25), got {target}"
        )));
    }
    if chases.is_empty() {
        return Err(Error::domain("at least one link is required"));
    }
    if !(opts.lower > 0.0 && opts.lower < opts.upper && opts.upper < 1.0) {
        return Err(Error::domain(format!(
            "invalid bracket [{}, {}]",
            opts.lower, opts.upper
        )));
    }
    policy.validate()?;

    let outage_at = |log_p: f64| -> Result<f64> {
        let p_d = 10f64.powf(log_p);
        let profiles = chases
            .iter()
            .map(|c| build_profile(p_d, policy, c))
            .collect::<Result<Vec<_>>>()?;
        mc_outage(&profiles)
    };

    let mut lo = opts.lower.log10();
    let mut hi = opts.upper.log10();
    let f_lo = outage_at(lo)?;
    let f_hi = outage_at(hi)?;
    if f_lo > f_hi {
        return Err(Error::NonMonotone(format!(
            "outage {f_lo:e} at p_d = {:e} exceeds {f_hi:e} at p_d = {:e}",
            opts.lower, opts.upper
        )));
    }
    // Coarse scan of the bracket interior.
    let mut prev = f_lo;
    for k in 1..16 {
        let x = lo + (hi - lo) * f64::from(k) / 16.0;
        let f = outage_at(x)?;
        if f < prev {
            return Err(Error::NonMonotone(format!(
                "outage decreases near p_d = {:e}",
                10f64.powf(x)
            )));
        }
        prev = f;
    }
    if !(f_lo <= target && target <= f_hi) {
        return Err(Error::NoBracket(format!(
            "target {target:e} outside reachable outage range [{f_lo:e}, {f_hi:e}] \
             for p_d in [{:e}, {:e}]",
            opts.lower, opts.upper
        )));
    }

    let (mut out_lo, mut out_hi) = (f_lo, f_hi);
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f = outage_at(mid)?;
        // An exact hit moves the upper end, keeping the lower half.
        if f < target {
            lo = mid;
            out_lo = f;
        } else {
            hi = mid;
            out_hi = f;
        }
    }

    let (log_p, achieved) = if (target - out_lo).abs() <= (out_hi - target).abs() {
        (lo, out_lo)
    } else {
        (hi, out_hi)
    };
    if (achieved - target).abs() > opts.rel_tolerance * target {
        return Err(Error::NoConvergence(format!(
            "best outage {achieved:e} misses target {target:e} after {iterations} iterations"
        )));
    }
    let p_d = 10f64.powf(log_p);
    Ok(SolveResult {
        p_d,
        p_m: policy.meta_bler(p_d),
        achieved_outage: achieved,
        iterations,
    })
}
