//! Monte Carlo simulation of the per-link HARQ event tree, packet
//! duplication across links, latency sampling and channel-use counting.
//!
//! Every trial draws from its own ChaCha8 stream selected by the trial
//! index, so a run is reproducible bit for bit from `(seed, trials)` no
//! matter how trials are spread over threads. Per-chunk tallies hold only
//! integer counts and are merged once; latency samples are sorted before
//! any quantile is taken.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outage::LinkBlerProfile;

/// Mini-slot timing and HARQ timing, all in TTIs except the subcarrier
/// spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerology {
    pub scs_khz: f64,
    pub symbols_per_tti: u32,
    /// Start of first transmission to start of retransmission.
    pub harq_rtt_ttis: u32,
    pub timeout_ttis: u32,
    pub t_up_ttis: f64,
    pub t_tx_ttis: f64,
    /// Base-station processing before the first transmission.
    pub t_bp_initial_ttis: f64,
}

impl Default for Numerology {
    /// Four-symbol mini-slot at 30 kHz.
    fn default() -> Self {
        Self {
            scs_khz: 30.0,
            symbols_per_tti: 4,
            harq_rtt_ttis: 4,
            timeout_ttis: 3,
            t_up_ttis: 1.0,
            t_tx_ttis: 1.0,
            t_bp_initial_ttis: 0.0,
        }
    }
}

impl Numerology {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(
                    format!("numerology.{name}"),
                    format!("must be positive, got {v}"),
                ))
            }
        };
        positive("scs_khz", self.scs_khz)?;
        positive("symbols_per_tti", f64::from(self.symbols_per_tti))?;
        positive("harq_rtt_ttis", f64::from(self.harq_rtt_ttis))?;
        positive("timeout_ttis", f64::from(self.timeout_ttis))?;
        positive("t_tx_ttis", self.t_tx_ttis)?;
        for (name, v) in [
            ("t_up_ttis", self.t_up_ttis),
            ("t_bp_initial_ttis", self.t_bp_initial_ttis),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::validation(
                    format!("numerology.{name}"),
                    format!("must be non-negative, got {v}"),
                ));
            }
        }
        Ok(())
    }

    /// TTI length: `symbols · (15 / scs) / 14` ms.
    pub fn tti_duration_ms(&self) -> f64 {
        f64::from(self.symbols_per_tti) * 15.0 / (14.0 * self.scs_khz)
    }

    /// Latency in TTIs of a first-transmission delivery after frame
    /// alignment `t_fa`.
    pub fn first_tx_latency_ttis(&self, t_fa: f64) -> f64 {
        t_fa + self.t_bp_initial_ttis + self.t_tx_ttis + self.t_up_ttis
    }

    /// Latency in TTIs of a delivery through the retransmission. Timeout and
    /// NACK retransmissions start at the same instant.
    pub fn retx_latency_ttis(&self, t_fa: f64) -> f64 {
        t_fa + f64::from(self.harq_rtt_ttis) + self.t_tx_ttis + self.t_up_ttis
    }

    /// Bound on latency with one retransmission (frame alignment at its
    /// supremum of one TTI), in ms.
    pub fn worst_case_latency_ms(&self) -> f64 {
        let ttis = 1.0
            + f64::from(self.harq_rtt_ttis)
            + self.t_tx_ttis
            + self.t_up_ttis
            + self.t_bp_initial_ttis;
        ttis * self.tti_duration_ms()
    }
}

pub fn tti_duration_ms(numerology: &Numerology) -> f64 {
    numerology.tti_duration_ms()
}

/// Worst-case one-retransmission latency and whether it fits `budget_ms`.
pub fn latency_budget_check(numerology: &Numerology, budget_ms: f64) -> (f64, bool) {
    let worst = numerology.worst_case_latency_ms();
    (worst, worst <= budget_ms)
}

/// Terminal class of the event tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeliveryPath {
    First,
    TimeoutRetx,
    NackRetx,
    Outage,
}

impl DeliveryPath {
    pub const ALL: [DeliveryPath; 4] = [
        DeliveryPath::First,
        DeliveryPath::TimeoutRetx,
        DeliveryPath::NackRetx,
        DeliveryPath::Outage,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DeliveryPath::First => "first",
            DeliveryPath::TimeoutRetx => "timeout_retx",
            DeliveryPath::NackRetx => "nack_retx",
            DeliveryPath::Outage => "outage",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub success: bool,
    /// At least one link spent a retransmission.
    pub used_retransmission: bool,
    /// Delivery latency in TTIs, `None` on outage.
    pub latency_ttis: Option<f64>,
    /// Transmissions spent over all links, in units of one transmission.
    pub channel_use_multiples: u32,
    /// Path of the copy that was delivered first.
    pub path: DeliveryPath,
}

/// One link given its frame-alignment delay. Always consumes exactly four
/// uniforms so that stream positions do not depend on the outcome.
fn link_trial<R: Rng>(
    profile: &LinkBlerProfile,
    numerology: &Numerology,
    t_fa: f64,
    rng: &mut R,
) -> TrialOutcome {
    let u_meta1: f64 = rng.random();
    let u_data1: f64 = rng.random();
    let u_meta2: f64 = rng.random();
    let u_retx: f64 = rng.random();

    let (path, multiples) = if u_meta1 < profile.p_m1() {
        // No metadata, no feedback: retransmission after the timer, decoded
        // without combining.
        let ok = u_meta2 >= profile.p_m2() && u_retx >= profile.p_d2();
        (
            if ok {
                DeliveryPath::TimeoutRetx
            } else {
                DeliveryPath::Outage
            },
            2,
        )
    } else if u_data1 < profile.p_d1() {
        // NACK and combined decoding; failure conditioned on the first data
        // failure has probability p_c / p_d1.
        let ok = u_meta2 >= profile.p_m2() && u_retx >= profile.p_c() / profile.p_d1();
        (
            if ok {
                DeliveryPath::NackRetx
            } else {
                DeliveryPath::Outage
            },
            2,
        )
    } else {
        (DeliveryPath::First, 1)
    };

    let latency_ttis = match path {
        DeliveryPath::First => Some(numerology.first_tx_latency_ttis(t_fa)),
        DeliveryPath::TimeoutRetx | DeliveryPath::NackRetx => {
            Some(numerology.retx_latency_ttis(t_fa))
        }
        DeliveryPath::Outage => None,
    };
    TrialOutcome {
        success: path != DeliveryPath::Outage,
        used_retransmission: multiples == 2,
        latency_ttis,
        channel_use_multiples: multiples,
        path,
    }
}

/// One packet over a single link. Frame alignment is uniform on `[0, 1)`
/// TTI.
pub fn simulate_sc_trial<R: Rng>(
    profile: &LinkBlerProfile,
    numerology: &Numerology,
    rng: &mut R,
) -> TrialOutcome {
    let t_fa: f64 = rng.random();
    link_trial(profile, numerology, t_fa, rng)
}

/// One packet duplicated over `profiles.len()` independent links.
///
/// Delivered iff any link delivers; latency is that of the earliest copy.
/// Each link runs its own retransmission on failure regardless of the
/// others. With `shared_frame_alignment` all links see one frame-alignment
/// draw, otherwise each link draws its own.
pub fn simulate_mc_trial<R: Rng>(
    profiles: &[LinkBlerProfile],
    numerology: &Numerology,
    rng: &mut R,
    shared_frame_alignment: bool,
) -> Result<TrialOutcome> {
    if profiles.is_empty() {
        return Err(Error::domain("multi-connectivity needs at least one link"));
    }
    let shared_fa: f64 = if shared_frame_alignment {
        rng.random()
    } else {
        0.0
    };
    let mut best: Option<TrialOutcome> = None;
    let mut multiples = 0;
    let mut retx = false;
    for profile in profiles {
        let t_fa = if shared_frame_alignment {
            shared_fa
        } else {
            rng.random()
        };
        let out = link_trial(profile, numerology, t_fa, rng);
        multiples += out.channel_use_multiples;
        retx |= out.used_retransmission;
        if let Some(lat) = out.latency_ttis {
            let earlier = best
                .and_then(|b| b.latency_ttis)
                .is_none_or(|b_lat| lat < b_lat);
            if earlier {
                best = Some(out);
            }
        }
    }
    let (success, latency_ttis, path) = match best {
        Some(b) => (true, b.latency_ttis, b.path),
        None => (false, None, DeliveryPath::Outage),
    };
    Ok(TrialOutcome {
        success,
        used_retransmission: retx,
        latency_ttis,
        channel_use_multiples: multiples,
        path,
    })
}

/// Integer tallies of a simulation run, plus latency samples when asked.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimulationTally {
    pub trials: u64,
    pub successes: u64,
    path_counts: [u64; 4],
    /// `multiples_histogram[k]` counts trials that spent `k` transmissions.
    pub multiples_histogram: Vec<u64>,
    pub multiples_sum: u64,
    pub multiples_sq_sum: u64,
    /// Latencies of delivered packets in TTIs, sorted ascending.
    pub latencies_ttis: Vec<f64>,
}

impl SimulationTally {
    fn with_links(links: usize) -> Self {
        Self {
            multiples_histogram: vec![0; 2 * links + 1],
            ..Self::default()
        }
    }

    fn record(&mut self, out: &TrialOutcome, keep_latency: bool) {
        self.trials += 1;
        self.path_counts[out.path.index()] += 1;
        if out.success {
            self.successes += 1;
            if keep_latency {
                if let Some(l) = out.latency_ttis {
                    self.latencies_ttis.push(l);
                }
            }
        }
        let k = u64::from(out.channel_use_multiples);
        self.multiples_histogram[out.channel_use_multiples as usize] += 1;
        self.multiples_sum += k;
        self.multiples_sq_sum += k * k;
    }

    fn merge(mut self, other: Self) -> Self {
        self.trials += other.trials;
        self.successes += other.successes;
        for (a, b) in self.path_counts.iter_mut().zip(other.path_counts) {
            *a += b;
        }
        for (a, b) in self
            .multiples_histogram
            .iter_mut()
            .zip(&other.multiples_histogram)
        {
            *a += b;
        }
        self.multiples_sum += other.multiples_sum;
        self.multiples_sq_sum += other.multiples_sq_sum;
        self.latencies_ttis.extend(other.latencies_ttis);
        self
    }

    pub fn path_count(&self, path: DeliveryPath) -> u64 {
        self.path_counts[path.index()]
    }

    pub fn outages(&self) -> u64 {
        self.trials - self.successes
    }
}

/// What [`Simulator::estimate`] measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Outage,
    /// Mean transmissions spent per packet over all links.
    MeanUsage,
    /// Latency quantile of delivered packets, in ms.
    LatencyQuantile(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub ci_half_width_95: f64,
    pub trials: u64,
    pub seed: u64,
}

const Z_95: f64 = 1.96;
const CHUNK: u64 = 1 << 14;

/// Immutable simulation setup: one profile per link.
#[derive(Debug, Clone)]
pub struct Simulator {
    profiles: Vec<LinkBlerProfile>,
    numerology: Numerology,
    shared_frame_alignment: bool,
    threads: Option<usize>,
}

impl Simulator {
    pub fn new(profiles: Vec<LinkBlerProfile>, numerology: Numerology) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::domain("at least one link is required"));
        }
        numerology.validate()?;
        Ok(Self {
            profiles,
            numerology,
            shared_frame_alignment: true,
            threads: None,
        })
    }

    pub fn with_shared_frame_alignment(mut self, shared: bool) -> Self {
        self.shared_frame_alignment = shared;
        self
    }

    /// Run on a dedicated pool of `n` threads instead of the global one.
    pub fn with_threads(mut self, n: usize) -> Self {
        self.threads = Some(n.max(1));
        self
    }

    pub fn numerology(&self) -> &Numerology {
        &self.numerology
    }

    pub fn links(&self) -> usize {
        self.profiles.len()
    }

    /// Outcome of trial `index` of the run seeded with `seed`.
    pub fn trial(&self, seed: u64, index: u64) -> TrialOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        self.trial_with(&mut rng)
    }

    fn trial_with(&self, rng: &mut ChaCha8Rng) -> TrialOutcome {
        if self.profiles.len() == 1 {
            simulate_sc_trial(&self.profiles[0], &self.numerology, rng)
        } else {
            simulate_mc_trial(
                &self.profiles,
                &self.numerology,
                rng,
                self.shared_frame_alignment,
            )
            .expect("simulator always holds at least one link")
        }
    }

    /// Runs `trials` trials and returns the integer tallies.
    pub fn run(&self, trials: u64, seed: u64, keep_latency: bool) -> Result<SimulationTally> {
        if trials == 0 {
            return Err(Error::validation("trials", "must be at least 1"));
        }
        let base = ChaCha8Rng::seed_from_u64(seed);
        let links = self.profiles.len();
        let chunks = trials.div_ceil(CHUNK);
        let work = || {
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut tally = SimulationTally::with_links(links);
                    for i in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                        let mut rng = base.clone();
                        rng.set_stream(i);
                        tally.record(&self.trial_with(&mut rng), keep_latency);
                    }
                    tally
                })
                .reduce(
                    || SimulationTally::with_links(links),
                    SimulationTally::merge,
                )
        };
        let mut tally = match self.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?
                .install(work),
            None => work(),
        };
        tally.latencies_ttis.sort_by(f64::total_cmp);
        Ok(tally)
    }

    pub fn estimate(&self, metric: Metric, trials: u64, seed: u64) -> Result<MonteCarloEstimate> {
        let keep_latency = matches!(metric, Metric::LatencyQuantile(_));
        let tally = self.run(trials, seed, keep_latency)?;
        self.summarize(metric, &tally, seed)
    }

    /// Reduces a tally produced by [`Simulator::run`] to one metric.
    /// Latency quantiles need a tally run with `keep_latency`.
    pub fn summarize(
        &self,
        metric: Metric,
        tally: &SimulationTally,
        seed: u64,
    ) -> Result<MonteCarloEstimate> {
        if tally.trials == 0 {
            return Err(Error::validation("trials", "must be at least 1"));
        }
        let n = tally.trials as f64;
        let (mean, ci) = match metric {
            Metric::Outage => {
                let p = tally.outages() as f64 / n;
                (p, Z_95 * (p * (1.0 - p) / n).sqrt())
            }
            Metric::MeanUsage => {
                let mean = tally.multiples_sum as f64 / n;
                let var = (tally.multiples_sq_sum as f64 / n - mean * mean).max(0.0);
                (mean, Z_95 * (var / n).sqrt())
            }
            Metric::LatencyQuantile(q) => {
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::validation(
                        "quantile",
                        format!("must lie in [0, 1], got {q}"),
                    ));
                }
                let tti = self.numerology.tti_duration_ms();
                let (value, half) = quantile_with_ci(&tally.latencies_ttis, q)
                    .ok_or_else(|| Error::domain("no delivered packets with recorded latency"))?;
                (value * tti, half * tti)
            }
        };
        Ok(MonteCarloEstimate {
            mean,
            ci_half_width_95: ci,
            trials: tally.trials,
            seed,
        })
    }
}

/// Nearest-rank quantile of sorted samples with a distribution-free 95%
/// interval from the binomial order-statistic ranks.
fn quantile_with_ci(sorted: &[f64], q: f64) -> Option<(f64, f64)> {
    if sorted.is_empty() {
        return None;
    }
    let n = sorted.len();
    let rank = |r: f64| (r.ceil() as usize).clamp(1, n) - 1;
    let value = sorted[rank(q * n as f64)];
    let spread = Z_95 * (n as f64 * q * (1.0 - q)).sqrt();
    let lo = sorted[rank(q * n as f64 - spread)];
    let hi = sorted[rank(q * n as f64 + spread)];
    Some((value, 0.5 * (hi - lo)))
}

/// Convenience wrapper: identical setup to building a [`Simulator`] on
/// `profiles` with default options.
pub fn estimate(
    metric: Metric,
    trials: u64,
    seed: u64,
    numerology: &Numerology,
    profiles: &[LinkBlerProfile],
) -> Result<MonteCarloEstimate> {
    Simulator::new(profiles.to_vec(), *numerology)?.estimate(metric, trials, seed)
}
