//! Command implementations behind the CLI: each returns plain data plus a
//! [`Table`] rendering.

use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use super::table::{num, Table};
use crate::error::{Error, Result};
use crate::outage::{mc_outage, sc_outage, succ_first, LinkBlerProfile, OutageBreakdown};
use crate::resource::{usage_at_reliability_nodes, usage_sc, UsageReport};
use crate::sim::{DeliveryPath, Metric, MonteCarloEstimate, Simulator};
use crate::solver::{build_profile, SolveResult};
use crate::Scheme;

#[derive(Debug, Clone, PartialEq)]
pub struct OutageResult {
    pub p_d: f64,
    pub profiles: Vec<LinkBlerProfile>,
    pub per_node: Vec<OutageBreakdown>,
    pub total_outage: f64,
}

impl OutageResult {
    pub fn table(&self, cfg: &ScenarioConfig) -> Table {
        let mut t = Table::new([
            "node",
            "sinr_db",
            "p_d",
            "p_m",
            "p_c",
            "p_succ_first",
            "p_succ_timeout_retx",
            "p_succ_nack_retx",
            "p_out_link",
            "p_out_total",
        ]);
        for (i, (p, b)) in self.profiles.iter().zip(&self.per_node).enumerate() {
            t.push(vec![
                (i + 1).to_string(),
                num(cfg.sinr_db_per_node[i]),
                num(p.p_d1()),
                num(p.p_m1()),
                num(p.p_c()),
                num(b.p_succ_first),
                num(b.p_succ_timeout_retx),
                num(b.p_succ_nack_retx),
                num(b.p_out),
                num(self.total_outage),
            ]);
        }
        t
    }
}

/// Outage breakdown per node and overall at the configured (or solved)
/// data BLER.
pub fn cmd_outage(cfg: &ScenarioConfig) -> Result<OutageResult> {
    let p_d = cfg.operating_p_d()?;
    let profiles = cfg.profiles(p_d)?;
    let per_node = profiles.iter().map(sc_outage).collect();
    let total_outage = mc_outage(&profiles)?;
    Ok(OutageResult {
        p_d,
        profiles,
        per_node,
        total_outage,
    })
}

pub fn cmd_solve(cfg: &ScenarioConfig) -> Result<SolveResult> {
    cfg.solve()
}

pub fn solve_table(cfg: &ScenarioConfig, r: &SolveResult) -> Table {
    let mut t = Table::new([
        "scheme",
        "m",
        "policy",
        "chase",
        "target_outage",
        "p_d",
        "p_m",
        "achieved_outage",
        "iterations",
    ]);
    t.push(vec![
        cfg.scheme.to_string(),
        cfg.m_nodes.to_string(),
        cfg.policy.label(),
        format!("{:?}", cfg.chase).to_uppercase(),
        num(cfg.target_outage),
        num(r.p_d),
        num(r.p_m),
        num(r.achieved_outage),
        r.iterations.to_string(),
    ]);
    t
}

pub fn cmd_resource(cfg: &ScenarioConfig) -> Result<UsageReport> {
    let contexts = cfg.contexts()?;
    let report = usage_at_reliability_nodes(
        cfg.scheme,
        &contexts,
        cfg.target_outage,
        cfg.policy,
        cfg.chase,
    )?;
    if cfg.report_metadata_channel_use {
        report.with_metadata(cfg.metadata_bits, &contexts[0])
    } else {
        Ok(report)
    }
}

pub fn resource_table(cfg: &ScenarioConfig, r: &UsageReport) -> Table {
    let mut t = Table::new([
        "scheme",
        "m",
        "node",
        "sinr_db",
        "payload_bits",
        "metadata_bits",
        "bler_target",
        "p_m",
        "channel_use",
        "total_usage",
        "metadata_channel_use",
    ]);
    for (i, r_node) in r.channel_use_per_node.iter().enumerate() {
        t.push(vec![
            r.scheme.to_string(),
            r.m_nodes.to_string(),
            (i + 1).to_string(),
            num(cfg.sinr_db_per_node[i]),
            cfg.payload_bits.to_string(),
            cfg.metadata_bits.to_string(),
            num(r.bler_target),
            num(r.meta_bler),
            num(*r_node),
            num(r.total_usage),
            r.metadata_channel_use.map(num).unwrap_or_default(),
        ]);
    }
    t
}

/// One simulated metric next to its closed-form value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulatedMetric {
    pub name: String,
    pub estimate: MonteCarloEstimate,
    pub analytic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub p_d: f64,
    pub metrics: Vec<SimulatedMetric>,
}

impl SimulationReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new([
            "metric",
            "mean",
            "ci_half_width_95",
            "analytic",
            "trials",
            "seed",
        ]);
        for m in &self.metrics {
            t.push(vec![
                m.name.clone(),
                num(m.estimate.mean),
                num(m.estimate.ci_half_width_95),
                num(m.analytic),
                m.estimate.trials.to_string(),
                m.estimate.seed.to_string(),
            ]);
        }
        t
    }
}

fn proportion(count: u64, trials: u64, seed: u64) -> MonteCarloEstimate {
    let n = trials as f64;
    let p = count as f64 / n;
    MonteCarloEstimate {
        mean: p,
        ci_half_width_95: 1.96 * (p * (1.0 - p) / n).sqrt(),
        trials,
        seed,
    }
}

/// Monte Carlo run of the scenario. `threads` pins the worker count; the
/// output does not depend on it.
pub fn cmd_simulate(cfg: &ScenarioConfig, threads: Option<usize>) -> Result<SimulationReport> {
    cfg.validate()?;
    let p_d = cfg.operating_p_d()?;
    let profiles = cfg.profiles(p_d)?;
    let mut sim = Simulator::new(profiles.clone(), cfg.numerology)?
        .with_shared_frame_alignment(cfg.shared_frame_alignment);
    if let Some(n) = threads {
        sim = sim.with_threads(n);
    }
    let (trials, seed) = (cfg.trials, cfg.seed);
    let tally = sim.run(trials, seed, true)?;

    let mut metrics = vec![
        SimulatedMetric {
            name: "outage".into(),
            estimate: sim.summarize(Metric::Outage, &tally, seed)?,
            analytic: mc_outage(&profiles)?,
        },
        SimulatedMetric {
            name: "mean_usage_transmissions".into(),
            estimate: sim.summarize(Metric::MeanUsage, &tally, seed)?,
            analytic: profiles.iter().map(|p| usage_sc(1.0, succ_first(p))).sum(),
        },
    ];

    if profiles.len() == 1 {
        let b = sc_outage(&profiles[0]);
        let analytic = [
            b.p_succ_first,
            b.p_succ_timeout_retx,
            b.p_succ_nack_retx,
            b.p_out,
        ];
        for (path, a) in DeliveryPath::ALL.into_iter().zip(analytic) {
            metrics.push(SimulatedMetric {
                name: format!("path_{}", path.as_str()),
                estimate: proportion(tally.path_count(path), trials, seed),
                analytic: a,
            });
        }
    }

    if tally.successes > 0 {
        // The median has no closed form here; only the maximum is bounded.
        for (name, q, analytic) in [
            ("latency_median_ms", 0.5, f64::NAN),
            (
                "latency_max_ms",
                1.0,
                cfg.numerology.worst_case_latency_ms(),
            ),
        ] {
            metrics.push(SimulatedMetric {
                name: name.into(),
                estimate: sim.summarize(Metric::LatencyQuantile(q), &tally, seed)?,
                analytic,
            });
        }
    }
    Ok(SimulationReport { p_d, metrics })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SweepVariable {
    /// Data BLER, evaluated at fixed policy.
    #[value(alias = "p_d", alias = "p-d")]
    PD,
    /// SINR of every node in dB; BLER re-solved at the target outage.
    #[value(alias = "sinr_db")]
    SinrDb,
    /// Number of duplicating nodes (multi connectivity).
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SweepScale {
    Linear,
    Log10,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: u32,
    pub scale: SweepScale,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::validation("sweep", "start must be less than stop"));
        }
        if self.points < 2 {
            return Err(Error::validation("sweep.points", "must be at least 2"));
        }
        if self.scale == SweepScale::Log10 && self.start <= 0.0 {
            return Err(Error::validation(
                "sweep.start",
                "log10 scale needs start > 0",
            ));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let last = f64::from(self.points - 1);
        Ok((0..self.points)
            .map(|i| {
                let t = f64::from(i) / last;
                match self.scale {
                    SweepScale::Linear => self.start + t * (self.stop - self.start),
                    SweepScale::Log10 => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + t * (b - a))
                    }
                }
            })
            .collect())
    }
}

/// Sweeps one variable around the scenario. Every row carries the data
/// and metadata BLER, the outage and, where the BLER is inside the
/// finite-blocklength domain, the channel uses and expected usage.
pub fn cmd_sweep(cfg: &ScenarioConfig, sweep: &SweepSpec) -> Result<Table> {
    let grid = sweep.grid()?;
    let mut t = Table::new([
        "variable",
        "x",
        "scheme",
        "m",
        "p_d",
        "p_m",
        "outage",
        "channel_use",
        "usage",
    ]);
    let var_name = match sweep.variable {
        SweepVariable::PD => "p_d",
        SweepVariable::SinrDb => "sinr_db",
        SweepVariable::M => "m",
    };
    let mut last_m = None;
    for x in grid {
        let mut point = cfg.clone();
        match sweep.variable {
            SweepVariable::PD => point.p_d = Some(x),
            SweepVariable::SinrDb => {
                point.sinr_db_per_node = vec![x; cfg.m_nodes as usize];
                point.p_d = None;
            }
            SweepVariable::M => {
                let m = x.round();
                if m < 1.0 {
                    return Err(Error::validation(
                        "sweep.start",
                        "node count must be at least 1",
                    ));
                }
                let m = m as u32;
                // Rounded grids may repeat a node count.
                if last_m == Some(m) {
                    continue;
                }
                last_m = Some(m);
                point.scheme = Scheme::Mc;
                point.m_nodes = m;
                point.sinr_db_per_node = vec![cfg.sinr_db_per_node[0]; m as usize];
                point.p_d = None;
            }
        }
        let (p_d, profiles) = match sweep.variable {
            SweepVariable::PD => {
                if !(x > 0.0 && x < 1.0) {
                    return Err(Error::validation(
                        "sweep",
                        format!("p_d {x} outside (0, 1)"),
                    ));
                }
                let specs = point.chase_specs()?;
                let profiles = specs
                    .iter()
                    .map(|c| build_profile(x, point.policy, c))
                    .collect::<Result<Vec<_>>>()?;
                (x, profiles)
            }
            _ => {
                let p_d = point.solve()?.p_d;
                (p_d, point.profiles(p_d)?)
            }
        };
        let outage = mc_outage(&profiles)?;
        let contexts = point.contexts()?;
        let (r, usage) = if p_d < 0.5 {
            let mut usage = 0.0;
            for (ctx, p) in contexts.iter().zip(&profiles) {
                usage += usage_sc(ctx.channel_use(p_d)?, succ_first(p));
            }
            (num(contexts[0].channel_use(p_d)?), num(usage))
        } else {
            (String::new(), String::new())
        };
        t.push(vec![
            var_name.into(),
            num(x),
            point.scheme.to_string(),
            point.m_nodes.to_string(),
            num(p_d),
            num(point.policy.meta_bler(p_d)),
            num(outage),
            r,
            usage,
        ]);
    }
    Ok(t)
}
