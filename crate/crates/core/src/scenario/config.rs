//! Scenario documents (JSON) and their validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fbl::FblContext;
use crate::outage::{ChaseCombiningSpec, ChaseModel, LinkBlerProfile};
use crate::sim::Numerology;
use crate::solver::{build_profile, solve_bler_nodes, BlerPolicy, SolveResult, SolverOptions};
use crate::Scheme;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ChaseField {
    Model(ChaseModel),
    Spec { model: ChaseModel },
}

fn default_m() -> u32 {
    1
}
fn default_payload() -> u32 {
    256
}
fn default_metadata() -> u32 {
    128
}
fn default_target() -> f64 {
    1e-5
}
fn default_trials() -> u64 {
    1_000_000
}
fn default_seed() -> u64 {
    1
}
fn default_true() -> bool {
    true
}

/// Document shape as written by users; converted into [`ScenarioConfig`]
/// after validation.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    scheme: Scheme,
    #[serde(default = "default_m")]
    m_nodes: u32,
    #[serde(default)]
    sinr_db: Option<OneOrMany>,
    #[serde(default)]
    sinr_db_per_node: Option<OneOrMany>,
    #[serde(default = "default_payload")]
    payload_bits: u32,
    #[serde(default = "default_metadata")]
    metadata_bits: u32,
    #[serde(default)]
    report_metadata_channel_use: bool,
    #[serde(default)]
    policy: Option<BlerPolicy>,
    #[serde(default)]
    chase: Option<ChaseField>,
    #[serde(default = "default_target")]
    target_outage: f64,
    #[serde(default)]
    p_d: Option<f64>,
    #[serde(default)]
    numerology: Numerology,
    #[serde(default = "default_trials")]
    trials: u64,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default = "default_true")]
    shared_frame_alignment: bool,
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scheme: Scheme,
    pub m_nodes: u32,
    /// One SINR per node (a single configured value is broadcast).
    pub sinr_db_per_node: Vec<f64>,
    pub payload_bits: u32,
    /// Carried for reporting; excluded from channel-use computation unless
    /// `report_metadata_channel_use` is set, and even then reported apart.
    pub metadata_bits: u32,
    pub report_metadata_channel_use: bool,
    pub policy: BlerPolicy,
    pub chase: ChaseModel,
    pub target_outage: f64,
    /// Fixed data BLER for evaluation commands; solved from
    /// `target_outage` when absent.
    pub p_d: Option<f64>,
    pub numerology: Numerology,
    pub trials: u64,
    pub seed: u64,
    pub shared_frame_alignment: bool,
}

impl Default for ScenarioConfig {
    /// Single connectivity at 10 dB, 32-byte payload, 1e-5 target.
    fn default() -> Self {
        Self {
            scheme: Scheme::Sc,
            m_nodes: 1,
            sinr_db_per_node: vec![10.0],
            payload_bits: default_payload(),
            metadata_bits: default_metadata(),
            report_metadata_channel_use: false,
            policy: BlerPolicy::Equal,
            chase: ChaseModel::Zero,
            target_outage: default_target(),
            p_d: None,
            numerology: Numerology::default(),
            trials: default_trials(),
            seed: default_seed(),
            shared_frame_alignment: true,
        }
    }
}

/// Parses and validates a JSON scenario document. Missing keys take their
/// defaults; unknown keys are rejected.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig> {
    let raw: RawScenario = serde_json::from_str(text).map_err(map_json_error)?;
    let sinr = match (raw.sinr_db, raw.sinr_db_per_node) {
        (Some(_), Some(_)) => {
            return Err(Error::validation(
                "sinr_db_per_node",
                "give either sinr_db or sinr_db_per_node, not both",
            ))
        }
        (Some(v), None) | (None, Some(v)) => match v {
            OneOrMany::One(x) => vec![x],
            OneOrMany::Many(xs) => xs,
        },
        (None, None) => vec![10.0],
    };
    let mut cfg = ScenarioConfig {
        scheme: raw.scheme,
        m_nodes: raw.m_nodes,
        sinr_db_per_node: sinr,
        payload_bits: raw.payload_bits,
        metadata_bits: raw.metadata_bits,
        report_metadata_channel_use: raw.report_metadata_channel_use,
        policy: raw.policy.unwrap_or(BlerPolicy::Equal),
        chase: match raw.chase {
            None => ChaseModel::Zero,
            Some(ChaseField::Model(m)) | Some(ChaseField::Spec { model: m }) => m,
        },
        target_outage: raw.target_outage,
        p_d: raw.p_d,
        numerology: raw.numerology,
        trials: raw.trials,
        seed: raw.seed,
        shared_frame_alignment: raw.shared_frame_alignment,
    };
    cfg.validate()?;
    cfg.broadcast_sinr();
    Ok(cfg)
}

fn map_json_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    if let Some(rest) = msg.strip_prefix("unknown field `") {
        if let Some(end) = rest.find('`') {
            return Error::validation(&rest[..end], "unknown key");
        }
    }
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: msg,
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.scheme.nodes(self.m_nodes)?;
        let n = self.sinr_db_per_node.len();
        if n != 1 && n != self.m_nodes as usize {
            return Err(Error::validation(
                "sinr_db_per_node",
                format!(
                    "has {n} entries for {} nodes (expected 1 or {})",
                    self.m_nodes, self.m_nodes
                ),
            ));
        }
        if let Some(bad) = self.sinr_db_per_node.iter().find(|x| !x.is_finite()) {
            return Err(Error::validation(
                "sinr_db_per_node",
                format!("non-finite SINR {bad}"),
            ));
        }
        if self.payload_bits == 0 {
            return Err(Error::validation("payload_bits", "must be at least 1"));
        }
        if self.metadata_bits == 0 {
            return Err(Error::validation("metadata_bits", "must be at least 1"));
        }
        if !(self.target_outage > 1e-12 && self.target_outage < 0.25) {
            return Err(Error::validation(
                "target_outage",
                format!("must lie in (1e-12, 0.25), got {}", self.target_outage),
            ));
        }
        if let Some(p) = self.p_d {
            if !(p > 0.0 && p < 0.5) {
                return Err(Error::validation(
                    "p_d",
                    format!("must lie in (0, 0.5), got {p}"),
                ));
            }
        }
        self.policy.validate()?;
        self.numerology.validate()?;
        if self.trials == 0 {
            return Err(Error::validation("trials", "must be at least 1"));
        }
        Ok(())
    }

    fn broadcast_sinr(&mut self) {
        if self.sinr_db_per_node.len() == 1 && self.m_nodes > 1 {
            self.sinr_db_per_node = vec![self.sinr_db_per_node[0]; self.m_nodes as usize];
        }
    }

    pub fn contexts(&self) -> Result<Vec<FblContext>> {
        let n = self.m_nodes as usize;
        (0..n)
            .map(|i| {
                let db = self.sinr_db_per_node[i.min(self.sinr_db_per_node.len() - 1)];
                FblContext::from_db(self.payload_bits, db)
            })
            .collect()
    }

    pub fn chase_specs(&self) -> Result<Vec<ChaseCombiningSpec>> {
        self.contexts()?
            .into_iter()
            .map(|c| ChaseCombiningSpec::new(self.chase, Some(c)))
            .collect()
    }

    pub fn solve(&self) -> Result<SolveResult> {
        solve_bler_nodes(
            self.target_outage,
            self.policy,
            &self.chase_specs()?,
            &SolverOptions::default(),
        )
    }

    /// Data BLER in effect: the configured `p_d`, else the solved target.
    pub fn operating_p_d(&self) -> Result<f64> {
        match self.p_d {
            Some(p) => Ok(p),
            None => Ok(self.solve()?.p_d),
        }
    }

    pub fn profiles(&self, p_d: f64) -> Result<Vec<LinkBlerProfile>> {
        self.chase_specs()?
            .iter()
            .map(|c| build_profile(p_d, self.policy, c))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let cfg =
            parse_scenario(r#"{"scheme": "SC", "target_outage": 1e-5, "sinr_db": 10}"#).unwrap();
        assert_eq!(cfg.m_nodes, 1);
        assert_eq!(cfg.payload_bits, 256);
        assert_eq!(cfg.metadata_bits, 128);
        assert_eq!(cfg.policy, BlerPolicy::Equal);
        assert_eq!(cfg.chase, ChaseModel::Zero);
        assert_eq!(cfg.numerology, Numerology::default());
        assert_eq!(cfg.sinr_db_per_node, vec![10.0]);
    }

    #[test]
    fn sinr_count_mismatch() {
        let err =
            parse_scenario(r#"{"scheme": "MC", "m_nodes": 2, "sinr_db_per_node": [1, 2, 3]}"#)
                .unwrap_err();
        match err {
            Error::Validation { field, .. } => assert_eq!(field, "sinr_db_per_node"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_named() {
        let err = parse_scenario(r#"{"scheme": "SC", "sinr": 3}"#).unwrap_err();
        match err {
            Error::Validation { field, .. } => assert_eq!(field, "sinr"),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_scenario(r#"{"scheme": "SC", "numerology": {"scs": 30}}"#).unwrap_err();
        assert!(matches!(err, Error::Validation { ref field, .. } if field == "scs"));
    }

    #[test]
    fn syntax_error_located() {
        let err = parse_scenario("{\n  \"scheme\": \"SC\",,\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn broadcast_and_policies() {
        let cfg = parse_scenario(
            r#"{"scheme": "MC", "m_nodes": 3, "sinr_db": 0,
                "policy": {"kind": "fixed_meta", "fixed_meta": 0.01},
                "chase": {"model": "product"}}"#,
        )
        .unwrap();
        assert_eq!(cfg.sinr_db_per_node, vec![0.0; 3]);
        assert_eq!(cfg.policy, BlerPolicy::FixedMeta { fixed_meta: 0.01 });
        assert_eq!(cfg.chase, ChaseModel::Product);
        let cfg = parse_scenario(
            r#"{"scheme": "SC", "policy": {"kind": "HALF"}, "chase": "finite_blocklength"}"#,
        )
        .unwrap();
        assert_eq!(cfg.policy, BlerPolicy::Half);
        assert_eq!(cfg.chase, ChaseModel::FiniteBlocklength);
    }

    #[test]
    fn rejects_invalid_values() {
        for doc in [
            r#"{"scheme": "SC", "trials": 0}"#,
            r#"{"scheme": "SC", "m_nodes": 2}"#,
            r#"{"scheme": "SC", "target_outage": 0.5}"#,
            r#"{"scheme": "SC", "p_d": 0.6}"#,
            r#"{"scheme": "SC", "payload_bits": 0}"#,
            r#"{"scheme": "SC", "policy": {"kind": "fixed_meta", "fixed_meta": 0}}"#,
            r#"{"scheme": "SC", "numerology": {"scs_khz": -30}}"#,
            r#"{"scheme": "SC", "sinr_db": 1, "sinr_db_per_node": [1]}"#,
        ] {
            assert!(
                matches!(parse_scenario(doc), Err(Error::Validation { .. })),
                "{doc} should fail validation"
            );
        }
    }
}
