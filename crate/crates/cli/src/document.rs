//! JSON scenario documents.
//!
//! ```json
//! {
//!   "frame": { "size": 3, "names": ["M", "C", "T"] },
//!   "model": "shafer",
//!   "sources": [ { "M": 0.99, "T": 0.01 }, { "C": 0.99, "T": 0.01 } ],
//!   "rule": "dsm-hybrid",
//!   "policy": "s3-join"
//! }
//! ```
//!
//! `model` is `"free"` (the default), `"shafer"` or `{"constraints": [...]}`.
//! Conditioning rules take exactly one source and an `event`. The optional
//! `id`, `origin`, `note` and `expect` fields turn a document into a corpus
//! scenario.

use std::collections::BTreeMap;

use dsmt_core::bba::{BbaError, MassFunction};
use dsmt_core::corpus::{Check, Expected, PolicyTag, Rule, Scenario};
use dsmt_core::hyperlattice::Element;
use dsmt_core::model::{ModelError, ModelKind, ModelSpec};
use dsmt_core::rules::TransferPolicy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{ExprError, Frame, FrameError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
    pub frame: FrameDoc,
    #[serde(default)]
    pub model: ModelDoc,
    pub sources: Vec<BTreeMap<String, f64>>,
    pub rule: RuleName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    #[default]
    Free,
    Shafer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constraints {
    pub constraints: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelDoc {
    Named(ModelName),
    Custom(Constraints),
}

impl Default for ModelDoc {
    fn default() -> Self {
        ModelDoc::Named(ModelName::Free)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleName {
    Dempster,
    DsmClassic,
    DsmHybrid,
    ConditionDempster,
    ConditionDsm,
}

impl RuleName {
    pub fn rule(self) -> Rule {
        match self {
            RuleName::Dempster => Rule::Dempster,
            RuleName::DsmClassic => Rule::DsmClassic,
            RuleName::DsmHybrid => Rule::DsmHybrid,
            RuleName::ConditionDempster => Rule::ConditionDempster,
            RuleName::ConditionDsm => Rule::ConditionDsm,
        }
    }

    pub fn from_rule(rule: Rule) -> Option<Self> {
        Some(match rule {
            Rule::Dempster => RuleName::Dempster,
            Rule::DsmClassic => RuleName::DsmClassic,
            Rule::DsmHybrid => RuleName::DsmHybrid,
            Rule::ConditionDempster => RuleName::ConditionDempster,
            Rule::ConditionDsm => RuleName::ConditionDsm,
            Rule::ConflictDegree => return None,
        })
    }

    pub fn is_conditioning(self) -> bool {
        matches!(self, RuleName::ConditionDempster | RuleName::ConditionDsm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    S3Join,
    ReducedSwap,
}

impl From<PolicyName> for TransferPolicy {
    fn from(p: PolicyName) -> Self {
        match p {
            PolicyName::S3Join => TransferPolicy::S3Join,
            PolicyName::ReducedSwap => TransferPolicy::ReducedSwap,
        }
    }
}

impl From<TransferPolicy> for PolicyName {
    fn from(p: TransferPolicy) -> Self {
        match p {
            TransferPolicy::S3Join => PolicyName::S3Join,
            TransferPolicy::ReducedSwap => PolicyName::ReducedSwap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Expectation {
    Masses(BTreeMap<String, f64>),
    TotalConflict,
    ParadoxicalInput,
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid frame: {0}")]
    Frame(#[from] FrameError),
    #[error("in {context}: {source}")]
    Expr { context: String, source: ExprError },
    #[error("invalid model: {0}")]
    Model(#[from] ModelError),
    #[error("invalid source {index}: {source}")]
    Bba { index: usize, source: BbaError },
    #[error("rule {rule} needs {needed}")]
    Shape { rule: &'static str, needed: &'static str },
    #[error("{0}")]
    Other(String),
}

/// A document resolved against its frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub frame: Frame,
    pub model: ModelSpec,
    pub sources: Vec<MassFunction>,
    pub rule: RuleName,
    pub event: Option<Element>,
    pub policy: Option<TransferPolicy>,
    pub expect: Option<Expected>,
}

fn parse_in(frame: &Frame, text: &str, context: impl FnOnce() -> String) -> Result<Element, InputError> {
    frame.parse(text).map_err(|source| InputError::Expr { context: context(), source })
}

impl Document {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize") + "\n"
    }

    pub fn load(&self) -> Result<Loaded, InputError> {
        let frame = Frame::new(self.frame.size, self.frame.names.clone())?;
        let n = frame.n();
        let model = match &self.model {
            ModelDoc::Named(ModelName::Free) => ModelSpec::free(n)?,
            ModelDoc::Named(ModelName::Shafer) => ModelSpec::shafer(n)?,
            ModelDoc::Custom(c) => {
                let constraints = c
                    .constraints
                    .iter()
                    .enumerate()
                    .map(|(i, text)| parse_in(&frame, text, || format!("constraint {i}")))
                    .collect::<Result<Vec<_>, _>>()?;
                ModelSpec::hybrid(n, constraints)?
            }
        };
        let mut sources = Vec::with_capacity(self.sources.len());
        for (index, src) in self.sources.iter().enumerate() {
            let mut assignments = Vec::with_capacity(src.len());
            for (text, mass) in src {
                let e = parse_in(&frame, text, || format!("source {index}, key `{text}`"))?;
                assignments.push((e, *mass));
            }
            sources.push(MassFunction::new(n, assignments).map_err(|source| InputError::Bba { index, source })?);
        }
        let event = self
            .event
            .as_deref()
            .map(|text| parse_in(&frame, text, || "event".to_string()))
            .transpose()?;

        let name = self.rule.rule().name();
        if self.rule.is_conditioning() {
            if sources.len() != 1 {
                return Err(InputError::Shape { rule: name, needed: "exactly one source" });
            }
            match &event {
                None => return Err(InputError::Shape { rule: name, needed: "an event" }),
                Some(e) if e.is_empty() => {
                    return Err(InputError::Other("the conditioning event must not be empty".into()))
                }
                Some(_) => {}
            }
        } else {
            if sources.len() < 2 {
                return Err(InputError::Shape { rule: name, needed: "at least two sources" });
            }
            if event.is_some() {
                return Err(InputError::Shape { rule: name, needed: "no event" });
            }
        }
        if self.rule == RuleName::DsmClassic && model.kind() != ModelKind::Free {
            return Err(InputError::Shape { rule: name, needed: "the free model" });
        }

        let expect = match &self.expect {
            None => None,
            Some(Expectation::TotalConflict) => Some(Expected::TotalConflict),
            Some(Expectation::ParadoxicalInput) => Some(Expected::ParadoxicalInput),
            Some(Expectation::Masses(m)) => {
                let mut list = Vec::with_capacity(m.len());
                for (text, v) in m {
                    list.push((parse_in(&frame, text, || format!("expected key `{text}`"))?, *v));
                }
                Some(Expected::Masses(list))
            }
        };
        Ok(Loaded {
            frame,
            model,
            sources,
            rule: self.rule,
            event,
            policy: self.policy.map(Into::into),
            expect,
        })
    }

    /// One document per exportable check of a scenario; conflict-degree
    /// checks have no document form and are skipped.
    pub fn from_scenario(s: &Scenario) -> Vec<Document> {
        let names = (!s.atom_names.is_empty()).then(|| s.atom_names.clone());
        let frame = Frame::new(s.n, names.clone()).expect("builtin frames are valid");
        let render = |e: &Element| frame.render(e);
        let assignments = |m: &MassFunction| m.iter().map(|(e, v)| (render(e), v)).collect::<BTreeMap<_, _>>();
        s.checks
            .iter()
            .filter_map(|check| {
                let rule = RuleName::from_rule(check.rule)?;
                let model = match check.model.kind() {
                    ModelKind::Free => ModelDoc::Named(ModelName::Free),
                    ModelKind::Shafer => ModelDoc::Named(ModelName::Shafer),
                    ModelKind::Custom => ModelDoc::Custom(Constraints {
                        constraints: check.model.constraints().iter().map(render).collect(),
                    }),
                };
                let expect = match &check.expected {
                    Expected::Masses(m) => {
                        let mut out = BTreeMap::new();
                        for (e, v) in m {
                            *out.entry(render(e)).or_insert(0.0) += v;
                        }
                        Expectation::Masses(out)
                    }
                    Expected::TotalConflict => Expectation::TotalConflict,
                    Expected::ParadoxicalInput => Expectation::ParadoxicalInput,
                    Expected::Value(_) => return None,
                };
                let policy = match check.policy {
                    PolicyTag::Both => None,
                    PolicyTag::Only(p) => Some(p.into()),
                };
                Some(Document {
                    id: Some(s.id.clone()),
                    origin: Some(s.origin.clone()),
                    frame: FrameDoc { size: s.n, names: names.clone() },
                    model,
                    sources: s.sources.iter().map(assignments).collect(),
                    rule,
                    event: s.event.as_ref().map(render),
                    policy,
                    note: s.note.clone(),
                    expect: Some(expect),
                })
            })
            .collect()
    }

    /// The scenario a document with an `expect` field describes.
    pub fn to_scenario(&self) -> Result<Scenario, InputError> {
        let loaded = self.load()?;
        let expected = loaded
            .expect
            .ok_or_else(|| InputError::Other("corpus documents need an `expect` field".into()))?;
        let mut check = Check::new(loaded.rule.rule(), loaded.model, expected);
        if let Some(p) = loaded.policy {
            check = check.with_policy(p);
        }
        Ok(Scenario {
            id: self.id.clone().unwrap_or_else(|| "unnamed".into()),
            origin: self.origin.clone().unwrap_or_default(),
            n: loaded.frame.n(),
            atom_names: loaded.frame.names().to_vec(),
            sources: loaded.sources,
            event: loaded.event,
            checks: vec![check],
            note: self.note.clone(),
        })
    }
}
