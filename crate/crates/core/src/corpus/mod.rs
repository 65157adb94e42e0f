//! Reference scenarios and the harness that replays them.
//!
//! A [`Scenario`] fixes a frame and a list of sources (plus a conditioning
//! event for the conditioning rules) and carries one [`Check`] per rule
//! application with its expected outcome. Hybrid expectations record the
//! transfer policy under which they hold.

mod builtin;
mod generators;
mod harness;

pub use builtin::builtin_scenarios;
pub use generators::{
    check_class1, check_class2, check_class3, class2_layout, class3_layout, gen_class1, gen_class2,
    gen_class2_matrix, gen_class3, gen_class3_matrix, gen_class4, powerset_tuple_oracle, GeneratorError, OracleMasses, Violation,
};
pub use harness::{run_all, run_check, CheckReport, CheckStatus, ElementDelta, ScenarioReport};

use crate::bba::MassFunction;
use crate::hyperlattice::Element;
use crate::model::ModelSpec;
use crate::rules::TransferPolicy;

/// Per-element tolerance of scenario expectations.
pub const SCENARIO_TOLERANCE: f64 = 1e-9;
/// Result masses at or below this are not counted as focal elements.
pub const FOCAL_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Dempster,
    DsmClassic,
    DsmHybrid,
    ConditionDempster,
    ConditionDsm,
    /// `conflict_degree` under the check's model.
    ConflictDegree,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Dempster => "dempster",
            Rule::DsmClassic => "dsm-classic",
            Rule::DsmHybrid => "dsm-hybrid",
            Rule::ConditionDempster => "condition-dempster",
            Rule::ConditionDsm => "condition-dsm",
            Rule::ConflictDegree => "conflict-degree",
        }
    }

    /// True for rules whose result depends on the transfer policy.
    pub fn uses_policy(self) -> bool {
        matches!(self, Rule::DsmHybrid | Rule::ConditionDsm)
    }
}

/// Policies under which an expectation holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyTag {
    Only(TransferPolicy),
    Both,
}

impl PolicyTag {
    pub fn covers(self, policy: TransferPolicy) -> bool {
        match self {
            PolicyTag::Both => true,
            PolicyTag::Only(p) => p == policy,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    Masses(Vec<(Element, f64)>),
    TotalConflict,
    ParadoxicalInput,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub rule: Rule,
    pub model: ModelSpec,
    pub policy: PolicyTag,
    pub expected: Expected,
}

impl Check {
    pub fn new(rule: Rule, model: ModelSpec, expected: Expected) -> Self {
        Check { rule, model, policy: PolicyTag::Both, expected }
    }

    pub fn with_policy(mut self, policy: TransferPolicy) -> Self {
        self.policy = PolicyTag::Only(policy);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    /// Where the example comes from, in words.
    pub origin: String,
    pub n: usize,
    pub atom_names: Vec<String>,
    /// For the conditioning rules, the single source being conditioned.
    pub sources: Vec<MassFunction>,
    pub event: Option<Element>,
    pub checks: Vec<Check>,
    pub note: Option<String>,
}

impl Scenario {
    /// Static sanity check: every expected mass list sums to 1.
    pub fn expectations_sum_to_one(&self) -> bool {
        self.checks.iter().all(|c| match &c.expected {
            Expected::Masses(m) => (m.iter().map(|(_, v)| v).sum::<f64>() - 1.0).abs() <= SCENARIO_TOLERANCE,
            _ => true,
        })
    }
}
