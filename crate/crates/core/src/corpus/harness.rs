use std::collections::BTreeMap;

use super::{Check, Expected, Rule, Scenario, FOCAL_EPSILON, SCENARIO_TOLERANCE};
use crate::hyperlattice::Element;
use crate::rules::{
    conflict_degree, dempster_combine, dempster_condition, dsm_classic_combine, dsm_condition, dsm_hybrid_combine,
    Combination, CombineOutcome, RuleError, TransferPolicy, TOTAL_CONFLICT_EPSILON,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ElementDelta {
    pub element: Element,
    pub expected: f64,
    pub actual: f64,
}

impl ElementDelta {
    pub fn error(&self) -> f64 {
        (self.expected - self.actual).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub rule: Rule,
    /// The policy the rule ran under, for policy-dependent rules.
    pub policy: Option<TransferPolicy>,
    pub status: CheckStatus,
    pub deltas: Vec<ElementDelta>,
    pub max_error: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub id: String,
    pub checks: Vec<CheckReport>,
    /// Checks not run because their policy was not selected.
    pub skipped: usize,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn max_error(&self) -> f64 {
        self.checks.iter().map(|c| c.max_error).fold(0.0, f64::max)
    }
}

fn execute(scenario: &Scenario, check: &Check, policy: TransferPolicy) -> Result<CombineOutcome, String> {
    let event = || scenario.event.as_ref().ok_or_else(|| "conditioning check without an event".to_string());
    let first = || scenario.sources.first().ok_or_else(|| "scenario has no source".to_string());
    Ok(match check.rule {
        Rule::Dempster => dempster_combine(&scenario.sources),
        Rule::DsmClassic => dsm_classic_combine(&scenario.sources).map(|mass| Combination {
            mass,
            conflict: 0.0,
            ledger: Vec::new(),
        }),
        Rule::DsmHybrid => dsm_hybrid_combine(&check.model, &scenario.sources, policy),
        Rule::ConditionDempster => dempster_condition(first()?, event()?),
        Rule::ConditionDsm => dsm_condition(first()?, event()?, &check.model, policy),
        Rule::ConflictDegree => unreachable!("handled by run_check"),
    })
}

fn compare_masses(expected: &[(Element, f64)], combination: &Combination) -> (Vec<ElementDelta>, Option<String>) {
    let mut table: BTreeMap<Element, (f64, f64)> = BTreeMap::new();
    for (e, v) in expected {
        table.entry(e.clone()).or_insert((0.0, 0.0)).0 += v;
    }
    let mut problems = Vec::new();
    for (e, v) in combination.mass.iter() {
        if v > FOCAL_EPSILON && !table.contains_key(e) {
            problems.push(format!("unexpected focal element {e}"));
        }
        table.entry(e.clone()).or_insert((0.0, 0.0)).1 = v;
    }
    for (e, (_, actual)) in &table {
        if expected.iter().any(|(x, _)| x == e) && *actual <= FOCAL_EPSILON {
            problems.push(format!("missing focal element {e}"));
        }
    }
    let deltas: Vec<ElementDelta> = table
        .into_iter()
        .map(|(element, (expected, actual))| ElementDelta { element, expected, actual })
        .collect();
    let worst = deltas.iter().map(ElementDelta::error).fold(0.0, f64::max);
    if worst > SCENARIO_TOLERANCE {
        problems.push(format!("max error {worst:.3e}"));
    }
    if !combination.ledger.is_empty() {
        let total = combination.ledger_total();
        if (total - 1.0).abs() > TOTAL_CONFLICT_EPSILON {
            problems.push(format!("ledger products sum to {total}"));
        }
    }
    let problem = (!problems.is_empty()).then(|| problems.join("; "));
    (deltas, problem)
}

/// Runs one check under one policy (ignored by policy-free rules).
pub fn run_check(scenario: &Scenario, check: &Check, policy: TransferPolicy) -> CheckReport {
    let policy_used = check.rule.uses_policy().then_some(policy);
    let mut report = CheckReport {
        rule: check.rule,
        policy: policy_used,
        status: CheckStatus::Pass,
        deltas: Vec::new(),
        max_error: 0.0,
    };

    if check.rule == Rule::ConflictDegree {
        match (conflict_degree(&scenario.sources, &check.model), &check.expected) {
            (Ok(k), Expected::Value(v)) => {
                report.max_error = (k - v).abs();
                if report.max_error > SCENARIO_TOLERANCE {
                    report.status = CheckStatus::Fail(format!("conflict {k}, expected {v}"));
                }
            }
            (other, expected) => {
                report.status = CheckStatus::Fail(format!("got {other:?} for expectation {expected:?}"))
            }
        }
        return report;
    }

    let outcome = match execute(scenario, check, policy) {
        Ok(outcome) => outcome,
        Err(msg) => {
            report.status = CheckStatus::Fail(msg);
            return report;
        }
    };

    match (&check.expected, outcome) {
        (Expected::Masses(expected), Ok(combination)) => {
            if let Some(model_empty) = combination.mass.core().find(|e| check.model.is_empty(e)) {
                report.status = CheckStatus::Fail(format!("mass on model-empty element {model_empty}"));
            }
            let (deltas, problem) = compare_masses(expected, &combination);
            report.max_error = deltas.iter().map(ElementDelta::error).fold(0.0, f64::max);
            report.deltas = deltas;
            if let Some(p) = problem {
                report.status = CheckStatus::Fail(p);
            }
        }
        (Expected::TotalConflict, Err(RuleError::TotalConflict { conflict })) => {
            report.max_error = (1.0 - conflict).abs();
            if report.max_error > TOTAL_CONFLICT_EPSILON {
                report.status = CheckStatus::Fail(format!("conflict {conflict} is not 1"));
            }
        }
        (Expected::ParadoxicalInput, Err(RuleError::ParadoxicalInput { .. })) => {}
        (expected, got) => {
            let got = match got {
                Ok(c) => format!("a bba with {} focal elements", c.mass.core_len()),
                Err(e) => e.to_string(),
            };
            report.status = CheckStatus::Fail(format!("expected {expected:?}, got {got}"));
            report.max_error = f64::INFINITY;
        }
    }
    report
}

/// Runs every check of every scenario. Policy-dependent checks run once per
/// selected policy that their tag covers; the rest run once. Reports are
/// sorted by scenario id.
pub fn run_all(scenarios: &[Scenario], policies: &[TransferPolicy]) -> Vec<ScenarioReport> {
    let mut reports: Vec<ScenarioReport> = scenarios
        .iter()
        .map(|scenario| {
            let mut checks = Vec::new();
            let mut skipped = 0;
            for check in &scenario.checks {
                if check.rule.uses_policy() {
                    let selected: Vec<TransferPolicy> =
                        policies.iter().copied().filter(|p| check.policy.covers(*p)).collect();
                    if selected.is_empty() {
                        skipped += 1;
                    }
                    for p in selected {
                        checks.push(run_check(scenario, check, p));
                    }
                } else {
                    checks.push(run_check(scenario, check, TransferPolicy::default()));
                }
            }
            ScenarioReport { id: scenario.id.clone(), checks, skipped }
        })
        .collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    reports
}
