use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dsmt_core::corpus::{builtin_scenarios, run_all, CheckStatus, Rule, Scenario, ScenarioReport};
use dsmt_core::hyperlattice::{enumerate_hyperpowerset_with_cap, HARD_ENUMERATION_CAP};
use dsmt_core::rules::{
    dempster_combine, dempster_condition, dsm_classic_combine, dsm_condition, dsm_hybrid_combine, Combination,
    CombineOutcome, RuleError, TransferPolicy, TransferTerm,
};
use serde_json::{json, Value};

use crate::document::{Document, InputError, Loaded, ModelDoc, ModelName, RuleName};
use crate::expr::Frame;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_RULE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dsmt", version, about = "Dempster-Shafer and DSm belief combination")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Combine the sources of a document with its rule.
    Combine(RunArgs),
    /// Condition the single source of a document on its event.
    Condition(RunArgs),
    /// List the elements of the hyper-power set of an n-atom frame (n <= 5).
    Enumerate {
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Replay the reference scenarios, or scenario documents given with --input.
    Corpus(CorpusArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    S3Join,
    ReducedSwap,
}

impl From<PolicyArg> for TransferPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::S3Join => TransferPolicy::S3Join,
            PolicyArg::ReducedSwap => TransferPolicy::ReducedSwap,
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Document to read; standard input when absent or `-`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Overrides the policy of the document.
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Only scenarios whose id starts with this prefix.
    #[arg(long)]
    pub filter: Option<String>,
    /// Run policy-dependent checks under this policy only.
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Scenario documents to run instead of the builtin corpus.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Write the selected builtin scenarios as documents into this directory.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

/// What a command prints and its exit code.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn input_error(message: impl std::fmt::Display) -> Self {
        Output { stdout: String::new(), stderr: format!("error: {message}\n"), code: EXIT_INPUT }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { stdout: String::new(), stderr: text, code: EXIT_INPUT }
            } else {
                Output::ok(text)
            };
        }
    };
    match cli.command {
        Command::Combine(args) => cmd_run(&args, false, stdin),
        Command::Condition(args) => cmd_run(&args, true, stdin),
        Command::Enumerate { n, format } => cmd_enumerate(n, format),
        Command::Corpus(args) => cmd_corpus(&args),
    }
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> Result<String, InputError> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|source| InputError::Io { path: p.display().to_string(), source })
        }
        _ => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|source| InputError::Io { path: "standard input".into(), source })?;
            Ok(text)
        }
    }
}

fn execute(doc: &Loaded, policy: TransferPolicy) -> CombineOutcome {
    let event = || doc.event.as_ref().expect("validated on load");
    match doc.rule {
        RuleName::Dempster => dempster_combine(&doc.sources),
        RuleName::DsmClassic => dsm_classic_combine(&doc.sources).map(|mass| Combination {
            mass,
            conflict: 0.0,
            ledger: Vec::new(),
        }),
        RuleName::DsmHybrid => dsm_hybrid_combine(&doc.model, &doc.sources, policy),
        RuleName::ConditionDempster => dempster_condition(&doc.sources[0], event()),
        RuleName::ConditionDsm => dsm_condition(&doc.sources[0], event(), &doc.model, policy),
    }
}

fn cmd_run(args: &RunArgs, conditioning: bool, stdin: &mut dyn Read) -> Output {
    let loaded = match read_input(args.input.as_deref(), stdin)
        .and_then(|text| Document::from_json(&text))
        .and_then(|doc| doc.load())
    {
        Ok(l) => l,
        Err(e) => return Output::input_error(e),
    };
    if loaded.rule.is_conditioning() != conditioning {
        let hint = if conditioning { "combine" } else { "condition" };
        return Output::input_error(format!("rule {} belongs to the `{hint}` command", loaded.rule.rule().name()));
    }
    let policy = args
        .policy
        .map(TransferPolicy::from)
        .or(loaded.policy)
        .unwrap_or_default();
    let outcome = execute(&loaded, policy);
    let policy_used = loaded.rule.rule().uses_policy() && !loaded.model.constraints().is_empty();
    render_outcome(&loaded, outcome, policy_used.then_some(policy), args.format)
}

fn sorted_masses(frame: &Frame, c: &Combination) -> Vec<(String, f64)> {
    let mut rows: Vec<(String, f64)> = c.mass.iter().map(|(e, v)| (frame.render(e), v)).collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}

fn policy_name(p: TransferPolicy) -> &'static str {
    match p {
        TransferPolicy::S3Join => "s3-join",
        TransferPolicy::ReducedSwap => "reduced-swap",
    }
}

fn term_name(t: TransferTerm) -> &'static str {
    match t {
        TransferTerm::S1 => "S1",
        TransferTerm::S2 => "S2",
        TransferTerm::S3 => "S3",
    }
}

fn paradox_target(doc: &Loaded, index: usize) -> String {
    if doc.rule.is_conditioning() && index == 1 {
        "event".to_string()
    } else {
        format!("source={index}")
    }
}

fn render_outcome(doc: &Loaded, outcome: CombineOutcome, policy: Option<TransferPolicy>, format: Format) -> Output {
    let rule = doc.rule.rule().name();
    match (outcome, format) {
        (Ok(c), Format::Table) => {
            let mut out = String::new();
            for (e, v) in sorted_masses(&doc.frame, &c) {
                out.push_str(&format!("{e} {v:.6}\n"));
            }
            Output::ok(out)
        }
        (Ok(c), Format::Machine) => {
            let masses: Vec<Value> = sorted_masses(&doc.frame, &c)
                .into_iter()
                .map(|(e, v)| json!({ "element": e, "mass": v }))
                .collect();
            let mut body = json!({ "status": "ok", "rule": rule, "conflict": c.conflict, "masses": masses });
            if let Some(p) = policy {
                body["policy"] = json!(policy_name(p));
            }
            if !c.ledger.is_empty() {
                body["ledger"] = c
                    .ledger
                    .iter()
                    .map(|x| {
                        json!({
                            "focal": x.focal.iter().map(|f| doc.frame.render(f)).collect::<Vec<_>>(),
                            "product": x.product,
                            "destination": doc.frame.render(&x.destination),
                            "term": term_name(x.term),
                        })
                    })
                    .collect();
            }
            Output::ok(pretty(&body))
        }
        (Err(RuleError::TotalConflict { conflict }), format) => {
            let stdout = match format {
                Format::Table => format!("TOTAL_CONFLICT k={conflict:.6}\n"),
                Format::Machine => {
                    pretty(&json!({ "status": "total-conflict", "rule": rule, "conflict": conflict }))
                }
            };
            Output { stdout, stderr: String::new(), code: EXIT_RULE }
        }
        (Err(RuleError::ParadoxicalInput { index }), format) => {
            let target = paradox_target(doc, index);
            let stdout = match format {
                Format::Table => format!("PARADOXICAL_INPUT {target}\n"),
                Format::Machine => pretty(&json!({ "status": "paradoxical-input", "rule": rule, "at": target })),
            };
            Output { stdout, stderr: String::new(), code: EXIT_RULE }
        }
        (Err(e), _) => Output::input_error(e),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

pub fn cmd_enumerate(n: usize, format: Format) -> Output {
    let elements = match enumerate_hyperpowerset_with_cap(n, HARD_ENUMERATION_CAP) {
        Ok(e) => e,
        Err(e) => return Output::input_error(e),
    };
    let frame = Frame::new(n, None).expect("n is at least 1 here");
    let rendered: Vec<String> = elements.iter().map(|e| frame.render(e)).collect();
    match format {
        Format::Table => {
            let mut out = rendered.join("\n");
            out.push_str(&format!("\ncount: {}\n", rendered.len()));
            Output::ok(out)
        }
        Format::Machine => Output::ok(pretty(&json!({ "n": n, "count": rendered.len(), "elements": rendered }))),
    }
}

fn export_name(doc: &Document) -> String {
    let rule = doc.rule.rule().name();
    let model = match &doc.model {
        ModelDoc::Named(ModelName::Free) => "free",
        ModelDoc::Named(ModelName::Shafer) => "shafer",
        ModelDoc::Custom(_) => "custom",
    };
    let id = doc.id.as_deref().unwrap_or("unnamed");
    match doc.policy {
        None => format!("{id}-{rule}-{model}.json"),
        Some(p) => format!("{id}-{rule}-{model}-{}.json", policy_name(p.into())),
    }
}

fn export(scenarios: &[Scenario], dir: &Path) -> Output {
    if let Err(e) = fs::create_dir_all(dir) {
        return Output::input_error(format!("cannot create {}: {e}", dir.display()));
    }
    let mut count = 0;
    for s in scenarios {
        for doc in Document::from_scenario(s) {
            let path = dir.join(export_name(&doc));
            if let Err(e) = fs::write(&path, doc.to_json()) {
                return Output::input_error(format!("cannot write {}: {e}", path.display()));
            }
            count += 1;
        }
    }
    Output::ok(format!("exported {count} documents from {} scenarios to {}\n", scenarios.len(), dir.display()))
}

fn load_scenarios(paths: &[PathBuf]) -> Result<Vec<Scenario>, InputError> {
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(|source| InputError::Io { path: p.display().to_string(), source })?;
            let doc = Document::from_json(&text)?;
            doc.to_scenario()
        })
        .collect()
}

fn status_label(r: &ScenarioReport) -> &'static str {
    if r.passed() {
        "PASS"
    } else {
        "FAIL"
    }
}

fn plural(count: usize, noun: &str) -> String {
    if count == 1 {
        format!("1 {noun}")
    } else {
        format!("{count} {noun}s")
    }
}

fn check_label(rule: Rule, policy: Option<TransferPolicy>) -> String {
    match policy {
        Some(p) => format!("{} [{}]", rule.name(), policy_name(p)),
        None => rule.name().to_string(),
    }
}

pub fn cmd_corpus(args: &CorpusArgs) -> Output {
    let scenarios = if args.input.is_empty() {
        builtin_scenarios()
    } else {
        if args.export.is_some() {
            return Output::input_error("--export works on the builtin corpus only");
        }
        match load_scenarios(&args.input) {
            Ok(s) => s,
            Err(e) => return Output::input_error(e),
        }
    };
    let selected: Vec<Scenario> = match &args.filter {
        Some(prefix) => scenarios.into_iter().filter(|s| s.id.starts_with(prefix.as_str())).collect(),
        None => scenarios,
    };
    let mut stderr = String::new();
    if let Some(prefix) = &args.filter {
        if selected.is_empty() {
            stderr.push_str(&format!("warning: no scenario id starts with `{prefix}`\n"));
        }
    }
    if let Some(dir) = &args.export {
        let mut out = export(&selected, dir);
        out.stderr.insert_str(0, &stderr);
        return out;
    }

    let policies: Vec<TransferPolicy> = match args.policy {
        Some(p) => vec![p.into()],
        None => TransferPolicy::ALL.to_vec(),
    };
    let reports = run_all(&selected, &policies);
    let passed = reports.iter().filter(|r| r.passed()).count();
    let failed = reports.len() - passed;
    let skipped: usize = reports.iter().map(|r| r.skipped).sum();
    let code = if failed == 0 { EXIT_OK } else { EXIT_RULE };

    let stdout = match args.format {
        Format::Table => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&format!("{} {} ({})\n", status_label(r), r.id, plural(r.checks.len(), "check")));
                for c in r.checks.iter().filter(|c| !c.passed()) {
                    if let CheckStatus::Fail(msg) = &c.status {
                        out.push_str(&format!("  {}: {msg}\n", check_label(c.rule, c.policy)));
                    }
                }
            }
            out.push_str(&format!("{}: {passed} passed, {failed} failed", plural(reports.len(), "scenario")));
            if skipped > 0 {
                out.push_str(&format!(", {} skipped", plural(skipped, "check")));
            }
            out.push('\n');
            out
        }
        Format::Machine => {
            let items: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "passed": r.passed(),
                        "max_error": r.max_error(),
                        "skipped": r.skipped,
                        "checks": r.checks.iter().map(|c| json!({
                            "rule": c.rule.name(),
                            "policy": c.policy.map(policy_name),
                            "passed": c.passed(),
                            "max_error": c.max_error,
                            "message": match &c.status { CheckStatus::Pass => None, CheckStatus::Fail(m) => Some(m.clone()) },
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            pretty(&json!({ "scenarios": items, "passed": passed, "failed": failed, "skipped": skipped }))
        }
    };
    Output { stdout, stderr, code }
}
