//! Command-line front end.
//!
//! Exit code contract: 0 — every requested check or budget passes;
//! 1 — a physics check fails; 2 — input or usage error. Malformed input
//! never panics.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conditions::{
    classify_measurement, conserve_interaction, conserve_system, implication_report,
    moderate_violation, strong_violation, vaidman_violation, weak_violation, ConditionReport,
};
use crate::estimation::evaluate_estimation_report;
use crate::linalg::ComplexMatrix;
use crate::measure::{joint_amplitudes, outcome_distribution, sample_outcomes};
use crate::modelfile::{state_to_pairs, LoadedModel, ModelFile};
use crate::models;
use crate::report::{DemoEntry, DemoReport, ReportDocument, SamplingReport, SearchReport};
use crate::search::{max_weak_violation, probe_design_search, ProbeTarget};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PHYSICS_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "qnd",
    version,
    about = "Simulate indirect quantum measurements and certify non-demolition conditions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check non-demolition conditions and classify the scheme.
    Check(CheckArgs),
    /// Audit the estimator: bias, squared error, and information budgets.
    Estimate(EstimateArgs),
    /// Sample read-out outcomes and compare against the exact Born rule.
    Simulate(SimulateArgs),
    /// Search over states for worst-case violations or best probe designs.
    Search(SearchArgs),
    /// Run the builtin model gallery and print the condition-hierarchy table.
    Demo(DemoArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConditionChoice {
    Weak,
    Moderate,
    Strong,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Human,
    Machine,
}

#[derive(Args)]
struct CheckArgs {
    /// Path to the model file.
    model: PathBuf,
    /// Which condition to check.
    #[arg(long, value_enum, default_value = "all")]
    condition: ConditionChoice,
    /// Violation tolerance; overrides the model file.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "human")]
    output: OutputFormat,
}

#[derive(Args)]
struct EstimateArgs {
    model: PathBuf,
    #[arg(long, value_enum, default_value = "human")]
    output: OutputFormat,
}

#[derive(Args)]
struct SimulateArgs {
    model: PathBuf,
    /// Number of outcomes to draw.
    #[arg(short = 'n', long = "draws", value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[arg(long, value_enum, default_value = "human")]
    output: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchTargetChoice {
    /// Maximize the weak violation over measured states.
    Weak,
    /// Minimize the moderate violation over probe states.
    Moderate,
    /// Minimize the weak violation over probe states, measured state fixed.
    Probe,
}

#[derive(Args)]
struct SearchArgs {
    model: PathBuf,
    #[arg(long, value_enum)]
    target: SearchTargetChoice,
    #[arg(long, default_value = "16", value_parser = clap::value_parser!(u64).range(1..))]
    restarts: u64,
    #[arg(long, default_value = "0")]
    seed: u64,
    #[arg(long, value_enum, default_value = "human")]
    output: OutputFormat,
}

#[derive(Args)]
struct DemoArgs {
    #[arg(long, value_enum, default_value = "human")]
    output: OutputFormat,
}

/// Entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Check(args) => dispatch(&args.model, args.output, |loaded, digest| {
            cmd_check(loaded, digest, args.condition, args.tol)
        }),
        Command::Estimate(args) => dispatch(&args.model, args.output, cmd_estimate),
        Command::Simulate(args) => dispatch(&args.model, args.output, |loaded, digest| {
            Ok(cmd_simulate(loaded, digest, args.n, args.seed))
        }),
        Command::Search(args) => dispatch(&args.model, args.output, |loaded, digest| {
            cmd_search(loaded, digest, args.target.into(), args.restarts as usize, args.seed)
        }),
        Command::Demo(args) => {
            let (code, report) = cmd_demo();
            match args.output {
                OutputFormat::Machine => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report).expect("demo serializes")
                    );
                }
                OutputFormat::Human => print_demo(&report),
            }
            code
        }
    }
}

fn dispatch(
    path: &std::path::Path,
    output: OutputFormat,
    body: impl FnOnce(&LoadedModel, String) -> Result<(i32, ReportDocument), String>,
) -> i32 {
    let bytes = match std::fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let digest = crate::report::input_digest(&bytes);
    let text = match String::from_utf8(bytes) {
        Ok(text) => text,
        Err(_) => {
            eprintln!("error: {} is not valid UTF-8", path.display());
            return EXIT_USAGE;
        }
    };
    let loaded = match ModelFile::from_json_str(&text).and_then(|f| f.build()) {
        Ok(loaded) => loaded,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if loaded.model.probe().has_degenerate_values(1e-12) {
        eprintln!(
            "warning: degenerate read-out eigenvalues; branches are indexed by basis vector, \
             not by eigenvalue"
        );
    }
    if loaded.model.system().has_degenerate_values(1e-12) {
        eprintln!(
            "warning: degenerate measured eigenvalues; conditions are checked per basis vector"
        );
    }
    match body(&loaded, digest) {
        Ok((code, report)) => {
            match output {
                OutputFormat::Machine => println!("{}", report.emit()),
                OutputFormat::Human => print_human(&report),
            }
            code
        }
        Err(message) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
    }
}

/// The `check` command: requested condition reports, conservation checks when
/// the generators are available, and the scheme classification. Exit 0 iff
/// every *requested* condition passes.
pub fn cmd_check(
    loaded: &LoadedModel,
    digest: String,
    condition: impl Into<CheckSelection>,
    tol_override: Option<f64>,
) -> Result<(i32, ReportDocument), String> {
    let selection = condition.into();
    let tol = tol_override.unwrap_or(loaded.tolerance);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err("tolerance must be a non-negative finite number".into());
    }
    let model = &loaded.model;
    let mut doc = ReportDocument::new(digest);

    // The weak report always exists: classification needs it.
    let weak = weak_violation(model, tol);

    let mut requested: Vec<ConditionReport> = Vec::new();
    match selection {
        CheckSelection::Weak => requested.push(weak.clone()),
        CheckSelection::Moderate => {
            let report = moderate_violation(model.interaction(), model.probe_state(), tol)
                .map_err(|e| e.to_string())?;
            requested.push(report);
        }
        CheckSelection::Strong => requested.push(strong_violation(model.interaction(), tol)),
        CheckSelection::All => {
            let chain = implication_report(model, tol).map_err(|e| e.to_string())?;
            doc.chain_consistent = Some(chain.chain_consistent);
            requested.push(chain.strong);
            requested.push(chain.moderate);
            requested.push(chain.weak);
        }
    }

    let q = model.system().matrix();
    if selection == CheckSelection::All {
        if let Some(h_s) = &loaded.system_hamiltonian {
            let report = conserve_system(&q, h_s, tol).map_err(|e| e.to_string())?;
            doc.conditions.push(report);
        }
        if let Some((h_i, _)) = &loaded.interaction_hamiltonian {
            let report = conserve_interaction(&q, h_i, tol).map_err(|e| e.to_string())?;
            doc.conditions.push(report);
            let report = vaidman_violation(
                &q,
                h_i,
                model.system_state(),
                model.probe_state(),
                tol,
            )
            .map_err(|e| e.to_string())?;
            doc.conditions.push(report);
        }
    }

    let all_pass = requested.iter().all(|r| r.verdict);
    // Requested reports go first so readers see what decided the exit code.
    let mut conditions = requested;
    conditions.append(&mut doc.conditions);
    doc.conditions = conditions;

    let h_s = loaded
        .system_hamiltonian
        .clone()
        .unwrap_or_else(|| ComplexMatrix::zeros(model.system().dim(), model.system().dim()));
    let classification = classify_measurement(&weak, &q, &h_s, tol).map_err(|e| e.to_string())?;
    doc.classification = Some(classification);

    let code = if all_pass { EXIT_OK } else { EXIT_PHYSICS_FAIL };
    Ok((code, doc))
}

/// Selection of conditions for `check`, decoupled from the clap type so the
/// command is callable as a library function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckSelection {
    Weak,
    Moderate,
    Strong,
    All,
}

impl From<ConditionChoice> for CheckSelection {
    fn from(c: ConditionChoice) -> Self {
        match c {
            ConditionChoice::Weak => CheckSelection::Weak,
            ConditionChoice::Moderate => CheckSelection::Moderate,
            ConditionChoice::Strong => CheckSelection::Strong,
            ConditionChoice::All => CheckSelection::All,
        }
    }
}

/// The `estimate` command: bias, squared error, information, and the budget
/// verdicts. Exit 0 iff both budgets pass.
pub fn cmd_estimate(
    loaded: &LoadedModel,
    digest: String,
) -> Result<(i32, ReportDocument), String> {
    let budgets = loaded
        .budgets
        .ok_or("estimate requires a 'budgets' section in the model file")?;
    let c = joint_amplitudes(&loaded.model);
    let f = loaded.build_estimator(&c).map_err(|e| e.to_string())?;
    let report = evaluate_estimation_report(
        &c,
        loaded.model.system().values(),
        &f,
        budgets.epsilon,
        budgets.i_min,
    );
    let mut doc = ReportDocument::new(digest);
    let code = if report.passes() {
        EXIT_OK
    } else {
        EXIT_PHYSICS_FAIL
    };
    doc.estimation = Some(report);
    Ok((code, doc))
}

/// The `simulate` command: seeded sampling against the exact Born rule.
pub fn cmd_simulate(
    loaded: &LoadedModel,
    digest: String,
    n: u64,
    seed: u64,
) -> (i32, ReportDocument) {
    let c = joint_amplitudes(&loaded.model);
    let exact = outcome_distribution(&c).probs().to_vec();
    let histogram = sample_outcomes(&c, n as usize, seed);
    let frequencies = histogram.iter().map(|&k| k as f64 / n as f64).collect();
    let mut doc = ReportDocument::new(digest);
    doc.sampling = Some(SamplingReport {
        seed,
        draws: n,
        histogram,
        exact_probabilities: exact,
        frequencies,
    });
    (EXIT_OK, doc)
}

/// The `search` command: dispatches to the state searches.
pub fn cmd_search(
    loaded: &LoadedModel,
    digest: String,
    target: SearchTarget,
    restarts: usize,
    seed: u64,
) -> Result<(i32, ReportDocument), String> {
    let u = loaded.model.interaction();
    let (label, result) = match target {
        SearchTarget::Weak => (
            "weak",
            max_weak_violation(u, loaded.model.probe_state(), restarts, seed)
                .map_err(|e| e.to_string())?,
        ),
        SearchTarget::Moderate => (
            "moderate",
            probe_design_search(u, restarts, seed, ProbeTarget::Moderate, None)
                .map_err(|e| e.to_string())?,
        ),
        SearchTarget::Probe => (
            "probe",
            probe_design_search(
                u,
                restarts,
                seed,
                ProbeTarget::WeakWithFixedSystem,
                Some(loaded.model.system_state()),
            )
            .map_err(|e| e.to_string())?,
        ),
    };
    let mut doc = ReportDocument::new(digest);
    doc.search = Some(SearchReport {
        target: label.to_string(),
        best_state: state_to_pairs(&result.best_state),
        best_value: result.best_value,
        restarts: result.restarts_used,
        seed: result.seed,
        trace: result.trace,
    });
    Ok((EXIT_OK, doc))
}

/// Public mirror of the clap search target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchTarget {
    Weak,
    Moderate,
    Probe,
}

impl From<SearchTargetChoice> for SearchTarget {
    fn from(c: SearchTargetChoice) -> Self {
        match c {
            SearchTargetChoice::Weak => SearchTarget::Weak,
            SearchTargetChoice::Moderate => SearchTarget::Moderate,
            SearchTargetChoice::Probe => SearchTarget::Probe,
        }
    }
}

/// The `demo` command: every gallery model against its declared profile.
pub fn cmd_demo() -> (i32, DemoReport) {
    let tol = crate::linalg::DEFAULT_TOL;
    let mut entries = Vec::new();
    let mut all_match = true;
    for descriptor in models::gallery() {
        let model = descriptor.build().expect("gallery models build");
        let strong = strong_violation(model.interaction(), tol);
        let moderate = moderate_violation(model.interaction(), model.probe_state(), tol)
            .expect("gallery dimensions are consistent");
        let weak = weak_violation(&model, tol);
        let observed = [strong.verdict, moderate.verdict, weak.verdict];
        let declared = [
            descriptor.expected_profile.strong,
            descriptor.expected_profile.moderate,
            descriptor.expected_profile.weak,
        ];
        let matches_declared = observed == declared;
        all_match &= matches_declared;
        entries.push(DemoEntry {
            name: descriptor.name,
            params: descriptor.params,
            violations: [strong.violation, moderate.violation, weak.violation],
            observed,
            declared,
            matches_declared,
        });
    }
    let code = if all_match { EXIT_OK } else { EXIT_PHYSICS_FAIL };
    (
        code,
        DemoReport {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            entries,
        },
    )
}

fn verdict_str(v: bool) -> &'static str {
    if v {
        "pass"
    } else {
        "FAIL"
    }
}

fn print_human(doc: &ReportDocument) {
    println!("tool version : {}", doc.tool_version);
    println!("input digest : {}", doc.input_digest);
    for report in &doc.conditions {
        println!(
            "{:<22} {}  violation {:.5e}  (tol {:.5e})  witness {:?}",
            report.condition.to_string(),
            verdict_str(report.verdict),
            report.violation,
            report.tolerance,
            report.witness
        );
    }
    if doc
        .conditions
        .iter()
        .any(|r| r.condition == crate::conditions::Condition::Vaidman)
    {
        println!("note: the vaidman residual is [Q ⊗ I, H_I] applied to the joint product state");
    }
    if let Some(chain) = doc.chain_consistent {
        println!("implication chain    : {}", if chain { "consistent" } else { "INCONSISTENT" });
    }
    if let Some(class) = doc.classification {
        println!("classification       : {class}");
    }
    if let Some(est) = &doc.estimation {
        println!("estimator table      : {:?}", est.estimator);
        println!("bias                 : {:.5e}", est.bias);
        println!(
            "squared error        : {:.5e}  budget ε² = {:.5e}  [{}]",
            est.squared_error,
            est.epsilon * est.epsilon,
            verdict_str(est.error_within_budget)
        );
        println!(
            "information (nats)   : {:.5e}  budget I_min = {:.5e}  [{}]",
            est.info_nats,
            est.i_min,
            verdict_str(est.info_sufficient)
        );
        println!(
            "information (bits)   : {:.5e}",
            crate::estimation::nats_to_bits(est.info_nats)
        );
    }
    if let Some(s) = &doc.sampling {
        println!("seed {} draws {}", s.seed, s.draws);
        println!("outcome   count      frequency    exact P(r_j)");
        for (j, &count) in s.histogram.iter().enumerate() {
            println!(
                "{:<9} {:<10} {:<12.6} {:.6}",
                j, count, s.frequencies[j], s.exact_probabilities[j]
            );
        }
    }
    if let Some(s) = &doc.search {
        println!("search target        : {}", s.target);
        println!("best violation       : {:.5e}", s.best_value);
        let state: Vec<String> = s
            .best_state
            .iter()
            .map(|p| format!("{:.5}{:+.5}i", p[0], p[1]))
            .collect();
        println!("best state           : [{}]", state.join(", "));
        println!("restarts {}  seed {}", s.restarts, s.seed);
        let trace: Vec<String> = s.trace.iter().map(|v| format!("{v:.3e}")).collect();
        println!("per-restart best     : [{}]", trace.join(", "));
    }
}

fn print_demo(report: &DemoReport) {
    println!("builtin model gallery (strong / moderate / weak at default states)");
    println!(
        "{:<36} {:>12} {:>12} {:>12}   profile",
        "model", "strong", "moderate", "weak"
    );
    for e in &report.entries {
        let params: Vec<String> = e
            .params
            .iter()
            .map(|(k, v)| {
                if v.fract() == 0.0 {
                    format!("{k}={v}")
                } else {
                    format!("{k}={v:.3}")
                }
            })
            .collect();
        println!(
            "{:<36} {:>12.3e} {:>12.3e} {:>12.3e}   {}/{}/{} {}",
            format!("{}({})", e.name, params.join(",")),
            e.violations[0],
            e.violations[1],
            e.violations[2],
            verdict_str(e.observed[0]),
            verdict_str(e.observed[1]),
            verdict_str(e.observed[2]),
            if e.matches_declared {
                "(as declared)"
            } else {
                "(MISMATCH vs declared)"
            }
        );
    }
}
