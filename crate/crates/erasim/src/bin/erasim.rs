//! Command-line front end: run scenarios, evaluate their audits, list the
//! canned ones.
//!
//! Exit codes: 0 on success, 1 when an audit fails beyond tolerance,
//! 2 on parse/semantic/runtime errors.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use erasim::record::EventPredicate;
use erasim::scenario::{
    builtin_scenario, builtin_text, parse_scenario, run_output_json, run_scenario, AuditOutcome,
    RunOutput, ScenarioDoc, BUILTIN_NAMES, DEFAULT_TOLERANCE,
};
use erasim::SimError;

#[derive(Parser)]
#[command(name = "erasim", about = "Single-photon linear-optics protocol simulator", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario: print its outcome distribution and audit results.
    Run(RunArgs),
    /// Evaluate only the audits declared by a scenario.
    Audit(AuditArgs),
    /// List the canned scenarios.
    List,
    /// Print the source text of a canned scenario.
    Show { name: String },
}

#[derive(Args)]
struct ScenarioRef {
    /// Scenario file to load.
    file: Option<PathBuf>,
    /// Run a canned scenario instead of a file.
    #[arg(long, conflicts_with = "file")]
    builtin: Option<String>,
    /// Numeric tolerance for audit pass/fail.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioRef,
    /// Emit one line of JSON instead of the text report.
    #[arg(long)]
    json: bool,
    /// Condition the distribution on an event predicate before printing.
    #[arg(long)]
    condition: Option<String>,
}

#[derive(Args)]
struct AuditArgs {
    #[command(flatten)]
    scenario: ScenarioRef,
    /// Only evaluate audits of this kind.
    #[arg(long)]
    kind: Option<String>,
}

fn load_scenario(reference: &ScenarioRef) -> Result<(ScenarioDoc, Option<PathBuf>), String> {
    match (&reference.file, &reference.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let doc = parse_scenario(&text)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            Ok((doc, path.parent().map(Path::to_path_buf)))
        }
        (None, Some(name)) => {
            let doc = builtin_scenario(name).map_err(|e| e.to_string())?;
            Ok((doc, None))
        }
        (None, None) => Err("give a scenario file or --builtin NAME".into()),
        (Some(_), Some(_)) => unreachable!("clap enforces the conflict"),
    }
}

/// Cross-scenario references resolve to builtins first, then to
/// `<name>.scn` next to the referring file.
fn resolve_from(base: Option<PathBuf>) -> impl Fn(&str) -> erasim::Result<ScenarioDoc> {
    move |name: &str| {
        if let Ok(doc) = builtin_scenario(name) {
            return Ok(doc);
        }
        if let Some(dir) = &base {
            let path = dir.join(format!("{name}.scn"));
            if let Ok(text) = std::fs::read_to_string(&path) {
                return parse_scenario(&text).map_err(|e| {
                    SimError::ConfigurationMismatch(format!("{}: {e}", path.display()))
                });
            }
        }
        Err(SimError::UnknownBuiltin {
            name: name.to_owned(),
            available: BUILTIN_NAMES.join(", "),
        })
    }
}

fn print_audit_line(audit: &AuditOutcome) {
    println!(
        "audit {:<18} {}  value={}  {}",
        audit.kind,
        audit.detail,
        erasim::scenario::fmt_f64(audit.value),
        if audit.pass { "pass" } else { "FAIL" }
    );
}

fn print_text_report(out: &RunOutput) {
    println!("scenario {}", out.name);
    for (record, p) in out.distribution.entries() {
        println!("  p={:<22} {record}", erasim::scenario::fmt_f64(p));
    }
    if out.discarded_weight > 0.0 {
        println!("  discarded weight {}", erasim::scenario::fmt_f64(out.discarded_weight));
    }
    for audit in &out.audits {
        print_audit_line(audit);
    }
}

fn run_command(args: &RunArgs) -> Result<bool, String> {
    let (doc, base) = load_scenario(&args.scenario)?;
    let resolver = resolve_from(base);
    let mut out = run_scenario(&doc, args.scenario.tol, &resolver).map_err(|e| e.to_string())?;
    if let Some(text) = &args.condition {
        let event = EventPredicate::parse(text).map_err(|e| e.to_string())?;
        let kept = out.distribution.probability_of(&event);
        out.distribution = out.distribution.conditioned(&event).map_err(|e| e.to_string())?;
        out.discarded_weight = (1.0 - kept).max(0.0);
    }
    if args.json {
        println!("{}", run_output_json(&out));
    } else {
        print_text_report(&out);
    }
    Ok(out.all_audits_pass())
}

fn audit_command(args: &AuditArgs) -> Result<bool, String> {
    let (doc, base) = load_scenario(&args.scenario)?;
    let resolver = resolve_from(base);
    let out = run_scenario(&doc, args.scenario.tol, &resolver).map_err(|e| e.to_string())?;
    let kinds: BTreeSet<&str> = out.audits.iter().map(|a| a.kind.as_str()).collect();
    if let Some(kind) = &args.kind {
        if !kinds.contains(kind.as_str()) {
            return Err(format!(
                "scenario `{}` declares no `{kind}` audit (has: {})",
                out.name,
                kinds.into_iter().collect::<Vec<_>>().join(", ")
            ));
        }
    }
    let mut all_pass = true;
    for audit in &out.audits {
        if args.kind.as_deref().is_some_and(|k| k != audit.kind) {
            continue;
        }
        print_audit_line(audit);
        all_pass &= audit.pass;
    }
    Ok(all_pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => run_command(args),
        Command::Audit(args) => audit_command(args),
        Command::List => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
            Ok(true)
        }
        Command::Show { name } => match builtin_text(name) {
            Some(text) => {
                print!("{text}");
                Ok(true)
            }
            None => Err(SimError::UnknownBuiltin {
                name: name.clone(),
                available: BUILTIN_NAMES.join(", "),
            }
            .to_string()),
        },
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
