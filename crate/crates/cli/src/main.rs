use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use fockdual::bimodule::Builtin;
use fockdual::instance::{Instance, SpecError};
use fockdual::report::Entry;
use fockdual::suites::{default_suites, run_suites, unknown_suites, Settings, SUITES};

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_ILL: u8 = 3;

#[derive(Parser)]
#[command(name = "fockdual", version, about = "Numerically verify crossed-product identities for Hilbert C*-bimodules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites on an instance file (or `builtin:<name>`).
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// TOML instance file, or builtin:scalar, builtin:swap, builtin:matrix, builtin:half.
    spec: String,
    /// Suite to run; repeat for several. Defaults to every applicable suite.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    #[arg(long)]
    tol: Option<f64>,
    /// Truncation radius N of the Fock window.
    #[arg(long)]
    window: Option<usize>,
    /// Quadrature points M on the circle (default 4N+2).
    #[arg(long)]
    quadrature: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Random draws per identity.
    #[arg(long)]
    samples: Option<usize>,
    /// Write the text report here as well as to stdout.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Write the structured report here.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    instance: &'a str,
    seed: u64,
    window: usize,
    tol: f64,
    quadrature: usize,
    samples: usize,
    passed: bool,
    ill_conditioned: bool,
    elapsed_ms: u128,
    entries: &'a [Entry],
}

fn load(spec: &str) -> Result<Instance, SpecError> {
    match spec.strip_prefix("builtin:") {
        Some(name) => Builtin::by_name(name).map(|b| Instance::from_builtin(&b)).ok_or_else(|| SpecError::Field {
            path: "spec".into(),
            message: format!("unknown builtin {name:?} (expected one of {})", Builtin::NAMES.join(", ")),
        }),
        None => Instance::load(Path::new(spec)),
    }
}

fn settings(args: &VerifyArgs, inst: &Instance) -> Result<Settings, String> {
    let run = &inst.run;
    let window = args.window.or(run.window).unwrap_or(Settings::DEFAULT_WINDOW);
    if window == 0 {
        return Err("--window: the radius must be at least 1".into());
    }
    let mut s = Settings::for_window(window);
    s.tol = args.tol.or(run.tol).unwrap_or(s.tol);
    if !(s.tol > 0.0 && s.tol.is_finite()) {
        return Err("--tol: the tolerance must be positive".into());
    }
    s.quadrature = args.quadrature.or(run.quadrature).unwrap_or(s.quadrature);
    s.seed = args.seed.or(run.seed).unwrap_or(s.seed);
    s.samples = args.samples.or(run.samples).unwrap_or(s.samples).max(1);
    Ok(s)
}

fn verify(args: VerifyArgs) -> ExitCode {
    let inst = match load(&args.spec) {
        Ok(i) => i,
        Err(e @ SpecError::Numerical { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ILL);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let s = match settings(&args, &inst) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let names = if !args.suites.is_empty() {
        args.suites.clone()
    } else if let Some(list) = &inst.run.suites {
        list.clone()
    } else {
        default_suites(&inst)
    };
    let unknown = unknown_suites(&names);
    if !unknown.is_empty() {
        eprintln!("error: unknown suite(s) {} (expected {})", unknown.join(", "), SUITES.join(", "));
        return ExitCode::from(EXIT_PARSE);
    }

    let start = Instant::now();
    let outcome = run_suites(&inst, &names, &s);
    let elapsed = start.elapsed();
    let report = &outcome.report;
    let failed = report.failures().count();

    let mut text = format!(
        "instance {}\nseed {}  window {}  tol {:e}  quadrature {}  samples {}\nsuites {}\n\n{report}\n{} checks, {failed} failed, {:.2}s\n",
        args.spec,
        s.seed,
        s.window,
        s.tol,
        s.quadrature,
        s.samples,
        names.join(", "),
        report.entries.len(),
        elapsed.as_secs_f64()
    );
    if outcome.ill_conditioned {
        text.push_str("ill-conditioned Gram kernel: results are not trustworthy\n");
    }
    print!("{text}");
    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_FAIL);
        }
    }
    if let Some(path) = &args.json {
        let json = JsonReport {
            instance: &args.spec,
            seed: s.seed,
            window: s.window,
            tol: s.tol,
            quadrature: s.quadrature,
            samples: s.samples,
            passed: report.passed(),
            ill_conditioned: outcome.ill_conditioned,
            elapsed_ms: elapsed.as_millis(),
            entries: &report.entries,
        };
        let body = serde_json::to_string_pretty(&json).expect("report serializes");
        if let Err(e) = std::fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_FAIL);
        }
    }

    if outcome.ill_conditioned {
        ExitCode::from(EXIT_ILL)
    } else if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify(args) => verify(args),
    }
}
