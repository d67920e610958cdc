//! `okutsu`: validate MacLane chains, report Okutsu invariants, cross-check
//! them against the Newton-polygon oracle and probe the weight by sampling.
//!
//! Exit codes: 0 success, 1 validation or precondition failure, 2 a
//! mathematical cross-check failed, 3 the problem file could not be parsed.

mod problem;
mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use okutsu_core::ground::parse_rational;
use okutsu_core::oracle::{radical_problem, sample_weight, SampleParams};
use okutsu_core::{crosscheck, Error, OkutsuReport};

use problem::{ChainEntry, Problem, ProblemFile};

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_PARSE: u8 = 3;

const DEFAULT_COUNT: usize = 2000;
const DEFAULT_VALUATIONS: (i64, i64) = (-1, 3);

#[derive(Parser)]
#[command(name = "okutsu", version, about = "Okutsu invariants of defectless p-adic polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the chain and the key polynomial test for F.
    Validate { path: PathBuf },
    /// Print every invariant of F relative to the chain.
    Report {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare the closed formulas with the Newton-polygon oracle.
    Crosscheck {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Sample monic g of degree below deg F and compare v(g(theta))/deg g with w(F).
    SampleWeight {
        path: PathBuf,
        #[arg(long)]
        degree_bound: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Print the problem file for x^m - c p^k over the depth-zero chain [(x, k/m)].
    Radical {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { EXIT_OK });
        }
    };
    ExitCode::from(run(cli.command))
}

fn load(path: &Path) -> Result<Problem, u8> {
    problem::load(path).map_err(|e| {
        eprintln!("parse error: {e}");
        EXIT_PARSE
    })
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistent(_) => EXIT_MISMATCH,
        _ => EXIT_INVALID,
    }
}

fn fail(e: Error) -> u8 {
    eprintln!("error: {e}");
    error_code(&e)
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report types serialize"));
}

fn run(command: Command) -> u8 {
    let result = match command {
        Command::Validate { path } => load(&path).map(|p| cmd_validate(&p)),
        Command::Report { path, json } => load(&path).map(|p| cmd_report(&p, json)),
        Command::Crosscheck { path, json } => load(&path).map(|p| cmd_crosscheck(&p, json)),
        Command::SampleWeight { path, degree_bound, count, seed, json } => {
            load(&path).map(|p| cmd_sample_weight(&p, degree_bound, count, seed, json))
        }
        Command::Radical { p, m, c, k } => Ok(cmd_radical(p, m, &c, k)),
    };
    result.unwrap_or_else(|code| code)
}

fn cmd_validate(problem: &Problem) -> u8 {
    let validation = problem.chain.validate();
    print!("{}", render::validation_text(&validation));
    let mut ok = validation.is_valid();
    match problem.chain.key_poly_necessary_check(&problem.f) {
        Ok(check) => {
            for item in &check.items {
                println!("{}: {} ({})", item.name, if item.passed { "pass" } else { "FAIL" }, item.detail);
            }
            ok &= check.passed();
        }
        Err(e) => {
            println!("key polynomial test: not applicable: {e}");
            ok = false;
        }
    }
    if ok {
        EXIT_OK
    } else {
        EXIT_INVALID
    }
}

/// Structural validation of the chain; violations go to stderr.
fn precheck(problem: &Problem) -> Result<(), u8> {
    let validation = problem.chain.validate();
    if !validation.is_valid() {
        eprint!("{}", render::validation_text(&validation));
        return Err(EXIT_INVALID);
    }
    Ok(())
}

fn cmd_report(problem: &Problem, json: bool) -> u8 {
    if let Err(code) = precheck(problem) {
        return code;
    }
    match OkutsuReport::new(&problem.chain, &problem.f) {
        Ok(report) => {
            if json {
                print_json(&render::ReportJson::from(&report));
            } else {
                print!("{}", render::report_text(&report));
            }
            EXIT_OK
        }
        Err(e) => fail(e),
    }
}

fn cmd_crosscheck(problem: &Problem, json: bool) -> u8 {
    if let Err(code) = precheck(problem) {
        return code;
    }
    let report = match crosscheck(&problem.chain, &problem.f) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if json {
        print_json(&render::CrosscheckJson::from(&report));
    } else {
        print!("{}", render::crosscheck_text(&report));
    }
    if report.failed() {
        eprintln!("error: formula/oracle disagreement");
        EXIT_MISMATCH
    } else {
        if report.hypothesis_violated() {
            eprintln!(
                "warning: hypothesis-violation demonstrated: F is {}, not tame, and the formulas do not apply",
                report.formula.tameness
            );
        }
        EXIT_OK
    }
}

fn cmd_sample_weight(
    problem: &Problem,
    degree_bound: Option<usize>,
    count: Option<usize>,
    seed: Option<u64>,
    json: bool,
) -> u8 {
    if let Err(code) = precheck(problem) {
        return code;
    }
    let n = problem.f.degree().unwrap_or(0);
    let spec = &problem.sample;
    let params = SampleParams {
        degree_bound: degree_bound.or(spec.degree_bound).unwrap_or(n.saturating_sub(1)),
        count: count.or(spec.count).unwrap_or(DEFAULT_COUNT),
        valuation_range: (
            spec.valuation_min.unwrap_or(DEFAULT_VALUATIONS.0),
            spec.valuation_max.unwrap_or(DEFAULT_VALUATIONS.1),
        ),
        seed: seed.or(problem.seed).unwrap_or(0),
    };
    let sample = match sample_weight(&problem.chain, &problem.f, &params) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    if json {
        print_json(&render::SampleJson::from(&sample));
    } else {
        print!("{}", render::sample_text(&sample));
    }
    if sample.violation.is_some() {
        eprintln!("error: a sampled ratio exceeds w(F)");
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}

fn cmd_radical(p: u64, m: u64, c: &str, k: i64) -> u8 {
    let c = match parse_rational(c) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if let Err(e) = okutsu_core::oracle::omega_radical_family(p, m, &c, k) {
        return fail(e);
    }
    let (chain, f) = match radical_problem(p, m, &c, k) {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    let file = ProblemFile {
        p,
        chain: chain
            .levels()
            .iter()
            .map(|l| ChainEntry { phi: l.phi.to_string(), gamma: l.gamma.to_string() })
            .collect(),
        f: f.to_string(),
        seed: None,
        sample: None,
    };
    print_json(&file);
    EXIT_OK
}
