//! Command-line front end.
//!
//! Exit codes: 0 success, 1 expectation not met, 2 usage or input error,
//! 3 oracle budget exceeded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::error::Error;
use crate::harness::{
    gen_adversarial, gen_random, monotonicity_suite, parse_gen_params, ratio_suite, AlgorithmKind, GenParams,
    RandomParams, Report, Solver, SuiteOptions,
};
use crate::model::{evaluate, parse_instance};
use crate::oracle::DEFAULT_BUDGET;
use crate::rational::{self, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "machine-cover", version, about = "Machine covering on related machines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one algorithm on an instance file and print the assignment.
    Solve {
        #[arg(long)]
        alg: String,
        #[arg(long)]
        instance: PathBuf,
        /// Exact rational such as 1/4.
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Round job sizes to powers of this base (ssnc-multi only).
        #[arg(long)]
        rounding_base: Option<String>,
    },
    /// Exact optimum; same as `solve --alg oracle`.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Single-bid-raise monotonicity trials.
    Monotone {
        #[arg(long)]
        alg: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated key=value pairs, e.g. `family=nonmono3,a=3/2` or `m=2,n=1..6`.
        #[arg(long, default_value = "")]
        gen_params: String,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Approximation ratios against the oracle or planted optima.
    Ratio {
        #[arg(long)]
        alg: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "")]
        gen_params: String,
        #[arg(long)]
        epsilon: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Write a generated instance document.
    Gen {
        /// A named family, or `random`.
        #[arg(long)]
        family: String,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Runs the CLI with `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Budget(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_BUDGET
        }
    }
}

fn solver_for(alg: &str, epsilon: Option<&str>, budget: u64) -> Result<Solver, Failure> {
    let kind: AlgorithmKind = alg.parse()?;
    let mut solver = Solver::new(kind).with_budget(budget);
    if let Some(text) = epsilon {
        solver = solver.with_epsilon(rational::parse(text)?);
    }
    Ok(solver)
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes())
        .and_then(|_| if text.ends_with('\n') { Ok(()) } else { out.write_all(b"\n") })
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

fn emit_report(out: &mut dyn Write, report: &Report, format: Format) -> Result<i32, Failure> {
    match format {
        Format::Json => emit(out, &report.to_json())?,
        Format::Csv => emit(out, &report.to_csv())?,
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAILED })
}

fn params(text: &str) -> Result<GenParams, Failure> {
    Ok(parse_gen_params(text)?)
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Solve {
            alg,
            instance,
            epsilon,
            budget,
            rounding_base,
        } => {
            let mut solver = solver_for(&alg, epsilon.as_deref(), budget)?;
            if let Some(b) = rounding_base {
                solver = solver.with_rounding_base(Some(rational::parse(&b)?));
            }
            solve(&solver, &read_file(&instance)?, out)
        }
        Command::Oracle { instance, budget } => {
            let solver = Solver::new(AlgorithmKind::Oracle).with_budget(budget);
            solve(&solver, &read_file(&instance)?, out)
        }
        Command::Monotone {
            alg,
            trials,
            seed,
            gen_params,
            epsilon,
            budget,
            format,
        } => {
            let solver = solver_for(&alg, epsilon.as_deref(), budget)?;
            let options = SuiteOptions {
                trials,
                seed,
                params: params(&gen_params)?,
            };
            emit_report(out, &monotonicity_suite(&solver, &options)?, format)
        }
        Command::Ratio {
            alg,
            trials,
            seed,
            gen_params,
            epsilon,
            budget,
            format,
        } => {
            let solver = solver_for(&alg, epsilon.as_deref(), budget)?;
            let options = SuiteOptions {
                trials,
                seed,
                params: params(&gen_params)?,
            };
            emit_report(out, &ratio_suite(&solver, &options)?, format)
        }
        Command::Gen {
            family,
            params: text,
            seed,
            out: path,
        } => {
            let p = params(&text)?;
            let generated = if family == "random" {
                let rp = RandomParams::from_params(RandomParams::default(), &p)?;
                gen_random(&rp, seed)?
            } else {
                gen_adversarial(&family, &p)?
            };
            let text = serde_json::to_string_pretty(&generated.to_json()).expect("document serializes");
            match path {
                Some(path) => std::fs::write(&path, format!("{text}\n"))
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
                None => emit(out, &text)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(rational::format).collect()
}

fn solve(solver: &Solver, text: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let instance = parse_instance(text)?;
    let solution = solver.solve(&instance)?;
    let report = evaluate(&solution.assignment, &instance)?;
    let mut works = vec![Rational::zero(); instance.m()];
    let mut loads = vec![Rational::zero(); instance.m()];
    for (pos, &id) in instance.machine_ids().iter().enumerate() {
        works[id] = report.work[pos].clone();
        loads[id] = report.load[pos].clone();
    }
    let mut doc = serde_json::json!({
        "algorithm": solver.kind.name(),
        "assignment": solution.assignment.to_external(&instance),
        "works": strings(&works),
        "loads": strings(&loads),
        "cover": rational::format(&report.cover),
    });
    if solver.kind.uses_epsilon() {
        doc["epsilon"] = rational::format(&solver.epsilon).into();
    }
    if let Some(trace) = solution.trace {
        doc["trace"] = trace;
    }
    if let Some(j) = solution.achieved_j {
        doc["achieved_j"] = j.into();
    }
    emit(out, &serde_json::to_string_pretty(&doc).expect("json serializes"))?;
    Ok(EXIT_OK)
}
