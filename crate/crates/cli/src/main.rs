use std::process::ExitCode;

use clap::{Parser, Subcommand};
use topo_core::checks::{check_names, run_checks, CheckParams};
use topo_core::expr::{evaluate, parse, EvalOptions, DEFAULT_MAX_SIMPLICES};
use topo_core::{ReportOptions, SpaceReport, TopoError};

#[derive(Parser)]
#[command(name = "topo", version, about = "Build finite Δ-set models of spaces and compute their integral homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a space expression and print its report.
    Eval {
        /// e.g. "lens 5 [1,1]", "join(sphere 1, circle 3)", "milnor D:3 2"
        expr: String,
        /// Compute homology and connectivity.
        #[arg(long)]
        homology: bool,
        /// Highest homology degree to report (implies --homology).
        #[arg(long, value_name = "K")]
        up_to: Option<usize>,
        /// Report reduced homology.
        #[arg(long)]
        reduced: bool,
        /// Print the JSON report (the default unless --csv is given).
        #[arg(long)]
        json: bool,
        /// Print the f-vector as CSV.
        #[arg(long)]
        csv: bool,
        #[arg(long, value_name = "N", env = "TOPO_MAX_SIMPLICES", default_value_t = DEFAULT_MAX_SIMPLICES)]
        max_simplices: u128,
        /// Check the simplicial identities of the result.
        #[arg(long)]
        validate: bool,
        /// Name recorded in the report (defaults to the expression).
        #[arg(long)]
        name: Option<String>,
        /// Also write the Δ-set to this file as JSON.
        #[arg(long, value_name = "FILE")]
        save: Option<String>,
    },
    /// Run the named reproducibility checks (all of them by default).
    Check {
        names: Vec<String>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Seed for the randomized batteries.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// List the available checks and exit.
        #[arg(long)]
        list: bool,
    },
}

fn report_error(e: &TopoError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}

fn eval(cmd: Command) -> Result<(), TopoError> {
    let Command::Eval { expr, homology, up_to, reduced, json, csv, max_simplices, validate, name, save } = cmd else {
        unreachable!()
    };
    let ast = parse(&expr)?;
    let space = evaluate(&ast, &EvalOptions { max_simplices })?;
    if validate {
        let v = space.validate();
        if let Some(first) = v.violations.first() {
            return Err(TopoError::InvalidDeltaSet { count: v.violations.len(), first: first.to_string() });
        }
    }
    if let Some(path) = save {
        space.save(path)?;
    }
    let canonical = ast.to_string();
    let opts = ReportOptions { homology: homology || up_to.is_some(), up_to, reduced };
    let report = SpaceReport::build(name.as_deref().unwrap_or(&canonical), &canonical, &space, &opts);
    if json || !csv {
        println!("{}", report.to_json());
    }
    if csv {
        print!("{}", report.f_vector_csv());
    }
    Ok(())
}

fn check(cmd: Command) -> Result<bool, TopoError> {
    let Command::Check { names, m, n, seed, list } = cmd else { unreachable!() };
    if list {
        for name in check_names() {
            println!("{name}");
        }
        return Ok(true);
    }
    let results = run_checks(&names, &CheckParams { m, n, seed })?;
    for r in &results {
        println!("{}", r.line());
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} checks passed", results.len());
    Ok(passed == results.len())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        cmd @ Command::Eval { .. } => match eval(cmd) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => report_error(&e),
        },
        cmd @ Command::Check { .. } => match check(cmd) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::FAILURE,
            Err(e) => report_error(&e),
        },
    }
}
