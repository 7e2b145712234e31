//! Command-line front end: `germ`, `curve`, `verify` and `catalog`.

pub mod catalog;
pub mod parse;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::inequalities::{analyze_germ, certify, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FAILS: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "curvesing",
    version,
    about = "Exact invariants and inequalities for plane curve singularities"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include the resolution dual graphs in the output.
    #[arg(long, global = true)]
    pub dump_graph: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one singular point, e.g. "(2; 3)" or a file with one singularity block.
    Germ { input: String },
    /// Certify a curve given as a curve file or a catalog name.
    Curve { input: String },
    /// Run a seeded randomized property suite.
    Verify {
        /// One of prop1, lemma2, prop3, lemma4, lemma5, claim, sharpness.
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// List the built-in curves, or certify one of them.
    Catalog { name: Option<String> },
}

struct Output {
    body: String,
    code: i32,
}

fn render(format: Format, value: Value, text: String, code: i32) -> Output {
    let body = match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(&value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text,
    };
    Output { body, code }
}

fn read_input(input: &str) -> Result<String, String> {
    if Path::new(input).is_file() {
        std::fs::read_to_string(input).map_err(|e| format!("cannot read {input}: {e}"))
    } else {
        Ok(input.to_string())
    }
}

fn run_germ(cli: &Cli, input: &str) -> Result<Output, String> {
    let text = read_input(input)?;
    let germ = parse::parse_germ(&text).map_err(|e| e.to_string())?;
    let a = analyze_germ(&germ).map_err(|e| e.to_string())?;
    let code = if a.verdicts.iter().any(|v| v.status == Status::Fails) {
        EXIT_FAILS
    } else {
        EXIT_OK
    };
    Ok(render(
        cli.format,
        report::germ_json(&a, cli.dump_graph),
        report::germ_text(&a, cli.dump_graph),
        code,
    ))
}

fn run_curve(cli: &Cli, input: &str) -> Result<Output, String> {
    let spec = match catalog::lookup(input) {
        Some(s) => s,
        None => {
            if !Path::new(input).is_file() {
                return Err(format!("{input:?} is neither a catalog name nor a readable file"));
            }
            parse::parse_curve(&read_input(input)?).map_err(|e| format!("{input}: {e}"))?
        }
    };
    let r = certify(&spec).map_err(|e| e.to_string())?;
    let code = if r.any_failure() { EXIT_FAILS } else { EXIT_OK };
    Ok(render(
        cli.format,
        report::curve_json(&r, cli.dump_graph),
        report::curve_text(&r, cli.dump_graph),
        code,
    ))
}

fn run_verify(cli: &Cli, suite: &str, seed: u64, count: usize) -> Result<Output, String> {
    let o = suites::run_suite(suite, seed, count).map_err(|e| e.to_string())?;
    let code = if o.passed() { EXIT_OK } else { EXIT_FAILS };
    Ok(render(cli.format, o.to_json(), o.to_string(), code))
}

fn run_catalog(cli: &Cli, name: Option<&str>) -> Result<Output, String> {
    if let Some(n) = name {
        if catalog::lookup(n).is_none() {
            return Err(format!("no catalog entry {n:?}"));
        }
        return run_curve(cli, n);
    }
    let entries: Vec<Value> = catalog::ENTRIES
        .iter()
        .map(|e| json!({"name": e.name, "description": e.description}))
        .collect();
    let mut text = String::new();
    for e in &catalog::ENTRIES {
        text.push_str(&format!("{:<10} {}\n", e.name, e.description));
    }
    Ok(render(
        cli.format,
        json!({"schema": "curvesing.catalog/1", "entries": entries}),
        text,
        EXIT_OK,
    ))
}

/// Runs the command line and returns the process exit code. Output goes to
/// `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Germ { input } => run_germ(&cli, input),
        Command::Curve { input } => run_curve(&cli, input),
        Command::Verify { suite, seed, count } => run_verify(&cli, suite, *seed, *count),
        Command::Catalog { name } => run_catalog(&cli, name.as_deref()),
    };
    match result {
        Ok(o) => {
            let _ = out.write_all(o.body.as_bytes());
            o.code
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}
