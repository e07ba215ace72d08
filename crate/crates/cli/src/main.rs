//! `concom`: concomitants of a single bivector, the verification suite,
//! time-series processing and the completeness table.
//!
//! Exit codes: 0 success, 1 property failure, 2 malformed input or i/o
//! failure, 3 non-antisymmetric `F` matrix, 4 unknown or empty selection.

mod document;
mod error;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use concom_core::concomitants::Concomitant;
use concom_core::signal::{self, SeriesInput};
use concom_core::verify::{completeness_report, run_suite, SuiteConfig, COUNT_TABLE};
use concom_core::{Backend, Complex64, GaussianRational};

use document::{build_document, parse_selection, BivectorDocument};
use error::CliError;

const DEFAULT_SIGNAL_COLUMNS: &str = "T00,T10,T20,T30,Q00,Q10,Q20,Q30,Lplus,Lminus";

#[derive(Parser)]
#[command(name = "concom", version, about = "Hermitian bilinear concomitants of complex bivectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Concomitants of one bivector read from a JSON document.
    Compute(ComputeArgs),
    /// Run the property suite and write a JSON report.
    Verify(VerifyArgs),
    /// Concomitant time series from a sampled field CSV.
    Signal(SignalArgs),
    /// Measured independent-component counts next to the expected table.
    Table,
}

#[derive(Args)]
struct ComputeArgs {
    /// Input document; `-` reads standard input.
    input: PathBuf,
    /// Exact Gaussian-rational arithmetic.
    #[arg(long)]
    exact: bool,
    /// Arithmetic backend; overrides the document hint.
    #[arg(long, env = "CONCOM_BACKEND")]
    backend: Option<Backend>,
    /// Comma-separated concomitants (default: all).
    #[arg(long)]
    select: Option<String>,
    /// Also record the duality sign of each selected concomitant on this input.
    #[arg(long)]
    duality_signs: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, env = "CONCOM_BACKEND", default_value = "rational")]
    backend: Backend,
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    /// Where to write the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, hide = true)]
    flip_epsilon: bool,
}

#[derive(Args)]
struct SignalArgs {
    /// Input CSV; `-` reads standard input.
    input: PathBuf,
    /// Comma-separated columns.
    #[arg(long, default_value = DEFAULT_SIGNAL_COLUMNS)]
    select: String,
    /// Use the samples as given instead of taking the analytic signal.
    #[arg(long)]
    no_hilbert: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read(path)?)
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place; without a path, writes to standard output.
fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        return Ok(out.flush()?);
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

fn compute_cmd(args: &ComputeArgs) -> Result<(), CliError> {
    let text = String::from_utf8(read_input(&args.input)?).map_err(|e| CliError::Parse(e.to_string()))?;
    let doc = BivectorDocument::parse(&text)?;
    let selection = match &args.select {
        Some(s) => parse_selection(s)?,
        None => Concomitant::ALL.to_vec(),
    };
    let backend = if args.exact { Backend::Rational } else { args.backend.or(doc.backend).unwrap_or(Backend::Float) };
    let out = match backend {
        Backend::Rational => build_document(&doc.bivector::<GaussianRational>()?, &selection, args.duality_signs),
        Backend::Float => build_document(&doc.bivector::<Complex64>()?, &selection, args.duality_signs),
    };
    write_output(args.output.as_deref(), out.to_json().as_bytes())
}

fn verify_cmd(args: &VerifyArgs) -> Result<(), CliError> {
    let config = SuiteConfig {
        seed: args.seed,
        trials: args.trials,
        backend: args.backend,
        tolerance: args.tolerance,
        flip_epsilon: args.flip_epsilon,
    };
    let report = run_suite(&config);
    for p in &report.properties {
        let status = if p.passed { "PASS" } else { "FAIL" };
        print!("{status} {:<28} trials={:<5} worst={:.3e}", p.name, p.trials, p.worst_residual);
        match &p.first_failure {
            Some(why) => println!("  {why}"),
            None => println!(),
        }
    }
    let c = &report.completeness;
    println!("ranks {:?} union {} real-restriction {}", c.table_ranks(), c.union.rank, c.real_restriction.rank);
    let signs: Vec<String> = report.duality_signs.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    println!("duality signs {}", signs.join(" "));
    if let Some(path) = &args.report {
        let mut json = serde_json::to_string_pretty(&report).expect("serializable");
        json.push('\n');
        write_output(Some(path), json.as_bytes())?;
    }
    let failed = report.failed_properties().len();
    if failed > 0 {
        return Err(CliError::PropertyFailure(failed));
    }
    Ok(())
}

fn signal_cmd(args: &SignalArgs) -> Result<(), CliError> {
    let selection = signal::parse_selection(&args.select)?;
    let input = signal::read_csv(&read_input(&args.input)?[..])?;
    let analytic = match input {
        SeriesInput::Complex(series) => series,
        SeriesInput::Real(series) if args.no_hilbert => {
            let bivectors = (0..series.len())
                .map(|i| {
                    let c = |v: [f64; 3]| v.map(|x| Complex64::new(x, 0.0));
                    concom_core::Bivector::new(c(series.e()[i]), c(series.b()[i]))
                })
                .collect();
            signal::AnalyticBivectorSeries::new(series.times().to_vec(), bivectors)?
        }
        SeriesInput::Real(series) => signal::analytic_signal(&series),
    };
    let out = signal::concomitant_series(&analytic, &selection)?;
    let mut buf = Vec::new();
    signal::write_series_csv(&out, &mut buf)?;
    write_output(args.output.as_deref(), &buf)
}

fn table_cmd() -> Result<(), CliError> {
    let c = completeness_report().map_err(|e| CliError::Parse(e.to_string()))?;
    println!("{:<20} {:>7} {:>9} {:>9}", "concomitant", "valence", "expected", "measured");
    for (row, measured) in COUNT_TABLE.iter().zip(c.table_ranks()) {
        println!("{:<20} {:>7} {:>9} {:>9}", row.symbol, row.valence, row.expected, measured);
    }
    println!("{:<20} {:>7} {:>9} {:>9}", "total", "", c.union.expected, c.union.rank);
    println!("{:<20} {:>7} {:>9} {:>9}", "real bivectors", "", c.real_restriction.expected, c.real_restriction.rank);
    for alt in &c.alternatives {
        println!("{:<20} {:>7} {:>9} {:>9}", format!("set {},{}", alt.members[4], alt.members[5]), "", alt.expected, alt.rank);
    }
    for raw in &c.raw_valence4 {
        println!("{:<20} {:>7} {:>9} {:>9}", raw.concomitant, 4, raw.expected, raw.measured);
    }
    println!("counts: {}", c.definition);
    if c.passed() {
        Ok(())
    } else {
        Err(CliError::PropertyFailure(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(a) => compute_cmd(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Signal(a) => signal_cmd(a),
        Command::Table => table_cmd(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("concom: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
