mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use trigonal_core::census::{self, incidence_per_weight, run_census, CensusResult, Strategy};
use trigonal_core::detcheck::{self, DetCase};
use trigonal_core::par::Exec;
use trigonal_core::plane::{Family, FamilyKind};
use trigonal_core::sieve::run_sieve;
use trigonal_core::typetables::{self, Char};

use verify::{run_verify, theorem_polynomial, VerifyOptions};

/// Exact point counts of the moduli space of trigonal curves of genus five
/// over finite fields, with the brute-force census that confirms them.
#[derive(Debug, Parser)]
#[command(name = "trigonal", version)]
struct Cli {
    /// Worker threads; 0 uses every hardware thread and 1 runs sequentially.
    #[arg(long, global = true, env = "TRIGONAL_THREADS", default_value_t = 0)]
    threads: usize,

    /// Do not print progress to standard error.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print q^11 + q^10 - q^8 + 1, or its value at --q.
    Formula {
        /// Field size at which to evaluate the polynomial.
        #[arg(long)]
        q: Option<u64>,
        /// Also write the result as JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Profile the singular locus of every curve in a family and print the histogram as JSON.
    Census(CensusArgs),
    /// Run the rank-based sieve for w = 0..5 and compare with the closed forms.
    Sieve {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = FamilyArg::All)]
        family: FamilyArg,
        /// Census JSON files (from `census`) whose incidence totals are compared per weight.
        #[arg(long, num_args = 1..)]
        census: Vec<PathBuf>,
        /// Write the JSON here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate the singularity-type tables and print their totals.
    Tables {
        /// Read the tables from this JSON-lines file instead of the built-in copy.
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Write the JSON here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the three determinant identities on a grid modulo three primes.
    Det {
        #[arg(long = "case", value_enum, default_value_t = CaseArg::All)]
        case: CaseArg,
        /// Write the JSON here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the whole verification pipeline at q and print a JSON report.
    Verify {
        #[arg(long, default_value_t = 2)]
        q: u64,
        /// Allow the full census at q = 3 (about half an hour on one core).
        #[arg(long)]
        extended: bool,
        /// Use these type tables instead of the built-in copy.
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Directory for census checkpoints, so an interrupted run can resume.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Write the JSON here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct CensusArgs {
    /// Field size (a prime; 2 and 3 are the validated cases).
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum, default_value_t = FamilyArg::All)]
    family: FamilyArg,
    /// Curves per work block; checkpoints are written at block granularity.
    #[arg(long, default_value_t = census::DEFAULT_BLOCK)]
    block: u64,
    /// Checkpoint file, resumed when present. With --family all, one file per family is used
    /// with the family name appended.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Singular-locus strategy [default: checked at q = 2, eliminate otherwise].
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Split,
    Nonsplit,
    Cusp,
    All,
}

impl FamilyArg {
    fn kinds(self) -> Vec<FamilyKind> {
        match self {
            FamilyArg::Split => vec![FamilyKind::Split],
            FamilyArg::Nonsplit => vec![FamilyKind::NonSplit],
            FamilyArg::Cusp => vec![FamilyKind::Cusp],
            FamilyArg::All => FamilyKind::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Scan,
    Eliminate,
    Checked,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Scan => Strategy::Scan,
            StrategyArg::Eliminate => Strategy::Eliminate,
            StrategyArg::Checked => Strategy::Checked,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Genpos5,
    Lines,
    Cusp4,
    All,
}

enum CliError {
    Usage(String),
    Failure(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Failure(e)
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

fn emit(value: &Value, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn family(kind: FamilyKind, q: u64) -> Result<Family, CliError> {
    Family::new(kind, q).map_err(|e| usage(e.to_string()))
}

fn cmd_formula(q: Option<u64>, out: Option<&Path>) -> Result<bool, CliError> {
    let poly = theorem_polynomial();
    let value = q.map(|q| poly.eval_int(q as i64).to_integer());
    match &value {
        Some(v) => println!("{v}"),
        None => println!("{poly}"),
    }
    if let Some(path) = out {
        let v = json!({ "polynomial": poly.to_string(), "q": q, "value": value.map(|v| v.to_string()) });
        emit(&v, Some(path))?;
    }
    Ok(true)
}

fn cmd_census(exec: Exec, quiet: bool, args: &CensusArgs) -> Result<bool, CliError> {
    let CensusArgs { q, family: which, block, ref checkpoint, strategy, ref out } = *args;
    let (checkpoint, out) = (checkpoint.as_deref(), out.as_deref());
    let strategy: Option<Strategy> = strategy.map(Into::into);
    if block == 0 {
        return Err(usage("--block must be positive"));
    }
    let kinds = which.kinds();
    let mut results = Vec::new();
    for kind in &kinds {
        let fam = family(*kind, q)?;
        let mut options = verify::census_options(exec, *kind, q, None, quiet);
        options.block = block;
        options.strategy = strategy;
        options.checkpoint = checkpoint.map(|p| {
            if kinds.len() > 1 {
                let mut name = p.as_os_str().to_owned();
                name.push(format!(".{kind}"));
                PathBuf::from(name)
            } else {
                p.to_path_buf()
            }
        });
        let result = run_census(&fam, &options).map_err(|e| anyhow!(e))?;
        if !quiet {
            eprintln!("{kind} q={q}: {} curves, {} smooth away from P", result.total, result.smooth_count());
        }
        results.push(result);
    }
    let value = if results.len() == 1 {
        serde_json::to_value(&results[0]).map_err(|e| anyhow!(e))?
    } else {
        let count = census::trigonal_count(&results).map_err(|e| anyhow!(e))?;
        if !quiet {
            eprintln!("T_5(F_{q}) = {count}");
        }
        json!({ "q": q, "trigonal_count": count.to_string(), "families": results })
    };
    emit(&value, out)?;
    Ok(true)
}

fn cmd_sieve(
    exec: Exec,
    q: u64,
    which: FamilyArg,
    census_paths: &[PathBuf],
    out: Option<&Path>,
) -> Result<bool, CliError> {
    let censuses: Vec<CensusResult> = census_paths
        .iter()
        .map(|p| CensusResult::load(p).with_context(|| format!("cannot use census file {}", p.display())))
        .collect::<anyhow::Result<_>>()?;
    let mut reports = Vec::new();
    for kind in which.kinds() {
        family(kind, q)?;
        let mut report = run_sieve(kind, q, exec).map_err(|e| anyhow!(e))?;
        if let Some(c) = censuses.iter().find(|c| c.family == kind && c.q == q) {
            report.oracle_totals = Some(incidence_per_weight(c));
        }
        eprintln!(
            "sieve {kind} q={q}: total {} (closed form {}){}",
            report.total,
            report.closed_form_total,
            match report.oracle_matches() {
                Some(true) => ", census oracle agrees",
                Some(false) => ", census oracle DISAGREES",
                None => "",
            }
        );
        reports.push(report);
    }
    let pass = reports.iter().all(|r| r.pass());
    emit(&serde_json::to_value(&reports).map_err(|e| anyhow!(e))?, out)?;
    Ok(pass)
}

fn cmd_tables(tables: Option<&Path>, out: Option<&Path>) -> Result<bool, CliError> {
    let rows = match tables {
        Some(p) => typetables::load_rows_from_path(p),
        None => typetables::load_rows(),
    }
    .map_err(|e| anyhow!(e))?;
    let verdict = typetables::validate_all(&rows);
    if let Err(e) = &verdict {
        eprintln!("table check failed: {e}");
    }
    let value = json!({
        "rows": rows.len(),
        "valid": verdict.is_ok(),
        "error": verdict.as_ref().err().map(|e| e.to_string()),
        "total_odd": typetables::table_total(&rows, Char::Odd).to_string(),
        "total_two": typetables::table_total(&rows, Char::Two).to_string(),
    });
    emit(&value, out)?;
    Ok(verdict.is_ok())
}

fn cmd_det(exec: Exec, which: CaseArg, out: Option<&Path>) -> Result<bool, CliError> {
    let cases = match which {
        CaseArg::Genpos5 => vec![DetCase::GenPos5],
        CaseArg::Lines => vec![DetCase::Lines],
        CaseArg::Cusp4 => vec![DetCase::Cusp4],
        CaseArg::All => DetCase::ALL.to_vec(),
    };
    let reports: Vec<_> = cases.into_iter().map(|c| detcheck::verify_identity(c, exec)).collect();
    for r in &reports {
        eprintln!("{}: {}", r.case.name(), if r.pass { "identity holds" } else { "FAILED" });
    }
    let pass = reports.iter().all(|r| r.pass);
    emit(&serde_json::to_value(&reports).map_err(|e| anyhow!(e))?, out)?;
    Ok(pass)
}

fn cmd_verify(quiet: bool, options: VerifyOptions, out: Option<&Path>) -> Result<bool, CliError> {
    if !(options.q == 2 || options.q == 3) {
        return Err(usage(format!("verify supports q = 2 and q = 3, not {}", options.q)));
    }
    if options.q == 3 && !options.extended {
        return Err(usage("verify at q = 3 runs the full census and requires --extended"));
    }
    if let Some(dir) = &options.checkpoint_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let report = run_verify(&options);
    emit(&serde_json::to_value(&report).map_err(|e| anyhow!(e))?, out)?;
    if !quiet || !report.pass {
        for failed in report.failures() {
            eprintln!("FAILED {}: expected {}, got {}", failed.name, failed.expected, failed.actual);
        }
        let verdict = if report.pass { "all checks passed" } else { "some checks FAILED" };
        eprintln!("{verdict} in {:.1}s", report.seconds);
        eprintln!("{}", report.summary);
    }
    Ok(report.pass)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let exec = Exec::with_threads(cli.threads);
    match cli.command {
        Command::Formula { q, out } => cmd_formula(q, out.as_deref()),
        Command::Census(args) => cmd_census(exec, cli.quiet, &args),
        Command::Sieve { q, family, census, out } => cmd_sieve(exec, q, family, &census, out.as_deref()),
        Command::Tables { tables, out } => cmd_tables(tables.as_deref(), out.as_deref()),
        Command::Det { case, out } => cmd_det(exec, case, out.as_deref()),
        Command::Verify { q, extended, tables, checkpoint, out } => {
            let options = VerifyOptions { q, extended, exec, tables, checkpoint_dir: checkpoint, quiet: cli.quiet };
            cmd_verify(cli.quiet, options, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
