use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use finite_triple::config::{build_triple, parse_config, TripleConfig};
use finite_triple::morita::{clifford, clifford_commutant};
use finite_triple::report::{compare_expect, parse_expect, run_all, run_plan, VerificationReport};
use finite_triple::subspace::{Field, OperatorSubspace};

#[derive(Parser)]
#[command(name = "ftriple", version, about = "Verify finite real spectral triples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and print the report.
    Verify {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
        /// Overrides the config tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Expected-status manifest; exit 1 on any mismatch.
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Commutant dimensions of the algebra and its opposite.
    Commutant { config: PathBuf },
    /// Clifford algebra and commutant dimensions.
    Clifford {
        config: PathBuf,
        /// Adjoin the grading.
        #[arg(long)]
        even: bool,
    },
    /// Order conditions, grading relations and the sign table.
    Axioms {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        report: Format,
    },
}

enum Failure {
    /// Unreadable or invalid input.
    Input(String),
    /// Computation error or manifest mismatch.
    Check(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, tol: Option<f64>) -> Result<TripleConfig, Failure> {
    let mut cfg = parse_config(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(Failure::Input(format!("--tol must be positive, got {t}")));
        }
        cfg.tol = t;
    }
    Ok(cfg)
}

fn emit(report: &VerificationReport, format: Format) {
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => print!("{}", report.to_json_string()),
    }
}

fn check_err(e: finite_triple::Error) -> Failure {
    Failure::Check(e.to_string())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify { config, report, tol, expect } => {
            let cfg = load(&config, tol)?;
            let manifest = match &expect {
                Some(p) => Some(parse_expect(&read(p)?).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?),
                None => None,
            };
            let rep = run_all(&cfg);
            emit(&rep, report);
            if let Some(m) = manifest {
                let bad = compare_expect(&rep, &m);
                if !bad.is_empty() {
                    return Err(Failure::Check(format!("{} mismatch(es):\n  {}", bad.len(), bad.join("\n  "))));
                }
                eprintln!("all checks match the manifest");
            }
        }
        Command::Axioms { config, report } => {
            let cfg = load(&config, None)?;
            emit(&run_plan(&cfg, |name| name.starts_with("axioms.")), report);
        }
        Command::Commutant { config } => {
            let t = build_triple(&load(&config, None)?).map_err(check_err)?;
            let c = t.commutants().map_err(check_err)?;
            let span = |ops| OperatorSubspace::span_of(t.dim(), ops, Field::Complex, t.tol()).map_err(check_err);
            let alg = span(t.algebra())?;
            let opp = span(t.opposite())?;
            let center = opp.intersect(&c.opposite).map_err(check_err)?;
            println!("dim A_C          {}", alg.dim());
            println!("dim A'           {}", c.algebra.dim());
            println!("dim (A°)'        {}", c.opposite.dim());
            println!("dim A' ∩ (A°)'   {}", c.intersection.dim());
            println!("dim Z((A°)_C)    {}", center.dim());
        }
        Command::Clifford { config, even } => {
            let t = build_triple(&load(&config, None)?).map_err(check_err)?;
            let cl = clifford(&t, even).map_err(check_err)?;
            let comm = clifford_commutant(&t, even).map_err(check_err)?;
            let opp = OperatorSubspace::span_of(t.dim(), t.opposite(), Field::Complex, t.tol()).map_err(check_err)?;
            let label = if even { "Cl_e" } else { "Cl_o" };
            println!("dim {label}          {}", cl.dim());
            println!("dim {label}'         {}", comm.dim());
            println!("dim (A°)_C        {}", opp.dim());
            println!("{label}' = (A°)_C    {}", comm.equals(&opp).map_err(check_err)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
