//! Command-line front end: finiteness certification, matrix orders,
//! unit-circle polynomial enumeration, building balls and fixed-vertex
//! search, and the oracle self-test suites.
//!
//! Exit codes: 0 success (certify: finite), 1 infinite / mismatch,
//! 2 inconclusive, 64 malformed input, 65 precondition violation.

use clap::{Parser, Subcommand};
use matfin::building::{self, LatticeVertex};
use matfin::certify::{self, DEFAULT_CLOSURE_CAP};
use matfin::exactnum::relevant_valuations;
use matfin::grouporder;
use matfin::kronecker;
use matfin::selftest;
use matfin::{Error, SquareMatrix, Valuation};
use num_traits::ToPrimitive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_MALFORMED: u8 = 64;
const EXIT_PRECONDITION: u8 = 65;

/// Matrix dimension above which the CLI warns that runtimes grow quickly.
const DIMENSION_WARNING: usize = 8;

/// Projected ball size above which the CLI warns before expanding.
const BALL_SIZE_WARNING: u64 = 100_000;

#[derive(Parser)]
#[command(
    name = "matfin",
    version,
    about = "Exact certification of matrix-group finiteness, matrix orders, \
             unit-circle polynomial enumeration, and p-adic building models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify finiteness of the matrix group generated by a file of
    /// generators; prints the certificate JSON.
    ///
    /// Exit status: 0 finite, 1 infinite, 2 inconclusive.
    Certify {
        /// Generator file: {"field":…, "dim":…, "generators":[…]}
        file: PathBuf,
        /// BFS closure cap (distinct elements).
        #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
        cap: usize,
        /// Record Cayley edges in the closure report.
        #[arg(long)]
        cayley: bool,
        /// Write the Cayley graph as DOT to this file (implies --cayley).
        #[arg(long, value_name = "FILE")]
        cayley_dot: Option<PathBuf>,
    },
    /// Exact order of a single matrix; prints the order result JSON.
    Order {
        /// Matrix file: {"field":…, "dim":…, "rows":[…]}
        file: PathBuf,
    },
    /// Enumerate all monic integer polynomials of one degree with every
    /// root on the unit circle, or factor one polynomial into cyclotomics.
    Kronecker {
        /// Degree to enumerate (omit when using --factor).
        degree: Option<usize>,
        /// products (fast), bounds (grid oracle), or both (exit 1 on mismatch).
        #[arg(long, default_value = "products")]
        method: String,
        /// Factor one monic integer polynomial, e.g. "X^4 - 1"; exits 1
        /// when a non-cyclotomic factor remains.
        #[arg(long, value_name = "POLY", conflicts_with = "degree")]
        factor: Option<String>,
    },
    /// Lattice-class building model over Q with one p-adic valuation.
    Building {
        #[command(subcommand)]
        sub: BuildingCommand,
    },
    /// Run the oracle-equivalence and invariant suites.
    Selftest,
}

#[derive(Subcommand)]
enum BuildingCommand {
    /// Expand the ball of a given radius around the standard vertex.
    Ball {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        r: usize,
        /// Also write the ball as DOT (vertices colored by type).
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Search a ball for vertices fixed by every generator.
    Fix {
        /// Generator file over Q.
        file: PathBuf,
        #[arg(short)]
        r: usize,
        /// Valuation prime; inferred from generator denominators when omitted.
        #[arg(short)]
        p: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("matfin: {}", failure.message);
            ExitCode::from(failure.exit)
        }
    }
}

struct Failure {
    exit: u8,
    message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure {
            exit: EXIT_MALFORMED,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure {
            exit: EXIT_PRECONDITION,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::malformed(e.to_string()),
            _ => Failure::precondition(e.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::precondition(format!("cannot write {}: {e}", path.display())))
}

/// Write a line to stdout, dying quietly (like the default SIGPIPE
/// disposition) when the downstream reader has gone away.
fn emit_line(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout();
    if writeln!(out, "{text}").is_err() || out.flush().is_err() {
        std::process::exit(141); // 128 + SIGPIPE
    }
}

fn print_json(value: &serde_json::Value) {
    emit_line(&serde_json::to_string_pretty(value).expect("serializable"));
}

fn warn_dimension(dim: usize) {
    if dim > DIMENSION_WARNING {
        eprintln!(
            "matfin: warning: dimension {dim} exceeds {DIMENSION_WARNING}; \
             exact arithmetic may be slow"
        );
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Certify {
            file,
            cap,
            cayley,
            cayley_dot,
        } => {
            let set = certify::parse_generator_file(&read_file(&file)?)?;
            warn_dimension(set.dim);
            let record_edges = cayley || cayley_dot.is_some();
            let certificate = certify::certify_finiteness(&set.generators, cap, record_edges)?;
            if let Some(dot_path) = cayley_dot {
                match certificate
                    .closure
                    .as_ref()
                    .and_then(grouporder::cayley_dot)
                {
                    Some(dot) => write_file(&dot_path, &dot)?,
                    None => eprintln!(
                        "matfin: warning: no finite Cayley graph to export; skipping {}",
                        dot_path.display()
                    ),
                }
            }
            print_json(&certificate.to_json());
            Ok(ExitCode::from(certificate.verdict.exit_code() as u8))
        }
        Command::Order { file } => {
            let matrix: SquareMatrix = serde_json::from_str(&read_file(&file)?)
                .map_err(|e| Failure::malformed(format!("{}: {e}", file.display())))?;
            warn_dimension(matrix.dim());
            let result = grouporder::order(&matrix)?;
            print_json(&serde_json::to_value(&result).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Kronecker {
            degree,
            method,
            factor,
        } => {
            if let Some(text) = factor {
                return run_kronecker_factor(&text);
            }
            let degree = degree.ok_or_else(|| {
                Failure::malformed("kronecker needs a degree or --factor <POLY>")
            })?;
            match method.as_str() {
            "products" => {
                let set = kronecker::enumerate_by_products(degree)?;
                print_json(&serde_json::to_value(&set).expect("serializable"));
                Ok(ExitCode::SUCCESS)
            }
            "bounds" => {
                let set = kronecker::enumerate_by_bounds(degree)?;
                print_json(&serde_json::to_value(&set).expect("serializable"));
                Ok(ExitCode::SUCCESS)
            }
            "both" => {
                let products = kronecker::enumerate_by_products(degree)?;
                let bounds = kronecker::enumerate_by_bounds(degree)?;
                if products.same_set(&bounds) {
                    print_json(&serde_json::to_value(&products).expect("serializable"));
                    Ok(ExitCode::SUCCESS)
                } else {
                    eprintln!(
                        "matfin: enumeration mismatch at degree {degree}: \
                         products found {}, bounds found {}",
                        products.count, bounds.count
                    );
                    Ok(ExitCode::FAILURE)
                }
            }
                other => Err(Failure::malformed(format!(
                    "unknown method {other:?}; expected products, bounds, or both"
                ))),
            }
        }
        Command::Building { sub } => run_building(sub),
        Command::Selftest => {
            let results = selftest::run_all(|r| {
                let tag = if r.pass { "PASS" } else { "FAIL" };
                emit_line(&format!("[{tag}] {} — {}", r.name, r.detail));
            });
            let failed = results.iter().filter(|r| !r.pass).count();
            if failed == 0 {
                emit_line(&format!("selftest: all {} suites passed", results.len()));
                Ok(ExitCode::SUCCESS)
            } else {
                emit_line(&format!("selftest: {failed} of {} suites FAILED", results.len()));
                Ok(ExitCode::FAILURE)
            }
        }
    }
}

fn run_kronecker_factor(text: &str) -> Result<ExitCode, Failure> {
    use std::str::FromStr;
    let poly = matfin::MonicIntPoly::from_str(text)?;
    match kronecker::cyclotomic_factorization_auto(&poly) {
        Ok(indices) => {
            print_json(&serde_json::json!({
                "poly": poly.to_string(),
                "coeffs": serde_json::to_value(&poly).expect("serializable"),
                "cyclotomic_indices": indices,
                "order_lcm": indices.iter().fold(1u64, |acc, (m, _)| {
                    num_integer::Integer::lcm(&acc, m)
                }),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("matfin: {e}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn run_building(sub: BuildingCommand) -> Result<ExitCode, Failure> {
    match sub {
        BuildingCommand::Ball { p, d, r, dot } => {
            let projected = building::projected_ball_size(p, d, r);
            if projected.to_u64().is_none_or(|n| n > BALL_SIZE_WARNING) {
                eprintln!(
                    "matfin: warning: projected ball size {projected} exceeds \
                     {BALL_SIZE_WARNING}; this may take a while"
                );
            }
            let center = LatticeVertex::standard(p, d)?;
            let ball = building::ball(&center, r);
            if let Some(dot_path) = dot {
                write_file(&dot_path, &ball.to_dot())?;
            }
            print_json(&ball.to_json());
            Ok(ExitCode::SUCCESS)
        }
        BuildingCommand::Fix { file, r, p } => {
            let set = certify::parse_generator_file(&read_file(&file)?)?;
            if set.field != matfin::Field::Q {
                return Err(Failure::precondition(format!(
                    "building fix requires generators over Q, found {}",
                    set.field
                )));
            }
            let p = match p {
                Some(p) => p,
                None => infer_prime(&set.generators)?,
            };
            let center = LatticeVertex::standard(p, set.dim)?;
            let ball = building::ball(&center, r);
            let report = building::fixed_vertices(&set.generators, &ball)?;
            print_json(&report.to_json(&ball));
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Infer the valuation prime from the generators' denominators; unambiguous
/// only when exactly one prime shows up.
fn infer_prime(gens: &[SquareMatrix]) -> Result<u64, Failure> {
    let entries: Vec<_> = gens.iter().flat_map(|g| g.entries().iter().cloned()).collect();
    let valuations = relevant_valuations(&entries)?;
    let primes: Vec<u64> = valuations
        .iter()
        .filter_map(|v| match v {
            Valuation::PAdic { q } => q.to_u64(),
            _ => None,
        })
        .collect();
    match primes.as_slice() {
        [p] => Ok(*p),
        [] => Err(Failure::precondition(
            "generators have integer entries; pass -p to choose the valuation prime",
        )),
        many => Err(Failure::precondition(format!(
            "ambiguous valuation prime (denominators involve {many:?}); pass -p"
        ))),
    }
}
