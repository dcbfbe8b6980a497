//! `fsing': exact certificates around strong F-regularity of surface
//! singularities. Subcommands consume either a graph text file or
//! inline numeric arguments and print a report ending in a single
//! machine-readable `RESULT:` line.

mod commands;
mod graph_io;
mod report;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use report::{Format, Report};

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("`{}` is not an integer", s))?;
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(format!("{} is not prime", p));
    }
    Ok(p)
}

#[derive(Parser)]
#[command(
    name = "fsing",
    version,
    about = "Exact verdicts and certificates for F-regularity of klt surface singularities",
    after_help = "Exit codes: 0 definitive verdict; 2 indeterminate or undecided; \
3 graph parse error; 4 graph invariant violation; 5 computation refused; \
6 io error; 64 usage error."
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identify the shape class of a resolution graph
    #[command(name = "classify")]
    Classify(GraphCmdArgs),
    /// Exact discrepancies of the exceptional curves
    #[command(name = "discrepancies")]
    Discrepancies(GraphCmdArgs),
    /// Strong F-regularity verdict at a chosen characteristic
    #[command(name = "sfr")]
    Sfr(SfrArgs),
    /// Stepwise contraction plan with nefness checks and index bounds
    #[command(name = "tame-plan")]
    TamePlan(TamePlanArgs),
    /// Frobenius splitting of weighted point configurations on the line
    #[command(name = "p1split")]
    P1split(P1Args),
    /// Differential form dimension tables and exactness identities
    #[command(name = "cartier")]
    Cartier(CartierArgs),
    /// Orbifold symmetric power ranks and filtration identities
    #[command(name = "campana")]
    Campana(CampanaArgs),
    /// Coefficient inequality certificates for double point stars
    #[command(name = "rdpcert")]
    Rdpcert(RdpArgs),
}

#[derive(Args)]
struct GraphCmdArgs {
    /// Graph file in the line format; `-` reads standard input
    #[arg(value_name = "PATH", required_unless_present = "seed", conflicts_with = "seed")]
    path: Option<String>,
    /// Take sample graph N from the built-in catalogue instead of a
    /// file; values past the catalogue length wrap around with a
    /// deterministic relabeling
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Print the canonical serialization of the graph before the report
    #[arg(long)]
    emit_graph: bool,
}

#[derive(Args)]
struct SfrArgs {
    #[command(flatten)]
    graph: GraphCmdArgs,
    /// Characteristic (a prime)
    #[arg(long, value_parser = parse_prime)]
    p: u64,
    /// Treat every exceptional curve as geometrically reduced
    #[arg(long)]
    assume_reduced: bool,
}

#[derive(Args)]
struct TamePlanArgs {
    #[command(flatten)]
    graph: GraphCmdArgs,
    /// Characteristic (a prime)
    #[arg(long, value_parser = parse_prime)]
    p: u64,
}

#[derive(Args)]
struct P1Args {
    /// Characteristic (a prime)
    #[arg(long, value_parser = parse_prime)]
    p: u64,
    /// Weights of the marked points: three values, or four for the
    /// one-parameter family
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<u64>,
    /// Fourth point of the four-point configuration, as an integer mod p
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<i64>,
    /// Also run the finite Frobenius search and re-verify its witness
    #[arg(long)]
    oracle: bool,
    /// Largest Frobenius level the search inspects
    #[arg(long, default_value_t = 3)]
    emax: u32,
}

#[derive(Args)]
struct CartierArgs {
    /// Characteristic (a prime)
    #[arg(long, value_parser = parse_prime)]
    p: u64,
    /// Work over the extension field of this order (a power of p)
    #[arg(long)]
    q: Option<u64>,
    /// Number of variables
    #[arg(long)]
    vars: usize,
    /// Inclusive bound on total monomial degree
    #[arg(long)]
    degmax: u32,
    /// Number of higher Cartier levels to verify
    #[arg(long)]
    levels: u32,
    /// Restrict the dimension table to this form degree
    #[arg(long)]
    i: Option<u32>,
}

#[derive(Args)]
struct CampanaArgs {
    /// Number of boundary coordinates
    #[arg(long)]
    n: u32,
    /// Number of coordinates in the distinguished block; enables the
    /// filtration report
    #[arg(long)]
    split: Option<u32>,
    /// Boundary coefficients in (0, 1], comma-separated (e.g. 1/2,2/3)
    #[arg(long)]
    coeffs: Option<String>,
    /// Pole degree bound
    #[arg(long)]
    i: u32,
    /// Symmetric degree bound
    #[arg(long)]
    m: u32,
}

#[derive(Args)]
struct RdpArgs {
    /// Branch determinant triple, e.g. 2,3,5
    #[arg(long = "type", value_name = "D1,D2,D3", value_delimiter = ',', required = true)]
    dets: Vec<u64>,
    /// Inclusive upper bound of the coefficient search box
    #[arg(long = "box", value_name = "HI", default_value_t = fsing_core::rdp::DEFAULT_BOX)]
    box_hi: u64,
    /// Candidate characteristics for the exclusion sweep
    #[arg(long = "p-sweep", value_name = "P1,P2,..", value_delimiter = ',')]
    p_sweep: Option<Vec<u64>>,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    let mut rep = Report::new();
    let outcome = match &cli.command {
        Command::Classify(a) => commands::classify(a, &mut rep),
        Command::Discrepancies(a) => commands::discrepancies(a, &mut rep),
        Command::Sfr(a) => commands::sfr(a, &mut rep),
        Command::TamePlan(a) => commands::tame_plan(a, &mut rep),
        Command::P1split(a) => commands::p1split(a, &mut rep),
        Command::Cartier(a) => commands::cartier(a, &mut rep),
        Command::Campana(a) => commands::campana(a, &mut rep),
        Command::Rdpcert(a) => commands::rdpcert(a, &mut rep),
    };
    match outcome {
        Ok(()) => {
            print!("{}", rep.render(cli.format));
            if rep.is_definitive() {
                0
            } else {
                2
            }
        }
        Err(e) => {
            eprintln!("{}", e);
            e.exit_code()
        }
    }
}
