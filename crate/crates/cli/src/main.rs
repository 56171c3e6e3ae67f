//! `nervelab`: batch verification runs with JSON-lines reports.
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 bad input,
//! 3 a size cap or search budget was hit.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nervelab::Caps;
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "nervelab", version, about = "Finite nerve and compactification checks")]
struct Cli {
    /// Cap overrides as KEY=VALUE pairs, comma separated; applied on top of NERVELAB_CAPS.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattice constructions.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Certificates and counts.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// The compactification category over a chain.
    Komp(KompArgs),
    /// The gluing map on a restricted multisimplicial nerve.
    Glue(GlueArgs),
    /// Hypotheses on a category with marked classes.
    Hypotheses(HypArgs),
    /// Integral homology and a contractibility verdict.
    Homology(HomologyArgs),
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Builds Crt^n.
    Crt {
        #[arg(short = 'n')]
        n: usize,
        /// Write the Hasse diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// Inner-anodyne certificate for the cube in CCpt^n.
    CptInner {
        #[arg(short = 'n')]
        n: usize,
        /// Write the certificate JSON.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Inner-anodyne certificate for the union of the boxes in Cart^n.
    CartCover {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Sizes of Crt^n against the binomial formula.
    CrtCounts {
        #[arg(long)]
        max: usize,
    },
}

#[derive(Args, Debug)]
pub struct KompArgs {
    /// Category JSON file or bundled name.
    #[arg(long)]
    cat: String,
    /// Comma-separated morphism names, or one object name.
    #[arg(long)]
    sigma: String,
    #[arg(long, default_value_t = 1)]
    alpha: usize,
    /// Classes for the two directions.
    #[arg(long, default_value = "E1,E2")]
    classes: String,
    /// Any of: filtered, homology.
    #[arg(long, default_value = "filtered,homology")]
    checks: String,
    /// Homology degree for the verdict.
    #[arg(long, default_value_t = 4)]
    max_dim: usize,
}

#[derive(Args, Debug)]
pub struct GlueArgs {
    #[arg(long)]
    cat: String,
    /// E1,E2 and any further directions.
    #[arg(long)]
    classes: String,
    /// Class of the glued direction in the target.
    #[arg(long, default_value = "E0")]
    target: String,
    /// Twisted source directions, comma separated; the first two cannot be twisted.
    #[arg(long)]
    twist: Option<String>,
    #[arg(long)]
    max_dim: usize,
}

#[derive(Args, Debug)]
pub struct HypArgs {
    #[arg(long)]
    cat: String,
    #[arg(long, value_parser = ["descent", "gluing", "combine"])]
    mode: String,
    /// E0,E1,E2.
    #[arg(long, default_value = "E0,E1,E2")]
    classes: String,
    /// Further classes for the pullback-stability checks.
    #[arg(long)]
    extra: Option<String>,
}

#[derive(Args, Debug)]
pub struct HomologyArgs {
    /// Complex, poset or category JSON.
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    max_dim: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let mut report = Report::new(name);
    report.info("run", serde_json::json!({ "seed": cli.seed }));
    let caps = match load_caps(cli.caps.as_deref()) {
        Ok(c) => c,
        Err(e) => return finish(&report, 2, Some(&e), cli.report.as_deref()),
    };
    let outcome = match &cli.command {
        Command::Lattice(LatticeCmd::Crt { n, dot }) => commands::lattice_crt(&mut report, *n, dot.as_deref(), &caps),
        Command::Verify(VerifyCmd::CptInner { n, cert }) => commands::cpt_inner(&mut report, *n, cert.as_deref(), &caps),
        Command::Verify(VerifyCmd::CartCover { n, cert }) => commands::cart_cover(&mut report, *n, cert.as_deref(), &caps),
        Command::Verify(VerifyCmd::CrtCounts { max }) => commands::crt_counts(&mut report, *max, &caps),
        Command::Komp(a) => commands::komp(&mut report, a, &caps),
        Command::Glue(a) => commands::glue(&mut report, a, &caps),
        Command::Hypotheses(a) => commands::hypotheses(&mut report, a),
        Command::Homology(a) => commands::homology(&mut report, a, &caps),
    };
    match outcome {
        Ok(()) => {
            let code = if report.pass() { 0 } else { 1 };
            finish(&report, code, None, cli.report.as_deref())
        }
        Err(e) => {
            let code = if e.cap { 3 } else { 2 };
            finish(&report, code, Some(&e.message), cli.report.as_deref())
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Lattice(LatticeCmd::Crt { .. }) => "lattice crt",
        Command::Verify(VerifyCmd::CptInner { .. }) => "verify cpt-inner",
        Command::Verify(VerifyCmd::CartCover { .. }) => "verify cart-cover",
        Command::Verify(VerifyCmd::CrtCounts { .. }) => "verify crt-counts",
        Command::Komp(_) => "komp",
        Command::Glue(_) => "glue",
        Command::Hypotheses(_) => "hypotheses",
        Command::Homology(_) => "homology",
    }
}

fn load_caps(flag: Option<&str>) -> Result<Caps, String> {
    let env = std::env::var("NERVELAB_CAPS").unwrap_or_default();
    let joined = [env.as_str(), flag.unwrap_or("")].iter().filter(|s| !s.is_empty()).copied().collect::<Vec<_>>().join(",");
    Caps::parse(&joined).map_err(|e| e.to_string())
}

fn finish(report: &Report, code: i32, error: Option<&str>, to: Option<&std::path::Path>) -> ExitCode {
    if let Some(e) = error {
        eprintln!("nervelab: {e}");
    }
    if let Err(e) = report.write(code, error, to) {
        eprintln!("nervelab: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
