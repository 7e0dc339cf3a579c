use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use toric_qh::cli::{self, Report};
use toric_qh::{Error, Result};

#[derive(Parser)]
#[command(name = "toricqh", about = "Quantum cohomology of toric Fano varieties")]
struct Args {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Fan file (JSON with dim, rays, max_cones).
    #[arg(long, global = true)]
    fan: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    Validate,
    Classify,
    Primitive,
    Present,
    /// Giambelli polynomial of a cone, e.g. --cone 1,4
    Giambelli {
        #[arg(long)]
        cone: String,
    },
    /// Quantum product of two class expressions.
    Multiply {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Three-point invariant <a,b,c>_beta.
    Gw {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Blow-down tower; --order lists divisors to contract first.
    Tower {
        #[arg(long)]
        order: Option<String>,
    },
    /// Tree of invariant curves representing a class.
    Tree {
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    Census {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 6)]
        max_rays: usize,
    },
}

fn run(args: &Args) -> Result<Report> {
    let fan = || args.fan.as_deref().ok_or_else(|| Error::Parse("--fan <path> is required".into()));
    match &args.command {
        Command::Validate => cli::cmd_validate(fan()?),
        Command::Classify => cli::cmd_classify(fan()?),
        Command::Primitive => cli::cmd_primitive(fan()?),
        Command::Present => cli::cmd_present(fan()?),
        Command::Giambelli { cone } => cli::cmd_giambelli(fan()?, &cli::parse_labels(cone)?),
        Command::Multiply { a, b } => cli::cmd_multiply(fan()?, a, b),
        Command::Gw { a, b, c, beta } => cli::cmd_gw(fan()?, a, b, c, beta),
        Command::Tower { order } => {
            let order = order.as_deref().map(cli::parse_labels).transpose()?;
            cli::cmd_tower(fan()?, order.as_deref())
        }
        Command::Tree { beta } => cli::cmd_tree(fan()?, beta),
        Command::Census { dim, max_rays } => cli::cmd_census(*dim, *max_rays),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(report) => {
            if args.json {
                println!("{}", report.json);
            } else {
                print!("{}", report.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if args.json {
                println!("{}", cli::error_json(&e));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
