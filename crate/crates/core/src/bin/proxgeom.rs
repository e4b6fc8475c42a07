use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use proxgeom::conditions::ConditionKind;
use proxgeom::cover::Grid;
use proxgeom::report::{self, CoverConfig, EstimateConfig, Outcome, TightnessConfig, VerifyConfig};

#[derive(Parser)]
#[command(name = "proxgeom", version, about = "Sphere conditions and r/2-ball covers of closed sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a sphere condition on boundary samples of a scene.
    Verify {
        #[arg(long)]
        scene: String,
        #[arg(long, default_value = "exterior")]
        condition: ConditionKind,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        normal_budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Cover the grid points outside the set with verified balls.
    Cover {
        #[arg(long)]
        scene: String,
        #[arg(long)]
        radius: f64,
        /// Build balls of this radius (< radius/2) for regular closed sets.
        #[arg(long)]
        radius_prime: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        grid: Grid,
        #[arg(long, default_value_t = 16)]
        normal_budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Largest ball through the origin in the simplex ball configuration.
    Tightness {
        /// A dimension or an inclusive range `a..b`.
        #[arg(long, default_value = "2..10")]
        n: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Thin-boundary separation and the prox-regularity radius estimate.
    Estimate {
        #[arg(long)]
        scene: String,
        /// Prox-regularity radius of cl(int S); searched when omitted.
        #[arg(long)]
        radius: Option<f64>,
        /// Extended-condition radius; searched when omitted.
        #[arg(long)]
        radius_prime: Option<f64>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 16)]
        normal_budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

fn run(cmd: Command) -> proxgeom::Result<Outcome> {
    match cmd {
        Command::Verify { scene, condition, radius, samples, normal_budget, seed, json } => {
            report::run_verify(&VerifyConfig { scene, condition, radius, samples, normal_budget, seed, json })
        }
        Command::Cover { scene, radius, radius_prime, grid, normal_budget, seed, json, svg } => {
            report::run_cover(&CoverConfig { scene, radius, radius_prime, grid, normal_budget, seed, json, svg })
        }
        Command::Tightness { n, radius, samples, csv } => report::run_tightness(&TightnessConfig { n, radius, samples, csv }),
        Command::Estimate { scene, radius, radius_prime, samples, normal_budget, seed, json } => {
            report::run_estimate(&EstimateConfig { scene, rho: radius, radius_prime, samples, normal_budget, seed, json })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.stdout);
            for note in &out.notes {
                eprintln!("{note}");
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error [{}]: {e}", e.reason());
            ExitCode::from(report::exit_code(&e) as u8)
        }
    }
}
