//! Command-line front end for `digifix`.
//!
//! Exit status: 0 success, 1 usage error, 2 invalid input, 3 budget
//! exhausted, 4 when `verify` finds a failing criterion.

pub mod commands;
pub mod oracle;
pub mod verify;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use digifix::{load_image, load_map, write_report, Report, ReportFormat};

use commands::Settings;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "digifix", version, about = "Fixed point invariants of finite digital images")]
struct Cli {
    /// Worker threads (default: one per core). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Node budget for each search.
    #[arg(long, global = true, env = "DIGIFIX_BUDGET")]
    budget: Option<u64>,
    /// json, csv or text. `verify` prints a table unless a format is given.
    #[arg(long, global = true)]
    format: Option<ReportFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated image to a file.
    Gen {
        /// interval, cycle, box, cube, wedge_cycles_8, fig_xexample or fig_sexample
        family: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fixed point spectrum F(X).
    Spectrum { file: PathBuf },
    /// Homotopy fixed point spectrum S(f) of a map.
    Sfix {
        file: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Whether the identity is the only map in its homotopy class.
    Rigid { file: PathBuf },
    /// Pull indices of every point, or of one point with a witness map.
    Pull {
        file: PathBuf,
        #[arg(long)]
        point: Option<usize>,
    },
    /// Homotopy classes of all continuous self-maps.
    Classes { file: PathBuf },
    /// Structure of the fixed point set of a map.
    Fixset {
        file: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Lasso rigidity certificate.
    Lasso { file: PathBuf },
    /// Retraction onto a subset and whether it is a deformation retraction.
    Retract {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<usize>,
    },
    /// Neighborhood criterion for #X - 1 in F(X).
    Criterion { file: PathBuf },
    /// Run the acceptance suite.
    Verify {
        /// Only these criteria, by number.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

fn execute(command: &Command, settings: &Settings) -> digifix::Result<Report> {
    match command {
        Command::Gen { family, params, output } => commands::gen(family, params, output),
        Command::Spectrum { file } => commands::spectrum(&load_image(file)?, settings),
        Command::Sfix { file, map } => {
            let image = load_image(file)?;
            commands::sfix(&load_map(map, &image)?, settings)
        }
        Command::Rigid { file } => commands::rigid(&load_image(file)?, settings),
        Command::Pull { file, point } => commands::pull(&load_image(file)?, *point, settings),
        Command::Classes { file } => commands::classes(&load_image(file)?, settings),
        Command::Fixset { file, map } => {
            let image = load_image(file)?;
            commands::fixset(&load_map(map, &image)?)
        }
        Command::Lasso { file } => commands::lasso(&load_image(file)?, settings),
        Command::Retract { file, subset } => {
            let subset: BTreeSet<usize> = subset.iter().copied().collect();
            commands::retract(&load_image(file)?, &subset, settings)
        }
        Command::Criterion { file } => commands::criterion(&load_image(file)?),
        Command::Verify { .. } => unreachable!("verify is handled by run"),
    }
}

/// Parses `args` (program name first), runs the command, writes the report
/// to standard output and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        // fails only if a pool already exists, as in repeated in-process runs
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let settings = cli.budget.map_or_else(Settings::default, Settings::with_budget);
    let mut stdout = std::io::stdout().lock();

    if let Command::Verify { only } = &cli.command {
        let outcomes = verify::run_selected(only);
        let bytes = match cli.format {
            None => verify::table(&outcomes).into_bytes(),
            Some(f) => write_report(&verify::report(&outcomes), f),
        };
        let _ = stdout.write_all(&bytes);
        return if outcomes.iter().all(|o| o.passed) { 0 } else { EXIT_VERIFY_FAILED };
    }

    match execute(&cli.command, &settings) {
        Ok(report) => {
            let _ = stdout.write_all(&write_report(&report, cli.format.unwrap_or(ReportFormat::Json)));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            commands::exit_code(&e)
        }
    }
}
