use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use intconj_cli::selftest::{selftest, Config};
use intconj_cli::{fixtures, run, CliError, Command, Options, Problem};

#[derive(Parser)]
#[command(name = "intconj", version, about = "Conjugate duality of integral functionals on interval-valued mappings")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON).
    problem: PathBuf,
    /// Directory for `<name>.csv` and `<name>.summary`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Report base name; defaults to `<problem stem>-<command>`.
    #[arg(long)]
    name: Option<String>,
    /// Tolerance for invariant checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct Select {
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    function: Option<String>,
    /// Refinement levels, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "64")]
    grid: Vec<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Conjugates of the problem's stand-alone convex functions.
    Conjugate(Common),
    /// Recession functions of the problem's stand-alone convex functions.
    Recession(Common),
    /// Semicontinuity and regularity flags per node for each map.
    CheckMap {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        map: Option<String>,
    },
    /// Support-function representation of the continuous selections.
    Support {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: Select,
    },
    /// Refinement study of the primal conjugate against J.
    Duality {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: Select,
    },
    /// Pointwise subdifferential test and Fenchel equality.
    Subdiff {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: Select,
    },
    /// Properness witnesses.
    Proper(Common),
    /// Local integrability condition.
    IcCheck(Common),
    /// Closure condition on the extreme-selection family.
    ClosureCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        select: Select,
    },
    /// Runs the seeded property corpus and the fixture expectations.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one family.
        #[arg(long)]
        family: Option<String>,
        /// Restrict to one case index.
        #[arg(long)]
        case: Option<usize>,
        /// Load fixtures from this directory instead of the embedded set.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Directory for the reproducer file.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn options(common: &Common, select: Option<&Select>) -> Options {
    let mut o = Options {
        tol: common.tol,
        ..Options::default()
    };
    if let Some(s) = select {
        o.map = s.map.clone();
        o.measure = s.measure.clone();
        o.function = s.function.clone();
        o.grid = s.grid.clone();
    }
    o
}

fn run_command(cmd: Command, common: &Common, o: &Options) -> Result<(), CliError> {
    let p = Problem::load(&common.problem)?;
    let rep = run(cmd, &p, o)?;
    let stem = common
        .problem
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "problem".into());
    let name = common.name.clone().unwrap_or_else(|| format!("{stem}-{cmd}"));
    let (csv, summary) = rep.write(&common.out, &name)?;
    print!("{}", rep.summary_text());
    eprintln!("wrote {} and {}", csv.display(), summary.display());
    match rep.breach {
        Some(m) => Err(CliError::Tolerance(m)),
        None => Ok(()),
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Conjugate(c) => run_command(Command::Conjugate, &c, &options(&c, None)),
        Cmd::Recession(c) => run_command(Command::Recession, &c, &options(&c, None)),
        Cmd::CheckMap { common, map } => {
            let mut o = options(&common, None);
            o.map = map;
            run_command(Command::CheckMap, &common, &o)
        }
        Cmd::Support { common, select } => run_command(Command::Support, &common, &options(&common, Some(&select))),
        Cmd::Duality { common, select } => run_command(Command::Duality, &common, &options(&common, Some(&select))),
        Cmd::Subdiff { common, select } => run_command(Command::Subdiff, &common, &options(&common, Some(&select))),
        Cmd::Proper(c) => run_command(Command::Proper, &c, &options(&c, None)),
        Cmd::IcCheck(c) => run_command(Command::IcCheck, &c, &options(&c, None)),
        Cmd::ClosureCheck { common, select } => {
            run_command(Command::ClosureCheck, &common, &options(&common, Some(&select)))
        }
        Cmd::Selftest {
            seed,
            family,
            case,
            fixtures: dir,
            out,
        } => {
            let mut cfg = Config::new(seed);
            cfg.family = family;
            cfg.case = case;
            if let Some(dir) = dir {
                cfg.fixtures = fixtures::from_dir(&dir)?;
            }
            let (text, pass) = selftest(&cfg, &out)?;
            print!("{text}");
            if pass {
                Ok(())
            } else {
                Err(CliError::Tolerance("selftest failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("intconj: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
