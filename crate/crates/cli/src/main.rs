use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hovey_cli::input::{AlgebraRef, ClassExpr, UniverseRef};
use hovey_cli::{
    exit_code, run_scenario, summary, verify_witnesses, write_report, Check, CliError, PairRef, RunReport, Scenario,
    ScenarioLimits, TripleRef, EXIT_FAIL, EXIT_INPUT, EXIT_PASS,
};
use hovey_core::quiverlift::DEFAULT_REP_CAP;
use hovey_core::Side;

#[derive(Parser)]
#[command(name = "hovey", version, about = "Verify cotorsion pairs and Hovey triples over finite universes of modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Admissibility and basic invariants of an algebra.
    Algebra {
        #[command(subcommand)]
        action: AlgebraCmd,
    },
    Universe {
        #[command(subcommand)]
        action: UniverseCmd,
    },
    Class {
        #[command(subcommand)]
        action: ClassCmd,
    },
    Cotorsion {
        #[command(subcommand)]
        action: CotorsionCmd,
    },
    Hovey {
        #[command(subcommand)]
        action: HoveyCmd,
    },
    Quiver {
        #[command(subcommand)]
        action: QuiverCmd,
    },
    Scenario {
        #[command(subcommand)]
        action: ScenarioCmd,
    },
    /// Re-check every witness in a report file.
    VerifyWitness { report: PathBuf },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    Check(Common),
}

#[derive(Subcommand)]
enum UniverseCmd {
    /// List all indecomposables up to --max-dim.
    Enumerate(Common),
}

#[derive(Subcommand)]
enum ClassCmd {
    Show {
        #[command(flatten)]
        common: Common,
        /// Class expression, e.g. `projectives` or `ext-orthogonal-of:injectives`.
        #[arg(long)]
        class: String,
    },
}

#[derive(Subcommand)]
enum CotorsionCmd {
    Check {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: PairArgs,
        /// Also check that the lifted pairs are complete up to this level.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, value_parser = parse_side, default_value = "left")]
        side: Side,
    },
}

#[derive(Subcommand)]
enum HoveyCmd {
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        triple: TripleArgs,
    },
    Lift(LiftArgs),
    /// Compare the stable categories of the Frobenius cores of the lifts.
    Tower(LiftArgs),
}

#[derive(Subcommand)]
enum QuiverCmd {
    Lift {
        #[command(flatten)]
        lift: LiftArgs,
        /// Shape quiver: `A<n>` for the linear quiver on n vertices.
        #[arg(long, default_value = "A2")]
        shape: String,
        #[arg(long, default_value_t = DEFAULT_REP_CAP)]
        rep_max_dim: usize,
    },
}

#[derive(Subcommand)]
enum ScenarioCmd {
    Run {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// `fixture:<name>[@p]` or a path to an algebra JSON file.
    #[arg(long)]
    algebra: String,
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    #[arg(long)]
    budget: Option<usize>,
    /// Maximal (co)syzygy steps for relative dimensions.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
}

#[derive(Args)]
struct TripleArgs {
    #[arg(long)]
    c: String,
    #[arg(long)]
    w: String,
    #[arg(long)]
    f: String,
}

#[derive(Args)]
struct LiftArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    triple: TripleArgs,
    #[arg(long, default_value_t = 2)]
    n_max: usize,
    #[arg(long, value_parser = parse_side, default_value = "left")]
    side: Side,
}

fn parse_side(s: &str) -> Result<Side, String> {
    match s {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        _ => Err(format!("expected 'left' or 'right', got '{s}'")),
    }
}

impl PairArgs {
    fn to_ref(&self) -> PairRef {
        PairRef { x: ClassExpr::from(self.x.as_str()), y: ClassExpr::from(self.y.as_str()) }
    }
}

impl TripleArgs {
    fn to_ref(&self) -> TripleRef {
        TripleRef {
            c: ClassExpr::from(self.c.as_str()),
            w: ClassExpr::from(self.w.as_str()),
            f: ClassExpr::from(self.f.as_str()),
        }
    }
}

/// Runs a one-check scenario built from command-line flags.
fn one_shot(common: &Common, check: Check) -> Result<(RunReport, Option<PathBuf>), CliError> {
    let scenario = Scenario {
        name: check.name().to_string(),
        algebra: AlgebraRef::Named(common.algebra.clone()),
        universe: UniverseRef { max_dim: Some(common.max_dim), declared: None },
        classes: Default::default(),
        shapes: Default::default(),
        limits: ScenarioLimits { cap: common.cap, budget: common.budget },
        checks: vec![check],
        output: None,
    };
    Ok((run_scenario(scenario, Path::new("."))?, common.out.clone()))
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    let (report, out) = match cli.command {
        Command::VerifyWitness { report } => {
            let s = verify_witnesses(&report)?;
            for (label, why) in &s.rejected {
                println!("rejected: {label}: {why}");
            }
            println!("{} witnesses verified, {} rejected", s.verified, s.rejected.len());
            return Ok(ExitCode::from(if s.all_verified() { EXIT_PASS } else { EXIT_FAIL } as u8));
        }
        Command::Scenario { action: ScenarioCmd::Run { path, out } } => {
            let report = hovey_cli::run_scenario_file(&path, out.as_deref())?;
            (report, None)
        }
        Command::Algebra { action: AlgebraCmd::Check(common) } => one_shot(&common, Check::Algebra)?,
        Command::Universe { action: UniverseCmd::Enumerate(common) } => one_shot(&common, Check::Universe)?,
        Command::Class { action: ClassCmd::Show { common, class } } => {
            one_shot(&common, Check::ClassShow { class: ClassExpr::from(class.as_str()) })?
        }
        Command::Cotorsion { action: CotorsionCmd::Check { common, pair, n_max, side } } => {
            one_shot(&common, Check::Cotorsion { pair: pair.to_ref(), extendable_upto: n_max, side })?
        }
        Command::Hovey { action } => match action {
            HoveyCmd::Verify { common, triple } => one_shot(&common, Check::HoveyVerify { triple: triple.to_ref() })?,
            HoveyCmd::Lift(a) => {
                one_shot(&a.common, Check::HoveyLift { triple: a.triple.to_ref(), side: a.side, n_max: a.n_max })?
            }
            HoveyCmd::Tower(a) => one_shot(
                &a.common,
                Check::HoveyTower {
                    triple: a.triple.to_ref(),
                    side: a.side,
                    n_max: a.n_max,
                    expect_stable_classes: None,
                },
            )?,
        },
        Command::Quiver { action: QuiverCmd::Lift { lift: a, shape, rep_max_dim } } => one_shot(
            &a.common,
            Check::QuiverLift { shape, triple: a.triple.to_ref(), side: a.side, n_max: a.n_max, rep_max_dim },
        )?,
    };
    if let Some(path) = out {
        write_report(&report, &path)?;
    }
    print!("{}", summary(&report));
    Ok(ExitCode::from(exit_code(&report.verdict) as u8))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { EXIT_PASS as u8 });
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
