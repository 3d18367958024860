use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fsamp::commands::{group_text, reconstruct_csv, run_dynamics, run_group, run_reconstruct, GroupQuery};
use fsamp::config::{ElementRef, GroupSpec, VectorSpec};
use fsamp::demos::{demo_cyclic, demo_dihedral, DemoOptions, GeneratorChoice, SystemsChoice};
use fsamp::report::to_json;
use fsamp::verify::verify_csv;
use fsamp::{run_verify, CliError, DesignConfig, ExitStatus, Stage, VerifyOptions};

#[derive(Parser)]
#[command(name = "fsamp", version, about = "Sampling and reconstruction in cyclic subspaces of finite group representations")]
struct Cli {
    /// Output format; `group` also accepts `text` (its default).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupKind {
    Cyclic,
    Dihedral,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Delta,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Order, cosets and complements of a group.
    Group {
        #[arg(long, value_enum, conflicts_with = "config")]
        kind: Option<GroupKind>,
        #[arg(long)]
        m: Option<usize>,
        /// Take the group from a design configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Left cosets of the subgroup generated by these elements.
        #[arg(long, value_delimiter = ',')]
        cosets: Option<Vec<String>>,
        /// Complement of the subgroup generated by these elements.
        #[arg(long, value_delimiter = ',')]
        complement: Option<Vec<String>>,
        /// With --complement, list every complement.
        #[arg(long)]
        all_complements: bool,
    },
    /// Recoverability, theorem conditions and randomized reconstruction.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Succeed only if the design is unrecoverable.
        #[arg(long)]
        expect_unrecoverable: bool,
    },
    /// Sample one state and reconstruct it.
    Reconstruct {
        #[arg(long)]
        config: PathBuf,
        /// JSON file with the state as `[[re, im], ...]`.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Periodic signals on Z_M sampled at multiples of r.
    DemoCyclic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        /// Systems as deltas at these positions.
        #[arg(long, value_delimiter = ',', conflicts_with = "random_systems")]
        systems: Option<Vec<String>>,
        /// Use this many Gaussian systems.
        #[arg(long)]
        random_systems: Option<usize>,
        #[arg(long, value_enum, default_value = "delta")]
        generator: Generator,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
    /// D_m sampled at {e, t} with H the rotations.
    DemoDihedral {
        #[arg(long)]
        m: usize,
        /// Systems as deltas at these elements, e.g. `e,g,g^2`.
        #[arg(long, value_delimiter = ',', conflicts_with = "random_systems")]
        systems: Option<Vec<String>>,
        #[arg(long)]
        random_systems: Option<usize>,
        #[arg(long, value_enum, default_value = "delta")]
        generator: Generator,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        /// Succeed only if the systems are unrecoverable.
        #[arg(long)]
        expect_unrecoverable: bool,
    },
    /// Sampled time evolution against direct propagation.
    Dynamics {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn refs(tokens: &[String]) -> Vec<ElementRef> {
    tokens.iter().map(|t| ElementRef::parse(t)).collect()
}

fn demo_options(systems: Option<Vec<String>>, random: Option<usize>, generator: Generator, seed: u64, trials: u64) -> DemoOptions {
    let systems = match (systems, random) {
        (Some(s), _) => SystemsChoice::Deltas(refs(&s)),
        (None, Some(n)) => SystemsChoice::Random(n),
        (None, None) => SystemsChoice::Default,
    };
    let generator = match generator {
        Generator::Delta => GeneratorChoice::Delta,
        Generator::Random => GeneratorChoice::Random,
    };
    DemoOptions { generator, systems, seed, trials }
}

fn json_only(format: Option<Format>) -> Result<(), CliError> {
    match format {
        None | Some(Format::Json) => Ok(()),
        Some(_) => Err(CliError::config(Stage::Parse, "this command only writes JSON")),
    }
}

fn unrecoverable_expected(status: ExitStatus, expect: bool) -> ExitStatus {
    match (status, expect) {
        (ExitStatus::Unrecoverable, true) => ExitStatus::Pass,
        (ExitStatus::Pass, true) => ExitStatus::CheckFailure,
        (s, _) => s,
    }
}

fn run(cli: Cli) -> Result<(String, ExitStatus), CliError> {
    let format = cli.format;
    match cli.command {
        Command::Group { kind, m, config, cosets, complement, all_complements } => {
            let spec = match (config, kind, m) {
                (Some(path), _, _) => DesignConfig::from_path(&path)?.group,
                (None, Some(GroupKind::Cyclic), Some(m)) => GroupSpec::Cyclic { m },
                (None, Some(GroupKind::Dihedral), Some(m)) => GroupSpec::Dihedral { m },
                _ => return Err(CliError::config(Stage::Parse, "give --config, or --kind with --m")),
            };
            let query = GroupQuery {
                cosets: cosets.as_deref().map(refs),
                complement: complement.as_deref().map(refs),
                all_complements,
            };
            let report = run_group(&spec, &query)?;
            let text = match format {
                None | Some(Format::Text) => group_text(&report),
                Some(Format::Json) => to_json(&report)?,
                Some(Format::Csv) => return Err(CliError::config(Stage::Parse, "group has no CSV form")),
            };
            Ok((text, ExitStatus::Pass))
        }
        Command::Verify { config, trials, seed, expect_unrecoverable } => {
            let cfg = DesignConfig::from_path(&config)?;
            let report = run_verify(&cfg, &VerifyOptions { trials, seed, expect_unrecoverable })?;
            for check in report.failed_checks() {
                log::warn!("check failed: {} (value {:?}, tolerance {:?})", check.name, check.value, check.tolerance);
            }
            let text = match format {
                Some(Format::Csv) => verify_csv(&report)?,
                Some(Format::Text) => return Err(CliError::config(Stage::Parse, "verify writes JSON or CSV")),
                _ => to_json(&report)?,
            };
            Ok((text, report.status))
        }
        Command::Reconstruct { config, state, seed } => {
            let cfg = DesignConfig::from_path(&config)?;
            let state = match state {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| CliError::config(Stage::Parse, format!("{}: {e}", path.display())))?;
                    Some(serde_json::from_str::<VectorSpec>(&text).map_err(|e| CliError::config(Stage::Parse, e))?)
                }
                None => None,
            };
            let report = run_reconstruct(&cfg, state.as_ref(), seed)?;
            let text = match format {
                Some(Format::Csv) => reconstruct_csv(&report)?,
                Some(Format::Text) => return Err(CliError::config(Stage::Parse, "reconstruct writes JSON or CSV")),
                _ => to_json(&report)?,
            };
            Ok((text, ExitStatus::Pass))
        }
        Command::DemoCyclic { m, r, systems, random_systems, generator, seed, trials } => {
            json_only(format)?;
            let report = demo_cyclic(m, r, &demo_options(systems, random_systems, generator, seed, trials))?;
            Ok((to_json(&report)?, report.status))
        }
        Command::DemoDihedral { m, systems, random_systems, generator, seed, trials, expect_unrecoverable } => {
            json_only(format)?;
            let report = demo_dihedral(m, &demo_options(systems, random_systems, generator, seed, trials))?;
            Ok((to_json(&report)?, unrecoverable_expected(report.status, expect_unrecoverable)))
        }
        Command::Dynamics { config, times, seed } => {
            json_only(format)?;
            let cfg = DesignConfig::from_path(&config)?;
            let report = run_dynamics(&cfg, times.as_deref(), seed)?;
            Ok((to_json(&report)?, report.status))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok((text, status)) => {
            let text = if text.ends_with('\n') { text } else { text + "\n" };
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        eprintln!("error: output stage: {}: {e}", path.display());
                        return ExitCode::from(ExitStatus::ConfigError.code() as u8);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status.code() as u8)
        }
    }
}
