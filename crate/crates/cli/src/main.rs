mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "lpcoset", version, about = "Coset enumeration and low-index subgroups for L-presented groups")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Coset enumeration strategy (see `lpcoset strategies`).
    #[arg(long, global = true, default_value = "felsch")]
    strategy: String,

    /// Truncation level to start from. Defaults to 0 for enumeration and 1
    /// for the low-index search.
    #[arg(long, global = true)]
    level: Option<usize>,

    /// Live-coset limit of the first enumeration attempt.
    #[arg(long, global = true, default_value_t = 1 << 14, value_parser = clap::value_parser!(u64).range(1..))]
    max_cosets: u64,

    /// Factor applied to the coset limit on each escalation.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..))]
    escalation: u64,

    /// Largest coset limit ever tried before giving up.
    #[arg(long, global = true, env = "LPCOSET_HARD_CEILING", default_value_t = 1_000_000,
          value_parser = clap::value_parser!(u64).range(1..))]
    hard_ceiling: u64,

    /// Image-group size cap for the kernel containment test.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    reduction_cap: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// More log output on stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Index of a subgroup given by generators.
    Index {
        /// Presentation file, or builtin:grigorchuk, builtin:basilica, builtin:burnside(n,m).
        presentation: String,
        #[arg(long, allow_hyphen_values = true)]
        subgroup: String,
    },
    /// Whether a word lies in a subgroup.
    Member {
        presentation: String,
        #[arg(long, allow_hyphen_values = true)]
        subgroup: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// The core of a subgroup.
    Core {
        presentation: String,
        #[arg(long, allow_hyphen_values = true)]
        subgroup: String,
    },
    /// The intersection of two subgroups.
    Intersect {
        presentation: String,
        #[arg(long, allow_hyphen_values = true)]
        subgroup: String,
        #[arg(long, allow_hyphen_values = true)]
        subgroup2: String,
    },
    /// All subgroups up to a given index.
    LowIndex {
        presentation: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_index: u64,
        /// Show the normal subgroup counts.
        #[arg(long)]
        normal: bool,
        /// Show the maximal subgroup counts.
        #[arg(long)]
        maximal: bool,
        /// List every subgroup with its generators.
        #[arg(long)]
        list: bool,
        /// Stop with a partial result after this many candidate tables.
        #[arg(long)]
        max_candidates: Option<usize>,
    },
    /// Check a coset table dump for validity.
    Validate {
        presentation: String,
        /// Tab-separated dump or JSON output of another command; `-` reads stdin.
        #[arg(long)]
        table: String,
    },
    /// List the registered enumeration strategies.
    Strategies,
}

fn init_logging(verbosity: u8) {
    let level = match verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
}

fn run(cli: Cli) -> Result<String, CliError> {
    let cfg = &cli.run;
    match cli.command {
        Command::Index { presentation, subgroup } => commands::index(cfg, &presentation, &subgroup),
        Command::Member { presentation, subgroup, word } => commands::member(cfg, &presentation, &subgroup, &word),
        Command::Core { presentation, subgroup } => commands::core(cfg, &presentation, &subgroup),
        Command::Intersect { presentation, subgroup, subgroup2 } => {
            commands::intersect(cfg, &presentation, &subgroup, &subgroup2)
        }
        Command::LowIndex { presentation, max_index, normal, maximal, list, max_candidates } => {
            let opts =
                commands::LowIndexOptions { max_index: max_index as usize, normal, maximal, list, max_candidates };
            commands::low_index(cfg, &presentation, &opts)
        }
        Command::Validate { presentation, table } => commands::validate(cfg, &presentation, &table),
        Command::Strategies => Ok(commands::strategies()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.run.verbose);
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(partial) = e.partial_output() {
                print!("{partial}");
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
