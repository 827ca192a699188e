use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fpf_cli::{Command, OutputFormat, PosetChoice, RunConfig};
use fpf_core::{Caps, Direction};

/// Verification laboratory for the Bruhat-Chevalley order on the
/// fixed-point-free involutions of [2n].
///
/// Exit codes: 0 success, 1 verification failure, 2 usage error,
/// 3 resource-cap error.
#[derive(Parser)]
#[command(name = "fpf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args)]
struct Common {
    /// Half-size n; the poset lives on the involutions of [2n]
    #[arg(long, env = "FPF_N")]
    n: usize,

    /// Output format (each command has a natural default)
    #[arg(long, env = "FPF_FORMAT", value_enum)]
    format: Option<FormatArg>,

    /// Direction of the total order on labels
    #[arg(long, env = "FPF_DIRECTION", value_enum, default_value_t = DirectionArg::Reversed)]
    direction: DirectionArg,

    /// Worker threads for parallel scans (default: available parallelism)
    #[arg(long, env = "FPF_WORKERS")]
    workers: Option<usize>,

    /// Write the output to a file instead of stdout
    #[arg(long, env = "FPF_OUT")]
    out: Option<PathBuf>,

    /// Largest n the enumerators accept
    #[arg(long, env = "FPF_ENUMERATION_CAP", default_value_t = 7)]
    enumeration_cap: usize,

    /// Largest number of maximal chains tolerated per interval
    #[arg(long, env = "FPF_CHAIN_CAP", default_value_t = 10_000_000)]
    chain_cap: u64,

    /// Largest number of distinct ridge-table entries
    #[arg(long, env = "FPF_RIDGE_MEM_CAP", default_value_t = 10_000_000)]
    ridge_mem_cap: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Standard,
    Reversed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PosetArg {
    F,
    Ds,
}

#[derive(Subcommand)]
enum CliCommand {
    /// List every element of F_2n with its length
    Enumerate {
        #[command(flatten)]
        common: Common,
    },
    /// Export the Hasse diagram
    Hasse {
        #[command(flatten)]
        common: Common,
        /// Which poset to export
        #[arg(long, value_enum, default_value_t = PosetArg::F)]
        poset: PosetArg,
        /// Include edge labels (rise pairs); only the F poset has them
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        labels: bool,
    },
    /// Classify rises: all suitable rises, or every rise of one element
    Rises {
        #[command(flatten)]
        common: Common,
        /// Restrict to one element (cycle or bracket form)
        #[arg(long)]
        element: Option<String>,
    },
    /// Verify the EL conditions over every interval
    VerifyEl {
        #[command(flatten)]
        common: Common,
    },
    /// Facets of the order complex in shelling order
    Shelling {
        #[command(flatten)]
        common: Common,
    },
    /// Diff the Deodhar-Srinivasan poset against F_2n
    CompareDs {
        #[command(flatten)]
        common: Common,
    },
    /// Rank generating function and its q-double-factorial form
    Genfun {
        #[command(flatten)]
        common: Common,
    },
    /// Mobius function of an interval (defaults to the whole poset)
    Mobius {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lower: Option<String>,
        #[arg(long)]
        upper: Option<String>,
    },
    /// Ball certificate for the order complex
    Topology {
        #[command(flatten)]
        common: Common,
    },
    /// Export the interval [lower, upper] as a labeled poset
    Interval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        lower: String,
        #[arg(long)]
        upper: String,
    },
}

fn to_config(common: Common, command: Command) -> RunConfig {
    RunConfig {
        n: common.n,
        command,
        format: common.format.map(|f| match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Dot => OutputFormat::Dot,
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Text => OutputFormat::Text,
        }),
        direction: match common.direction {
            DirectionArg::Standard => Direction::Standard,
            DirectionArg::Reversed => Direction::Reversed,
        },
        workers: common.workers,
        out: common.out,
        caps: Caps {
            enumeration_cap: common.enumeration_cap,
            chain_cap: common.chain_cap,
            ridge_mem_cap: common.ridge_mem_cap,
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.command {
        CliCommand::Enumerate { common } => to_config(common, Command::Enumerate),
        CliCommand::Hasse {
            common,
            poset,
            labels,
        } => to_config(
            common,
            Command::Hasse {
                poset: match poset {
                    PosetArg::F => PosetChoice::F,
                    PosetArg::Ds => PosetChoice::Ds,
                },
                labels,
            },
        ),
        CliCommand::Rises { common, element } => to_config(common, Command::Rises { element }),
        CliCommand::VerifyEl { common } => to_config(common, Command::VerifyEl),
        CliCommand::Shelling { common } => to_config(common, Command::Shelling),
        CliCommand::CompareDs { common } => to_config(common, Command::CompareDs),
        CliCommand::Genfun { common } => to_config(common, Command::Genfun),
        CliCommand::Mobius {
            common,
            lower,
            upper,
        } => to_config(common, Command::Mobius { lower, upper }),
        CliCommand::Topology { common } => to_config(common, Command::Topology),
        CliCommand::Interval {
            common,
            lower,
            upper,
        } => to_config(common, Command::Interval { lower, upper }),
    };
    ExitCode::from(fpf_cli::run(&config) as u8)
}
