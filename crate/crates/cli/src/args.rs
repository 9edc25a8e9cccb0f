use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "vcind", version, about = "Trace-count ranks over ordered parameter sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated family as vctm.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long = "N")]
        width: usize,
        /// Keep a seeded random subset of this many rows.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Report counts, alternations, ranks and joint cuts of a vctm file.
    Analyze {
        input: PathBuf,
        /// Windows to compute the family rank for (repeatable or comma separated).
        #[arg(long, value_delimiter = ',', default_value = "0")]
        window: Vec<usize>,
        #[command(flatten)]
        read: ReadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Encode every row of a vctm file with n windows of extent l.
    Certify {
        input: PathBuf,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        window: usize,
        #[command(flatten)]
        read: ReadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fit the growth exponent of a family's trace counts.
    Fit {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated widths; defaults depend on the family.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
        /// Exit 1 unless the verdict is integer(k).
        #[arg(long)]
        expect: Option<i64>,
        /// Count by enumerating rows even where a closed form exists.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write the grid as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Write the lower-bound witness family for n at width N.
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        width: usize,
        /// Block values v_0..v_{n+1} as a bit string (default all zero).
        #[arg(long)]
        blocks: Option<String>,
        /// Separator values w_0..w_n; must match the ones the blocks force.
        #[arg(long)]
        separators: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Compare fitted exponent, stabilized rank and least certifiable n.
    Coincide {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
        #[arg(long, default_value_t = 0)]
        window: usize,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// Kind name (threshold, alt_family, spikes, subset_witness, full,
    /// set_exceptional, product) or a full expression such as
    /// `product(spikes:1,spikes:2,and)`.
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: Option<usize>,
    /// Left operand of a product.
    #[arg(long)]
    pub left: Option<String>,
    /// Right operand of a product.
    #[arg(long)]
    pub right: Option<String>,
    #[arg(long)]
    pub op: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReadArgs {
    /// Merge duplicate rows instead of rejecting the file.
    #[arg(long)]
    pub dedup: bool,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Output path; stdout when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}
