use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use realzoo::enclosure::parse_ratio;
use realzoo::{TaggedPoint, Q};

fn ratio(s: &str) -> Result<Q, String> {
    parse_ratio(s).ok_or_else(|| format!("`{s}` is not a rational of the form p/q"))
}

fn point(s: &str) -> Result<TaggedPoint, String> {
    s.parse().map_err(|e: realzoo::points::ParsePointError| e.to_string())
}

fn edge(s: &str) -> Result<(String, String), String> {
    match s.split_once(':') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(format!("`{s}` is not an edge of the form FROM:TO")),
    }
}

/// Certified evaluation of pathological real functions, the 28-block
/// partition, falsification probes and connection graphs.
#[derive(Debug, Parser)]
#[command(name = "realzoo", version)]
pub struct Cli {
    /// JSON config file (defaultPrecision, defaultFamilyN, outputFormat, digitBudget, maxRounds); flags override it
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Exit with status 1 when a probe or check ends inconclusive
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a block representative at a point, as a JSON enclosure
    Eval(EvalArgs),
    /// Sample a representative on an exact rational grid, as CSV (x, lo, hi)
    Plot(PlotArgs),
    /// Canonical ternary digits of a point in [0, 1]
    Digits(DigitsArgs),
    /// Cantor set levels, localization and membership
    #[command(subcommand)]
    Cantor(CantorCommand),
    /// The 28-block partition and its statistics
    #[command(subcommand)]
    Blocks(BlocksCommand),
    /// Probe continuity or differentiability of a representative
    Probe(ProbeArgs),
    /// Connection graphs: export, edge checks and scenario counts
    Graph(GraphArgs),
    /// Number of potential connection scenarios among m nodes
    Scenarios(ScenarioArgs),
}

#[derive(Debug, Args)]
pub struct RepArgs {
    /// Block representative id, 1..=28
    #[arg(long, value_name = "I", value_parser = clap::value_parser!(u32).range(1..=28))]
    pub rep: u32,
    /// Family size n for representatives built from n factors or terms
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    pub n: Option<u32>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub rep: RepArgs,
    /// Evaluation point, e.g. 3/4, sqrt2*1/2+1/3, pi^2*1/1+0/1, sin(5)+2*1, cantor:thue-morse
    #[arg(long, value_name = "POINT", value_parser = point, allow_hyphen_values = true)]
    pub at: TaggedPoint,
    /// Enclosure width bound 2^-P
    #[arg(long, value_name = "P", value_parser = clap::value_parser!(u32).range(1..))]
    pub precision: Option<u32>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub rep: RepArgs,
    /// Left end of the grid, p/q
    #[arg(long, value_name = "Q", value_parser = ratio, allow_hyphen_values = true)]
    pub from: Q,
    /// Right end of the grid, p/q
    #[arg(long, value_name = "Q", value_parser = ratio, allow_hyphen_values = true)]
    pub to: Q,
    /// Number of equally spaced samples, at least 2
    #[arg(long, value_name = "M", value_parser = clap::value_parser!(u32).range(2..))]
    pub samples: u32,
    /// Enclosure width bound 2^-P
    #[arg(long, value_name = "P", value_parser = clap::value_parser!(u32).range(1..))]
    pub precision: Option<u32>,
}

#[derive(Debug, Args)]
pub struct DigitsArgs {
    /// Point in [0, 1]
    #[arg(value_name = "POINT", value_parser = point, allow_hyphen_values = true)]
    pub point: TaggedPoint,
    /// Number of digits
    #[arg(long, value_name = "K")]
    pub count: u32,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<DigitsFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DigitsFormat {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum CantorCommand {
    /// The 2^n closed intervals of level n, as exact rationals
    Intervals {
        /// Level n
        #[arg(long, value_name = "N")]
        level: u32,
        /// Output format
        #[arg(long, value_enum)]
        format: Option<TabularFormat>,
    },
    /// Which level-n interval holds a point, or the gap it falls in
    Locate {
        /// Point in [0, 1]
        #[arg(value_name = "POINT", value_parser = point)]
        point: TaggedPoint,
        /// Level n
        #[arg(long, value_name = "N")]
        level: u32,
    },
    /// Cantor set membership
    Member {
        /// Point
        #[arg(value_name = "POINT", value_parser = point, allow_hyphen_values = true)]
        point: TaggedPoint,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TabularFormat {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum BlocksCommand {
    /// The 28 blocks with case label, signature, cardinality and representative
    List {
        /// Output format
        #[arg(long, value_enum)]
        format: Option<TabularFormat>,
    },
    /// Summary shares of the partition, as JSON
    Stats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeMode {
    /// Continuity probe along approach ladders
    Continuity,
    /// Difference quotients at shrinking steps
    Quotients,
    /// Search for two approach sequences whose values stay apart
    Witness,
    /// Check the representative against its declared block signature
    Spot,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub rep: RepArgs,
    /// Probe center; taken from the plan file when omitted
    #[arg(long, value_name = "POINT", value_parser = point, allow_hyphen_values = true)]
    pub at: Option<TaggedPoint>,
    /// What to probe
    #[arg(long, value_enum, default_value = "continuity")]
    pub mode: ProbeMode,
    /// JSON plan: a probe plan, or an array of claims for spot mode
    #[arg(long, value_name = "FILE")]
    pub plan: Option<PathBuf>,
    /// Tolerance epsilon (continuity) or separation gap (witness), p/q
    #[arg(long, value_name = "Q", value_parser = ratio)]
    pub epsilon: Option<Q>,
    /// Working precision for each evaluation
    #[arg(long, value_name = "P", value_parser = clap::value_parser!(u32).range(1..))]
    pub precision: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichGraph {
    Star,
    Bigfour,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct GraphArgs {
    #[command(subcommand)]
    pub action: Option<GraphCommand>,
    /// Which graph to export
    #[arg(long, value_enum, default_value = "bigfour")]
    pub which: WhichGraph,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<GraphFormat>,
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Spot-check f1*g against the block of f2 for one edge
    Check {
        /// Edge FROM:TO, e.g. W:C or f7:f28
        #[arg(long, value_name = "FROM:TO", value_parser = edge)]
        edge: (String, String),
        /// JSON array of claims replacing the shipped plan
        #[arg(long, value_name = "FILE")]
        plan: Option<PathBuf>,
    },
    /// Number of potential connection scenarios among m nodes
    Scenarios(ScenarioArgs),
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Node count m, at least 2
    #[arg(long, value_name = "M", value_parser = clap::value_parser!(u32).range(2..))]
    pub nodes: u32,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<ScenarioFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioFormat {
    Table,
    Json,
}
