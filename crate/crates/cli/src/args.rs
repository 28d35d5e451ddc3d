use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Inspect simulation knowledge graphs and plan simulation sequences.
#[derive(Debug, Parser)]
#[command(name = "sis", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the loaded graph against the vocabulary axioms.
    Validate(Common),
    /// Run a SELECT query from a file.
    Query {
        /// Query file.
        query: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Simulations able to produce a parameter.
    Capabilities {
        /// Parameter to produce, as a CURIE or `<IRI>`.
        #[arg(long)]
        output: String,
        #[command(flatten)]
        common: Common,
    },
    /// Inputs of the processes a simulation can execute.
    Inputs(SimArgs),
    /// Quality criteria of a simulation.
    Criteria(SimArgs),
    /// Parameter influences on the processes a simulation can execute.
    Influences(SimArgs),
    /// Derive, score and rank simulation sequences for a goal parameter.
    Plan(PlanArgs),
    /// Re-rank plans while sweeping one requirement threshold.
    Whatif {
        #[command(flatten)]
        plan: PlanArgs,
        /// `KIND=LO:HI:STEP`, e.g. `ex:ResultAccuracy=0.6:0.9:0.1`.
        #[arg(long)]
        sweep: String,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Turtle files, merged into one graph.
    #[arg(required = true, value_name = "FILE")]
    pub files: Vec<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Extra prefix binding `LABEL=IRI`; wins over file prefixes.
    #[arg(long = "prefix", value_name = "LABEL=IRI")]
    pub prefixes: Vec<String>,

    #[arg(long, value_enum, default_value_t = Mode::Strict)]
    pub match_mode: Mode,

    /// Write the output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Simulation, as a CURIE or `<IRI>`.
    #[arg(long)]
    pub sim: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Parameter to produce.
    #[arg(long)]
    pub goal: String,

    /// Known parameters, comma separated; may be repeated.
    #[arg(long, value_delimiter = ',')]
    pub known: Vec<String>,

    /// Bound such as `ex:ResultAccuracy>=0.8` or `ex:SimulationTime<=100`.
    #[arg(long = "require", value_name = "KIND>=V|KIND<=V")]
    pub requirements: Vec<String>,

    /// Criterion weight such as `ex:ResultAccuracy=1`.
    #[arg(long = "weight", value_name = "KIND=W")]
    pub weights: Vec<String>,

    #[arg(long, value_enum, default_value_t = AggregatorArg::InfluenceWeighted)]
    pub aggregator: AggregatorArg,

    #[arg(long, default_value_t = sis_core::planner::DEFAULT_MAX_DEPTH)]
    pub max_depth: usize,

    #[arg(long, default_value_t = sis_core::planner::DEFAULT_MAX_PLANS)]
    pub max_plans: usize,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Strict,
    TypeRelaxed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AggregatorArg {
    InfluenceWeighted,
    WeakestLink,
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    use super::*;

    #[test]
    fn definitions_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn known_accepts_commas_and_repeats() {
        let cli = Cli::try_parse_from([
            "sis",
            "plan",
            "--goal",
            "ex:G",
            "--known",
            "ex:A,ex:B",
            "--known",
            "ex:C",
            "f.ttl",
        ])
        .unwrap();
        let Command::Plan(p) = cli.command else { panic!() };
        assert_eq!(p.known, ["ex:A", "ex:B", "ex:C"]);
        assert_eq!(p.common.files.len(), 1);
    }
}
