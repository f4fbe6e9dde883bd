use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qdiscord",
    version,
    about = "Quantum discord, zero-discord tests and process tomography with correlated preparations"
)]
pub struct Cli {
    /// Emit a JSON report instead of a text table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Report entropic quantities in nats instead of bits.
    #[arg(long, global = true)]
    pub nats: bool,
    /// Override the comparison tolerance of `reproduce-paper` items and `gates table2 --check`.
    #[arg(long, global = true, value_name = "X")]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute D1, D2 and/or D3 of a bipartite state.
    Discord(DiscordArgs),
    /// Decide whether a state has zero discord on a side.
    ZeroTest(ZeroTestArgs),
    /// Ensemble classification tables.
    #[command(subcommand)]
    Ensembles(EnsemblesCommand),
    /// CNOT input/output set checks and discord change.
    #[command(subcommand)]
    Gates(GatesCommand),
    /// Simulated process tomography.
    #[command(subcommand)]
    Tomo(TomoCommand),
    /// Build a named state and write it in the JSON matrix format.
    State(StateArgs),
    /// Run every reproduction check against frozen expected values.
    ReproducePaper(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    D1,
    D2,
    D3,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    Both,
}

#[derive(Debug, Args)]
pub struct DiscordArgs {
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub measure: MeasureArg,
    #[arg(long, value_enum, default_value = "A")]
    pub side: SideArg,
}

#[derive(Debug, Args)]
pub struct ZeroTestArgs {
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    pub side: SideArg,
}

#[derive(Debug, Subcommand)]
pub enum EnsemblesCommand {
    /// Discord classification of the four reference ensembles.
    Table1,
}

#[derive(Debug, Subcommand)]
pub enum GatesCommand {
    /// Verify the CNOT on its product-state input/output set.
    Table2 {
        /// Exit with status 1 unless every pair and reset check passes.
        #[arg(long)]
        check: bool,
    },
    /// Symmetric D2 of the equal-weight input ensemble before and after a gate.
    DiscordChange {
        /// Gate: a JSON matrix file or one of cnot-target-a, cnot-target-b, identity.
        #[arg(long, default_value = "cnot-target-b")]
        unitary: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Measure the anchor projector, then rotate.
    #[value(name = "1")]
    MeasureRotate,
    /// Measure each probe projector directly.
    #[value(name = "2")]
    MeasureOnly,
}

#[derive(Debug, Args)]
pub struct TomoInput {
    /// Joint system–environment state (JSON matrix).
    #[arg(long, alias = "state", value_name = "FILE")]
    pub joint: PathBuf,
    /// Joint unitary: a JSON matrix file or one of cnot-target-a, cnot-target-b, identity.
    #[arg(long, default_value = "cnot-target-a")]
    pub unitary: String,
}

#[derive(Debug, Subcommand)]
pub enum TomoCommand {
    /// Reconstruct χ with one preparation method.
    Run {
        #[command(flatten)]
        input: TomoInput,
        #[arg(long, value_enum, default_value = "2")]
        method: MethodArg,
        /// Estimate each output from N Pauli measurements instead of exactly.
        #[arg(long, value_name = "N")]
        shots: Option<u64>,
        #[arg(long, value_name = "S", default_value_t = 0)]
        seed: u64,
    },
    /// Compare χ from the computational and Hadamard-rotated probe sets.
    Lemma2 {
        #[command(flatten)]
        input: TomoInput,
    },
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(subcommand)]
    pub family: StateFamily,
    /// Write the state here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum StateFamily {
    /// ¼(𝟙 + b σz⊗𝟙 + c σx⊗σx)
    Exdisc {
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
    },
    /// |Φ⁺⟩⟨Φ⁺|
    Bell,
    /// Mixture of the nine teahouse product states.
    Teahouse {
        /// Nine comma-separated weights; equal weights when omitted.
        #[arg(long, value_delimiter = ',', num_args = 9)]
        weights: Option<Vec<f64>>,
    },
    /// ½(|00⟩⟨00| + |11⟩⟨11|)
    Lemma1,
    /// Equal mixture of the CNOT input set.
    Table2Ensemble,
    /// Product of two single-qubit states.
    Product {
        /// One of 0, 1, +, -, +i, -i (aliases H, V, D, A, R, L) or mixed.
        #[arg(long = "a", allow_hyphen_values = true)]
        spec_a: String,
        #[arg(long = "b", allow_hyphen_values = true)]
        spec_b: String,
    },
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Run a single item by name.
    #[arg(long, value_name = "ITEM")]
    pub only: Option<String>,
}
