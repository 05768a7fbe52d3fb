use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pattern-forge", version, about = "Adequate-pattern search and finite-sum colouring certificates")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(
        long,
        global = true,
        env = "PATTERN_FORGE_THREADS",
        default_value_t = 1,
        value_parser = clap::value_parser!(u16).range(1..)
    )]
    pub threads: u16,

    /// Also write the JSON document to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for an n-adequate pattern modulo m.
    Search(SearchArgs),
    /// Run an exhaustive oracle for one claim and print its certificate.
    Verify(VerifyArgs),
    /// Evaluate a colouring on one element or branch set.
    #[command(alias = "color")]
    Colour(ColourArgs),
    /// Time a named workload.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Number of rows.
    #[arg(long)]
    pub n: usize,
    /// Modulus; 0 means integer entries bounded by --entry-bound.
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub l_max: usize,
    #[arg(long, default_value_t = 1)]
    pub l_min: usize,
    /// Entry bound B for m = 0 (entries in [-B, B]).
    #[arg(long)]
    pub entry_bound: Option<u64>,
    /// Give up (inconclusive) after this many nodes.
    #[arg(long)]
    pub node_cap: Option<u64>,
    /// Disable row-order and unit symmetry breaking.
    #[arg(long)]
    pub no_symmetry: bool,
    /// Report whichever pattern a worker finds first.
    #[arg(long)]
    pub nondeterministic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Claim {
    #[value(name = "thm4.1")]
    Thm41,
    #[value(name = "thm3.2")]
    Thm32,
    #[value(name = "lemma3.1")]
    Lemma31,
    #[value(name = "thm5.4")]
    Thm54,
    #[value(name = "thm5.5")]
    Thm55,
    #[value(name = "thm5.6")]
    Thm56,
    #[value(name = "thm2.3")]
    Thm23,
    #[value(name = "thm5.1-shadow")]
    Thm51Shadow,
}

impl Claim {
    pub fn id(self) -> &'static str {
        match self {
            Claim::Thm41 => "thm4.1",
            Claim::Thm32 => "thm3.2",
            Claim::Lemma31 => "lemma3.1",
            Claim::Thm54 => "thm5.4",
            Claim::Thm55 => "thm5.5",
            Claim::Thm56 => "thm5.6",
            Claim::Thm23 => "thm2.3",
            Claim::Thm51Shadow => "thm5.1-shadow",
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub claim: Claim,
    #[arg(long)]
    pub kappa: Option<usize>,
    #[arg(long)]
    pub max_set: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub bound: Option<u64>,
    /// Size of the finite-sum set.
    #[arg(long)]
    pub n: Option<usize>,
    /// Group spec as JSON, or @PATH to read it from a file.
    #[arg(long)]
    pub group: Option<String>,
    /// Enumerate every subgroup, not only cyclic ones.
    #[arg(long)]
    pub all_subgroups: bool,
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Seed of the random colouring.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of colours of the random colouring.
    #[arg(long)]
    pub colours: Option<u64>,
    /// Colouring id, overriding the claim's own colouring.
    #[arg(long)]
    pub colouring: Option<String>,
    /// JSON list of elements, or @PATH.
    #[arg(long)]
    pub set: Option<String>,
    /// Enumeration budget; exceeding it gives an inconclusive certificate.
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["element", "branches"])))]
pub struct ColourArgs {
    #[arg(long)]
    pub id: String,
    /// Element coordinates as JSON.
    #[arg(long)]
    pub element: Option<String>,
    /// Group spec as JSON, or @PATH. Defaults to Z^len, or (Z/2)^len for delta.
    #[arg(long, requires = "element")]
    pub group: Option<String>,
    /// JSON list of binary branch strings, for the delta colouring.
    #[arg(long)]
    pub branches: Option<String>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub workload: String,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeat: u32,
}
