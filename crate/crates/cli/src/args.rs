//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Homomorphism counts, hypertree decompositions and guarded counting logic.
#[derive(Debug, Parser)]
#[command(name = "gck", version, about)]
pub struct Cli {
    /// Global options.
    #[command(flatten)]
    pub global: Global,
    /// The subcommand.
    #[command(subcommand)]
    pub command: Command,
}

/// Options accepted by every subcommand.
#[derive(Debug, Args)]
pub struct Global {
    /// Configuration file with flat `key=value` lines; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed recorded in reports.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Cap: free red nodes per independent pattern part.
    #[arg(long, global = true, value_name = "N")]
    pub cap_pattern_red: Option<u64>,
    /// Cap: free blue twin classes per independent pattern part.
    #[arg(long, global = true, value_name = "N")]
    pub cap_pattern_blue: Option<u64>,
    /// Cap: red nodes of a host graph.
    #[arg(long, global = true, value_name = "N")]
    pub cap_host_red: Option<u64>,
    /// Cap: blue nodes of a host graph.
    #[arg(long, global = true, value_name = "N")]
    pub cap_host_blue: Option<u64>,
    /// Cap: vertices plus edges of a hypergraph pattern.
    #[arg(long, global = true, value_name = "N")]
    pub cap_hypergraph: Option<u64>,
    /// Cap: blue nodes accepted by exact decomposition search.
    #[arg(long, global = true, value_name = "N")]
    pub cap_search_blue: Option<u64>,
    /// Cap: red nodes accepted by exact decomposition search.
    #[arg(long, global = true, value_name = "N")]
    pub cap_search_red: Option<u64>,
    /// Cap: window of the pump-count search.
    #[arg(long, global = true, value_name = "N")]
    pub cap_pump_window: Option<u64>,
    /// Cap: largest red variable index.
    #[arg(long, global = true, value_name = "N")]
    pub cap_red_index: Option<u64>,
    /// Cap: nodes per colour class for isomorphism tests.
    #[arg(long, global = true, value_name = "N")]
    pub cap_iso: Option<u64>,
    /// Cap: terms of a materialized quantum graph.
    #[arg(long, global = true, value_name = "N")]
    pub cap_quantum_terms: Option<u64>,
}

impl Global {
    /// Every `--cap-*` flag that was given, as `(config key, value)`.
    pub fn cap_overrides(&self) -> Vec<(&'static str, u64)> {
        [
            ("cap-pattern-red", self.cap_pattern_red),
            ("cap-pattern-blue", self.cap_pattern_blue),
            ("cap-host-red", self.cap_host_red),
            ("cap-host-blue", self.cap_host_blue),
            ("cap-hypergraph", self.cap_hypergraph),
            ("cap-search-blue", self.cap_search_blue),
            ("cap-search-red", self.cap_search_red),
            ("cap-pump-window", self.cap_pump_window),
            ("cap-red-index", self.cap_red_index),
            ("cap-iso", self.cap_iso),
            ("cap-quantum-terms", self.cap_quantum_terms),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
        .collect()
    }
}

/// Top-level subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count homomorphisms from a pattern into a host.
    HomCount {
        /// Pattern file.
        #[arg(long)]
        pattern: PathBuf,
        /// Host file.
        #[arg(long)]
        host: PathBuf,
        /// How the files are read.
        #[arg(long, value_enum, default_value_t = HomMode::Incidence)]
        mode: HomMode,
    },
    /// Hypertree decompositions.
    #[command(subcommand)]
    Decomp(DecompCmd),
    /// Guarded counting logic.
    #[command(subcommand)]
    Logic(LogicCmd),
    /// Labeled graphs and their certificates.
    #[command(subcommand)]
    Labeled(LabeledCmd),
    /// Quantum graphs.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Translations between sentences and homomorphism counts.
    #[command(subcommand)]
    Bridge(BridgeCmd),
    /// The shipped worked examples.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
    /// Show the effective configuration.
    Config,
}

/// Input reading mode of `hom-count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HomMode {
    /// Hypergraphs (`vertices`/`edges`).
    Hypergraph,
    /// Incidence graphs (`red`/`blue`/`edges`); hypergraph files are converted.
    Incidence,
    /// Labeled incidence graphs.
    Labeled,
}

/// Decomposition family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Generalised hypertree decompositions.
    Ghd,
    /// Entangled hypertree decompositions.
    Ehd,
}

/// Search engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    /// Complete search.
    Exact,
    /// Fast heuristic; failure proves nothing.
    Greedy,
}

/// Syntax fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SyntaxArg {
    /// The guarded counting logic.
    Gck,
    /// Its normal form.
    Ngck,
}

/// `decomp` subcommands.
#[derive(Debug, Subcommand)]
pub enum DecompCmd {
    /// Check the decomposition conditions.
    Validate {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Decomposition file.
        #[arg(long)]
        decomp: PathBuf,
        /// Decomposition family.
        #[arg(long, value_enum, default_value_t = ModeArg::Ehd)]
        mode: ModeArg,
    },
    /// Find a decomposition of width at most k.
    Search {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Width bound (default: the configured k).
        #[arg(long)]
        k: Option<usize>,
        /// Decomposition family.
        #[arg(long, value_enum, default_value_t = ModeArg::Ehd)]
        mode: ModeArg,
        /// Search engine.
        #[arg(long, value_enum, default_value_t = EngineArg::Exact)]
        engine: EngineArg,
    },
    /// Make an entangled decomposition binary and monotone.
    Normalize {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Decomposition file.
        #[arg(long)]
        decomp: PathBuf,
    },
    /// Turn a generalised decomposition of a distinguishing pattern into an
    /// entangled decomposition of a pumped pattern.
    Ghd2ehd {
        /// Pattern file.
        #[arg(long)]
        pattern: PathBuf,
        /// Generalised decomposition of the pattern.
        #[arg(long)]
        decomp: PathBuf,
        /// First host.
        #[arg(long)]
        a: PathBuf,
        /// Second host.
        #[arg(long)]
        b: PathBuf,
    },
}

/// `logic` subcommands.
#[derive(Debug, Subcommand)]
pub enum LogicCmd {
    /// Evaluate a formula on a graph.
    Eval {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Formula file.
        #[arg(long)]
        formula: PathBuf,
        /// Assignment file `{"red":{i:id},"blue":{j:id}}`.
        #[arg(long)]
        assign: Option<PathBuf>,
    },
    /// Translate a formula into the normal form under a guard function.
    Nf {
        /// Formula file.
        #[arg(long)]
        formula: PathBuf,
        /// Number of blue variables (default: the configured k).
        #[arg(long)]
        k: Option<usize>,
        /// Guard function on the free red variables, e.g. `1=2,3=1`.
        #[arg(long, default_value = "")]
        guard: String,
    },
    /// Check membership in a fragment.
    Check {
        /// Formula file.
        #[arg(long)]
        formula: PathBuf,
        /// Fragment.
        #[arg(long, value_enum, default_value_t = SyntaxArg::Gck)]
        mode: SyntaxArg,
        /// Number of blue variables (default: the configured k).
        #[arg(long)]
        k: Option<usize>,
    },
}

/// `labeled` subcommands.
#[derive(Debug, Subcommand)]
pub enum LabeledCmd {
    /// Evaluate a certificate to its labeled graph.
    EvalCert {
        /// Certificate file.
        #[arg(long)]
        cert: PathBuf,
    },
    /// Build an entangled decomposition of the graph a certificate denotes.
    Cert2ehd {
        /// Certificate file.
        #[arg(long)]
        cert: PathBuf,
    },
    /// Build a label-free certificate from an entangled decomposition.
    Ehd2cert {
        /// Graph file.
        #[arg(long)]
        graph: PathBuf,
        /// Decomposition file.
        #[arg(long)]
        decomp: PathBuf,
    },
}

/// `quantum` subcommands.
#[derive(Debug, Subcommand)]
pub enum QuantumCmd {
    /// Homomorphism value of a quantum graph into a labeled graph.
    Hom {
        /// Quantum graph file.
        #[arg(long)]
        quantum: PathBuf,
        /// Target labeled graph file.
        #[arg(long)]
        target: PathBuf,
    },
    /// Indicator quantum graph mapping values in X to 0 and values in Y to 1.
    Indicator {
        /// Quantum graph file.
        #[arg(long)]
        quantum: PathBuf,
        /// Values mapped to 0 (comma separated).
        #[arg(long = "X", value_delimiter = ',')]
        x: Vec<u64>,
        /// Values mapped to 1 (comma separated).
        #[arg(long = "Y", value_delimiter = ',')]
        y: Vec<u64>,
    },
}

/// `bridge` subcommands.
#[derive(Debug, Subcommand)]
pub enum BridgeCmd {
    /// Sentence stating that the certificate's graph has exactly m homomorphisms.
    FormulaFromCert {
        /// Certificate file.
        #[arg(long)]
        cert: PathBuf,
        /// The count.
        #[arg(long)]
        m: u64,
    },
    /// Indicator quantum graph of a normal-form formula.
    QuantumFromFormula {
        /// Formula file.
        #[arg(long)]
        formula: PathBuf,
        /// Number of blue variables (default: the configured k).
        #[arg(long)]
        k: Option<usize>,
        /// Exact number of blue nodes of the targets.
        #[arg(long)]
        m: u64,
        /// Bound on blue neighbourhood sizes of the targets.
        #[arg(long)]
        d: u64,
    },
    /// Search for a small pattern of bounded width with different counts.
    Distinguish {
        /// First graph.
        #[arg(long)]
        a: PathBuf,
        /// Second graph.
        #[arg(long)]
        b: PathBuf,
        /// Width bound (default: the configured k).
        #[arg(long)]
        k: Option<usize>,
        /// Largest number of blue pattern nodes.
        #[arg(long, default_value_t = 2)]
        max_blue: usize,
        /// Largest number of red pattern nodes.
        #[arg(long, default_value_t = 3)]
        max_red: usize,
    },
    /// Check both directions of the correspondence on a pair of graphs.
    Crosscheck {
        /// First graph.
        #[arg(long)]
        a: PathBuf,
        /// Second graph.
        #[arg(long)]
        b: PathBuf,
        /// Width bound and number of blue variables (default: the configured k).
        #[arg(long)]
        k: Option<usize>,
        /// Largest number of blue pattern nodes.
        #[arg(long, default_value_t = 2)]
        max_blue: usize,
        /// Largest number of red pattern nodes.
        #[arg(long, default_value_t = 3)]
        max_red: usize,
        /// A sentence distinguishing the graphs.
        #[arg(long)]
        sentence: Option<PathBuf>,
    },
}

/// `fixtures` subcommands.
#[derive(Debug, Subcommand)]
pub enum FixturesCmd {
    /// List the shipped fixtures.
    List,
    /// Print one fixture.
    Show {
        /// Fixture file name.
        name: String,
    },
    /// Write every fixture into a directory.
    Export {
        /// Target directory (created if missing).
        #[arg(long)]
        dir: PathBuf,
    },
}
