//! Config resolution: command-line flags override config-file keys, which
//! override per-subcommand defaults.
//!
//! The config file is the flat `key = value` format parsed by
//! [`uniq_core::textio::parse_key_values`]. Every key corresponds to a flag
//! of the same name where one exists; a few knobs (`j`, `blocked`, `steps`,
//! `a0`, `parity`, `tol`, `sweep-floor`) are config-file only.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use uniq_core::textio::{parse_key_values, parse_node_file};
use uniq_core::Parity;

/// Bad user input (flags, config file, node file). Mapped to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// Where the direct-side sample nodes come from.
#[derive(Debug, Clone, PartialEq)]
pub enum NodesKind {
    Power,
    Log,
    Custom(PathBuf),
}

impl NodesKind {
    fn parse(raw: &str) -> Result<Self, UsageError> {
        match raw {
            "power" => Ok(NodesKind::Power),
            "log" => Ok(NodesKind::Log),
            _ => match raw.strip_prefix("custom:") {
                Some(path) if !path.is_empty() => Ok(NodesKind::Custom(PathBuf::from(path))),
                _ => usage(format!(
                    "--nodes-kind must be power, log or custom:FILE, got {raw:?}"
                )),
            },
        }
    }

    pub fn echo(&self) -> String {
        match self {
            NodesKind::Power => "power".into(),
            NodesKind::Log => "log".into(),
            NodesKind::Custom(p) => format!("custom:{}", p.display()),
        }
    }
}

/// Raw optional flags shared by every subcommand (clap layer).
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Opts {
    /// Direct-side node exponent α ∈ (0,1)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Transform-side node exponent β ∈ (0,1)
    #[arg(long)]
    pub beta: Option<f64>,
    /// Grid resolution per axis (region, sweep)
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of basis functions N
    #[arg(long)]
    pub basis: Option<usize>,
    /// Sample nodes per side M
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Largest derivative/moment order k
    #[arg(long = "k-max")]
    pub k_max: Option<u32>,
    /// Gap-growth factor ω for the recursion
    #[arg(long)]
    pub omega: Option<f64>,
    /// Direct-side node family: power | log | custom:FILE
    #[arg(long = "nodes-kind")]
    pub nodes_kind: Option<String>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Config file (flat `key = value` lines, `#` comments)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for randomized inputs
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Fully resolved parameters for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub alpha: f64,
    pub beta: f64,
    pub grid: usize,
    pub basis: usize,
    pub nodes: usize,
    pub k_max: u32,
    pub omega: f64,
    pub nodes_kind: NodesKind,
    /// Pre-loaded node values when `nodes_kind` is `custom:FILE`.
    pub custom_nodes: Option<Vec<f64>>,
    pub out: PathBuf,
    pub seed: u64,
    pub parity: Parity,
    /// Block index of the sharpness construction.
    pub j: u32,
    pub blocked: bool,
    /// Recursion step count; `None` means "enough for a 1e-12 contraction".
    pub steps: Option<usize>,
    /// Recursion seed a₀.
    pub a0: f64,
    /// Tolerance for the subcommand's headline assertion.
    pub tol: f64,
    /// Smallest acceptable normalized σ_min over in-region sweep cells.
    pub sweep_floor: f64,
    pub config_file: Option<PathBuf>,
}

const KNOWN_KEYS: &[&str] = &[
    "alpha", "beta", "grid", "basis", "nodes", "k-max", "omega", "nodes-kind", "out", "seed",
    "parity", "j", "blocked", "steps", "a0", "tol", "sweep-floor",
];

struct FileValues(BTreeMap<String, String>);

impl FileValues {
    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, UsageError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => match raw.parse() {
                Ok(v) => Ok(Some(v)),
                Err(_) => usage(format!("config key {key}: cannot parse value {raw:?}")),
            },
        }
    }
}

/// Merge flags, config file and defaults for `command`.
pub fn resolve(command: &'static str, opts: &Opts) -> Result<RunConfig, UsageError> {
    let file = match &opts.config {
        None => FileValues(BTreeMap::new()),
        Some(path) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
            let map = parse_key_values(&src)
                .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
            if let Some(k) = map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
                return usage(format!(
                    "config {}: unknown key {k:?} (known: {})",
                    path.display(),
                    KNOWN_KEYS.join(", ")
                ));
            }
            FileValues(map)
        }
    };

    // Per-subcommand defaults. The recursion default pair keeps its limit at
    // the round value 1/3; sharpness defaults keep the first block short
    // enough to materialize comfortably.
    let (def_alpha, def_beta) = match command {
        "recursion" => (0.2, 0.2),
        "sharpness" => (0.5, 0.5),
        _ => (0.25, 0.25),
    };
    let def_grid = match command {
        "region" => 128,
        _ => 8,
    };
    let (def_basis, def_nodes) = match command {
        "reconstruct" => (10, 100),
        _ => (6, 40),
    };
    let def_k_max = match command {
        "moments" => 3,
        "sharpness" => 12,
        _ => 40,
    };
    let def_tol = match command {
        "reconstruct" => 1e-7,
        _ => 1e-10,
    };

    let alpha = opts.alpha.map(Ok).or_else(|| file.get("alpha").transpose());
    let beta = opts.beta.map(Ok).or_else(|| file.get("beta").transpose());
    let grid = opts.grid.map(Ok).or_else(|| file.get("grid").transpose());
    let basis = opts.basis.map(Ok).or_else(|| file.get("basis").transpose());
    let nodes = opts.nodes.map(Ok).or_else(|| file.get("nodes").transpose());
    let k_max = opts.k_max.map(Ok).or_else(|| file.get("k-max").transpose());
    let omega = opts.omega.map(Ok).or_else(|| file.get("omega").transpose());
    let seed = opts.seed.map(Ok).or_else(|| file.get("seed").transpose());
    let kind_raw = opts
        .nodes_kind
        .clone()
        .map(Ok)
        .or_else(|| file.get::<String>("nodes-kind").transpose());
    let out = opts
        .out
        .clone()
        .map(Ok)
        .or_else(|| file.get::<PathBuf>("out").transpose());

    let parity = match file.get::<String>("parity")?.as_deref() {
        None | Some("even") => Parity::Even,
        Some("all") => Parity::All,
        Some(other) => return usage(format!("config key parity: expected even|all, got {other:?}")),
    };
    let blocked = match file.get::<String>("blocked")?.as_deref() {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => {
            return usage(format!("config key blocked: expected true|false, got {other:?}"))
        }
    };

    let nodes_kind = match kind_raw.transpose()? {
        None => NodesKind::Power,
        Some(raw) => NodesKind::parse(&raw)?,
    };
    let custom_nodes = match &nodes_kind {
        NodesKind::Custom(path) => {
            let src = std::fs::read_to_string(path).map_err(|e| {
                UsageError(format!("cannot read node file {}: {e}", path.display()))
            })?;
            let values = parse_node_file(&src)
                .map_err(|e| UsageError(format!("node file {}: {e}", path.display())))?;
            Some(values)
        }
        _ => None,
    };

    let cfg = RunConfig {
        command,
        alpha: alpha.transpose()?.unwrap_or(def_alpha),
        beta: beta.transpose()?.unwrap_or(def_beta),
        grid: grid.transpose()?.unwrap_or(def_grid),
        basis: basis.transpose()?.unwrap_or(def_basis),
        nodes: nodes.transpose()?.unwrap_or_else(|| {
            custom_nodes.as_ref().map_or(def_nodes, Vec::len)
        }),
        k_max: k_max.transpose()?.unwrap_or(def_k_max),
        omega: omega.transpose()?.unwrap_or(1.0),
        nodes_kind,
        custom_nodes,
        out: out.transpose()?.unwrap_or_else(|| PathBuf::from("out")),
        seed: seed.transpose()?.unwrap_or(1),
        parity,
        j: file.get("j")?.unwrap_or(8),
        blocked,
        steps: file.get("steps")?,
        a0: file.get("a0")?.unwrap_or(10.0),
        tol: file.get("tol")?.unwrap_or(def_tol),
        sweep_floor: file.get("sweep-floor")?.unwrap_or(1e-12),
        config_file: opts.config.clone(),
    };

    if matches!(command, "region" | "sweep") && cfg.grid < 2 {
        return usage(format!("--grid must be at least 2, got {}", cfg.grid));
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) || !(cfg.beta > 0.0 && cfg.beta < 1.0) {
        return usage(format!(
            "--alpha and --beta must lie in (0,1), got {} and {}",
            cfg.alpha, cfg.beta
        ));
    }
    if cfg.basis == 0 {
        return usage("--basis must be positive");
    }
    if let Some(values) = &cfg.custom_nodes {
        if cfg.nodes > values.len() {
            return usage(format!(
                "--nodes {} exceeds the {} entries in the node file",
                cfg.nodes,
                values.len()
            ));
        }
    }
    Ok(cfg)
}
