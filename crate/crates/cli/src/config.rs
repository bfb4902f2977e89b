//! Config resolution: command-line flags override a JSON config file,
//! which overrides built-in defaults. Every command embeds its fully
//! resolved configuration in the output document so a run can be
//! reproduced from its own output.

use std::path::Path;

use anyhow::{Context, Result};
use mmes_core::genome::{GateSet, Topology, TopologyKind};
use mmes_core::Error;
use serde::{Deserialize, Serialize};

/// Topology selector shared by flags and config files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TopologyArg {
    Complete,
    #[value(alias = "spin_chain")]
    SpinChain,
    Custom,
}

impl TopologyArg {
    pub fn parse_name(name: &str) -> Result<Self> {
        match name {
            "complete" => Ok(TopologyArg::Complete),
            "spin-chain" | "spin_chain" => Ok(TopologyArg::SpinChain),
            "custom" => Ok(TopologyArg::Custom),
            other => Err(Error::Config(format!(
                "unknown topology {other:?} (expected complete, spin-chain or custom)"
            ))
            .into()),
        }
    }

}

/// Gate-set selector shared by flags and config files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GateSetArg {
    #[value(name = "h-cnot")]
    HCnot,
    #[value(name = "h-cnot-t")]
    HCnotT,
}

impl From<GateSetArg> for GateSet {
    fn from(value: GateSetArg) -> Self {
        match value {
            GateSetArg::HCnot => GateSet::HCnot,
            GateSetArg::HCnotT => GateSet::HCnotT,
        }
    }
}

/// Parse a custom edge list like `0-1,1-2`. Edges are undirected
/// connections; both CNOT directions are allowed across each edge.
pub fn parse_edges(spec: &str) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let (a, b) = token
            .split_once('-')
            .ok_or_else(|| Error::Config(format!("edge {token:?} is not of the form a-b")))?;
        let a: usize = a
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("edge {token:?}: bad qubit index")))?;
        let b: usize = b
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("edge {token:?}: bad qubit index")))?;
        edges.push((a, b));
    }
    if edges.is_empty() {
        return Err(Error::Config(format!("edge list {spec:?} is empty")).into());
    }
    Ok(edges)
}

/// Build the topology named by the resolved config.
pub fn build_topology(
    kind: TopologyArg,
    n_qubits: usize,
    edges: Option<&str>,
) -> Result<Topology> {
    let topology = match kind {
        TopologyArg::Complete => Topology::complete(n_qubits)?,
        TopologyArg::SpinChain => Topology::spin_chain(n_qubits)?,
        TopologyArg::Custom => {
            let spec = edges.ok_or_else(|| {
                Error::Config("custom topology requires --edges".to_string())
            })?;
            let mut pairs = Vec::new();
            for (a, b) in parse_edges(spec)? {
                pairs.push((a, b));
                pairs.push((b, a));
            }
            Topology::custom(n_qubits, pairs)?
        }
    };
    Ok(topology)
}

pub fn topology_name(kind: TopologyKind) -> &'static str {
    match kind {
        TopologyKind::Complete => "complete",
        TopologyKind::SpinChain => "spin_chain",
        TopologyKind::Custom => "custom",
    }
}

pub fn load_file<C: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> Result<C> {
    match path {
        None => Ok(C::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            let parsed = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("config file {}: {e}", path.display())))?;
            Ok(parsed)
        }
    }
}

/// File-configurable settings for `search`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchFileConfig {
    pub qubits: Option<usize>,
    pub topology: Option<String>,
    pub edges: Option<String>,
    pub gate_set: Option<String>,
    pub length_cap: Option<usize>,
    pub restarts: Option<usize>,
    pub population: Option<usize>,
    pub tournament_size: Option<usize>,
    pub keep_probability: Option<f64>,
    pub generations: Option<usize>,
    pub seed: Option<u64>,
    pub target: Option<f64>,
}

/// File-configurable settings for `oracle`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleFileConfig {
    pub qubits: Option<usize>,
    pub topology: Option<String>,
    pub edges: Option<String>,
    pub gate_set: Option<String>,
    pub cap: Option<usize>,
    pub minimize_cnots: Option<bool>,
}

/// File-configurable settings for `bench`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchFileConfig {
    pub min_qubits: Option<usize>,
    pub max_qubits: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

/// File-configurable settings for `evaluate`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateFileConfig {
    pub circuit: Option<String>,
    pub qubits: Option<usize>,
}

/// Fully resolved `search` configuration, echoed in the output.
#[derive(Debug, Serialize)]
pub struct EffectiveSearchConfig {
    pub qubits: usize,
    pub topology: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<String>,
    pub gate_set: String,
    pub length_cap: usize,
    pub restarts: usize,
    pub population: usize,
    pub tournament_size: usize,
    pub keep_probability: f64,
    pub generations: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    pub threads: usize,
}

/// Fully resolved `oracle` configuration.
#[derive(Debug, Serialize)]
pub struct EffectiveOracleConfig {
    pub qubits: usize,
    pub topology: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<String>,
    pub gate_set: String,
    pub cap: usize,
    pub minimize_cnots: bool,
    pub threads: usize,
}

/// Fully resolved `bench` configuration.
#[derive(Debug, Serialize)]
pub struct EffectiveBenchConfig {
    pub min_qubits: usize,
    pub max_qubits: usize,
    pub samples: usize,
    pub seed: u64,
}

/// Fully resolved `evaluate` configuration.
#[derive(Debug, Serialize)]
pub struct EffectiveEvaluateConfig {
    pub circuit: String,
    pub qubits: usize,
}
