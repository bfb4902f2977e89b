//! `mmes` — search for quantum circuits preparing maximally multipartite
//! entangled states, evaluate circuits, certify minima by brute force,
//! and benchmark the two entanglement measures.
//!
//! Every subcommand prints a single JSON document on stdout (`bench`
//! prints CSV, its native format) with the fully resolved configuration
//! embedded, so any run can be reproduced from its own output. Errors go
//! to stderr as JSON; invalid configuration exits with 2, numerical
//! integrity failures with 3.

mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use mmes_core::bench::run_measure_benchmark;
use mmes_core::entanglement::entanglement_potential;
use mmes_core::evolution::GaConfig;
use mmes_core::genome::{circuit_from_text, circuit_to_text, GateSet};
use mmes_core::oracle::exhaustive_min_search;
use mmes_core::search::{find_minimal_circuit_observed, SearchProgress};
use mmes_core::sim::run_circuit;
use mmes_core::{Error, OracleReport64, SearchResult64};

use config::{
    build_topology, load_file, topology_name, BenchFileConfig, EffectiveBenchConfig,
    EffectiveEvaluateConfig, EffectiveOracleConfig, EffectiveSearchConfig, EvaluateFileConfig,
    GateSetArg, OracleFileConfig, SearchFileConfig, TopologyArg,
};

#[derive(Parser)]
#[command(
    name = "mmes",
    version,
    about = "Minimal quantum circuits for maximally multipartite entangled states"
)]
struct Cli {
    /// Worker threads for parallel sections (0 = all cores)
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find a minimal circuit reaching the target entanglement potential
    Search(SearchArgs),
    /// Score a circuit from a text file
    Evaluate(EvaluateArgs),
    /// Certify minimal gate counts by exhaustive enumeration
    Oracle(OracleArgs),
    /// Time von Neumann entropy against negativity on random states
    Bench(BenchArgs),
}

#[derive(Args)]
struct SearchArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of qubits
    #[arg(long)]
    qubits: Option<usize>,
    /// Connection topology
    #[arg(long, value_enum)]
    topology: Option<TopologyArg>,
    /// Custom topology edges, e.g. "0-1,1-2" (undirected)
    #[arg(long)]
    edges: Option<String>,
    /// Gate set (defaults by qubit count: h-cnot up to 6, h-cnot-t above)
    #[arg(long, value_enum)]
    gate_set: Option<GateSetArg>,
    /// Largest circuit length to try
    #[arg(long)]
    length_cap: Option<usize>,
    /// GP restarts per length
    #[arg(long)]
    restarts: Option<usize>,
    /// Population size (even)
    #[arg(long)]
    population: Option<usize>,
    /// Tournament subset size
    #[arg(long)]
    tournament_size: Option<usize>,
    /// Per-locus probability of keeping a gene during mutation
    #[arg(long)]
    keep_probability: Option<f64>,
    /// Generation budget per GP run
    #[arg(long)]
    generations: Option<usize>,
    /// Master seed (generated and echoed if omitted)
    #[arg(long)]
    seed: Option<u64>,
    /// Target potential in bits (defaults to the analytic upper bound)
    #[arg(long)]
    target: Option<f64>,
    /// Stream per-generation stats as JSON lines to this file ("-" = stderr)
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Write the output document here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Circuit text file (one gate per line: `H q`, `T q`, `CNOT c t`)
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Number of qubits (default: smallest register fitting the circuit)
    #[arg(long)]
    qubits: Option<usize>,
    /// Write the output document here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of qubits
    #[arg(long)]
    qubits: Option<usize>,
    /// Connection topology
    #[arg(long, value_enum)]
    topology: Option<TopologyArg>,
    /// Custom topology edges, e.g. "0-1,1-2" (undirected)
    #[arg(long)]
    edges: Option<String>,
    /// Gate set (defaults by qubit count)
    #[arg(long, value_enum)]
    gate_set: Option<GateSetArg>,
    /// Largest circuit length to enumerate
    #[arg(long)]
    cap: Option<usize>,
    /// Stop at the first witness instead of minimizing the CNOT count
    #[arg(long)]
    no_cnot_minimize: bool,
    /// Write the output document here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    min_qubits: Option<usize>,
    #[arg(long)]
    max_qubits: Option<usize>,
    /// Random states per (qubit count, measure) cell
    #[arg(long)]
    samples: Option<usize>,
    /// Seed (generated and echoed if omitted)
    #[arg(long)]
    seed: Option<u64>,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            emit_error("config", 2, &e.to_string());
            return ExitCode::from(2);
        }
    };

    // single global pool; num_threads(0) lets rayon pick the core count
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, code) = classify(&err);
            emit_error(kind, code, &format!("{err:#}"));
            ExitCode::from(code)
        }
    }
}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    if let Some(core) = err.downcast_ref::<Error>() {
        return match core {
            Error::Config(_) => ("config", 2),
            Error::Usage(_) => ("usage", 2),
            Error::Integrity(_) => ("integrity", 3),
            Error::Numerical(_) => ("numerical", 3),
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return ("io", 1);
    }
    ("error", 1)
}

fn emit_error(kind: &str, code: u8, message: &str) {
    eprintln!(
        "{}",
        json!({ "error": { "kind": kind, "code": code, "message": message } })
    );
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Search(args) => run_search(args, cli.threads),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Oracle(args) => run_oracle(args, cli.threads),
        Command::Bench(args) => run_bench(args),
    }
}

fn write_document(doc: &serde_json::Value, output: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(doc)?;
    match output {
        Some(path) => fs::write(path, text + "\n")
            .with_context(|| format!("writing output to {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn missing(setting: &str) -> Error {
    Error::Config(format!("{setting} is not set (flag or config file)"))
}

fn run_search(args: SearchArgs, threads: usize) -> Result<()> {
    let file: SearchFileConfig = load_file(args.config.as_deref())?;

    let qubits = args.qubits.or(file.qubits).ok_or_else(|| missing("--qubits"))?;
    let topology_arg = match (args.topology, &file.topology) {
        (Some(t), _) => t,
        (None, Some(name)) => TopologyArg::parse_name(name)?,
        (None, None) => TopologyArg::Complete,
    };
    let edges = args.edges.or(file.edges);
    let gate_set: GateSet = match (args.gate_set, &file.gate_set) {
        (Some(g), _) => g.into(),
        (None, Some(name)) => name.parse::<GateSet>()?,
        (None, None) => GateSet::default_for(qubits),
    };
    let length_cap = args.length_cap.or(file.length_cap).unwrap_or(12);
    let restarts = args.restarts.or(file.restarts).unwrap_or(5);
    let seed = args.seed.or(file.seed).unwrap_or_else(rand::random);
    let target = args.target.or(file.target);

    let defaults = GaConfig::<f64>::default();
    let ga = GaConfig {
        population_size: args.population.or(file.population).unwrap_or(defaults.population_size),
        tournament_size: args
            .tournament_size
            .or(file.tournament_size)
            .unwrap_or(defaults.tournament_size),
        keep_probability: args
            .keep_probability
            .or(file.keep_probability)
            .unwrap_or(defaults.keep_probability),
        generations: args.generations.or(file.generations).unwrap_or(defaults.generations),
        seed,
        target_fitness: target,
    };

    let topology = build_topology(topology_arg, qubits, edges.as_deref())?;
    let effective = EffectiveSearchConfig {
        qubits,
        topology: topology_name(topology.kind()).to_string(),
        edges,
        gate_set: gate_set.to_string(),
        length_cap,
        restarts,
        population: ga.population_size,
        tournament_size: ga.tournament_size,
        keep_probability: ga.keep_probability,
        generations: ga.generations,
        seed,
        target,
        threads,
    };

    let stats_sink: Option<Mutex<Box<dyn Write + Send>>> = match &args.stats {
        None => None,
        Some(path) if path.as_os_str() == "-" => {
            Some(Mutex::new(Box::new(std::io::stderr())))
        }
        Some(path) => {
            let f = fs::File::create(path)
                .with_context(|| format!("creating stats file {}", path.display()))?;
            Some(Mutex::new(Box::new(std::io::BufWriter::new(f))))
        }
    };

    let observer = |progress: &SearchProgress<f64>| {
        if let Some(sink) = &stats_sink {
            let mut w = sink.lock().expect("stats sink poisoned");
            if serde_json::to_writer(&mut *w, progress).is_ok() {
                let _ = writeln!(w);
            }
        }
    };

    let result: SearchResult64 =
        find_minimal_circuit_observed(qubits, &topology, gate_set, &ga, length_cap, restarts, observer)?;

    if let Some(sink) = &stats_sink {
        let _ = sink.lock().expect("stats sink poisoned").flush();
    }

    let doc = json!({
        "config": effective,
        "result": result,
        "circuit_text": circuit_to_text(&result.circuit),
    });
    write_document(&doc, args.output.as_ref())
}

fn run_evaluate(args: EvaluateArgs) -> Result<()> {
    let file: EvaluateFileConfig = load_file(args.config.as_deref())?;

    let circuit_path = args
        .circuit
        .or(file.circuit.map(PathBuf::from))
        .ok_or_else(|| missing("--circuit"))?;
    let text = fs::read_to_string(&circuit_path)
        .with_context(|| format!("reading circuit file {}", circuit_path.display()))?;
    let gates = circuit_from_text(&text)?;

    let qubits = args
        .qubits
        .or(file.qubits)
        .or_else(|| gates.iter().map(|g| g.max_qubit() + 1).max())
        .ok_or_else(|| Error::Usage("empty circuit and no --qubits given".to_string()))?;

    let state = run_circuit::<f64>(&gates, qubits)?;
    let report = entanglement_potential(&state)?;

    let effective = EffectiveEvaluateConfig {
        circuit: circuit_path.display().to_string(),
        qubits,
    };
    let doc = json!({
        "config": effective,
        "circuit": gates,
        "report": report,
    });
    write_document(&doc, args.output.as_ref())
}

fn run_oracle(args: OracleArgs, threads: usize) -> Result<()> {
    let file: OracleFileConfig = load_file(args.config.as_deref())?;

    let qubits = args.qubits.or(file.qubits).ok_or_else(|| missing("--qubits"))?;
    let topology_arg = match (args.topology, &file.topology) {
        (Some(t), _) => t,
        (None, Some(name)) => TopologyArg::parse_name(name)?,
        (None, None) => TopologyArg::Complete,
    };
    let edges = args.edges.or(file.edges);
    let gate_set: GateSet = match (args.gate_set, &file.gate_set) {
        (Some(g), _) => g.into(),
        (None, Some(name)) => name.parse::<GateSet>()?,
        (None, None) => GateSet::default_for(qubits),
    };
    let cap = args.cap.or(file.cap).unwrap_or(3);
    let minimize_cnots = if args.no_cnot_minimize {
        false
    } else {
        file.minimize_cnots.unwrap_or(true)
    };

    let topology = build_topology(topology_arg, qubits, edges.as_deref())?;
    let effective = EffectiveOracleConfig {
        qubits,
        topology: topology_name(topology.kind()).to_string(),
        edges,
        gate_set: gate_set.to_string(),
        cap,
        minimize_cnots,
        threads,
    };

    let report: OracleReport64 =
        exhaustive_min_search(qubits, &topology, gate_set, cap, minimize_cnots)?;

    let doc = json!({ "config": effective, "report": report });
    write_document(&doc, args.output.as_ref())
}

fn run_bench(args: BenchArgs) -> Result<()> {
    use rand::SeedableRng;

    let file: BenchFileConfig = load_file(args.config.as_deref())?;
    let min_qubits = args.min_qubits.or(file.min_qubits).unwrap_or(2);
    let max_qubits = args.max_qubits.or(file.max_qubits).unwrap_or(6);
    let samples = args.samples.or(file.samples).unwrap_or(1000);
    let seed = args.seed.or(file.seed).unwrap_or_else(rand::random);

    let effective = EffectiveBenchConfig {
        min_qubits,
        max_qubits,
        samples,
        seed,
    };

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let records = run_measure_benchmark::<f64, _>(min_qubits..=max_qubits, samples, &mut rng)?;

    let mut csv = String::new();
    csv.push_str(&format!("# {}\n", serde_json::to_string(&effective)?));
    csv.push_str("n,measure,samples,mean_seconds,std_seconds\n");
    for r in &records {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n_qubits, r.measure, r.sample_count, r.mean_time, r.std_dev
        ));
    }

    match &args.output {
        Some(path) => fs::write(path, csv)
            .with_context(|| format!("writing CSV to {}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(())
}
