//! Search for quantum circuits that prepare maximally multipartite entangled
//! states (MMES) under arbitrary qubit connection topologies.
//!
//! A state is an MMES when every bipartition of its qubits is maximally
//! entangled. The crate scores candidate circuits with the *entanglement
//! potential* — the sum of the von Neumann entropies of the reduced states
//! over all canonical bipartitions — and searches for minimal circuits with
//! a genetic-programming engine run at increasing circuit lengths.
//!
//! The main pieces:
//!
//! - [`sim`] — dense statevector simulation of H / T / CNOT circuits.
//! - [`entanglement`] — bipartitions, reduced densities, von Neumann
//!   entropy, the entanglement potential and its exact upper bound, and
//!   negativity (kept as the slower benchmark alternative).
//! - [`genome`] — circuits as fixed-length gene strings over
//!   position-dependent, topology-constrained gate alphabets.
//! - [`evolution`] — mutation, two-point crossover, tournament selection,
//!   and the generational loop.
//! - [`search`] — iterative deepening over circuit length, gate and CNOT
//!   counting, connection-graph extraction.
//! - [`oracle`] — exhaustive enumeration certifying minimal gate counts at
//!   tiny sizes.
//! - [`bench`] — timing comparison of the two entanglement measures on
//!   Haar-random states.
//!
//! All numerical code is generic over the real scalar type through
//! [`Scalar`]; `f64` aliases for the main types live at the crate root.

pub mod bench;
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod genome;
pub mod linalg;
pub mod oracle;
pub mod scalar;
pub mod search;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use entanglement::{
    entanglement_potential, enumerate_bipartitions, negativity, reduced_density, upper_bound,
    vn_entropy, Bipartition,
};
pub use evolution::{crossover, evolve, mutate, tournament_select};
pub use genome::{build_alphabet, decode, encode, random_genome, GateAlphabet, GateSet, Topology};
pub use oracle::exhaustive_min_search;
pub use search::{count_cnots, extract_connection_graph, find_minimal_circuit};
pub use sim::{run_circuit, Gate, PureState};

/// Default working-precision aliases.
pub type PureState64 = sim::PureState<f64>;
pub type PureState32 = sim::PureState<f32>;
pub type FitnessReport64 = entanglement::FitnessReport<f64>;
pub type Genome64 = genome::Genome<f64>;
pub type GaConfig64 = evolution::GaConfig<f64>;
pub type GenerationStats64 = evolution::GenerationStats<f64>;
pub type SearchResult64 = search::SearchResult<f64>;
pub type OracleReport64 = oracle::OracleReport<f64>;
