//! Exhaustive circuit enumeration: ground truth for minimal gate counts
//! at tiny sizes.
//!
//! The oracle deliberately skips the prefix restriction the GP encoding
//! uses, certifying minima over the *unrestricted* circuit space — which
//! also checks that the restriction never inflates minimal lengths at the
//! sizes we can afford to enumerate.

use rayon::prelude::*;
use serde::Serialize;

use crate::entanglement::{entanglement_potential, upper_bound};
use crate::error::{Error, Result};
use crate::genome::{gates_within, GateSet, Topology, TopologyKind};
use crate::scalar::{tol, Scalar};
use crate::search::count_cnots;
use crate::sim::{Gate, PureState};

/// Enumeration budget: `alphabet_size ^ length_cap` may not exceed this.
pub const MAX_ENUMERATION: f64 = 1e8;

/// What the brute-force search certified.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport<T: Scalar> {
    pub n_qubits: usize,
    pub topology: TopologyKind,
    pub gate_set: GateSet,
    pub length_cap: usize,
    /// Smallest circuit length reaching the upper bound, or `None` if no
    /// circuit up to the cap does.
    pub minimal_length: Option<usize>,
    /// Fewest CNOTs among witnesses of `minimal_length`. `None` when the
    /// length was not found or CNOT minimization was not requested.
    pub minimal_cnots: Option<usize>,
    pub witness_circuit: Option<Vec<Gate>>,
    pub witness_potential: Option<T>,
    /// Circuits simulated and scored.
    pub circuits_enumerated: u64,
}

struct Witness<T: Scalar> {
    circuit: Vec<Gate>,
    cnots: usize,
    potential: T,
}

/// Enumerate every circuit of lengths `1..=length_cap` over the full
/// (unrestricted) gate list and certify the minimal length — and, when
/// `minimize_cnots` is set, the minimal CNOT count at that length.
///
/// With `minimize_cnots` the winning length is enumerated completely;
/// without it, enumeration stops at the first witness.
pub fn exhaustive_min_search<T: Scalar>(
    n_qubits: usize,
    topology: &Topology,
    gate_set: GateSet,
    length_cap: usize,
    minimize_cnots: bool,
) -> Result<OracleReport<T>> {
    if length_cap == 0 {
        return Err(Error::usage("length_cap must be at least 1".to_string()));
    }
    if topology.n_qubits() != n_qubits {
        return Err(Error::usage(format!(
            "topology is over {} qubits, search asked for {}",
            topology.n_qubits(),
            n_qubits
        )));
    }
    if n_qubits >= 2 && topology.cnot_pairs().is_empty() {
        return Err(Error::config(format!(
            "topology over {n_qubits} qubits admits no CNOT pairs"
        )));
    }

    let gates = gates_within(topology, gate_set, n_qubits);
    let budget = (gates.len() as f64).powi(length_cap as i32);
    if budget > MAX_ENUMERATION {
        return Err(Error::config(format!(
            "enumeration budget exceeded: {}^{} > {MAX_ENUMERATION:e}",
            gates.len(),
            length_cap
        )));
    }

    let bound = upper_bound(n_qubits)?;
    let target = T::from_u64(bound).expect("bound fits the scalar type") - tol::<T>(1e-9);

    let mut enumerated = 0u64;
    for length in 1..=length_cap {
        let (witness, count) = if minimize_cnots {
            search_length_complete::<T>(&gates, n_qubits, length, target)?
        } else {
            search_length_first_hit::<T>(&gates, n_qubits, length, target)?
        };
        enumerated += count;
        if let Some(w) = witness {
            return Ok(OracleReport {
                n_qubits,
                topology: topology.kind(),
                gate_set,
                length_cap,
                minimal_length: Some(length),
                minimal_cnots: minimize_cnots.then_some(w.cnots),
                witness_circuit: Some(w.circuit),
                witness_potential: Some(w.potential),
                circuits_enumerated: enumerated,
            });
        }
    }

    Ok(OracleReport {
        n_qubits,
        topology: topology.kind(),
        gate_set,
        length_cap,
        minimal_length: None,
        minimal_cnots: None,
        witness_circuit: None,
        witness_potential: None,
        circuits_enumerated: enumerated,
    })
}

/// Scan every circuit of exactly `length` gates; keep the witness with the
/// fewest CNOTs (ties: first in enumeration order). Partitions by leading
/// gate and reduces in index order, so the result is independent of the
/// parallel schedule.
fn search_length_complete<T: Scalar>(
    gates: &[Gate],
    n_qubits: usize,
    length: usize,
    target: T,
) -> Result<(Option<Witness<T>>, u64)> {
    let per_lead: Vec<(Option<Witness<T>>, u64)> = gates
        .par_iter()
        .map(|&lead| {
            let mut state = PureState::<T>::zero(n_qubits)?;
            state.apply(lead)?;
            let mut prefix = vec![lead];
            let mut best: Option<Witness<T>> = None;
            let mut count = 0u64;
            scan(gates, length - 1, &state, &mut prefix, target, &mut |w| {
                let better = match &best {
                    Some(b) => w.cnots < b.cnots,
                    None => true,
                };
                if better {
                    best = Some(w);
                }
                false // keep scanning the whole length
            }, &mut count)?;
            Ok((best, count))
        })
        .collect::<Result<_>>()?;

    let mut total = 0u64;
    let mut best: Option<Witness<T>> = None;
    for (w, count) in per_lead {
        total += count;
        if let Some(w) = w {
            let better = match &best {
                Some(b) => w.cnots < b.cnots,
                None => true,
            };
            if better {
                best = Some(w);
            }
        }
    }
    Ok((best, total))
}

/// Sequential scan of one length that stops at the first witness, keeping
/// the early-exit deterministic.
fn search_length_first_hit<T: Scalar>(
    gates: &[Gate],
    n_qubits: usize,
    length: usize,
    target: T,
) -> Result<(Option<Witness<T>>, u64)> {
    let state = PureState::<T>::zero(n_qubits)?;
    let mut prefix = Vec::with_capacity(length);
    let mut found: Option<Witness<T>> = None;
    let mut count = 0u64;
    scan(gates, length, &state, &mut prefix, target, &mut |w| {
        found = Some(w);
        true // stop
    }, &mut count)?;
    Ok((found, count))
}

/// Depth-first enumeration sharing prefix states. Calls `on_witness` for
/// each circuit whose potential reaches `target`; a `true` return aborts
/// the scan.
fn scan<T: Scalar>(
    gates: &[Gate],
    remaining: usize,
    state: &PureState<T>,
    prefix: &mut Vec<Gate>,
    target: T,
    on_witness: &mut dyn FnMut(Witness<T>) -> bool,
    count: &mut u64,
) -> Result<bool> {
    if remaining == 0 {
        *count += 1;
        let report = entanglement_potential(state)?;
        if report.potential >= target {
            let stop = on_witness(Witness {
                circuit: prefix.clone(),
                cnots: count_cnots(prefix),
                potential: report.potential,
            });
            return Ok(stop);
        }
        return Ok(false);
    }
    for &gate in gates {
        let mut next = state.clone();
        next.apply(gate)?;
        prefix.push(gate);
        let stop = scan(gates, remaining - 1, &next, prefix, target, on_witness, count)?;
        prefix.pop();
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}
