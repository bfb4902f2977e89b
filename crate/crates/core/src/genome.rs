//! Circuit encoding for the GP engine: fixed-length gene strings over
//! position-dependent gate alphabets, constrained by system topology.
//!
//! Position `p` (1-indexed) only lists gates confined to the first
//! `min(n, 2p)` qubits — `p` two-qubit gates cannot touch more than `2p`
//! qubits, so this prunes qubit-permutation-equivalent circuits without
//! shrinking the set of reachable states (up to relabeling).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entanglement::FitnessReport;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sim::Gate;

/// Which CNOT pairs a system admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopologyKind {
    SpinChain,
    Complete,
    Custom,
}

impl std::fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TopologyKind::SpinChain => write!(f, "spin_chain"),
            TopologyKind::Complete => write!(f, "complete"),
            TopologyKind::Custom => write!(f, "custom"),
        }
    }
}

/// Allowed CNOT connections over `n` qubits.
///
/// Pairs are ordered (control, target) and kept sorted, so everything
/// derived from a topology enumerates deterministically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Topology {
    n_qubits: usize,
    kind: TopologyKind,
    cnot_pairs: Vec<(usize, usize)>,
}

impl Topology {
    /// Nearest-neighbour chain: both directions of every `|i - j| = 1` edge.
    pub fn spin_chain(n_qubits: usize) -> Result<Self> {
        Self::check_qubits(n_qubits)?;
        let mut pairs = Vec::new();
        for i in 0..n_qubits {
            for j in 0..n_qubits {
                if i.abs_diff(j) == 1 {
                    pairs.push((i, j));
                }
            }
        }
        pairs.sort_unstable();
        Ok(Topology {
            n_qubits,
            kind: TopologyKind::SpinChain,
            cnot_pairs: pairs,
        })
    }

    /// Every ordered pair of distinct qubits.
    pub fn complete(n_qubits: usize) -> Result<Self> {
        Self::check_qubits(n_qubits)?;
        let mut pairs = Vec::new();
        for i in 0..n_qubits {
            for j in 0..n_qubits {
                if i != j {
                    pairs.push((i, j));
                }
            }
        }
        Ok(Topology {
            n_qubits,
            kind: TopologyKind::Complete,
            cnot_pairs: pairs,
        })
    }

    /// Arbitrary ordered pair set. Pairs are validated, sorted and deduped.
    pub fn custom(
        n_qubits: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        Self::check_qubits(n_qubits)?;
        let mut cnot_pairs: Vec<(usize, usize)> = Vec::new();
        for (control, target) in pairs {
            if control == target {
                return Err(Error::usage(format!(
                    "CNOT pair ({control}, {target}) has equal control and target"
                )));
            }
            if control >= n_qubits || target >= n_qubits {
                return Err(Error::usage(format!(
                    "CNOT pair ({control}, {target}) out of range for {n_qubits} qubits"
                )));
            }
            cnot_pairs.push((control, target));
        }
        cnot_pairs.sort_unstable();
        cnot_pairs.dedup();
        Ok(Topology {
            n_qubits,
            kind: TopologyKind::Custom,
            cnot_pairs,
        })
    }

    fn check_qubits(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 {
            return Err(Error::usage("topology needs at least 1 qubit".to_string()));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    /// Ordered (control, target) pairs, lexicographically sorted.
    pub fn cnot_pairs(&self) -> &[(usize, usize)] {
        &self.cnot_pairs
    }

    pub fn allows(&self, control: usize, target: usize) -> bool {
        self.cnot_pairs.binary_search(&(control, target)).is_ok()
    }
}

/// The single-qubit part of the gate set. CNOT is always included; T is
/// empirically unnecessary below 7 qubits, which is what
/// [`GateSet::default_for`] encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateSet {
    HCnot,
    HCnotT,
}

impl GateSet {
    /// H+CNOT up to 6 qubits, H+CNOT+T from 7 on.
    pub fn default_for(n_qubits: usize) -> Self {
        if n_qubits <= 6 {
            GateSet::HCnot
        } else {
            GateSet::HCnotT
        }
    }

    pub fn includes_t(&self) -> bool {
        matches!(self, GateSet::HCnotT)
    }
}

impl std::fmt::Display for GateSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GateSet::HCnot => write!(f, "h-cnot"),
            GateSet::HCnotT => write!(f, "h-cnot-t"),
        }
    }
}

impl std::str::FromStr for GateSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h-cnot" => Ok(GateSet::HCnot),
            "h-cnot-t" => Ok(GateSet::HCnotT),
            other => Err(Error::usage(format!(
                "unknown gate set {other:?} (expected h-cnot or h-cnot-t)"
            ))),
        }
    }
}

/// Every legal gate whose qubits all lie below `qubit_limit`, in the fixed
/// order: H by qubit, T by qubit (if enabled), CNOT in pair order.
pub(crate) fn gates_within(
    topology: &Topology,
    gate_set: GateSet,
    qubit_limit: usize,
) -> Vec<Gate> {
    let limit = qubit_limit.min(topology.n_qubits());
    let mut gates = Vec::new();
    for q in 0..limit {
        gates.push(Gate::h(q));
    }
    if gate_set.includes_t() {
        for q in 0..limit {
            gates.push(Gate::t(q));
        }
    }
    for &(control, target) in topology.cnot_pairs() {
        if control < limit && target < limit {
            gates.push(Gate::cnot(control, target));
        }
    }
    gates
}

/// Per-position gate lists for genomes of a fixed length.
#[derive(Clone, Debug, PartialEq)]
pub struct GateAlphabet {
    n_qubits: usize,
    per_position: Vec<Vec<Gate>>,
}

impl GateAlphabet {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Genome length L.
    pub fn len(&self) -> usize {
        self.per_position.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_position.is_empty()
    }

    /// Legal gates at 0-based position `index`.
    pub fn gates_at(&self, index: usize) -> &[Gate] {
        &self.per_position[index]
    }
}

/// Build the position-dependent alphabet for a topology and gate set.
///
/// The prefix restriction confines position `p` (1-indexed) to qubits
/// below `min(n, 2p)`; it becomes vacuous once `2p >= n`.
pub fn build_alphabet(
    topology: &Topology,
    gate_set: GateSet,
    length: usize,
) -> Result<GateAlphabet> {
    if length == 0 {
        return Err(Error::usage("genome length must be at least 1".to_string()));
    }
    if topology.n_qubits() >= 2 && topology.cnot_pairs().is_empty() {
        return Err(Error::config(format!(
            "topology over {} qubits admits no CNOT pairs",
            topology.n_qubits()
        )));
    }
    let per_position = (1..=length)
        .map(|p| gates_within(topology, gate_set, 2 * p))
        .collect();
    Ok(GateAlphabet {
        n_qubits: topology.n_qubits(),
        per_position,
    })
}

/// GP individual: one gene per position, indexing that position's gate
/// list, with a lazily filled fitness cache.
#[derive(Clone, Debug, Serialize)]
pub struct Genome<T: Scalar> {
    genes: Vec<usize>,
    #[serde(skip)]
    cached: Option<FitnessReport<T>>,
}

impl<T: Scalar> Genome<T> {
    pub(crate) fn from_genes(genes: Vec<usize>) -> Self {
        Genome {
            genes,
            cached: None,
        }
    }

    pub fn genes(&self) -> &[usize] {
        &self.genes
    }

    pub(crate) fn genes_mut(&mut self) -> &mut [usize] {
        &mut self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn fitness(&self) -> Option<&FitnessReport<T>> {
        self.cached.as_ref()
    }

    /// Cached potential, if the genome has been evaluated.
    pub fn potential(&self) -> Option<T> {
        self.cached.as_ref().map(|r| r.potential)
    }

    pub fn set_fitness(&mut self, report: FitnessReport<T>) {
        self.cached = Some(report);
    }

    pub fn clear_fitness(&mut self) {
        self.cached = None;
    }
}

/// Sample a genome uniformly: each gene uniform over its position's list.
pub fn random_genome<T: Scalar, R: Rng + ?Sized>(
    alphabet: &GateAlphabet,
    rng: &mut R,
) -> Genome<T> {
    let genes = (0..alphabet.len())
        .map(|p| rng.random_range(0..alphabet.gates_at(p).len()))
        .collect();
    Genome::from_genes(genes)
}

/// Decode a genome into its gate sequence.
pub fn decode<T: Scalar>(genome: &Genome<T>, alphabet: &GateAlphabet) -> Result<Vec<Gate>> {
    if genome.len() != alphabet.len() {
        return Err(Error::integrity(format!(
            "genome length {} does not match alphabet length {}",
            genome.len(),
            alphabet.len()
        )));
    }
    genome
        .genes()
        .iter()
        .enumerate()
        .map(|(p, &g)| {
            alphabet.gates_at(p).get(g).copied().ok_or_else(|| {
                Error::integrity(format!(
                    "gene {g} at position {p} exceeds alphabet size {}",
                    alphabet.gates_at(p).len()
                ))
            })
        })
        .collect()
}

/// Encode a gate sequence as a genome, the inverse of [`decode`].
pub fn encode<T: Scalar>(gates: &[Gate], alphabet: &GateAlphabet) -> Result<Genome<T>> {
    if gates.len() != alphabet.len() {
        return Err(Error::usage(format!(
            "circuit length {} does not match alphabet length {}",
            gates.len(),
            alphabet.len()
        )));
    }
    let genes = gates
        .iter()
        .enumerate()
        .map(|(p, gate)| {
            alphabet
                .gates_at(p)
                .iter()
                .position(|g| g == gate)
                .ok_or_else(|| {
                    Error::usage(format!("gate {gate} is not legal at position {}", p + 1))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Genome::from_genes(genes))
}

/// Render a circuit in the one-gate-per-line text format.
pub fn circuit_to_text(gates: &[Gate]) -> String {
    let mut out = String::new();
    for gate in gates {
        out.push_str(&gate.to_string());
        out.push('\n');
    }
    out
}

/// Parse the text format. Blank lines and `#` comments are skipped.
pub fn circuit_from_text(text: &str) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let gate: Gate = line
            .parse()
            .map_err(|e| Error::usage(format!("line {}: {e}", lineno + 1)))?;
        gates.push(gate);
    }
    Ok(gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spin_chain_pairs() {
        let t = Topology::spin_chain(4).unwrap();
        assert_eq!(
            t.cnot_pairs(),
            &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)]
        );
        assert!(t.allows(1, 2));
        assert!(!t.allows(0, 2));
    }

    #[test]
    fn complete_pairs() {
        let t = Topology::complete(3).unwrap();
        assert_eq!(t.cnot_pairs().len(), 6);
        assert!(t.allows(2, 0));
    }

    #[test]
    fn custom_validation() {
        assert!(Topology::custom(3, [(0, 0)]).is_err());
        assert!(Topology::custom(3, [(0, 3)]).is_err());
        let t = Topology::custom(3, [(2, 1), (0, 1), (2, 1)]).unwrap();
        assert_eq!(t.cnot_pairs(), &[(0, 1), (2, 1)]);
    }

    #[test]
    fn gate_set_default_switch() {
        assert_eq!(GateSet::default_for(6), GateSet::HCnot);
        assert_eq!(GateSet::default_for(7), GateSet::HCnotT);
    }

    #[test]
    fn alphabet_counts_complete_n3() {
        let t = Topology::complete(3).unwrap();
        let a = build_alphabet(&t, GateSet::HCnot, 3).unwrap();
        // position 1: qubits < 2 -> 2 H + 2 CNOT
        assert_eq!(a.gates_at(0).len(), 4);
        // positions >= 2: full register -> 3 H + 6 CNOT
        assert_eq!(a.gates_at(1).len(), 9);
        assert_eq!(a.gates_at(2).len(), 9);
    }

    #[test]
    fn alphabet_counts_spin_chain_n4() {
        let t = Topology::spin_chain(4).unwrap();
        let a = build_alphabet(&t, GateSet::HCnot, 3).unwrap();
        assert_eq!(a.gates_at(1).len(), 10); // 4 H + 6 CNOT
        assert_eq!(a.gates_at(2).len(), 10);
        // position 1 is confined to qubits {0, 1}
        assert_eq!(a.gates_at(0).len(), 4);
        assert!(a.gates_at(0).iter().all(|g| g.max_qubit() < 2));
    }

    #[test]
    fn alphabet_includes_t_when_enabled() {
        let t = Topology::complete(3).unwrap();
        let a = build_alphabet(&t, GateSet::HCnotT, 2).unwrap();
        assert_eq!(a.gates_at(1).len(), 12); // 3 H + 3 T + 6 CNOT
        assert_eq!(a.gates_at(1)[3], Gate::t(0));
    }

    #[test]
    fn alphabet_rejects_disconnected_topology() {
        let t = Topology::custom(2, []).unwrap();
        assert!(matches!(
            build_alphabet(&t, GateSet::HCnot, 2),
            Err(Error::Config(_))
        ));
        // single qubit has no pairs and that is fine
        let t1 = Topology::custom(1, []).unwrap();
        assert!(build_alphabet(&t1, GateSet::HCnot, 2).is_ok());
    }

    #[test]
    fn alphabet_is_deterministic() {
        let t = Topology::spin_chain(5).unwrap();
        let a = build_alphabet(&t, GateSet::HCnot, 6).unwrap();
        let b = build_alphabet(&t, GateSet::HCnot, 6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn prefix_restriction_sound_at_every_position() {
        let t = Topology::complete(6).unwrap();
        let a = build_alphabet(&t, GateSet::HCnot, 5).unwrap();
        for p in 0..a.len() {
            let limit = 6usize.min(2 * (p + 1));
            assert!(!a.gates_at(p).is_empty());
            assert!(a.gates_at(p).iter().all(|g| g.max_qubit() < limit));
        }
    }

    #[test]
    fn random_genome_is_legal_and_deterministic() {
        let t = Topology::complete(3).unwrap();
        let a = build_alphabet(&t, GateSet::HCnot, 5).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g1: Genome<f64> = random_genome(&a, &mut rng);
        assert_eq!(g1.len(), 5);
        assert!(g1.fitness().is_none());
        for (p, &gene) in g1.genes().iter().enumerate() {
            assert!(gene < a.gates_at(p).len());
        }

        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let g2: Genome<f64> = random_genome(&a, &mut rng2);
        assert_eq!(g1.genes(), g2.genes());
    }

    #[test]
    fn decode_all_zero_genes() {
        let t = Topology::complete(2).unwrap();
        let a = build_alphabet(&t, GateSet::HCnot, 3).unwrap();
        let genome = Genome::<f64>::from_genes(vec![0, 0, 0]);
        let gates = decode(&genome, &a).unwrap();
        assert_eq!(gates, vec![Gate::h(0), Gate::h(0), Gate::h(0)]);
    }

    #[test]
    fn encode_decode_round_trip() {
        let t = Topology::complete(2).unwrap();
        let a = build_alphabet(&t, GateSet::HCnot, 2).unwrap();
        let circuit = vec![Gate::h(0), Gate::cnot(0, 1)];
        let genome: Genome<f64> = encode(&circuit, &a).unwrap();
        assert_eq!(decode(&genome, &a).unwrap(), circuit);
    }

    #[test]
    fn decode_rejects_corrupt_genome() {
        let t = Topology::complete(2).unwrap();
        let a = build_alphabet(&t, GateSet::HCnot, 2).unwrap();
        let bad = Genome::<f64>::from_genes(vec![0, 99]);
        assert!(matches!(decode(&bad, &a), Err(Error::Integrity(_))));
        let short = Genome::<f64>::from_genes(vec![0]);
        assert!(matches!(decode(&short, &a), Err(Error::Integrity(_))));
    }

    #[test]
    fn random_genomes_decode_cleanly() {
        let t = Topology::spin_chain(4).unwrap();
        let a = build_alphabet(&t, GateSet::HCnot, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let g: Genome<f64> = random_genome(&a, &mut rng);
            decode(&g, &a).unwrap();
        }
    }

    #[test]
    fn circuit_text_round_trip() {
        let circuit = vec![Gate::h(0), Gate::cnot(0, 1), Gate::t(1)];
        let text = circuit_to_text(&circuit);
        assert_eq!(text, "H 0\nCNOT 0 1\nT 1\n");
        assert_eq!(circuit_from_text(&text).unwrap(), circuit);

        let with_noise = "# preparation\n\nH 0\n  CNOT 0 1\nT 1\n";
        assert_eq!(circuit_from_text(with_noise).unwrap(), circuit);

        let err = circuit_from_text("H 0\nBAD 1\n").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}
