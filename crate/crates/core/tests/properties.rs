//! Property suite over the simulator, the entanglement measures and the
//! GP operators. Runnable on its own via
//! `cargo test -p mmes-core --test properties`.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mmes_core::bench::random_pure_state;
use mmes_core::entanglement::{
    entanglement_potential, enumerate_bipartitions, reduced_density_mask, upper_bound, vn_entropy,
};
use mmes_core::evolution::{crossover, mutate, GaConfig};
use mmes_core::genome::{build_alphabet, random_genome, GateSet, Topology};
use mmes_core::search::find_minimal_circuit;
use mmes_core::sim::{run_circuit, Gate, PureState};

/// Uniformly random gate over the complete topology with T enabled.
fn random_gate<R: Rng>(n: usize, rng: &mut R) -> Gate {
    match rng.random_range(0..3) {
        0 => Gate::h(rng.random_range(0..n)),
        1 => Gate::t(rng.random_range(0..n)),
        _ => {
            let control = rng.random_range(0..n);
            let target = loop {
                let t = rng.random_range(0..n);
                if t != control {
                    break t;
                }
            };
            Gate::cnot(control, target)
        }
    }
}

fn random_circuit<R: Rng>(n: usize, len: usize, rng: &mut R) -> Vec<Gate> {
    (0..len).map(|_| random_gate(n, rng)).collect()
}

/// Relabel qubits: bit `q` of each basis index moves to bit `perm[q]`.
fn permute_qubits(state: &PureState<f64>, perm: &[usize]) -> PureState<f64> {
    let n = state.n_qubits();
    let mut amps = vec![num_complex::Complex::new(0.0, 0.0); state.dim()];
    for (i, amp) in state.amplitudes().iter().enumerate() {
        let mut j = 0usize;
        for (q, &target) in perm.iter().enumerate() {
            if i >> q & 1 == 1 {
                j |= 1 << target;
            }
        }
        amps[j] = *amp;
    }
    PureState::from_amplitudes(n, amps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Norm stays within 1e-9 of 1 after up to 100 random gates.
    #[test]
    fn unitarity_under_random_circuits(seed in 0u64..1_000, n in 2usize..=5, len in 1usize..=100) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let circuit = random_circuit(n, len, &mut rng);
        let state = run_circuit::<f64>(&circuit, n).unwrap();
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-9);
    }

    /// Applying H or CNOT twice is the identity, elementwise to 1e-12.
    #[test]
    fn involution_of_h_and_cnot(seed in 0u64..1_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let reference = run_circuit::<f64>(&random_circuit(n, 12, &mut rng), n).unwrap();
        for gate in [Gate::h(1), Gate::cnot(0, 2), Gate::cnot(2, 1)] {
            let mut twice = reference.clone();
            twice.apply(gate).unwrap();
            twice.apply(gate).unwrap();
            for (a, b) in twice.amplitudes().iter().zip(reference.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }

    /// Gates on disjoint qubit sets commute, elementwise to 1e-12.
    #[test]
    fn disjoint_gates_commute(seed in 0u64..1_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 4;
        let base = run_circuit::<f64>(&random_circuit(n, 10, &mut rng), n).unwrap();
        let first = match rng.random_range(0..2) {
            0 => Gate::h(rng.random_range(0..2)),
            _ => Gate::cnot(0, 1),
        };
        let second = match rng.random_range(0..2) {
            0 => Gate::t(2 + rng.random_range(0..2)),
            _ => Gate::cnot(3, 2),
        };
        let mut ab = base.clone();
        ab.apply(first).unwrap();
        ab.apply(second).unwrap();
        let mut ba = base.clone();
        ba.apply(second).unwrap();
        ba.apply(first).unwrap();
        for (a, b) in ab.amplitudes().iter().zip(ba.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    /// For pure states the two sides of any bipartition carry the same
    /// entropy, within 1e-8.
    #[test]
    fn pure_state_entropy_symmetry(seed in 0u64..1_000, n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_pure_state::<f64, _>(n, &mut rng).unwrap();
        for part in enumerate_bipartitions(n).unwrap() {
            let y_side = vn_entropy(&reduced_density_mask(&state, part.y_mask()).unwrap()).unwrap();
            let x_side = vn_entropy(&reduced_density_mask(&state, part.x_mask()).unwrap()).unwrap();
            prop_assert!((y_side - x_side).abs() < 1e-8);
        }
    }

    /// The potential is invariant under any relabeling of qubits.
    #[test]
    fn potential_permutation_invariance(seed in 0u64..1_000, n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = run_circuit::<f64>(&random_circuit(n, 14, &mut rng), n).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let permuted = permute_qubits(&state, &perm);
        let original = entanglement_potential(&state).unwrap().potential;
        let relabeled = entanglement_potential(&permuted).unwrap().potential;
        prop_assert!((original - relabeled).abs() < 1e-9);
    }

    /// Single-qubit gates cannot change any bipartition's spectrum.
    #[test]
    fn potential_single_qubit_invariance(seed in 0u64..1_000, n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = run_circuit::<f64>(&random_circuit(n, 14, &mut rng), n).unwrap();
        let before = entanglement_potential(&state).unwrap().potential;
        for q in 0..n {
            for gate in [Gate::h(q), Gate::t(q)] {
                let mut touched = state.clone();
                touched.apply(gate).unwrap();
                let after = entanglement_potential(&touched).unwrap().potential;
                prop_assert!((before - after).abs() < 1e-9);
            }
        }
    }

    /// No state exceeds the analytic upper bound.
    #[test]
    fn potential_bound_saturation(seed in 0u64..1_000, n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = random_pure_state::<f64, _>(n, &mut rng).unwrap();
        let potential = entanglement_potential(&state).unwrap().potential;
        prop_assert!(potential <= upper_bound(n).unwrap() as f64 + 1e-9);
    }

    /// Two-point crossover conserves the parents' genes per position.
    #[test]
    fn crossover_gene_conservation(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let topology = Topology::complete(4).unwrap();
        let alphabet = build_alphabet(&topology, GateSet::HCnot, 8).unwrap();
        let mom = random_genome::<f64, _>(&alphabet, &mut rng);
        let dad = random_genome::<f64, _>(&alphabet, &mut rng);
        let (sis, bro) = crossover(&mom, &dad, &mut rng);
        for i in 0..8 {
            let parents = (mom.genes()[i], dad.genes()[i]);
            let children = (sis.genes()[i], bro.genes()[i]);
            prop_assert!(children == parents || children == (parents.1, parents.0));
        }
    }

    /// keep_probability 1 leaves every genome untouched.
    #[test]
    fn mutate_keep_all_identity(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let topology = Topology::spin_chain(4).unwrap();
        let alphabet = build_alphabet(&topology, GateSet::HCnot, 10).unwrap();
        let mut genome = random_genome::<f64, _>(&alphabet, &mut rng);
        let before = genome.genes().to_vec();
        mutate(&mut genome, &alphabet, 1.0, &mut rng);
        prop_assert_eq!(genome.genes(), &before[..]);
    }
}

#[test]
fn bipartition_count_is_two_to_n_minus_one_minus_one() {
    for n in 2..=8 {
        assert_eq!(
            enumerate_bipartitions(n).unwrap().len(),
            (1usize << (n - 1)) - 1,
            "n = {n}"
        );
    }
}

#[test]
fn product_states_have_zero_potential() {
    for n in 2..=8 {
        let zero = PureState::<f64>::zero(n).unwrap();
        assert!(entanglement_potential(&zero).unwrap().potential.abs() < 1e-9);

        // |+...+> is still a product state
        let plus_circuit: Vec<Gate> = (0..n).map(Gate::h).collect();
        let plus = run_circuit::<f64>(&plus_circuit, n).unwrap();
        assert!(entanglement_potential(&plus).unwrap().potential.abs() < 1e-9);
    }
}

#[test]
fn full_search_run_is_deterministic() {
    let topology = Topology::complete(3).unwrap();
    let ga = GaConfig::<f64> {
        population_size: 24,
        generations: 60,
        seed: 20_240_517,
        ..GaConfig::default()
    };
    let first = find_minimal_circuit(3, &topology, GateSet::HCnot, &ga, 4, 3).unwrap();
    let second = find_minimal_circuit(3, &topology, GateSet::HCnot, &ga, 4, 3).unwrap();
    assert_eq!(first.circuit, second.circuit);
    assert_eq!(first.potential, second.potential);
    assert_eq!(first.total_gates, second.total_gates);
    assert_eq!(first.cnot_count, second.cnot_count);
    assert_eq!(first.restarts_used, second.restarts_used);
}
