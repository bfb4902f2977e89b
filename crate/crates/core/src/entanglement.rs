//! Multipartite entanglement potential: the fitness function, its exact
//! upper bound, and the negativity used as the slower benchmark measure.
//!
//! The potential of an n-qubit pure state sums the von Neumann entropy of
//! the reduced state over every bipartition, counting complementary splits
//! once. Entropies are in bits (base-2 logarithm), so a subsystem of k
//! qubits contributes at most k.

use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix};
use crate::scalar::{tol, Scalar};
use crate::sim::PureState;

/// One canonical bipartition: `y_mask` selects the kept (smaller) side Y.
///
/// Canonical means `1 <= |Y| <= n/2`, and when `|Y| = n/2` exactly, qubit 0
/// lies in Y — that rule picks one representative from each pair of
/// complementary equal-size splits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Bipartition {
    y_mask: u64,
    n_qubits: usize,
}

impl Bipartition {
    /// Build a canonical bipartition, rejecting non-canonical masks.
    pub fn new(y_mask: u64, n_qubits: usize) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::usage(format!(
                "bipartitions need at least 2 qubits, got {n_qubits}"
            )));
        }
        if n_qubits > 64 || y_mask == 0 || y_mask >= 1u64 << n_qubits {
            return Err(Error::usage(format!(
                "y_mask {y_mask:#b} is not a nonempty subset of {n_qubits} qubits"
            )));
        }
        let k = y_mask.count_ones() as usize;
        if 2 * k > n_qubits {
            return Err(Error::usage(format!(
                "y_mask selects {k} of {n_qubits} qubits; the kept side must be the smaller one"
            )));
        }
        if 2 * k == n_qubits && y_mask & 1 == 0 {
            return Err(Error::usage(
                "equal-size bipartition must keep qubit 0 on the Y side".to_string(),
            ));
        }
        Ok(Bipartition { y_mask, n_qubits })
    }

    pub fn y_mask(&self) -> u64 {
        self.y_mask
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of qubits on the kept side.
    pub fn y_size(&self) -> usize {
        self.y_mask.count_ones() as usize
    }

    /// Qubit indices of the kept side, ascending.
    pub fn y_qubits(&self) -> Vec<usize> {
        (0..self.n_qubits)
            .filter(|q| self.y_mask >> q & 1 == 1)
            .collect()
    }

    /// Mask of the traced-out side.
    pub fn x_mask(&self) -> u64 {
        !self.y_mask & ((1u64 << self.n_qubits) - 1)
    }
}

/// All canonical bipartitions of `n` qubits, ascending by mask.
///
/// There are exactly `2^(n-1) - 1` of them.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return Err(Error::usage(format!(
            "bipartitions need at least 2 qubits, got {n}"
        )));
    }
    if n > 64 {
        return Err(Error::usage(format!("qubit count {n} too large")));
    }
    let mut parts = Vec::with_capacity((1usize << (n - 1)) - 1);
    for mask in 1..1u64 << n {
        let k = mask.count_ones() as usize;
        if 2 * k > n || (2 * k == n && mask & 1 == 0) {
            continue;
        }
        parts.push(Bipartition { y_mask: mask, n_qubits: n });
    }
    Ok(parts)
}

/// Gather the bits of `index` selected by `mask` into a compact value,
/// preserving ascending bit order.
fn compress_bits(index: usize, mask: u64) -> usize {
    let mut out = 0usize;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let q = m.trailing_zeros() as usize;
        out |= (index >> q & 1) << bit;
        bit += 1;
        m &= m - 1;
    }
    out
}

/// Reduced density matrix over the qubits in `y_mask`.
///
/// Reshapes the amplitudes into the coefficient matrix A (rows indexed by
/// Y-bit patterns, columns by complement-bit patterns) and returns
/// `rho_Y = A A^dagger`. Accepts any proper nonempty subset, canonical or
/// not, which the symmetry tests rely on.
pub fn reduced_density_mask<T: Scalar>(
    state: &PureState<T>,
    y_mask: u64,
) -> Result<ComplexMatrix<T>> {
    let n = state.n_qubits();
    let full = (1u64 << n) - 1;
    if y_mask == 0 || y_mask & !full != 0 || y_mask == full {
        return Err(Error::usage(format!(
            "y_mask {y_mask:#b} is not a proper nonempty subset of {n} qubits"
        )));
    }
    let x_mask = !y_mask & full;
    let ky = y_mask.count_ones() as usize;
    let dy = 1usize << ky;
    let dx = 1usize << (n - ky);

    let mut coeff = vec![Complex::<T>::zero(); dy * dx];
    for (i, amp) in state.amplitudes().iter().enumerate() {
        let r = compress_bits(i, y_mask);
        let c = compress_bits(i, x_mask);
        coeff[r * dx + c] = *amp;
    }

    let mut rho = ComplexMatrix::zeros(dy);
    for r1 in 0..dy {
        for r2 in r1..dy {
            let mut sum = Complex::<T>::zero();
            for c in 0..dx {
                sum += coeff[r1 * dx + c] * coeff[r2 * dx + c].conj();
            }
            rho[(r1, r2)] = sum;
            rho[(r2, r1)] = sum.conj();
        }
    }
    Ok(rho)
}

/// Reduced density matrix for a canonical bipartition.
pub fn reduced_density<T: Scalar>(
    state: &PureState<T>,
    part: &Bipartition,
) -> Result<ComplexMatrix<T>> {
    if part.n_qubits() != state.n_qubits() {
        return Err(Error::usage(format!(
            "bipartition is over {} qubits, state has {}",
            part.n_qubits(),
            state.n_qubits()
        )));
    }
    reduced_density_mask(state, part.y_mask())
}

/// Von Neumann entropy of a density matrix, in bits.
///
/// Validates hermiticity (1e-10) and unit trace (1e-8), then diagonalizes.
/// Eigenvalues in `[-1e-9, 0)` are clamped to zero and `0 log 0 = 0`;
/// anything more negative is reported as a numerical-integrity error.
pub fn vn_entropy<T: Scalar>(rho: &ComplexMatrix<T>) -> Result<T> {
    let defect = rho.hermiticity_defect();
    if defect > tol::<T>(1e-10) {
        return Err(Error::numerical(format!(
            "density matrix is not hermitian (defect {defect})"
        )));
    }
    let trace = rho.trace().re;
    if (trace - T::one()).abs() > tol::<T>(1e-8) {
        return Err(Error::numerical(format!(
            "density matrix trace is {trace}, expected 1"
        )));
    }

    let neg_tol = tol::<T>(1e-9);
    let mut entropy = T::zero();
    for lambda in hermitian_eigenvalues(rho)? {
        if lambda < -neg_tol {
            return Err(Error::numerical(format!(
                "density matrix has eigenvalue {lambda} below -{neg_tol}"
            )));
        }
        let lambda = lambda.max(T::zero()).min(T::one());
        if lambda > T::zero() {
            entropy -= lambda * lambda.log2();
        }
    }
    Ok(entropy)
}

/// Per-bipartition entropies and their sum — the GP fitness value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitnessReport<T: Scalar> {
    /// Total entanglement potential in bits.
    pub potential: T,
    /// Entropy in bits for each canonical bipartition.
    pub per_bipartition: Vec<(Bipartition, T)>,
}

/// Entanglement potential of a pure state: the entropy sum over all
/// canonical bipartitions, each reduced over its smaller side (for pure
/// states both sides carry the same entropy).
pub fn entanglement_potential<T: Scalar>(state: &PureState<T>) -> Result<FitnessReport<T>> {
    let parts = enumerate_bipartitions(state.n_qubits())?;
    let mut per_bipartition = Vec::with_capacity(parts.len());
    let mut potential = T::zero();
    for part in parts {
        let rho = reduced_density(state, &part)?;
        let entropy = vn_entropy(&rho)?;
        potential += entropy;
        per_bipartition.push((part, entropy));
    }
    Ok(FitnessReport {
        potential,
        per_bipartition,
    })
}

/// Exact upper bound on the entanglement potential of any n-qubit state.
///
/// Every bipartition with `|Y| = k` contributes at most k bits, so the
/// bound is `sum over k of k * N_k` where `N_k` counts canonical
/// bipartitions of that size: `C(n, k)` for `k < n/2` and `C(n, k) / 2`
/// at the halfway split. The result is always an integer number of bits.
pub fn upper_bound(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::usage(format!(
            "upper bound needs at least 2 qubits, got {n}"
        )));
    }
    if n > 32 {
        return Err(Error::usage(format!("qubit count {n} too large")));
    }
    let mut total = 0u64;
    for k in 1..=n / 2 {
        let count = if 2 * k == n {
            binomial(n, k) / 2
        } else {
            binomial(n, k)
        };
        total += k as u64 * count;
    }
    Ok(total)
}

fn binomial(n: usize, k: usize) -> u64 {
    let mut result = 1u64;
    for i in 0..k {
        result = result * (n - i) as u64 / (i + 1) as u64;
    }
    result
}

/// Maximum number of qubits for which the negativity path (which builds
/// the full `2^n x 2^n` density matrix) is allowed to run.
pub const NEGATIVITY_MAX_QUBITS: usize = 8;

/// Negativity of a pure state across one bipartition:
/// `(||rho^{T_Y}||_1 - 1) / 2`, computed from the partial transpose of the
/// full density matrix over the Y qubits.
///
/// This is deliberately the textbook dense route — it exists to be timed
/// against the entropy path, not to be fast.
pub fn negativity<T: Scalar>(state: &PureState<T>, part: &Bipartition) -> Result<T> {
    let n = state.n_qubits();
    if n > NEGATIVITY_MAX_QUBITS {
        return Err(Error::config(format!(
            "negativity is capped at {NEGATIVITY_MAX_QUBITS} qubits, got {n}"
        )));
    }
    if part.n_qubits() != n {
        return Err(Error::usage(format!(
            "bipartition is over {} qubits, state has {}",
            part.n_qubits(),
            n
        )));
    }

    let y_mask = part.y_mask() as usize;
    let amps = state.amplitudes();
    let dim = amps.len();
    // (rho^{T_Y})_{ij} = rho_{i'j'} with the Y bits of i and j exchanged.
    let pt = ComplexMatrix::from_fn(dim, |i, j| {
        let ii = (i & !y_mask) | (j & y_mask);
        let jj = (j & !y_mask) | (i & y_mask);
        amps[ii] * amps[jj].conj()
    });

    let trace_norm: T = hermitian_eigenvalues(&pt)?
        .into_iter()
        .map(|lambda| lambda.abs())
        .sum();
    let half = T::from_f64(0.5).unwrap();
    let neg = (trace_norm - T::one()) * half;
    if neg < -tol::<T>(1e-10) {
        return Err(Error::numerical(format!(
            "negativity came out {neg}, below the -1e-10 guard"
        )));
    }
    Ok(neg.max(T::zero()))
}
