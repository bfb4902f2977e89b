//! Timing comparison of the two entanglement measures on Haar-random
//! states: von Neumann entropy of the reduced state (reshape + small
//! eigensolve) versus negativity (partial transpose of the full density
//! matrix). The entropy route is why the fitness function stays fast.
//!
//! Runs single-threaded so per-sample timings are comparable.

use std::ops::RangeInclusive;
use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::entanglement::{negativity, reduced_density, vn_entropy, Bipartition, NEGATIVITY_MAX_QUBITS};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sim::PureState;

/// Which measure a timing record describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    VnEntropy,
    Negativity,
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeasureKind::VnEntropy => write!(f, "vn_entropy"),
            MeasureKind::Negativity => write!(f, "negativity"),
        }
    }
}

/// Timing summary for one (qubit count, measure) cell.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub n_qubits: usize,
    pub measure: MeasureKind,
    pub sample_count: usize,
    /// Mean per-evaluation wall time in seconds.
    pub mean_time: f64,
    /// Sample standard deviation in seconds.
    pub std_dev: f64,
    /// Median per-evaluation wall time in seconds.
    pub median_time: f64,
}

/// Haar-random pure state: independent standard complex Gaussian
/// amplitudes, normalized.
pub fn random_pure_state<T: Scalar, R: Rng + ?Sized>(
    n_qubits: usize,
    rng: &mut R,
) -> Result<PureState<T>> {
    if n_qubits < 1 {
        return Err(Error::usage("random state needs at least 1 qubit".to_string()));
    }
    let dim = 1usize
        .checked_shl(n_qubits as u32)
        .filter(|_| n_qubits <= crate::sim::MAX_QUBITS)
        .ok_or_else(|| Error::config(format!("qubit count {n_qubits} too large")))?;

    let mut amps: Vec<Complex<T>> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(
                T::from_f64(re).expect("gaussian fits scalar"),
                T::from_f64(im).expect("gaussian fits scalar"),
            )
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
    for a in &mut amps {
        *a = a.unscale(norm);
    }
    PureState::from_amplitudes(n_qubits, amps)
}

/// The bipartition each benchmark evaluation uses: the balanced split
/// keeping the low `floor(n/2)` qubits (always canonical).
pub fn benchmark_bipartition(n_qubits: usize) -> Result<Bipartition> {
    Bipartition::new((1u64 << (n_qubits / 2)) - 1, n_qubits)
}

/// Time both measures over fresh Haar-random states for each qubit count
/// in `n_range`. State generation is excluded from the timing; a few
/// warmup evaluations are discarded per cell.
pub fn run_measure_benchmark<T: Scalar, R: Rng + ?Sized>(
    n_range: RangeInclusive<usize>,
    samples: usize,
    rng: &mut R,
) -> Result<Vec<BenchRecord>> {
    if samples < 1 {
        return Err(Error::usage("sample count must be at least 1".to_string()));
    }
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo < 2 {
        return Err(Error::usage(format!(
            "benchmark needs at least 2 qubits, got {lo}"
        )));
    }
    if hi > NEGATIVITY_MAX_QUBITS {
        return Err(Error::config(format!(
            "benchmark is capped at {NEGATIVITY_MAX_QUBITS} qubits, got {hi}"
        )));
    }

    let mut records = Vec::new();
    for n in n_range {
        let part = benchmark_bipartition(n)?;
        for measure in [MeasureKind::VnEntropy, MeasureKind::Negativity] {
            let warmup = 3.min(samples);
            let mut times = Vec::with_capacity(samples);
            for i in 0..samples + warmup {
                let state = random_pure_state::<T, _>(n, rng)?;
                let start = Instant::now();
                match measure {
                    MeasureKind::VnEntropy => {
                        let rho = reduced_density(&state, &part)?;
                        let _ = vn_entropy(&rho)?;
                    }
                    MeasureKind::Negativity => {
                        let _ = negativity(&state, &part)?;
                    }
                }
                let elapsed = start.elapsed().as_secs_f64();
                if i >= warmup {
                    times.push(elapsed);
                }
            }
            records.push(summarize(n, measure, &times));
        }
    }
    Ok(records)
}

fn summarize(n_qubits: usize, measure: MeasureKind, times: &[f64]) -> BenchRecord {
    let count = times.len();
    let mean = times.iter().sum::<f64>() / count as f64;
    let var = if count > 1 {
        times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (count - 1) as f64
    } else {
        0.0
    };
    let mut sorted = times.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if count % 2 == 1 {
        sorted[count / 2]
    } else {
        (sorted[count / 2 - 1] + sorted[count / 2]) / 2.0
    };
    BenchRecord {
        n_qubits,
        measure,
        sample_count: count,
        mean_time: mean,
        std_dev: var.sqrt(),
        median_time: median,
    }
}
