//! Dense statevector simulation of circuits over the H / T / CNOT gate set.
//!
//! Convention: qubit `q` corresponds to bit `q` of the basis-state index
//! (little-endian), so a single-qubit gate on `q` pairs amplitudes at
//! stride `2^q`. Gates are applied as in-place amplitude-pair updates; no
//! full `2^n x 2^n` matrix is ever built.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{tol, Scalar};

/// Hard cap on register width. Dense simulation above this is outside the
/// toolkit's scope.
pub const MAX_QUBITS: usize = 12;

/// One gate instance: Hadamard or T-phase on a qubit, or CNOT on an
/// ordered (control, target) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Gate {
    H {
        target: usize,
    },
    T {
        target: usize,
    },
    #[serde(rename = "CNOT")]
    Cnot {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Gate::H { target }
    }

    pub fn t(target: usize) -> Self {
        Gate::T { target }
    }

    /// Panics if `control == target`; use [`Gate::validate`] for untrusted input.
    pub fn cnot(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "CNOT control and target must differ");
        Gate::Cnot { control, target }
    }

    pub fn target(&self) -> usize {
        match *self {
            Gate::H { target } | Gate::T { target } | Gate::Cnot { target, .. } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::Cnot { control, .. } => Some(control),
            _ => None,
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    /// Largest qubit index the gate touches.
    pub fn max_qubit(&self) -> usize {
        match *self {
            Gate::H { target } | Gate::T { target } => target,
            Gate::Cnot { control, target } => control.max(target),
        }
    }

    /// Check index ranges against a register of `n_qubits`.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if let Gate::Cnot { control, target } = *self {
            if control == target {
                return Err(Error::usage(format!(
                    "CNOT control and target must differ, both are {control}"
                )));
            }
        }
        if self.max_qubit() >= n_qubits {
            return Err(Error::usage(format!(
                "gate {self} touches qubit {}, register has {n_qubits} qubits",
                self.max_qubit()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H { target } => write!(f, "H {target}"),
            Gate::T { target } => write!(f, "T {target}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
        }
    }
}

impl FromStr for Gate {
    type Err = Error;

    /// Parse the one-line text form: `H q`, `T q`, or `CNOT c t`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let bad = || Error::usage(format!("cannot parse gate from {s:?}"));
        let kind = parts.next().ok_or_else(bad)?;
        let mut index = |what: &str| -> Result<usize> {
            parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::usage(format!("gate {s:?}: missing or bad {what} index")))
        };
        let gate = match kind {
            "H" => Gate::H {
                target: index("target")?,
            },
            "T" => Gate::T {
                target: index("target")?,
            },
            "CNOT" => {
                let control = index("control")?;
                let target = index("target")?;
                if control == target {
                    return Err(Error::usage(format!(
                        "gate {s:?}: CNOT control and target must differ"
                    )));
                }
                Gate::Cnot { control, target }
            }
            other => return Err(Error::usage(format!("unknown gate kind {other:?}"))),
        };
        if parts.next().is_some() {
            return Err(Error::usage(format!("trailing tokens after gate in {s:?}")));
        }
        Ok(gate)
    }
}

/// Pure n-qubit state: `2^n` complex amplitudes with unit norm.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T: Scalar> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> PureState<T> {
    /// The all-zeros computational basis state |0...0>.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::config(format!(
                "qubit count {n_qubits} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        let mut amps = vec![Complex::zero(); 1 << n_qubits];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(PureState { n_qubits, amps })
    }

    /// The computational basis state with the given index.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut state = Self::zero(n_qubits)?;
        if index >= state.dim() {
            return Err(Error::usage(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        state.amps[0] = Complex::zero();
        state.amps[index] = Complex::new(T::one(), T::zero());
        Ok(state)
    }

    /// Wrap raw amplitudes. The length must be `2^n_qubits` and the norm
    /// must already be 1 within 1e-10.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::config(format!(
                "qubit count {n_qubits} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        if amps.len() != 1 << n_qubits {
            return Err(Error::usage(format!(
                "amplitude vector has length {}, expected {}",
                amps.len(),
                1usize << n_qubits
            )));
        }
        let state = PureState { n_qubits, amps };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - T::one()).abs() > tol::<T>(1e-10) {
            return Err(Error::numerical(format!(
                "state norm^2 is {norm_sqr}, expected 1"
            )));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Hilbert-space dimension `2^n`.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Apply one gate in place. Norm is preserved to machine precision.
    pub fn apply(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match gate {
            Gate::H { target } => self.apply_h(target),
            Gate::T { target } => self.apply_t(target),
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
        }
        Ok(())
    }

    fn apply_h(&mut self, q: usize) {
        let s = T::FRAC_1_SQRT_2();
        let step = 1usize << q;
        let mut base = 0;
        while base < self.amps.len() {
            for i in base..base + step {
                let j = i + step;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = (a + b) * s;
                self.amps[j] = (a - b) * s;
            }
            base += step << 1;
        }
    }

    fn apply_t(&mut self, q: usize) {
        let phase = Complex::from_polar(T::one(), T::FRAC_PI_4());
        let mask = 1usize << q;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask != 0 {
                *amp *= phase;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }
}

/// Run a gate sequence on |0...0> and return the final state.
///
/// The final norm is checked to 1e-10 as a guard against a broken gate
/// implementation; every gate in the set is unitary, so drift beyond
/// accumulated rounding is a bug.
pub fn run_circuit<T: Scalar>(gates: &[Gate], n_qubits: usize) -> Result<PureState<T>> {
    let mut state = PureState::<T>::zero(n_qubits)?;
    for gate in gates {
        state.apply(*gate)?;
    }
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - T::one()).abs() > tol::<T>(1e-10) {
        return Err(Error::numerical(format!(
            "circuit output norm^2 drifted to {norm_sqr}"
        )));
    }
    Ok(state)
}
