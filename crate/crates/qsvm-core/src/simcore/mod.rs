//! Dense simulation of quantum circuits on 1–12 qubits.
//!
//! Pure states evolve as statevectors; when a [`NoiseModel`] is present the
//! simulation is promoted to density matrices and the noise channel is
//! applied after every gate. All operations are pure functions of their
//! inputs; states are plain values and safe to move between threads.

mod gates;
mod noise;
mod state;

pub use gates::{gate_matrix, GateKind, GateMatrix};
pub use noise::{apply_noise, NoiseModel};
pub use state::{DensityMatrix, QuantumState, StateVector, MAX_QUBITS};

use crate::error::Result;

/// One angle-resolved gate applied to specific qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundGate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
}

impl BoundGate {
    pub fn one(kind: GateKind, q: usize) -> Self {
        debug_assert_eq!(kind.arity(), 1);
        BoundGate {
            kind,
            qubits: vec![q],
        }
    }

    pub fn two(kind: GateKind, a: usize, b: usize) -> Self {
        debug_assert_eq!(kind.arity(), 2);
        BoundGate {
            kind,
            qubits: vec![a, b],
        }
    }
}

/// Apply one bound gate, optionally daggered, with optional per-gate noise.
pub fn apply_bound(
    state: &mut QuantumState,
    gate: &BoundGate,
    dagger: bool,
    noise: Option<&NoiseModel>,
) -> Result<()> {
    state::validate_qubits(gate.kind, &gate.qubits, state.n_qubits())?;
    let m = gate_matrix(gate.kind)?;
    let m = if dagger { m.dagger() } else { m };
    state.apply_matrix(&m, &gate.qubits);
    if let Some(model) = noise {
        apply_noise(state, model, &gate.qubits)?;
    }
    Ok(())
}

/// Run a bound gate sequence from |0...0>.
///
/// Without noise the result is a pure statevector; with noise the initial
/// state is promoted to a density matrix and the channel of `noise` is
/// applied after every gate.
pub fn run_circuit(
    gates: &[BoundGate],
    n_qubits: usize,
    noise: Option<&NoiseModel>,
) -> Result<QuantumState> {
    let mut state = match noise {
        Some(_) => QuantumState::zero_mixed(n_qubits),
        None => QuantumState::zero_pure(n_qubits),
    };
    for gate in gates {
        apply_bound(&mut state, gate, false, noise)?;
    }
    Ok(state)
}
