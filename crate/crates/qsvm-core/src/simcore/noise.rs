//! Depolarizing and amplitude-damping channels on density matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::gates::GateMatrix;
use super::state::{DensityMatrix, QuantumState};

/// Per-gate noise strengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Single-qubit depolarizing probability.
    pub p1: f64,
    /// Two-qubit depolarizing probability.
    pub p2: f64,
    /// Amplitude-damping parameter applied to every acted qubit.
    pub gamma: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("gamma", gamma)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "noise parameter {name} must lie in [0,1], got {v}"
                )));
            }
        }
        Ok(NoiseModel { p1, p2, gamma })
    }

    /// The default noisy-variant model: 1% / 2% depolarizing, 0.5% damping.
    pub fn standard() -> Self {
        NoiseModel {
            p1: 0.01,
            p2: 0.02,
            gamma: 0.005,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.gamma == 0.0
    }
}

const PAULI_I: [Complex64; 4] = [
    Complex64::ONE,
    Complex64::ZERO,
    Complex64::ZERO,
    Complex64::ONE,
];
const PAULI_X: [Complex64; 4] = [
    Complex64::ZERO,
    Complex64::ONE,
    Complex64::ONE,
    Complex64::ZERO,
];
const PAULI_Y: [Complex64; 4] = [
    Complex64::ZERO,
    Complex64::new(0.0, -1.0),
    Complex64::new(0.0, 1.0),
    Complex64::ZERO,
];
const PAULI_Z: [Complex64; 4] = [
    Complex64::ONE,
    Complex64::ZERO,
    Complex64::ZERO,
    Complex64::new(-1.0, 0.0),
];

const PAULIS: [[Complex64; 4]; 4] = [PAULI_I, PAULI_X, PAULI_Y, PAULI_Z];

fn kron2(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 16] {
    let mut out = [Complex64::ZERO; 16];
    for r in 0..4 {
        for c in 0..4 {
            out[r * 4 + c] = a[(r >> 1) * 2 + (c >> 1)] * b[(r & 1) * 2 + (c & 1)];
        }
    }
    out
}

/// Uniform (Pauli-twirl) depolarizing channel on the acted qubits:
/// rho -> (1-p) rho + p/(4^k - 1) * sum over non-identity Paulis P rho P^dag.
fn depolarize(rho: &mut DensityMatrix, p: f64, qubits: &[usize]) {
    if p == 0.0 {
        return;
    }
    let k = qubits.len();
    let n_terms = (1usize << (2 * k)) - 1; // 4^k - 1
    let w = p / n_terms as f64;
    let mut acc = rho.clone();
    acc.scale(1.0 - p);
    match k {
        1 => {
            for pauli in &PAULIS[1..] {
                let mut term = rho.clone();
                term.sandwich(&GateMatrix::One(*pauli), qubits);
                acc.scaled_add(&term, w);
            }
        }
        2 => {
            for (i, pa) in PAULIS.iter().enumerate() {
                for (j, pb) in PAULIS.iter().enumerate() {
                    if i == 0 && j == 0 {
                        continue;
                    }
                    let mut term = rho.clone();
                    term.sandwich(&GateMatrix::Two(kron2(pa, pb)), qubits);
                    acc.scaled_add(&term, w);
                }
            }
        }
        _ => unreachable!("gates act on 1 or 2 qubits"),
    }
    *rho = acc;
}

/// Amplitude damping on one qubit with Kraus pair
/// K0 = [[1,0],[0,sqrt(1-g)]], K1 = [[0,sqrt(g)],[0,0]].
fn amplitude_damp(rho: &mut DensityMatrix, gamma: f64, qubit: usize) {
    if gamma == 0.0 {
        return;
    }
    let k0 = GateMatrix::One([
        Complex64::ONE,
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::new((1.0 - gamma).sqrt(), 0.0),
    ]);
    let k1 = GateMatrix::One([
        Complex64::ZERO,
        Complex64::new(gamma.sqrt(), 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
    ]);
    let mut t0 = rho.clone();
    t0.sandwich(&k0, &[qubit]);
    let mut t1 = rho.clone();
    t1.sandwich(&k1, &[qubit]);
    t0.scaled_add(&t1, 1.0);
    *rho = t0;
}

/// Apply the per-gate noise channel to a mixed state: depolarizing over the
/// acted qubits (p1 for one qubit, p2 for two), then amplitude damping on
/// each acted qubit. Pure states must be promoted by the caller first.
pub fn apply_noise(state: &mut QuantumState, model: &NoiseModel, qubits: &[usize]) -> Result<()> {
    let rho = match state {
        QuantumState::Mixed(d) => d,
        QuantumState::Pure(_) => {
            return Err(Error::Representation(
                "noise channels require a density matrix; promote the pure state first".into(),
            ))
        }
    };
    let p = if qubits.len() == 2 {
        model.p2
    } else {
        model.p1
    };
    depolarize(rho, p, qubits);
    for &q in qubits {
        amplitude_damp(rho, model.gamma, q);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::gates::GateKind;
    use crate::simcore::state::StateVector;

    #[test]
    fn zero_noise_is_identity_channel() {
        let mut s = QuantumState::zero_mixed(2);
        s.apply_gate(GateKind::H, &[0]).unwrap();
        let before = s.clone();
        let model = NoiseModel::new(0.0, 0.0, 0.0).unwrap();
        apply_noise(&mut s, &model, &[0]).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn twirl_depolarizing_fixed_points() {
        // In the Pauli-twirl form, p = 3/4 is the completely depolarizing
        // point: rho -> rho/4 + (2I - rho)/4 = I/2 for any 1-qubit rho.
        let mut sv = StateVector::zero(1);
        sv.apply_matrix(
            &crate::simcore::gates::gate_matrix(GateKind::Ry(0.83)).unwrap(),
            &[0],
        );
        let rho0 = sv.outer();
        let mut s = QuantumState::Mixed(rho0.clone());
        let model = NoiseModel::new(0.75, 0.0, 0.0).unwrap();
        apply_noise(&mut s, &model, &[0]).unwrap();
        let rho = s.into_mixed();
        assert!((rho.entry(0, 0).re - 0.5).abs() < 1e-12);
        assert!((rho.entry(1, 1).re - 0.5).abs() < 1e-12);
        assert!(rho.entry(0, 1).norm() < 1e-12);

        // p = 1 maps rho to (2I - rho)/3 (from rho + XrhoX + YrhoY + ZrhoZ = 2I).
        let mut s = QuantumState::Mixed(rho0.clone());
        let model = NoiseModel::new(1.0, 0.0, 0.0).unwrap();
        apply_noise(&mut s, &model, &[0]).unwrap();
        let rho = s.into_mixed();
        for r in 0..2 {
            for c in 0..2 {
                let expect = (if r == c { 2.0 } else { 0.0 } - rho0.entry(r, c)) / 3.0;
                assert!((rho.entry(r, c) - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn damping_on_excited_state_matches_hand_kraus() {
        // gamma = 0.005 on |1><1| -> diag(0.005, 0.995).
        let mut sv = StateVector::zero(1);
        sv.apply_matrix(
            &crate::simcore::gates::gate_matrix(GateKind::X).unwrap(),
            &[0],
        );
        let mut s = QuantumState::Mixed(sv.outer());
        let model = NoiseModel::new(0.0, 0.0, 0.005).unwrap();
        apply_noise(&mut s, &model, &[0]).unwrap();
        let rho = s.into_mixed();
        assert!((rho.entry(0, 0).re - 0.005).abs() < 1e-12);
        assert!((rho.entry(1, 1).re - 0.995).abs() < 1e-12);
    }

    #[test]
    fn pure_state_input_is_a_representation_error() {
        let mut s = QuantumState::zero_pure(1);
        let model = NoiseModel::standard();
        assert!(matches!(
            apply_noise(&mut s, &model, &[0]),
            Err(Error::Representation(_))
        ));
    }

    #[test]
    fn channel_preserves_trace_and_positivity() {
        let mut s = QuantumState::zero_mixed(2);
        s.apply_gate(GateKind::H, &[0]).unwrap();
        s.apply_gate(GateKind::Ecr, &[0, 1]).unwrap();
        let model = NoiseModel::standard();
        apply_noise(&mut s, &model, &[0, 1]).unwrap();
        let rho = s.into_mixed();
        assert!((rho.trace().re - 1.0).abs() < 1e-10);
        assert!(rho.trace().im.abs() < 1e-12);
        assert!(rho.hermiticity_defect() < 1e-10);
        assert!(rho.min_eigenvalue() >= -1e-8);
    }

    #[test]
    fn out_of_range_parameters_are_rejected() {
        assert!(NoiseModel::new(-0.1, 0.0, 0.0).is_err());
        assert!(NoiseModel::new(0.0, 1.5, 0.0).is_err());
    }
}
