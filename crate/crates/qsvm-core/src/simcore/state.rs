//! Pure statevectors and density matrices with tensor-structured gate
//! application (no full 2^n x 2^n operator is ever materialized for pure
//! states; density matrices are sandwiched row- and column-wise).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

use super::gates::{gate_matrix, GateKind, GateMatrix};

pub const MAX_QUBITS: usize = 12;

/// A normalized pure state over `n_qubits`, little-endian amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `n_qubits`.
    pub fn zero(n_qubits: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&n_qubits));
        let mut amps = vec![Complex64::ZERO; 1 << n_qubits];
        amps[0] = Complex64::ONE;
        StateVector { n_qubits, amps }
    }

    /// A state from raw amplitudes; the caller guarantees normalization.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), 1 << n_qubits);
        StateVector { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// <self|other>.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        debug_assert_eq!(self.n_qubits, other.n_qubits);
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |self><self| as a density matrix.
    pub fn outer(&self) -> DensityMatrix {
        let dim = self.amps.len();
        let mut elems = vec![Complex64::ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                elems[r * dim + c] = self.amps[r] * self.amps[c].conj();
            }
        }
        DensityMatrix {
            n_qubits: self.n_qubits,
            elems,
        }
    }

    pub(crate) fn apply_matrix(&mut self, m: &GateMatrix, qubits: &[usize]) {
        match m {
            GateMatrix::One(u) => apply_1q(&mut self.amps, u, qubits[0]),
            GateMatrix::Two(u) => apply_2q(&mut self.amps, u, qubits[0], qubits[1]),
        }
    }
}

/// A density matrix over `n_qubits`, row-major, little-endian.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    elems: Vec<Complex64>,
}

impl DensityMatrix {
    /// |0...0><0...0|.
    pub fn zero(n_qubits: usize) -> Self {
        assert!((1..=MAX_QUBITS).contains(&n_qubits));
        let dim = 1 << n_qubits;
        let mut elems = vec![Complex64::ZERO; dim * dim];
        elems[0] = Complex64::ONE;
        DensityMatrix { n_qubits, elems }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn elements(&self) -> &[Complex64] {
        &self.elems
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.elems[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        let dim = self.dim();
        (0..dim).map(|i| self.elems[i * dim + i]).sum()
    }

    /// max of |rho(r,c) - conj(rho(c,r))|.
    pub fn hermiticity_defect(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..dim {
            for c in r..dim {
                worst =
                    worst.max((self.elems[r * dim + c] - self.elems[c * dim + r].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue; O(dim^3), intended for checks at small n.
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_hermitian_eigenvalue(&self.elems, self.dim())
    }

    /// rho -> M rho M^dag for an arbitrary (not necessarily unitary) M on
    /// the given qubits.
    pub(crate) fn sandwich(&mut self, m: &GateMatrix, qubits: &[usize]) {
        let dim = self.dim();
        match m {
            GateMatrix::One(u) => {
                // Left: rows transform by u over the row index bit.
                left_apply_1q(&mut self.elems, u, qubits[0], dim);
                // Right: each row transforms by conj(u) over the column bit.
                right_apply_1q(&mut self.elems, u, qubits[0], dim);
            }
            GateMatrix::Two(u) => {
                left_apply_2q(&mut self.elems, u, qubits[0], qubits[1], dim);
                right_apply_2q(&mut self.elems, u, qubits[0], qubits[1], dim);
            }
        }
    }

    pub(crate) fn scaled_add(&mut self, other: &DensityMatrix, w: f64) {
        for (a, b) in self.elems.iter_mut().zip(other.elems.iter()) {
            *a += w * b;
        }
    }

    pub(crate) fn scale(&mut self, w: f64) {
        for a in self.elems.iter_mut() {
            *a *= w;
        }
    }
}

/// A simulated quantum state, pure or mixed.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn zero_pure(n_qubits: usize) -> Self {
        QuantumState::Pure(StateVector::zero(n_qubits))
    }

    pub fn zero_mixed(n_qubits: usize) -> Self {
        QuantumState::Mixed(DensityMatrix::zero(n_qubits))
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.n_qubits(),
            QuantumState::Mixed(d) => d.n_qubits(),
        }
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self, QuantumState::Mixed(_))
    }

    /// Promote a pure state to its density matrix; mixed states pass through.
    pub fn into_mixed(self) -> DensityMatrix {
        match self {
            QuantumState::Pure(s) => s.outer(),
            QuantumState::Mixed(d) => d,
        }
    }

    /// Apply `kind` to the listed qubits.
    ///
    /// Qubit indices must be distinct and in range; the angle, if any, must
    /// be finite.
    pub fn apply_gate(&mut self, kind: GateKind, qubits: &[usize]) -> Result<()> {
        validate_qubits(kind, qubits, self.n_qubits())?;
        let m = gate_matrix(kind)?;
        self.apply_matrix(&m, qubits);
        Ok(())
    }

    pub(crate) fn apply_matrix(&mut self, m: &GateMatrix, qubits: &[usize]) {
        match self {
            QuantumState::Pure(s) => s.apply_matrix(m, qubits),
            QuantumState::Mixed(d) => d.sandwich(m, qubits),
        }
    }
}

pub(crate) fn validate_qubits(kind: GateKind, qubits: &[usize], n_qubits: usize) -> Result<()> {
    if qubits.len() != kind.arity() {
        return Err(Error::Topology(format!(
            "{} expects {} qubit(s), got {}",
            kind.name(),
            kind.arity(),
            qubits.len()
        )));
    }
    for &q in qubits {
        if q >= n_qubits {
            return Err(Error::Topology(format!(
                "qubit {q} out of range for {n_qubits}-qubit register"
            )));
        }
    }
    if qubits.len() == 2 && qubits[0] == qubits[1] {
        return Err(Error::Topology(format!(
            "{} requires distinct qubits, got ({}, {})",
            kind.name(),
            qubits[0],
            qubits[1]
        )));
    }
    Ok(())
}

// --- tensor-structured statevector updates -------------------------------

pub(crate) fn apply_1q(amps: &mut [Complex64], u: &[Complex64; 4], q: usize) {
    let bit = 1usize << q;
    let low = bit - 1;
    for i in 0..(amps.len() >> 1) {
        let i0 = ((i >> q) << (q + 1)) | (i & low);
        let i1 = i0 | bit;
        let a = amps[i0];
        let b = amps[i1];
        amps[i0] = u[0] * a + u[1] * b;
        amps[i1] = u[2] * a + u[3] * b;
    }
}

pub(crate) fn apply_2q(amps: &mut [Complex64], u: &[Complex64; 16], qa: usize, qb: usize) {
    let ba = 1usize << qa;
    let bb = 1usize << qb;
    for base in 0..amps.len() {
        if base & ba != 0 || base & bb != 0 {
            continue;
        }
        // Matrix basis |ab>: m = 2*bit(a) + bit(b).
        let idx = [base, base | bb, base | ba, base | ba | bb];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for m in 0..4 {
            amps[idx[m]] =
                u[m * 4] * v[0] + u[m * 4 + 1] * v[1] + u[m * 4 + 2] * v[2] + u[m * 4 + 3] * v[3];
        }
    }
}

// --- density-matrix sandwiches --------------------------------------------

fn left_apply_1q(elems: &mut [Complex64], u: &[Complex64; 4], q: usize, dim: usize) {
    let bit = 1usize << q;
    let low = bit - 1;
    for i in 0..(dim >> 1) {
        let r0 = (((i >> q) << (q + 1)) | (i & low)) * dim;
        let r1 = r0 + bit * dim;
        for c in 0..dim {
            let a = elems[r0 + c];
            let b = elems[r1 + c];
            elems[r0 + c] = u[0] * a + u[1] * b;
            elems[r1 + c] = u[2] * a + u[3] * b;
        }
    }
}

fn right_apply_1q(elems: &mut [Complex64], u: &[Complex64; 4], q: usize, dim: usize) {
    let bit = 1usize << q;
    let low = bit - 1;
    let (u00, u01, u10, u11) = (u[0].conj(), u[1].conj(), u[2].conj(), u[3].conj());
    for r in 0..dim {
        let row = r * dim;
        for i in 0..(dim >> 1) {
            let c0 = row + (((i >> q) << (q + 1)) | (i & low));
            let c1 = c0 + bit;
            let a = elems[c0];
            let b = elems[c1];
            elems[c0] = u00 * a + u01 * b;
            elems[c1] = u10 * a + u11 * b;
        }
    }
}

fn left_apply_2q(elems: &mut [Complex64], u: &[Complex64; 16], qa: usize, qb: usize, dim: usize) {
    let ba = 1usize << qa;
    let bb = 1usize << qb;
    for base in 0..dim {
        if base & ba != 0 || base & bb != 0 {
            continue;
        }
        let rows = [
            base * dim,
            (base | bb) * dim,
            (base | ba) * dim,
            (base | ba | bb) * dim,
        ];
        for c in 0..dim {
            let v = [
                elems[rows[0] + c],
                elems[rows[1] + c],
                elems[rows[2] + c],
                elems[rows[3] + c],
            ];
            for m in 0..4 {
                elems[rows[m] + c] = u[m * 4] * v[0]
                    + u[m * 4 + 1] * v[1]
                    + u[m * 4 + 2] * v[2]
                    + u[m * 4 + 3] * v[3];
            }
        }
    }
}

fn right_apply_2q(elems: &mut [Complex64], u: &[Complex64; 16], qa: usize, qb: usize, dim: usize) {
    let ba = 1usize << qa;
    let bb = 1usize << qb;
    let mut uc = [Complex64::ZERO; 16];
    for (dst, src) in uc.iter_mut().zip(u.iter()) {
        *dst = src.conj();
    }
    for r in 0..dim {
        let row = r * dim;
        for base in 0..dim {
            if base & ba != 0 || base & bb != 0 {
                continue;
            }
            let idx = [
                row + base,
                row + (base | bb),
                row + (base | ba),
                row + (base | ba | bb),
            ];
            let v = [elems[idx[0]], elems[idx[1]], elems[idx[2]], elems[idx[3]]];
            for m in 0..4 {
                elems[idx[m]] = uc[m * 4] * v[0]
                    + uc[m * 4 + 1] * v[1]
                    + uc[m * 4 + 2] * v[2]
                    + uc[m * 4 + 3] * v[3];
            }
        }
    }
}
