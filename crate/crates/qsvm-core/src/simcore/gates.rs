//! Gate kinds and their unitary matrices.
//!
//! Qubit ordering is little-endian throughout: qubit 0 is the least
//! significant bit of a basis-state index. For a two-qubit gate on listed
//! qubits `(a, b)` the 4x4 matrix acts on the basis `|ab>` ordered
//! `{|00>, |01>, |10>, |11>}`, i.e. matrix index `m = 2*bit(a) + bit(b)`.
//!
//! ECR is the echoed cross-resonance entangler. In the tensor order
//! `first-listed (x) second-listed` used here its matrix is
//! `(X(x)I - Y(x)X) / sqrt(2)`: from `|00>` it drives the first-listed qubit
//! to `|1>` and leaves the second in an equal superposition. This matches
//! the orientation used by the hardware it models.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A concrete (angle-resolved) gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Rz(f64),
    Sx,
    X,
    Ecr,
    Rx(f64),
    Ry(f64),
    H,
    S,
    P(f64),
    Cx,
    Cz,
}

impl GateKind {
    /// Number of qubits the gate acts on.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Ecr | GateKind::Cx | GateKind::Cz => 2,
            _ => 1,
        }
    }

    /// The rotation angle, if this kind carries one.
    pub fn angle(&self) -> Option<f64> {
        match self {
            GateKind::Rz(t) | GateKind::Rx(t) | GateKind::Ry(t) | GateKind::P(t) => Some(*t),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Rz(_) => "RZ",
            GateKind::Sx => "SX",
            GateKind::X => "X",
            GateKind::Ecr => "ECR",
            GateKind::Rx(_) => "RX",
            GateKind::Ry(_) => "RY",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::P(_) => "P",
            GateKind::Cx => "CX",
            GateKind::Cz => "CZ",
        }
    }
}

/// Dense unitary of a single gate, row-major.
#[derive(Debug, Clone, PartialEq)]
pub enum GateMatrix {
    One([Complex64; 4]),
    Two([Complex64; 16]),
}

impl GateMatrix {
    /// Conjugate transpose.
    pub fn dagger(&self) -> GateMatrix {
        match self {
            GateMatrix::One(u) => {
                let mut d = [Complex64::ZERO; 4];
                for r in 0..2 {
                    for c in 0..2 {
                        d[c * 2 + r] = u[r * 2 + c].conj();
                    }
                }
                GateMatrix::One(d)
            }
            GateMatrix::Two(u) => {
                let mut d = [Complex64::ZERO; 16];
                for r in 0..4 {
                    for c in 0..4 {
                        d[c * 4 + r] = u[r * 4 + c].conj();
                    }
                }
                GateMatrix::Two(d)
            }
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The conventional unitary for `kind`.
///
/// Errors if the kind carries a non-finite angle.
pub fn gate_matrix(kind: GateKind) -> Result<GateMatrix> {
    if let Some(t) = kind.angle() {
        if !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{} angle must be finite, got {t}",
                kind.name()
            )));
        }
    }
    let m = match kind {
        GateKind::Rz(t) => {
            let half = t / 2.0;
            GateMatrix::One([
                Complex64::from_polar(1.0, -half),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::from_polar(1.0, half),
            ])
        }
        GateKind::Sx => GateMatrix::One([c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)]),
        GateKind::X => GateMatrix::One([
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
        ]),
        GateKind::Rx(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            GateMatrix::One([c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)])
        }
        GateKind::Ry(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            GateMatrix::One([c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
        }
        GateKind::H => GateMatrix::One([
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(-FRAC_1_SQRT_2, 0.0),
        ]),
        GateKind::S => GateMatrix::One([
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            c(0.0, 1.0),
        ]),
        GateKind::P(t) => GateMatrix::One([
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::from_polar(1.0, t),
        ]),
        GateKind::Ecr => {
            // (X (x) I - Y (x) X) / sqrt(2) in first (x) second tensor order,
            // row-major over the |ab> basis.
            let r = FRAC_1_SQRT_2;
            let z = Complex64::ZERO;
            #[rustfmt::skip]
            let u = [
                z,          z,           c(r, 0.0),  c(0.0, r),
                z,          z,           c(0.0, r),  c(r, 0.0),
                c(r, 0.0),  c(0.0, -r),  z,          z,
                c(0.0, -r), c(r, 0.0),   z,          z,
            ];
            GateMatrix::Two(u)
        }
        GateKind::Cx => {
            // Control is the first listed qubit.
            let mut u = [Complex64::ZERO; 16];
            u[0] = Complex64::ONE;
            u[5] = Complex64::ONE;
            u[11] = Complex64::ONE;
            u[14] = Complex64::ONE;
            GateMatrix::Two(u)
        }
        GateKind::Cz => {
            let mut u = [Complex64::ZERO; 16];
            u[0] = Complex64::ONE;
            u[5] = Complex64::ONE;
            u[10] = Complex64::ONE;
            u[15] = -Complex64::ONE;
            GateMatrix::Two(u)
        }
    };
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(kind: GateKind) -> Vec<Complex64> {
        match gate_matrix(kind).unwrap() {
            GateMatrix::One(u) => u.to_vec(),
            GateMatrix::Two(u) => u.to_vec(),
        }
    }

    fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out[i * n + j] += a[i * n + k] * b[k * n + j];
                }
            }
        }
        out
    }

    fn unitarity_defect(u: &[Complex64], n: usize) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += u[k * n + i].conj() * u[k * n + j];
                }
                let expect = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }

    /// `a == b` up to a global phase, via |tr(a^dag b)| / n.
    fn equal_up_to_phase(a: &[Complex64], b: &[Complex64], n: usize) -> bool {
        let mut tr = Complex64::ZERO;
        for i in 0..n {
            for k in 0..n {
                tr += a[k * n + i].conj() * b[k * n + i];
            }
        }
        (tr.norm() / n as f64 - 1.0).abs() < 1e-12
    }

    /// Independent construction of first (x) second Kronecker products.
    fn kron2(a: &[Complex64; 4], b: &[Complex64; 4]) -> Vec<Complex64> {
        let mut out = vec![Complex64::ZERO; 16];
        for r in 0..4 {
            for cidx in 0..4 {
                out[r * 4 + cidx] = a[(r >> 1) * 2 + (cidx >> 1)] * b[(r & 1) * 2 + (cidx & 1)];
            }
        }
        out
    }

    #[test]
    fn rz_zero_is_identity() {
        let u = mat(GateKind::Rz(0.0));
        let id = [
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
        ];
        for (x, y) in u.iter().zip(id.iter()) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn sx_squared_is_x_up_to_phase() {
        let sx = mat(GateKind::Sx);
        let sx2 = matmul(&sx, &sx, 2);
        let x = mat(GateKind::X);
        assert!(equal_up_to_phase(&sx2, &x, 2));
    }

    #[test]
    fn ecr_matches_pauli_construction_and_squares_to_identity() {
        let x: [Complex64; 4] = [
            Complex64::ZERO,
            Complex64::ONE,
            Complex64::ONE,
            Complex64::ZERO,
        ];
        let y: [Complex64; 4] = [
            Complex64::ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::ZERO,
        ];
        let i2: [Complex64; 4] = [
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
        ];
        let xi = kron2(&x, &i2);
        let yx = kron2(&y, &x);
        let oracle: Vec<Complex64> = xi
            .iter()
            .zip(yx.iter())
            .map(|(a, b)| (a - b) * FRAC_1_SQRT_2)
            .collect();
        let ecr = mat(GateKind::Ecr);
        for (u, v) in ecr.iter().zip(oracle.iter()) {
            assert!((u - v).norm() < 1e-15);
        }
        assert!(unitarity_defect(&ecr, 4) < 1e-12);
        let sq = matmul(&ecr, &ecr, 4);
        let mut id = vec![Complex64::ZERO; 16];
        for i in 0..4 {
            id[i * 4 + i] = Complex64::ONE;
        }
        assert!(equal_up_to_phase(&sq, &id, 4));
    }

    #[test]
    fn all_gate_matrices_are_unitary() {
        let kinds = [
            GateKind::Rz(0.37),
            GateKind::Sx,
            GateKind::X,
            GateKind::Ecr,
            GateKind::Rx(-1.2),
            GateKind::Ry(2.6),
            GateKind::H,
            GateKind::S,
            GateKind::P(0.9),
            GateKind::Cx,
            GateKind::Cz,
        ];
        for kind in kinds {
            match gate_matrix(kind).unwrap() {
                GateMatrix::One(u) => assert!(unitarity_defect(&u, 2) < 1e-12, "{kind:?}"),
                GateMatrix::Two(u) => assert!(unitarity_defect(&u, 4) < 1e-12, "{kind:?}"),
            }
        }
    }

    #[test]
    fn non_finite_angle_is_rejected() {
        assert!(matches!(
            gate_matrix(GateKind::Rz(f64::NAN)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            gate_matrix(GateKind::P(f64::INFINITY)),
            Err(Error::InvalidParameter(_))
        ));
    }
}
