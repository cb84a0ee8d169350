//! Feature maps: genomes and hand-crafted recipes turned into bound,
//! data-parameterized circuits.
//!
//! A genome is an ordered list of [`GateToken`]s. Parametric tokens either
//! carry an explicit feature index (`f=<i>` in the text format) or are left
//! unbound, in which case binding resolves them in appearance order: the
//! j-th parameter slot of the whole circuit reads feature `j mod d`, with
//! the mandatory fixed-RZ layer (when enabled) occupying slots `0..n`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::simcore::{BoundGate, GateKind};

/// Gate kind of a token, before any angle is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Rz,
    Sx,
    X,
    Ecr,
    Rx,
    Ry,
    H,
    S,
    P,
    Cx,
    Cz,
}

impl TokenKind {
    pub const ALL: [TokenKind; 11] = [
        TokenKind::Rz,
        TokenKind::Sx,
        TokenKind::X,
        TokenKind::Ecr,
        TokenKind::Rx,
        TokenKind::Ry,
        TokenKind::H,
        TokenKind::S,
        TokenKind::P,
        TokenKind::Cx,
        TokenKind::Cz,
    ];

    pub fn arity(&self) -> usize {
        match self {
            TokenKind::Ecr | TokenKind::Cx | TokenKind::Cz => 2,
            _ => 1,
        }
    }

    /// Whether the kind carries a rotation angle.
    pub fn is_parametric(&self) -> bool {
        matches!(
            self,
            TokenKind::Rz | TokenKind::Rx | TokenKind::Ry | TokenKind::P
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            TokenKind::Rz => "RZ",
            TokenKind::Sx => "SX",
            TokenKind::X => "X",
            TokenKind::Ecr => "ECR",
            TokenKind::Rx => "RX",
            TokenKind::Ry => "RY",
            TokenKind::H => "H",
            TokenKind::S => "S",
            TokenKind::P => "P",
            TokenKind::Cx => "CX",
            TokenKind::Cz => "CZ",
        }
    }

    pub fn from_name(name: &str) -> Option<TokenKind> {
        Some(match name {
            "RZ" => TokenKind::Rz,
            "SX" => TokenKind::Sx,
            "X" => TokenKind::X,
            "ECR" => TokenKind::Ecr,
            "RX" => TokenKind::Rx,
            "RY" => TokenKind::Ry,
            "H" => TokenKind::H,
            "S" => TokenKind::S,
            "P" => TokenKind::P,
            "CX" => TokenKind::Cx,
            "CZ" => TokenKind::Cz,
            _ => return None,
        })
    }

    /// Attach an angle (ignored by non-parametric kinds).
    pub fn with_angle(&self, theta: f64) -> GateKind {
        match self {
            TokenKind::Rz => GateKind::Rz(theta),
            TokenKind::Sx => GateKind::Sx,
            TokenKind::X => GateKind::X,
            TokenKind::Ecr => GateKind::Ecr,
            TokenKind::Rx => GateKind::Rx(theta),
            TokenKind::Ry => GateKind::Ry(theta),
            TokenKind::H => GateKind::H,
            TokenKind::S => GateKind::S,
            TokenKind::P => GateKind::P(theta),
            TokenKind::Cx => GateKind::Cx,
            TokenKind::Cz => GateKind::Cz,
        }
    }
}

/// One genome gene: gate kind, target qubit(s), and parameter binding.
#[derive(Debug, Clone, PartialEq)]
pub struct GateToken {
    pub kind: TokenKind,
    pub qubits: Vec<usize>,
    /// `Some(f)` binds the angle to feature `f`; `None` on a parametric
    /// kind means appearance-order binding.
    pub binding: Option<usize>,
}

impl GateToken {
    pub fn new(kind: TokenKind, qubits: Vec<usize>, binding: Option<usize>) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::Topology(format!(
                "{} expects {} qubit(s), got {}",
                kind.name(),
                kind.arity(),
                qubits.len()
            )));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::Topology(format!(
                "{} requires distinct qubits",
                kind.name()
            )));
        }
        if binding.is_some() && !kind.is_parametric() {
            return Err(Error::Binding(format!(
                "{} carries no angle and cannot bind a feature",
                kind.name()
            )));
        }
        Ok(GateToken {
            kind,
            qubits,
            binding,
        })
    }

    fn format_line(&self, out: &mut String) {
        out.push_str(self.kind.name());
        out.push(' ');
        let qs: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        out.push_str(&qs.join(","));
        if let Some(f) = self.binding {
            let _ = write!(out, " f={f}");
        }
    }
}

/// A variable-length gate-token list, the unit of evolution for the search.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Genome {
    pub tokens: Vec<GateToken>,
}

impl Genome {
    pub fn new(tokens: Vec<GateToken>) -> Self {
        Genome { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Largest qubit index referenced, plus one.
    pub fn min_register(&self) -> usize {
        self.tokens
            .iter()
            .flat_map(|t| t.qubits.iter())
            .max()
            .map_or(0, |q| q + 1)
    }

    /// Number of two-qubit tokens (the sparsity-penalty count).
    pub fn two_qubit_count(&self) -> usize {
        self.tokens.iter().filter(|t| t.kind.arity() == 2).count()
    }

    /// Canonical one-line form, used for fitness memoization.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(';');
            }
            t.format_line(&mut out);
        }
        out
    }

    /// Text format: one token per line, `KIND q0[,q1] [f=<feature>]`.
    /// Blank lines and `#` comments are ignored on parse.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tokens {
            t.format_line(&mut out);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Genome> {
        let mut tokens = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let kind_name = parts.next().unwrap();
            let kind = TokenKind::from_name(kind_name)
                .ok_or_else(|| Error::parse(line_no, format!("unknown gate kind {kind_name:?}")))?;
            let qubit_part = parts
                .next()
                .ok_or_else(|| Error::parse(line_no, "missing qubit list"))?;
            let qubits: Vec<usize> = qubit_part
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::parse(line_no, format!("bad qubit index {s:?}")))
                })
                .collect::<Result<_>>()?;
            let mut binding = None;
            for extra in parts {
                if let Some(f) = extra.strip_prefix("f=") {
                    binding =
                        Some(f.parse::<usize>().map_err(|_| {
                            Error::parse(line_no, format!("bad feature index {f:?}"))
                        })?);
                } else {
                    return Err(Error::parse(line_no, format!("unexpected field {extra:?}")));
                }
            }
            tokens.push(
                GateToken::new(kind, qubits, binding)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?,
            );
        }
        Ok(Genome { tokens })
    }
}

/// Resolve a genome into a bound gate sequence for input `x`.
///
/// With `fixed_rz`, a layer of `RZ(x_q)` on every qubit is prepended and the
/// layer occupies the first `n_qubits` parameter slots. Every parametric
/// genome token then consumes one slot in order; unbound tokens read
/// `x[slot mod d]`, explicitly bound tokens read their own feature index.
pub fn bind_genome(
    genome: &Genome,
    x: &[f64],
    fixed_rz: bool,
    n_qubits: usize,
) -> Result<Vec<BoundGate>> {
    let d = x.len();
    if d == 0 {
        return Err(Error::Binding("empty feature vector".into()));
    }
    if fixed_rz && d < n_qubits {
        return Err(Error::Binding(format!(
            "fixed-RZ layer needs dim(x) >= {n_qubits}, got {d}"
        )));
    }
    let mut out = Vec::with_capacity(genome.len() + if fixed_rz { n_qubits } else { 0 });
    let mut slot = 0usize;
    if fixed_rz {
        for (q, &xq) in x.iter().enumerate().take(n_qubits) {
            out.push(BoundGate::one(GateKind::Rz(xq), q));
        }
        slot = n_qubits;
    }
    for token in &genome.tokens {
        for &q in &token.qubits {
            if q >= n_qubits {
                return Err(Error::Topology(format!(
                    "token {} targets qubit {q} outside the {n_qubits}-qubit register",
                    token.kind.name()
                )));
            }
        }
        let kind = if token.kind.is_parametric() {
            let angle = match token.binding {
                Some(f) => {
                    if f >= d {
                        return Err(Error::Binding(format!(
                            "feature index {f} out of range for dimension {d}"
                        )));
                    }
                    x[f]
                }
                None => x[slot % d],
            };
            slot += 1;
            token.kind.with_angle(angle)
        } else {
            token.kind.with_angle(0.0)
        };
        out.push(BoundGate {
            kind,
            qubits: token.qubits.clone(),
        });
    }
    Ok(out)
}

/// A feature-map recipe: either a genome or one of the hand-crafted
/// constructions from the benchmark suite.
#[derive(Debug, Clone, PartialEq)]
pub enum FeatureMap {
    Genome {
        genome: Genome,
        fixed_rz: bool,
        n_qubits: usize,
    },
    Z {
        n_qubits: usize,
        reps: usize,
    },
    Zz {
        n_qubits: usize,
        reps: usize,
    },
    Pauli {
        n_qubits: usize,
        reps: usize,
    },
    EfficientLike {
        n_qubits: usize,
        reps: usize,
    },
    RawVector {
        n_features: usize,
    },
}

/// The result of binding a feature map to one input vector.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundFeatureMap {
    /// A circuit to run from |0...0>.
    Circuit {
        n_qubits: usize,
        gates: Vec<BoundGate>,
    },
    /// Direct amplitude encoding (normalized, zero-padded to 2^n).
    Amplitudes(Vec<f64>),
}

impl FeatureMap {
    pub fn n_qubits(&self) -> usize {
        match self {
            FeatureMap::Genome { n_qubits, .. }
            | FeatureMap::Z { n_qubits, .. }
            | FeatureMap::Zz { n_qubits, .. }
            | FeatureMap::Pauli { n_qubits, .. }
            | FeatureMap::EfficientLike { n_qubits, .. } => *n_qubits,
            FeatureMap::RawVector { n_features } => raw_vector_qubits(*n_features),
        }
    }

    /// Bind the map to one feature vector.
    pub fn bind(&self, x: &[f64]) -> Result<BoundFeatureMap> {
        match self {
            FeatureMap::Genome {
                genome,
                fixed_rz,
                n_qubits,
            } => Ok(BoundFeatureMap::Circuit {
                n_qubits: *n_qubits,
                gates: bind_genome(genome, x, *fixed_rz, *n_qubits)?,
            }),
            FeatureMap::Z { n_qubits, reps } => {
                check_dim(x, *n_qubits)?;
                let mut gates = Vec::new();
                for _ in 0..*reps {
                    z_layer(&mut gates, x, *n_qubits);
                }
                Ok(BoundFeatureMap::Circuit {
                    n_qubits: *n_qubits,
                    gates,
                })
            }
            FeatureMap::Zz { n_qubits, reps } | FeatureMap::Pauli { n_qubits, reps } => {
                check_dim(x, *n_qubits)?;
                let mut gates = Vec::new();
                for _ in 0..*reps {
                    z_layer(&mut gates, x, *n_qubits);
                    for i in 0..n_qubits.saturating_sub(1) {
                        let j = i + 1;
                        let phi =
                            2.0 * (std::f64::consts::PI - x[i]) * (std::f64::consts::PI - x[j]);
                        gates.push(BoundGate::two(GateKind::Cx, i, j));
                        gates.push(BoundGate::one(GateKind::P(phi), j));
                        gates.push(BoundGate::two(GateKind::Cx, i, j));
                    }
                }
                Ok(BoundFeatureMap::Circuit {
                    n_qubits: *n_qubits,
                    gates,
                })
            }
            FeatureMap::EfficientLike { n_qubits, reps } => {
                check_dim(x, *n_qubits)?;
                let mut gates = Vec::new();
                for _ in 0..*reps {
                    for (q, &xi) in x.iter().enumerate() {
                        gates.push(BoundGate::one(GateKind::Ry(xi), q));
                    }
                    for i in 0..n_qubits.saturating_sub(1) {
                        gates.push(BoundGate::two(GateKind::Cx, i, i + 1));
                    }
                }
                Ok(BoundFeatureMap::Circuit {
                    n_qubits: *n_qubits,
                    gates,
                })
            }
            FeatureMap::RawVector { n_features } => {
                if x.len() != *n_features {
                    return Err(Error::Binding(format!(
                        "raw-vector map expects {n_features} features, got {}",
                        x.len()
                    )));
                }
                let dim = 1usize << raw_vector_qubits(*n_features);
                let norm_sq: f64 = x.iter().map(|v| v * v).sum();
                if norm_sq < 1e-24 {
                    return Err(Error::Normalization(
                        "cannot amplitude-encode the zero vector".into(),
                    ));
                }
                let norm = norm_sq.sqrt();
                let mut amps = vec![0.0; dim];
                for (a, v) in amps.iter_mut().zip(x.iter()) {
                    *a = v / norm;
                }
                Ok(BoundFeatureMap::Amplitudes(amps))
            }
        }
    }
}

fn raw_vector_qubits(n_features: usize) -> usize {
    let mut n = 1usize;
    while (1usize << n) < n_features {
        n += 1;
    }
    n
}

fn check_dim(x: &[f64], n_qubits: usize) -> Result<()> {
    if x.len() != n_qubits {
        return Err(Error::Binding(format!(
            "expected {n_qubits} features for a {n_qubits}-qubit map, got {}",
            x.len()
        )));
    }
    Ok(())
}

fn z_layer(gates: &mut Vec<BoundGate>, x: &[f64], n_qubits: usize) {
    for q in 0..n_qubits {
        gates.push(BoundGate::one(GateKind::H, q));
    }
    for (q, &xi) in x.iter().enumerate() {
        gates.push(BoundGate::one(GateKind::P(2.0 * xi), q));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn token(kind: TokenKind, qubits: &[usize]) -> GateToken {
        GateToken::new(kind, qubits.to_vec(), None).unwrap()
    }

    /// The published 12-gate native genome (10 qubits, no fixed RZ layer).
    pub(crate) fn free_genome() -> Genome {
        Genome::new(vec![
            token(TokenKind::Sx, &[4]),
            token(TokenKind::Ecr, &[4, 3]),
            token(TokenKind::Ecr, &[9, 8]),
            token(TokenKind::Rz, &[2]),
            token(TokenKind::Ecr, &[2, 3]),
            token(TokenKind::Sx, &[3]),
            token(TokenKind::Rz, &[8]),
            token(TokenKind::Rz, &[4]),
            token(TokenKind::Ecr, &[9, 8]),
            token(TokenKind::Ecr, &[2, 3]),
            token(TokenKind::Ecr, &[0, 1]),
            token(TokenKind::Sx, &[5]),
        ])
    }

    #[test]
    fn empty_genome_with_fixed_rz_yields_the_encoding_layer() {
        let g = Genome::default();
        let bound = bind_genome(&g, &[0.3, -1.1], true, 2).unwrap();
        assert_eq!(bound.len(), 2);
        assert_eq!(bound[0], BoundGate::one(GateKind::Rz(0.3), 0));
        assert_eq!(bound[1], BoundGate::one(GateKind::Rz(-1.1), 1));
    }

    #[test]
    fn published_free_genome_binds_to_twelve_gates_six_ecr() {
        let g = free_genome();
        let x: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        let bound = bind_genome(&g, &x, false, 10).unwrap();
        assert_eq!(bound.len(), 12);
        let ecr = bound
            .iter()
            .filter(|b| matches!(b.kind, GateKind::Ecr))
            .count();
        assert_eq!(ecr, 6);
        // Appearance-order slots: the three RZ tokens read x0, x1, x2.
        let angles: Vec<f64> = bound
            .iter()
            .filter_map(|b| match b.kind {
                GateKind::Rz(t) => Some(t),
                _ => None,
            })
            .collect();
        assert_eq!(angles, vec![x[0], x[1], x[2]]);
    }

    #[test]
    fn zero_vector_collapses_to_the_skeleton() {
        let g = free_genome();
        let x = vec![0.0; 10];
        let bound = bind_genome(&g, &x, false, 10).unwrap();
        for b in &bound {
            if let GateKind::Rz(t) = b.kind {
                assert_eq!(t, 0.0);
            }
        }
    }

    #[test]
    fn bound_length_is_genome_length_plus_layer() {
        let g = free_genome();
        let x = vec![0.5; 10];
        assert_eq!(bind_genome(&g, &x, false, 10).unwrap().len(), g.len());
        assert_eq!(bind_genome(&g, &x, true, 10).unwrap().len(), g.len() + 10);
    }

    #[test]
    fn explicit_feature_index_out_of_range_is_a_binding_error() {
        let g = Genome::new(vec![
            GateToken::new(TokenKind::Rz, vec![0], Some(7)).unwrap()
        ]);
        assert!(matches!(
            bind_genome(&g, &[1.0, 2.0], false, 1),
            Err(Error::Binding(_))
        ));
    }

    #[test]
    fn fixed_rz_layer_needs_enough_features() {
        let g = Genome::default();
        assert!(matches!(
            bind_genome(&g, &[1.0, 2.0], true, 3),
            Err(Error::Binding(_))
        ));
    }

    #[test]
    fn z_map_smallest_instance() {
        let map = FeatureMap::Z {
            n_qubits: 1,
            reps: 1,
        };
        let bound = map.bind(&[0.7]).unwrap();
        match bound {
            BoundFeatureMap::Circuit { gates, .. } => {
                assert_eq!(gates.len(), 2);
                assert_eq!(gates[0].kind, GateKind::H);
                assert_eq!(gates[1].kind, GateKind::P(1.4));
            }
            _ => panic!("expected a circuit"),
        }
    }

    #[test]
    fn zz_map_two_qubits_one_rep_has_seven_gates() {
        let map = FeatureMap::Zz {
            n_qubits: 2,
            reps: 1,
        };
        let bound = map.bind(&[0.1, 0.2]).unwrap();
        match bound {
            BoundFeatureMap::Circuit { gates, .. } => {
                let names: Vec<&str> = gates.iter().map(|g| g.kind.name()).collect();
                assert_eq!(names, vec!["H", "H", "P", "P", "CX", "P", "CX"]);
            }
            _ => panic!("expected a circuit"),
        }
    }

    #[test]
    fn raw_vector_basis_state() {
        let map = FeatureMap::RawVector { n_features: 4 };
        match map.bind(&[1.0, 0.0, 0.0, 0.0]).unwrap() {
            BoundFeatureMap::Amplitudes(a) => {
                assert_eq!(a, vec![1.0, 0.0, 0.0, 0.0]);
            }
            _ => panic!("expected amplitudes"),
        }
    }

    #[test]
    fn raw_vector_rejects_zero_input() {
        let map = FeatureMap::RawVector { n_features: 2 };
        assert!(matches!(
            map.bind(&[0.0, 0.0]),
            Err(Error::Normalization(_))
        ));
    }

    #[test]
    fn handcrafted_maps_are_deterministic() {
        let map = FeatureMap::Zz {
            n_qubits: 3,
            reps: 2,
        };
        let x = [0.4, -0.9, 1.3];
        assert_eq!(map.bind(&x).unwrap(), map.bind(&x).unwrap());
    }

    #[test]
    fn text_format_round_trips() {
        let g = free_genome();
        let text = g.to_text();
        let back = Genome::parse(&text).unwrap();
        assert_eq!(g, back);
        // With an explicit binding too.
        let g2 = Genome::new(vec![
            GateToken::new(TokenKind::Rz, vec![2], Some(2)).unwrap(),
            token(TokenKind::Ecr, &[4, 3]),
        ]);
        assert_eq!(Genome::parse(&g2.to_text()).unwrap(), g2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Genome::parse("ECR 0,1\nFOO 3\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let err = Genome::parse("RZ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
