//! Device constraints: gate vocabularies, coupling maps, genome validation,
//! native-gate compliance and transpilation-overhead estimates.
//!
//! The transpiler first cancels wire-adjacent identical self-inverse
//! non-native gates (H, CX, CZ), then rewrites each remaining non-native
//! gate through a fixed template (S and H into RZ/SX chains, RX/RY into the
//! solved RZ-SX-RZ-SX-RZ Euler form, CX into one ECR plus three
//! single-qubit natives, CZ into an H-conjugated CX), and finally merges
//! adjacent same-qubit RZ and drops zero rotations. Native gates are never
//! restructured, so an already-native circuit without mergeable RZ runs is
//! a fixed point. Every rewrite is checked on the spot against a dense
//! matrix oracle, up to global phase.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::featuremap::{Genome, TokenKind};
use crate::simcore::{gate_matrix, BoundGate, GateKind, GateMatrix};

const PI: f64 = std::f64::consts::PI;
const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

/// Native kinds execute directly on the modeled device.
pub fn is_native_token(kind: TokenKind) -> bool {
    matches!(
        kind,
        TokenKind::Rz | TokenKind::Sx | TokenKind::X | TokenKind::Ecr
    )
}

pub fn is_native_gate(kind: &GateKind) -> bool {
    matches!(
        kind,
        GateKind::Rz(_) | GateKind::Sx | GateKind::X | GateKind::Ecr
    )
}

/// The device gate vocabulary: native (RZ, SX, X, ECR) or the extended set
/// adding RX, RY, H, S, CZ and CX.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateVocabulary {
    Native,
    Extended,
}

impl GateVocabulary {
    pub fn kinds(&self) -> &'static [TokenKind] {
        match self {
            GateVocabulary::Native => &[TokenKind::Rz, TokenKind::Sx, TokenKind::X, TokenKind::Ecr],
            GateVocabulary::Extended => &[
                TokenKind::Rz,
                TokenKind::Sx,
                TokenKind::X,
                TokenKind::Ecr,
                TokenKind::Rx,
                TokenKind::Ry,
                TokenKind::H,
                TokenKind::S,
                TokenKind::Cz,
                TokenKind::Cx,
            ],
        }
    }

    pub fn contains(&self, kind: TokenKind) -> bool {
        self.kinds().contains(&kind)
    }
}

/// Undirected set of qubit pairs that may host two-qubit gates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingMap {
    n_qubits: usize,
    edges: Vec<(usize, usize)>, // normalized (lo, hi), sorted, deduplicated
}

impl CouplingMap {
    pub fn new(n_qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Topology(format!("self-loop on qubit {a}")));
            }
            if a >= n_qubits || b >= n_qubits {
                return Err(Error::Topology(format!(
                    "edge ({a}, {b}) outside the {n_qubits}-qubit register"
                )));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        normalized.dedup();
        Ok(CouplingMap {
            n_qubits,
            edges: normalized,
        })
    }

    /// Linear chain (0,1), (1,2), ...
    pub fn chain(n_qubits: usize) -> CouplingMap {
        CouplingMap::new(
            n_qubits,
            (0..n_qubits.saturating_sub(1)).map(|i| (i, i + 1)),
        )
        .expect("chain edges are valid")
    }

    /// The 27-qubit heavy-hex lattice.
    pub fn heavy_hex_27() -> CouplingMap {
        let edges = [
            (0, 1),
            (1, 2),
            (1, 4),
            (2, 3),
            (3, 5),
            (4, 7),
            (5, 8),
            (6, 7),
            (7, 10),
            (8, 9),
            (8, 11),
            (10, 12),
            (11, 14),
            (12, 13),
            (12, 15),
            (13, 14),
            (14, 16),
            (15, 18),
            (16, 19),
            (17, 18),
            (18, 21),
            (19, 20),
            (19, 22),
            (21, 23),
            (22, 25),
            (23, 24),
            (24, 25),
            (25, 26),
        ];
        CouplingMap::new(27, edges).expect("heavy-hex edges are valid")
    }

    /// Bundled maps by name: `chain6`, `chain10`, `heavyhex27`.
    pub fn named(name: &str) -> Option<CouplingMap> {
        match name {
            "chain6" => Some(CouplingMap::chain(6)),
            "chain10" => Some(CouplingMap::chain(10)),
            "heavyhex27" => Some(CouplingMap::heavy_hex_27()),
            _ => None,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Text format: first line `n=<qubits>`, then one `i j` edge per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n_qubits);
        for (a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<CouplingMap> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let (first_no, first) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty coupling-map file"))?;
        let n_qubits: usize = first
            .trim()
            .strip_prefix("n=")
            .ok_or_else(|| Error::parse(first_no + 1, "expected `n=<qubits>` header"))?
            .parse()
            .map_err(|_| Error::parse(first_no + 1, "bad qubit count"))?;
        let mut edges = Vec::new();
        for (idx, line) in lines {
            let mut parts = line.split_whitespace();
            let a: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(idx + 1, "expected `i j` edge"))?;
            let b: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse(idx + 1, "expected `i j` edge"))?;
            if parts.next().is_some() {
                return Err(Error::parse(idx + 1, "trailing fields on edge line"));
            }
            edges.push((a, b));
        }
        CouplingMap::new(n_qubits, edges)
    }
}

/// A constraint violation found in a genome. Violations are data, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Vocabulary {
        index: usize,
        kind: String,
    },
    Connectivity {
        index: usize,
        kind: String,
        a: usize,
        b: usize,
    },
    Register {
        index: usize,
        qubit: usize,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Vocabulary { index, kind } => {
                write!(f, "token {index}: {kind} is outside the vocabulary")
            }
            Violation::Connectivity { index, kind, a, b } => {
                write!(f, "token {index}: {kind} on uncoupled pair ({a}, {b})")
            }
            Violation::Register { index, qubit } => {
                write!(f, "token {index}: qubit {qubit} outside the register")
            }
        }
    }
}

/// Check every token against the vocabulary and coupling map.
pub fn validate_genome(
    genome: &Genome,
    vocab: GateVocabulary,
    map: &CouplingMap,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for (index, token) in genome.tokens.iter().enumerate() {
        if !vocab.contains(token.kind) {
            out.push(Violation::Vocabulary {
                index,
                kind: token.kind.name().to_string(),
            });
        }
        for &q in &token.qubits {
            if q >= map.n_qubits() {
                out.push(Violation::Register { index, qubit: q });
            }
        }
        if token.qubits.len() == 2 {
            let (a, b) = (token.qubits[0], token.qubits[1]);
            if a < map.n_qubits() && b < map.n_qubits() && !map.allows(a, b) {
                out.push(Violation::Connectivity {
                    index,
                    kind: token.kind.name().to_string(),
                    a,
                    b,
                });
            }
        }
    }
    out
}

/// Fraction of gates drawn from the native set.
pub fn native_fraction(gates: &[BoundGate]) -> Result<f64> {
    if gates.is_empty() {
        return Err(Error::DegenerateInput(
            "native fraction of an empty sequence".into(),
        ));
    }
    let native = gates.iter().filter(|g| is_native_gate(&g.kind)).count();
    Ok(native as f64 / gates.len() as f64)
}

/// Token-level native fraction of a genome.
pub fn native_fraction_genome(genome: &Genome) -> Result<f64> {
    if genome.is_empty() {
        return Err(Error::DegenerateInput(
            "native fraction of an empty genome".into(),
        ));
    }
    let native = genome
        .tokens
        .iter()
        .filter(|t| is_native_token(t.kind))
        .count();
    Ok(native as f64 / genome.len() as f64)
}

/// Circuit depth under greedy layering.
pub fn circuit_depth(gates: &[BoundGate]) -> usize {
    let mut level: BTreeMap<usize, usize> = BTreeMap::new();
    let mut depth = 0;
    for g in gates {
        let at = g
            .qubits
            .iter()
            .map(|q| level.get(q).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
            + 1;
        for &q in &g.qubits {
            level.insert(q, at);
        }
        depth = depth.max(at);
    }
    depth
}

/// Result of a transpilation estimate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranspileOutcome {
    #[serde(skip)]
    pub gates: Vec<BoundGate>,
    pub input_counts: BTreeMap<String, usize>,
    pub output_counts: BTreeMap<String, usize>,
    pub input_total: usize,
    pub output_total: usize,
    pub native_fraction_before: f64,
    pub native_fraction_after: f64,
    pub depth_before: usize,
    pub depth_after: usize,
}

pub fn gate_counts(gates: &[BoundGate]) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for g in gates {
        *counts.entry(g.kind.name().to_string()).or_insert(0) += 1;
    }
    counts
}

/// Rewrite a bound sequence into native gates and report the overhead.
///
/// Two-qubit pairs must already be coupling-map legal; routing is out of
/// scope. The output contains only native kinds and is a fixed point of the
/// estimate itself.
pub fn transpile_estimate(gates: &[BoundGate], map: &CouplingMap) -> Result<TranspileOutcome> {
    for g in gates {
        if g.qubits.len() == 2 && !map.allows(g.qubits[0], g.qubits[1]) {
            return Err(Error::Topology(format!(
                "{} on ({}, {}) is not coupling-map legal",
                g.kind.name(),
                g.qubits[0],
                g.qubits[1]
            )));
        }
    }
    let mut work = gates.to_vec();
    cancel_nonnative_pairs(&mut work);
    let mut rewritten = Vec::with_capacity(work.len() * 2);
    for g in &work {
        if is_native_gate(&g.kind) {
            rewritten.push(g.clone());
        } else {
            let replacement = rewrite_gate(g)?;
            checked_rewrite(g, &replacement)?;
            rewritten.extend(replacement);
        }
    }
    merge_rz(&mut rewritten);
    Ok(TranspileOutcome {
        input_counts: gate_counts(gates),
        output_counts: gate_counts(&rewritten),
        input_total: gates.len(),
        output_total: rewritten.len(),
        native_fraction_before: native_fraction(gates).unwrap_or(1.0),
        native_fraction_after: native_fraction(&rewritten).unwrap_or(1.0),
        depth_before: circuit_depth(gates),
        depth_after: circuit_depth(&rewritten),
        gates: rewritten,
    })
}

/// Fixed per-gate rewrite templates (time order).
fn rewrite_gate(g: &BoundGate) -> Result<Vec<BoundGate>> {
    let q = g.qubits[0];
    Ok(match g.kind {
        GateKind::S => vec![BoundGate::one(GateKind::Rz(FRAC_PI_2), q)],
        GateKind::H => vec![
            BoundGate::one(GateKind::Rz(FRAC_PI_2), q),
            BoundGate::one(GateKind::Sx, q),
            BoundGate::one(GateKind::Rz(FRAC_PI_2), q),
        ],
        // RX(t) = RZ(pi/2) SX RZ(t + pi) SX RZ(pi/2) up to phase.
        GateKind::Rx(t) => vec![
            BoundGate::one(GateKind::Rz(FRAC_PI_2), q),
            BoundGate::one(GateKind::Sx, q),
            BoundGate::one(GateKind::Rz(t + PI), q),
            BoundGate::one(GateKind::Sx, q),
            BoundGate::one(GateKind::Rz(FRAC_PI_2), q),
        ],
        // RY(t) = SX RZ(t + pi) SX RZ(pi) up to phase (time order).
        GateKind::Ry(t) => vec![
            BoundGate::one(GateKind::Sx, q),
            BoundGate::one(GateKind::Rz(t + PI), q),
            BoundGate::one(GateKind::Sx, q),
            BoundGate::one(GateKind::Rz(PI), q),
        ],
        // CX(c, t) = (RZ(pi/2) on c) ∘ ECR(c, t) ∘ (X on c, SX on t).
        GateKind::Cx => {
            let (c, t) = (g.qubits[0], g.qubits[1]);
            vec![
                BoundGate::one(GateKind::X, c),
                BoundGate::one(GateKind::Sx, t),
                BoundGate::two(GateKind::Ecr, c, t),
                BoundGate::one(GateKind::Rz(FRAC_PI_2), c),
            ]
        }
        // CZ = (I ⊗ H) CX (I ⊗ H), each piece rewritten recursively.
        GateKind::Cz => {
            let (a, b) = (g.qubits[0], g.qubits[1]);
            let mut out = rewrite_gate(&BoundGate::one(GateKind::H, b))?;
            out.extend(rewrite_gate(&BoundGate::two(GateKind::Cx, a, b))?);
            out.extend(rewrite_gate(&BoundGate::one(GateKind::H, b))?);
            out
        }
        _ => vec![g.clone()],
    })
}

// --- peephole simplification ----------------------------------------------

fn wrap_angle(t: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = t % two_pi;
    if r > PI {
        r -= two_pi;
    } else if r <= -PI {
        r += two_pi;
    }
    r
}

fn touches(g: &BoundGate, qubits: &[usize]) -> bool {
    g.qubits.iter().any(|q| qubits.contains(q))
}

/// Index of the next gate after `from` acting on any of `qubits`.
fn next_touching(gates: &[BoundGate], from: usize, qubits: &[usize]) -> Option<usize> {
    (from + 1..gates.len()).find(|&j| touches(&gates[j], qubits))
}

/// Cancel wire-adjacent identical self-inverse non-native gates (H, CX,
/// CZ) before decomposition. For a two-qubit pair the adjacency scan stops
/// at the first gate touching either wire, so both wires are clean between
/// a cancelled pair. Native gates are left untouched.
fn cancel_nonnative_pairs(gates: &mut Vec<BoundGate>) {
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < gates.len() {
            let g = gates[i].clone();
            let cancellable = matches!(g.kind, GateKind::H | GateKind::Cx | GateKind::Cz);
            if cancellable {
                if let Some(j) = next_touching(gates, i, &g.qubits) {
                    if gates[j].kind == g.kind && gates[j].qubits == g.qubits {
                        gates.remove(j);
                        gates.remove(i);
                        changed = true;
                        continue;
                    }
                }
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
}

/// Merge wire-adjacent same-qubit RZ and drop zero rotations (mod 2pi).
fn merge_rz(gates: &mut Vec<BoundGate>) {
    loop {
        let mut changed = false;
        let mut i = 0;
        'scan: while i < gates.len() {
            let g = gates[i].clone();
            if let GateKind::Rz(t) = g.kind {
                if wrap_angle(t).abs() < 1e-12 {
                    gates.remove(i);
                    changed = true;
                    continue 'scan;
                }
                if let Some(j) = next_touching(gates, i, &g.qubits) {
                    if let GateKind::Rz(b) = gates[j].kind {
                        if gates[j].qubits == g.qubits {
                            gates[i] = BoundGate::one(GateKind::Rz(wrap_angle(t + b)), g.qubits[0]);
                            gates.remove(j);
                            changed = true;
                            continue 'scan;
                        }
                    }
                }
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
}

// --- rewrite verification ---------------------------------------------------

fn mat_of(g: &BoundGate) -> [Complex64; 16] {
    // Embed into the local 4x4 basis |ab> of the original gate's qubits;
    // single-qubit gates act on one factor.
    let m = gate_matrix(g.kind).expect("angles are finite here");
    match m {
        GateMatrix::Two(u) => u,
        GateMatrix::One(u) => {
            let mut out = [Complex64::ZERO; 16];
            let id = [
                Complex64::ONE,
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::ONE,
            ];
            let (first, second) = if g.qubits[0] == 0 {
                (&u, &id)
            } else {
                (&id, &u)
            };
            for r in 0..4 {
                for c in 0..4 {
                    out[r * 4 + c] = first[(r >> 1) * 2 + (c >> 1)] * second[(r & 1) * 2 + (c & 1)];
                }
            }
            out
        }
    }
}

/// Dense oracle: the replacement's product equals the original up to a
/// global phase, |tr(U^dag V)| / 2^k = 1 within 1e-9.
fn checked_rewrite(original: &BoundGate, replacement: &[BoundGate]) -> Result<()> {
    let two_qubit = original.qubits.len() == 2;
    let relabel = |g: &BoundGate| -> BoundGate {
        let qubits = g
            .qubits
            .iter()
            .map(|q| {
                original
                    .qubits
                    .iter()
                    .position(|oq| oq == q)
                    .expect("replacement stays on the original qubits")
            })
            .collect();
        BoundGate {
            kind: g.kind,
            qubits,
        }
    };
    if two_qubit {
        let target = mat_of(&relabel(original));
        let mut acc = [Complex64::ZERO; 16];
        for i in 0..4 {
            acc[i * 4 + i] = Complex64::ONE;
        }
        for g in replacement {
            let u = mat_of(&relabel(g));
            let mut next = [Complex64::ZERO; 16];
            for r in 0..4 {
                for c in 0..4 {
                    for k in 0..4 {
                        next[r * 4 + c] += u[r * 4 + k] * acc[k * 4 + c];
                    }
                }
            }
            acc = next;
        }
        let mut tr = Complex64::ZERO;
        for i in 0..4 {
            for k in 0..4 {
                tr += target[k * 4 + i].conj() * acc[k * 4 + i];
            }
        }
        if (tr.norm() / 4.0 - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "rewrite of {} failed the unitary oracle",
                original.kind.name()
            )));
        }
    } else {
        let target = match gate_matrix(original.kind)? {
            GateMatrix::One(u) => u,
            _ => unreachable!(),
        };
        let mut acc = [
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
        ];
        for g in replacement {
            let u = match gate_matrix(g.kind)? {
                GateMatrix::One(u) => u,
                _ => unreachable!("1-qubit rewrites stay 1-qubit"),
            };
            let mut next = [Complex64::ZERO; 4];
            for r in 0..2 {
                for c in 0..2 {
                    for k in 0..2 {
                        next[r * 2 + c] += u[r * 2 + k] * acc[k * 2 + c];
                    }
                }
            }
            acc = next;
        }
        let mut tr = Complex64::ZERO;
        for i in 0..2 {
            for k in 0..2 {
                tr += target[k * 2 + i].conj() * acc[k * 2 + i];
            }
        }
        if (tr.norm() / 2.0 - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "rewrite of {} failed the unitary oracle",
                original.kind.name()
            )));
        }
    }
    Ok(())
}
