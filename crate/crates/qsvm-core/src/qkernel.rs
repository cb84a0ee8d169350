//! Fidelity quantum kernels and Gram matrices.
//!
//! Noiseless kernels are computed from cached statevectors: m state
//! preparations followed by m^2 inner products, which is mathematically
//! identical to simulating the compute–uncompute circuit per pair but m
//! times cheaper. The noisy path runs the explicit compute–uncompute
//! density-matrix construction, with the noise channel applied after every
//! gate in both halves; the statevector shortcut is invalid under channels.
//!
//! Square Gram matrices compute the upper triangle once and mirror it, so
//! symmetry holds by construction; entries are pure functions of their
//! sample pair and results do not depend on the parallel schedule.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::featuremap::{BoundFeatureMap, FeatureMap};
use crate::linalg;
use crate::simcore::{apply_bound, run_circuit, NoiseModel, QuantumState, StateVector};

/// A real kernel matrix with row/column sample identifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    row_ids: Vec<String>,
    col_ids: Vec<String>,
    entries: Vec<f64>,
}

impl GramMatrix {
    pub fn from_entries(row_ids: Vec<String>, col_ids: Vec<String>, entries: Vec<f64>) -> Self {
        assert_eq!(entries.len(), row_ids.len() * col_ids.len());
        GramMatrix {
            row_ids,
            col_ids,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn cols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let c = self.cols();
        &self.entries[row * c..(row + 1) * c]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn col_ids(&self) -> &[String] {
        &self.col_ids
    }

    pub fn set_ids(&mut self, row_ids: Vec<String>, col_ids: Vec<String>) {
        assert_eq!(row_ids.len(), self.rows());
        assert_eq!(col_ids.len(), self.cols());
        self.row_ids = row_ids;
        self.col_ids = col_ids;
    }

    /// Submatrix selection by row/column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> GramMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c));
            }
        }
        GramMatrix {
            row_ids: rows.iter().map(|&r| self.row_ids[r].clone()).collect(),
            col_ids: cols.iter().map(|&c| self.col_ids[c].clone()).collect(),
            entries,
        }
    }

    /// max of |K(i,j) - K(j,i)| over the square form.
    pub fn symmetry_defect(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the square form.
    pub fn min_eigenvalue(&self) -> f64 {
        assert!(self.is_square());
        linalg::min_symmetric_eigenvalue(&self.entries, self.rows())
    }

    /// CSV with a header row of column sample identifiers; the first column
    /// holds row identifiers. Values print in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id");
        for id in &self.col_ids {
            out.push(',');
            out.push_str(id);
        }
        out.push('\n');
        for (r, id) in self.row_ids.iter().enumerate() {
            out.push_str(id);
            for c in 0..self.cols() {
                out.push(',');
                out.push_str(&format!("{}", self.get(r, c)));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<GramMatrix> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty gram matrix file"))?;
        let col_ids: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
        if col_ids.is_empty() {
            return Err(Error::parse(1, "header row has no sample identifiers"));
        }
        let mut row_ids = Vec::new();
        let mut entries = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            row_ids.push(
                fields
                    .next()
                    .ok_or_else(|| Error::parse(idx + 1, "missing row identifier"))?
                    .to_string(),
            );
            let mut count = 0;
            for f in fields {
                entries.push(
                    f.parse::<f64>()
                        .map_err(|_| Error::parse(idx + 1, format!("bad kernel value {f:?}")))?,
                );
                count += 1;
            }
            if count != col_ids.len() {
                return Err(Error::parse(
                    idx + 1,
                    format!("expected {} values, found {count}", col_ids.len()),
                ));
            }
        }
        Ok(GramMatrix {
            row_ids,
            col_ids,
            entries,
        })
    }
}

fn clamp_probability(v: f64) -> f64 {
    if v < 0.0 && v > -1e-10 {
        0.0
    } else {
        v
    }
}

enum Encoded {
    State(StateVector),
    Amplitudes(Vec<f64>),
}

fn encode(map: &FeatureMap, x: &[f64]) -> Result<Encoded> {
    match map.bind(x)? {
        BoundFeatureMap::Circuit { n_qubits, gates } => {
            match run_circuit(&gates, n_qubits, None)? {
                QuantumState::Pure(sv) => Ok(Encoded::State(sv)),
                QuantumState::Mixed(_) => unreachable!("noiseless run stays pure"),
            }
        }
        BoundFeatureMap::Amplitudes(a) => Ok(Encoded::Amplitudes(a)),
    }
}

fn fidelity(a: &Encoded, b: &Encoded) -> f64 {
    match (a, b) {
        (Encoded::State(sa), Encoded::State(sb)) => sa.inner(sb).norm_sqr(),
        (Encoded::Amplitudes(va), Encoded::Amplitudes(vb)) => {
            let dot: f64 = va.iter().zip(vb.iter()).map(|(x, y)| x * y).sum();
            dot * dot
        }
        _ => unreachable!("a single map encodes consistently"),
    }
}

/// Noisy fidelity entry: the all-zeros outcome probability of the
/// compute–uncompute circuit, i.e. <0...0| U(y)^dag rho_x U(y) |0...0> with
/// the channel applied after every gate of both halves.
fn noisy_entry(map: &FeatureMap, x: &[f64], y: &[f64], noise: &NoiseModel) -> Result<f64> {
    let (n_qubits, gates_x) = match map.bind(x)? {
        BoundFeatureMap::Circuit { n_qubits, gates } => (n_qubits, gates),
        BoundFeatureMap::Amplitudes(_) => {
            unreachable!("raw-vector kernels are computed directly")
        }
    };
    let gates_y = match map.bind(y)? {
        BoundFeatureMap::Circuit { gates, .. } => gates,
        BoundFeatureMap::Amplitudes(_) => unreachable!(),
    };
    let mut state = QuantumState::zero_mixed(n_qubits);
    for g in &gates_x {
        apply_bound(&mut state, g, false, Some(noise))?;
    }
    for g in gates_y.iter().rev() {
        apply_bound(&mut state, g, true, Some(noise))?;
    }
    let rho = state.into_mixed();
    Ok(clamp_probability(rho.entry(0, 0).re))
}

/// Fidelity kernel between two feature vectors.
pub fn kernel_entry(
    map: &FeatureMap,
    x: &[f64],
    y: &[f64],
    noise: Option<&NoiseModel>,
) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Binding(format!(
            "kernel arguments differ in dimension: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    match (noise, map) {
        // Raw-vector kernels are inner products of classical unit vectors;
        // there is no circuit for a channel to act on.
        (_, FeatureMap::RawVector { .. }) | (None, _) => {
            let ex = encode(map, x)?;
            let ey = encode(map, y)?;
            Ok(clamp_probability(fidelity(&ex, &ey)))
        }
        (Some(model), _) if model.is_zero() => {
            let ex = encode(map, x)?;
            let ey = encode(map, y)?;
            Ok(clamp_probability(fidelity(&ex, &ey)))
        }
        (Some(model), _) => noisy_entry(map, x, y, model),
    }
}

/// Gram matrix over a sample set, or a rectangular block when `ys` is given.
///
/// Square matrices compute the upper triangle once and mirror it. Row and
/// column identifiers default to the sample index; callers replace them via
/// [`GramMatrix::set_ids`].
pub fn gram_matrix(
    map: &FeatureMap,
    xs: &[Vec<f64>],
    ys: Option<&[Vec<f64>]>,
    noise: Option<&NoiseModel>,
) -> Result<GramMatrix> {
    if xs.is_empty() || ys.is_some_and(|y| y.is_empty()) {
        return Err(Error::DegenerateInput("empty sample set".into()));
    }
    let noiseless = match (noise, map) {
        (None, _) | (_, FeatureMap::RawVector { .. }) => true,
        (Some(m), _) => m.is_zero(),
    };
    let default_ids = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
    match ys {
        Some(ys) => {
            let entries: Vec<f64> = if noiseless {
                let ex: Vec<Encoded> = xs
                    .par_iter()
                    .map(|x| encode(map, x))
                    .collect::<Result<_>>()?;
                let ey: Vec<Encoded> = ys
                    .par_iter()
                    .map(|y| encode(map, y))
                    .collect::<Result<_>>()?;
                ex.par_iter()
                    .flat_map_iter(|a| ey.iter().map(move |b| clamp_probability(fidelity(a, b))))
                    .collect()
            } else {
                let model = noise.unwrap();
                let pairs: Vec<(usize, usize)> = (0..xs.len())
                    .flat_map(|i| (0..ys.len()).map(move |j| (i, j)))
                    .collect();
                pairs
                    .par_iter()
                    .map(|&(i, j)| noisy_entry(map, &xs[i], &ys[j], model))
                    .collect::<Result<_>>()?
            };
            Ok(GramMatrix::from_entries(
                default_ids(xs.len()),
                default_ids(ys.len()),
                entries,
            ))
        }
        None => {
            let m = xs.len();
            let mut entries = vec![0.0; m * m];
            if noiseless {
                let ex: Vec<Encoded> = xs
                    .par_iter()
                    .map(|x| encode(map, x))
                    .collect::<Result<_>>()?;
                let rows: Vec<Vec<f64>> = (0..m)
                    .into_par_iter()
                    .map(|i| {
                        (i..m)
                            .map(|j| clamp_probability(fidelity(&ex[i], &ex[j])))
                            .collect()
                    })
                    .collect();
                for (i, row) in rows.into_iter().enumerate() {
                    for (off, v) in row.into_iter().enumerate() {
                        let j = i + off;
                        entries[i * m + j] = v;
                        entries[j * m + i] = v;
                    }
                }
            } else {
                let model = noise.unwrap();
                let pairs: Vec<(usize, usize)> =
                    (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
                let vals: Vec<f64> = pairs
                    .par_iter()
                    .map(|&(i, j)| noisy_entry(map, &xs[i], &xs[j], model))
                    .collect::<Result<_>>()?;
                for (&(i, j), v) in pairs.iter().zip(vals) {
                    entries[i * m + j] = v;
                    entries[j * m + i] = v;
                }
            }
            Ok(GramMatrix::from_entries(
                default_ids(m),
                default_ids(m),
                entries,
            ))
        }
    }
}
