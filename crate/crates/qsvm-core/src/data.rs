//! Dataset ingestion, feature selection, scaling, and deterministic splits.
//!
//! The bundled file is the 569-sample, 30-feature breast-cancer diagnostic
//! benchmark in the usual `id,diagnosis,f0..f29` CSV layout; malignant maps
//! to +1 and benign to -1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::rng::shuffle;

const BUNDLED_WDBC: &str = include_str!("../data/wdbc.data");

/// A labeled sample matrix with stable sample identifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub ids: Vec<String>,
    pub features: Vec<Vec<f64>>,
    /// +1 = malignant, -1 = benign.
    pub labels: Vec<i8>,
}

impl Dataset {
    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.first().map_or(0, |f| f.len())
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }

    /// Row selection by sample index.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Column selection by feature index.
    pub fn select_features(&self, indices: &[usize]) -> Dataset {
        Dataset {
            ids: self.ids.clone(),
            features: self
                .features
                .iter()
                .map(|row| indices.iter().map(|&j| row[j]).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    /// The bundled benchmark dataset.
    pub fn bundled() -> Dataset {
        parse_wdbc(BUNDLED_WDBC).expect("bundled dataset parses")
    }
}

/// Parse the `id,diagnosis(M|B),30 floats` layout.
pub fn parse_wdbc(text: &str) -> Result<Dataset> {
    let mut ids = Vec::new();
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut any = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        any = true;
        let mut fields = line.split(',');
        let id = fields
            .next()
            .ok_or_else(|| Error::parse(line_no, "missing id"))?;
        let diagnosis = fields
            .next()
            .ok_or_else(|| Error::parse(line_no, "missing diagnosis"))?;
        let label = match diagnosis {
            "M" => 1i8,
            "B" => -1i8,
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("diagnosis must be M or B, got {other:?}"),
                ))
            }
        };
        let values: Vec<f64> = fields
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::parse(line_no, format!("bad feature value {f:?}")))
            })
            .collect::<Result<_>>()?;
        if values.len() != 30 {
            return Err(Error::parse(
                line_no,
                format!("expected 30 feature columns, found {}", values.len()),
            ));
        }
        ids.push(id.to_string());
        features.push(values);
        labels.push(label);
    }
    if !any {
        return Err(Error::parse(0, "empty dataset file"));
    }
    Ok(Dataset {
        ids,
        features,
        labels,
    })
}

pub fn load_wdbc(path: &std::path::Path) -> Result<Dataset> {
    parse_wdbc(&std::fs::read_to_string(path)?)
}

/// Select the k highest-variance features (sample variance on the raw,
/// pre-scaling values). Output columns are ordered by descending variance;
/// ties break toward the smaller original index.
pub fn select_top_variance(data: &Dataset, k: usize) -> Result<(Dataset, Vec<usize>)> {
    let d = data.n_features();
    if k == 0 || k > d {
        return Err(Error::InvalidParameter(format!(
            "k must lie in 1..={d}, got {k}"
        )));
    }
    let n = data.n_samples() as f64;
    let mut variances = Vec::with_capacity(d);
    for j in 0..d {
        let mean: f64 = data.features.iter().map(|row| row[j]).sum::<f64>() / n;
        let ss: f64 = data
            .features
            .iter()
            .map(|row| (row[j] - mean) * (row[j] - mean))
            .sum();
        let var = if data.n_samples() > 1 {
            ss / (n - 1.0)
        } else {
            0.0
        };
        variances.push((var, j));
    }
    variances.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let indices: Vec<usize> = variances.iter().take(k).map(|&(_, j)| j).collect();
    Ok((data.select_features(&indices), indices))
}

/// Per-feature affine transform fitted on training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub offset: Vec<f64>,
    pub divisor: Vec<f64>,
}

impl Scaler {
    pub fn transform(&self, data: &Dataset) -> Dataset {
        Dataset {
            ids: data.ids.clone(),
            features: data
                .features
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(self.offset.iter().zip(self.divisor.iter()))
                        .map(|(v, (o, s))| (v - o) / s)
                        .collect()
                })
                .collect(),
            labels: data.labels.clone(),
        }
    }
}

fn guard_divisor(v: f64) -> f64 {
    if v < 1e-12 {
        1.0
    } else {
        v
    }
}

/// Z-score scaling: mean/std fitted on the training set only.
pub fn standardize(train: &Dataset, test: &Dataset) -> Result<(Dataset, Dataset, Scaler)> {
    if train.n_features() != test.n_features() {
        return Err(Error::Shape(
            "train and test feature dimensions differ".into(),
        ));
    }
    let d = train.n_features();
    let n = train.n_samples() as f64;
    let mut offset = Vec::with_capacity(d);
    let mut divisor = Vec::with_capacity(d);
    for j in 0..d {
        let mean: f64 = train.features.iter().map(|row| row[j]).sum::<f64>() / n;
        let var: f64 = train
            .features
            .iter()
            .map(|row| (row[j] - mean) * (row[j] - mean))
            .sum::<f64>()
            / n;
        offset.push(mean);
        divisor.push(guard_divisor(var.sqrt()));
    }
    let scaler = Scaler { offset, divisor };
    Ok((scaler.transform(train), scaler.transform(test), scaler))
}

/// Min-max scaling to [0, 1], fitted on the training set only. Used by the
/// classical baselines and the amplitude-encoding map, which need bounded
/// non-centered inputs.
pub fn minmax_scale(train: &Dataset, test: &Dataset) -> Result<(Dataset, Dataset, Scaler)> {
    if train.n_features() != test.n_features() {
        return Err(Error::Shape(
            "train and test feature dimensions differ".into(),
        ));
    }
    let d = train.n_features();
    let mut offset = Vec::with_capacity(d);
    let mut divisor = Vec::with_capacity(d);
    for j in 0..d {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for row in &train.features {
            lo = lo.min(row[j]);
            hi = hi.max(row[j]);
        }
        offset.push(lo);
        divisor.push(guard_divisor(hi - lo));
    }
    let scaler = Scaler { offset, divisor };
    Ok((scaler.transform(train), scaler.transform(test), scaler))
}

/// Split configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
    pub nas_subsample: usize,
    pub top_k_features: usize,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            stratified: true,
            seed: 9,
            nas_subsample: 200,
            top_k_features: 10,
        }
    }
}

/// Replayable record of a split.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitManifest {
    pub seed: u64,
    pub train_fraction: f64,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

/// Stratified train/test split with a seeded per-class shuffle.
///
/// Train size is floor(n * fraction); per-class quotas take their floors
/// and the remainder goes to the largest fractional part, positive class
/// first on ties.
pub fn stratified_split(
    data: &Dataset,
    spec: &SplitSpec,
) -> Result<(Dataset, Dataset, SplitManifest)> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train fraction must lie in (0,1), got {}",
            spec.train_fraction
        )));
    }
    let n = data.n_samples();
    let train_total = (n as f64 * spec.train_fraction).floor() as usize;
    let mut train_indices: Vec<usize>;
    if spec.stratified {
        let pos: Vec<usize> = (0..n).filter(|&i| data.labels[i] == 1).collect();
        let neg: Vec<usize> = (0..n).filter(|&i| data.labels[i] == -1).collect();
        if pos.is_empty() || neg.is_empty() {
            return Err(Error::DegenerateInput(
                "both classes are required for a stratified split".into(),
            ));
        }
        let quota_pos = pos.len() as f64 * spec.train_fraction;
        let quota_neg = neg.len() as f64 * spec.train_fraction;
        let mut take_pos = quota_pos.floor() as usize;
        let mut take_neg = quota_neg.floor() as usize;
        let mut rest = train_total.saturating_sub(take_pos + take_neg);
        let mut remainders = [
            (quota_pos - quota_pos.floor(), true),
            (quota_neg - quota_neg.floor(), false),
        ];
        remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)));
        for (_, is_pos) in remainders {
            if rest == 0 {
                break;
            }
            if is_pos {
                take_pos += 1;
            } else {
                take_neg += 1;
            }
            rest -= 1;
        }
        let mut pos = pos;
        let mut neg = neg;
        shuffle(&mut pos, &mut rng::stream(spec.seed, "split/pos"));
        shuffle(&mut neg, &mut rng::stream(spec.seed, "split/neg"));
        train_indices = pos[..take_pos]
            .iter()
            .chain(neg[..take_neg].iter())
            .copied()
            .collect();
    } else {
        let mut all: Vec<usize> = (0..n).collect();
        shuffle(&mut all, &mut rng::stream(spec.seed, "split/all"));
        train_indices = all[..train_total].to_vec();
    }
    train_indices.sort_unstable();
    let test_indices: Vec<usize> = (0..n)
        .filter(|i| train_indices.binary_search(i).is_err())
        .collect();
    let manifest = SplitManifest {
        seed: spec.seed,
        train_fraction: spec.train_fraction,
        train_indices: train_indices.clone(),
        test_indices: test_indices.clone(),
    };
    Ok((
        data.select(&train_indices),
        data.select(&test_indices),
        manifest,
    ))
}

/// Stratified subsample of the training set for search-time fitness
/// evaluation. Returns the subset and its indices into the training set.
pub fn nas_subsample(train: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Vec<usize>)> {
    let n = train.n_samples();
    let size = spec.nas_subsample;
    if size > n {
        return Err(Error::InvalidParameter(format!(
            "subsample of {size} exceeds the training size {n}"
        )));
    }
    let pos: Vec<usize> = (0..n).filter(|&i| train.labels[i] == 1).collect();
    let neg: Vec<usize> = (0..n).filter(|&i| train.labels[i] == -1).collect();
    let take_pos = ((size as f64) * pos.len() as f64 / n as f64).round() as usize;
    let take_pos = take_pos.min(size).min(pos.len());
    let take_neg = (size - take_pos).min(neg.len());
    let mut pos = pos;
    let mut neg = neg;
    shuffle(&mut pos, &mut rng::stream(spec.seed, "subsample/pos"));
    shuffle(&mut neg, &mut rng::stream(spec.seed, "subsample/neg"));
    let mut indices: Vec<usize> = pos[..take_pos]
        .iter()
        .chain(neg[..take_neg].iter())
        .copied()
        .collect();
    indices.sort_unstable();
    Ok((train.select(&indices), indices))
}
