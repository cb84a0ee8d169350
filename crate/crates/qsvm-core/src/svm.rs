//! Soft-margin SVMs on precomputed kernels, classical kernels, stratified
//! cross-validation and grid search.
//!
//! The solver is an SMO working on the dual
//! `max sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij`, `0 <= a <= C`,
//! `sum a_i y_i = 0`, using maximal-violating-pair selection with the usual
//! analytic two-variable update. Convergence is declared when the largest
//! KKT violation drops below 1e-3.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qkernel::GramMatrix;
use crate::rng;

const KKT_TOL: f64 = 1e-3;
const TAU: f64 = 1e-12;
const SUPPORT_EPS: f64 = 1e-8;

/// Regularization grid spanning five orders of magnitude.
pub const STANDARD_C_GRID: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
/// RBF bandwidth grid.
pub const STANDARD_GAMMA_GRID: [f64; 5] = [0.001, 0.01, 0.1, 1.0, 10.0];

/// Trained dual model for a precomputed-kernel SVM.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SvmModel {
    /// `alpha_i * y_i` for every training sample (zero off-support).
    pub dual_coefficients: Vec<f64>,
    pub bias: f64,
    pub support_indices: Vec<usize>,
    /// Regularization used for the fit.
    pub c: f64,
    /// False iff the update budget ran out before the KKT gap closed.
    pub converged: bool,
    /// Set when a training pair exhibited negative curvature, i.e. the
    /// kernel was not PSD; the solve proceeds with clamped curvature.
    pub non_psd_warning: bool,
}

impl SvmModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&serde_json::to_value(self).expect("serializable"))
            .expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<SvmModel> {
        Ok(serde_json::from_str(text)?)
    }

    /// Dual objective sum(a) - 1/2 sum a_i a_j y_i y_j K_ij.
    pub fn dual_objective(&self, k: &GramMatrix, y: &[i8]) -> f64 {
        let n = y.len();
        let alphas: Vec<f64> = self
            .dual_coefficients
            .iter()
            .zip(y.iter())
            .map(|(c, &yi)| c * f64::from(yi))
            .collect();
        let mut obj = alphas.iter().sum::<f64>();
        for i in 0..n {
            if alphas[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                obj -=
                    0.5 * alphas[i] * alphas[j] * f64::from(y[i]) * f64::from(y[j]) * k.get(i, j);
            }
        }
        obj
    }
}

/// Classification metrics with malignant (+1) as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Metrics {
    pub fn from_predictions(y_true: &[i8], y_pred: &[i8]) -> Metrics {
        assert_eq!(y_true.len(), y_pred.len());
        let mut tp = 0usize;
        let mut fp = 0usize;
        let mut fneg = 0usize;
        let mut correct = 0usize;
        for (&t, &p) in y_true.iter().zip(y_pred.iter()) {
            if t == p {
                correct += 1;
            }
            match (t, p) {
                (1, 1) => tp += 1,
                (-1, 1) => fp += 1,
                (1, -1) => fneg += 1,
                _ => {}
            }
        }
        let accuracy = correct as f64 / y_true.len() as f64;
        let precision = if tp + fp > 0 {
            tp as f64 / (tp + fp) as f64
        } else {
            0.0
        };
        let recall = if tp + fneg > 0 {
            tp as f64 / (tp + fneg) as f64
        } else {
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Metrics {
            accuracy,
            precision,
            recall,
            f1,
        }
    }
}

fn check_labels(y: &[i8]) -> Result<()> {
    if y.iter().any(|&v| v != 1 && v != -1) {
        return Err(Error::InvalidParameter("labels must be +1 or -1".into()));
    }
    let pos = y.iter().filter(|&&v| v == 1).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::DegenerateInput(
            "training labels contain a single class".into(),
        ));
    }
    Ok(())
}

/// Train a soft-margin SVM on a precomputed square kernel.
pub fn train_precomputed(k: &GramMatrix, y: &[i8], c: f64) -> Result<SvmModel> {
    if !k.is_square() || k.rows() != y.len() {
        return Err(Error::Shape(format!(
            "kernel is {}x{} but {} labels were given",
            k.rows(),
            k.cols(),
            y.len()
        )));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::InvalidParameter(format!("C must be > 0, got {c}")));
    }
    check_labels(y)?;

    let n = y.len();
    let yf: Vec<f64> = y.iter().map(|&v| f64::from(v)).collect();
    let mut alpha = vec![0.0_f64; n];
    // Gradient of 1/2 a^T Q a - e^T a, so G_i = (Q a)_i - 1.
    let mut grad = vec![-1.0_f64; n];
    let mut non_psd = false;
    let mut converged = false;
    // One "pass" is a sweep-equivalent of n pairwise updates.
    let max_updates = 10_000usize.saturating_mul(n.max(1));

    for _ in 0..max_updates {
        // Maximal violating pair; ties resolve to the lower index.
        let mut i_sel = usize::MAX;
        let mut m_up = f64::NEG_INFINITY;
        let mut j_sel = usize::MAX;
        let mut m_low = f64::INFINITY;
        for t in 0..n {
            let v = -yf[t] * grad[t];
            let in_up = (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0);
            let in_low = (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < c);
            if in_up && v > m_up {
                m_up = v;
                i_sel = t;
            }
            if in_low && v < m_low {
                m_low = v;
                j_sel = t;
            }
        }
        if i_sel == usize::MAX || j_sel == usize::MAX || m_up - m_low < KKT_TOL {
            converged = true;
            break;
        }
        let (i, j) = (i_sel, j_sel);
        // Move along the feasible direction d_alpha_i = y_i u,
        // d_alpha_j = -y_j u; the curvature along it is
        // K_ii + K_jj - 2 K_ij regardless of the label pattern.
        let mut eta = k.get(i, i) + k.get(j, j) - 2.0 * k.get(i, j);
        if eta <= 0.0 {
            if eta < -1e-9 {
                non_psd = true;
            }
            eta = TAU;
        }
        let cap_i = if y[i] == 1 { c - alpha[i] } else { alpha[i] };
        let cap_j = if y[j] == 1 { alpha[j] } else { c - alpha[j] };
        let u = ((m_up - m_low) / eta).min(cap_i).min(cap_j);
        if u <= 0.0 {
            converged = true;
            break;
        }
        alpha[i] += yf[i] * u;
        alpha[j] -= yf[j] * u;
        let dai = yf[i] * u;
        let daj = -yf[j] * u;
        for t in 0..n {
            grad[t] += yf[t] * yf[i] * k.get(t, i) * dai + yf[t] * yf[j] * k.get(t, j) * daj;
        }
    }

    // Bias from free support vectors; fall back to the violation midpoint.
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    for t in 0..n {
        if alpha[t] > SUPPORT_EPS && alpha[t] < c - SUPPORT_EPS {
            free_sum += -yf[t] * grad[t];
            free_count += 1;
        }
    }
    let bias = if free_count > 0 {
        free_sum / free_count as f64
    } else {
        let mut m_up = f64::NEG_INFINITY;
        let mut m_low = f64::INFINITY;
        for t in 0..n {
            let v = -yf[t] * grad[t];
            let in_up = (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0);
            let in_low = (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < c);
            if in_up {
                m_up = m_up.max(v);
            }
            if in_low {
                m_low = m_low.min(v);
            }
        }
        (m_up + m_low) / 2.0
    };

    let support_indices: Vec<usize> = (0..n).filter(|&t| alpha[t] > SUPPORT_EPS).collect();
    let dual_coefficients: Vec<f64> = (0..n)
        .map(|t| {
            if alpha[t] > SUPPORT_EPS {
                alpha[t] * yf[t]
            } else {
                0.0
            }
        })
        .collect();
    Ok(SvmModel {
        dual_coefficients,
        bias,
        support_indices,
        c,
        converged,
        non_psd_warning: non_psd,
    })
}

/// Decision values for a test block (rows = test samples, cols = train).
pub fn decision_values(model: &SvmModel, k_test: &GramMatrix) -> Result<Vec<f64>> {
    if k_test.cols() != model.dual_coefficients.len() {
        return Err(Error::Shape(format!(
            "test kernel has {} columns but the model was trained on {} samples",
            k_test.cols(),
            model.dual_coefficients.len()
        )));
    }
    Ok((0..k_test.rows())
        .map(|r| {
            let row = k_test.row(r);
            row.iter()
                .zip(model.dual_coefficients.iter())
                .map(|(kv, cv)| kv * cv)
                .sum::<f64>()
                + model.bias
        })
        .collect())
}

/// Predicted labels; a decision value of exactly zero resolves to +1.
pub fn predict(model: &SvmModel, k_test: &GramMatrix) -> Result<Vec<i8>> {
    Ok(decision_values(model, k_test)?
        .into_iter()
        .map(|d| if d >= 0.0 { 1 } else { -1 })
        .collect())
}

/// Classical kernel kinds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClassicalKernel {
    Linear,
    Rbf { gamma: f64 },
}

/// Dense classical kernel between two sample sets.
pub fn classical_kernel(
    xs: &[Vec<f64>],
    ys: &[Vec<f64>],
    kind: ClassicalKernel,
) -> Result<GramMatrix> {
    if let ClassicalKernel::Rbf { gamma } = kind {
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "rbf gamma must be > 0, got {gamma}"
            )));
        }
    }
    let dim = xs.first().map_or(0, |x| x.len());
    for v in xs.iter().chain(ys.iter()) {
        if v.len() != dim {
            return Err(Error::Shape(
                "all samples must share one feature dimension".into(),
            ));
        }
    }
    let mut entries = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            let v = match kind {
                ClassicalKernel::Linear => x.iter().zip(y.iter()).map(|(a, b)| a * b).sum(),
                ClassicalKernel::Rbf { gamma } => {
                    let d2: f64 = x.iter().zip(y.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
                    (-gamma * d2).exp()
                }
            };
            entries.push(v);
        }
    }
    Ok(GramMatrix::from_entries(
        (0..xs.len()).map(|i| i.to_string()).collect(),
        (0..ys.len()).map(|i| i.to_string()).collect(),
        entries,
    ))
}

/// Stratified fold assignment: per-class seeded shuffle dealt round-robin.
pub fn stratified_folds(y: &[i8], folds: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut assignment = vec![Vec::new(); folds];
    let mut rng = rng::stream(seed, "cv-folds");
    for class in [1i8, -1i8] {
        let mut idx: Vec<usize> = (0..y.len()).filter(|&i| y[i] == class).collect();
        rng::shuffle(&mut idx, &mut rng);
        for (pos, i) in idx.into_iter().enumerate() {
            assignment[pos % folds].push(i);
        }
    }
    for fold in &mut assignment {
        fold.sort_unstable();
    }
    assignment
}

/// Outcome of a stratified k-fold evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CvOutcome {
    pub mean_accuracy: f64,
    /// Folds skipped because their training part was single-class.
    pub skipped_folds: usize,
}

/// Stratified k-fold accuracy for a precomputed kernel at fixed C.
pub fn cross_validate(
    k: &GramMatrix,
    y: &[i8],
    c: f64,
    folds: usize,
    seed: u64,
) -> Result<CvOutcome> {
    if folds < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 folds, got {folds}"
        )));
    }
    if !k.is_square() || k.rows() != y.len() {
        return Err(Error::Shape("kernel/label size mismatch".into()));
    }
    check_labels(y)?;
    let assignment = stratified_folds(y, folds, seed);
    let mut accs = Vec::new();
    let mut skipped = 0usize;
    for held_out in &assignment {
        if held_out.is_empty() {
            skipped += 1;
            continue;
        }
        let train: Vec<usize> = (0..y.len()).filter(|i| !held_out.contains(i)).collect();
        let y_train: Vec<i8> = train.iter().map(|&i| y[i]).collect();
        let pos = y_train.iter().filter(|&&v| v == 1).count();
        if pos == 0 || pos == y_train.len() {
            skipped += 1;
            continue;
        }
        let k_train = k.select(&train, &train);
        let model = train_precomputed(&k_train, &y_train, c)?;
        let k_fold = k.select(held_out, &train);
        let pred = predict(&model, &k_fold)?;
        let hits = held_out
            .iter()
            .zip(pred.iter())
            .filter(|(&i, &p)| y[i] == p)
            .count();
        accs.push(hits as f64 / held_out.len() as f64);
    }
    if accs.is_empty() {
        return Err(Error::DegenerateInput("every fold was single-class".into()));
    }
    Ok(CvOutcome {
        mean_accuracy: accs.iter().sum::<f64>() / accs.len() as f64,
        skipped_folds: skipped,
    })
}

/// Result of a hyperparameter search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_c: f64,
    pub best_gamma: Option<f64>,
    pub cv_accuracy: f64,
}

/// Grid-search C (and gamma for RBF) by stratified 5-fold CV on the training
/// set, then refit on the full training set.
///
/// Ties break toward smaller C, then smaller gamma.
pub fn grid_search(
    x_train: &[Vec<f64>],
    y_train: &[i8],
    rbf: bool,
    c_grid: &[f64],
    gamma_grid: &[f64],
    folds: usize,
    seed: u64,
) -> Result<(GridSearchResult, SvmModel, GramMatrix)> {
    if c_grid.is_empty() || (rbf && gamma_grid.is_empty()) {
        return Err(Error::InvalidParameter("empty hyperparameter grid".into()));
    }
    let gammas: Vec<Option<f64>> = if rbf {
        gamma_grid.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    // One kernel per gamma, reused across the C loop.
    let kernels: Vec<GramMatrix> = gammas
        .iter()
        .map(|gamma| {
            let kind = match gamma {
                Some(g) => ClassicalKernel::Rbf { gamma: *g },
                None => ClassicalKernel::Linear,
            };
            classical_kernel(x_train, x_train, kind)
        })
        .collect::<Result<_>>()?;
    // Ties break toward smaller C first, then smaller gamma: iterate C in
    // the outer loop and only accept strict improvements.
    let mut best: Option<(f64, f64, usize)> = None; // (acc, c, gamma index)
    for &c in c_grid {
        for (gi, k) in kernels.iter().enumerate() {
            let acc = cross_validate(k, y_train, c, folds, seed)?.mean_accuracy;
            let better = match &best {
                None => true,
                Some((best_acc, _, _)) => acc > best_acc + 1e-12,
            };
            if better {
                best = Some((acc, c, gi));
            }
        }
    }
    let (acc, c, gi) = best.expect("non-empty grid");
    let gamma = gammas[gi];
    let k = kernels.into_iter().nth(gi).expect("kernel for best point");
    let model = train_precomputed(&k, y_train, c)?;
    Ok((
        GridSearchResult {
            best_c: c,
            best_gamma: gamma,
            cv_accuracy: acc,
        },
        model,
        k,
    ))
}

/// Grid-search C for an already-computed (e.g. quantum) kernel, then refit.
pub fn grid_search_precomputed(
    k: &GramMatrix,
    y: &[i8],
    c_grid: &[f64],
    folds: usize,
    seed: u64,
) -> Result<(GridSearchResult, SvmModel)> {
    if c_grid.is_empty() {
        return Err(Error::InvalidParameter("empty C grid".into()));
    }
    let mut best: Option<(f64, f64)> = None;
    for &c in c_grid {
        let acc = cross_validate(k, y, c, folds, seed)?.mean_accuracy;
        let better = match &best {
            None => true,
            Some((best_acc, _)) => acc > best_acc + 1e-12,
        };
        if better {
            best = Some((acc, c));
        }
    }
    let (acc, c) = best.expect("non-empty grid");
    let model = train_precomputed(k, y, c)?;
    Ok((
        GridSearchResult {
            best_c: c,
            best_gamma: None,
            cv_accuracy: acc,
        },
        model,
    ))
}
