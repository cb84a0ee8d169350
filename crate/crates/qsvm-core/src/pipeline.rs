//! End-to-end benchmark pipelines: data preparation, classical and
//! hand-crafted quantum baselines, genome evaluation, and search runs.
//!
//! Preparation selects the ten highest-variance features (columns ordered
//! by descending variance), splits 80/20 stratified at the run seed, and
//! fits two scalings on the training set: z-scores feed the angle-encoding
//! maps, while the classical baselines and the amplitude-encoding map
//! consume the min-max scaled copy (zero-centered inputs put those
//! kernels in a degenerate regime).

use serde::{Deserialize, Serialize};

use crate::data::{
    minmax_scale, nas_subsample, select_top_variance, standardize, stratified_split, Dataset,
    SplitManifest, SplitSpec,
};
use crate::error::{Error, Result};
use crate::featuremap::{FeatureMap, Genome};
use crate::hardware::{
    gate_counts, native_fraction_genome, transpile_estimate, CouplingMap, TranspileOutcome,
};
use crate::nas::{
    evaluate_genome_on_split, evolve, GenomeEvaluation, NasConfig, NasData, SearchTrace,
};
use crate::qkernel::{gram_matrix, GramMatrix};
use crate::simcore::NoiseModel;
use crate::svm::{
    grid_search, grid_search_precomputed, predict, GridSearchResult, Metrics, SvmModel,
    STANDARD_C_GRID, STANDARD_GAMMA_GRID,
};

/// Everything downstream commands need from one seeded preparation pass.
pub struct Prepared {
    /// Z-scored top-k features, train/test.
    pub z_train: Dataset,
    pub z_test: Dataset,
    /// Min-max scaled top-k features, train/test.
    pub mm_train: Dataset,
    pub mm_test: Dataset,
    pub manifest: SplitManifest,
    pub selected_features: Vec<usize>,
    pub spec: SplitSpec,
}

/// Prepare the bundled dataset at a seed.
pub fn prepare(seed: u64) -> Result<Prepared> {
    prepare_dataset(&Dataset::bundled(), seed, 10)
}

pub fn prepare_dataset(data: &Dataset, seed: u64, top_k: usize) -> Result<Prepared> {
    let spec = SplitSpec {
        seed,
        top_k_features: top_k,
        ..SplitSpec::default()
    };
    let (selected, indices) = select_top_variance(data, top_k)?;
    let (train_raw, test_raw, manifest) = stratified_split(&selected, &spec)?;
    let (z_train, z_test, _) = standardize(&train_raw, &test_raw)?;
    let (mm_train, mm_test, _) = minmax_scale(&train_raw, &test_raw)?;
    Ok(Prepared {
        z_train,
        z_test,
        mm_train,
        mm_test,
        manifest,
        selected_features: indices,
        spec,
    })
}

/// A fitted-and-scored model, classical or quantum.
#[derive(Debug, Clone, Serialize)]
pub struct BenchOutcome {
    pub name: String,
    pub metrics: Metrics,
    pub grid: GridSearchResult,
    /// The refit model, serializable for re-evaluation.
    #[serde(skip)]
    pub model: SvmModel,
}

/// Linear and RBF SVM baselines with grid search on the min-max features.
pub fn baseline_classical(p: &Prepared) -> Result<(BenchOutcome, BenchOutcome)> {
    let (lin_grid, lin_model, _) = grid_search(
        &p.mm_train.features,
        &p.mm_train.labels,
        false,
        &STANDARD_C_GRID,
        &[],
        5,
        p.spec.seed,
    )?;
    let k_test = crate::svm::classical_kernel(
        &p.mm_test.features,
        &p.mm_train.features,
        crate::svm::ClassicalKernel::Linear,
    )?;
    let lin_pred = predict(&lin_model, &k_test)?;
    let linear = BenchOutcome {
        name: "linear".into(),
        metrics: Metrics::from_predictions(&p.mm_test.labels, &lin_pred),
        grid: lin_grid,
        model: lin_model,
    };

    let (rbf_grid, rbf_model, _) = grid_search(
        &p.mm_train.features,
        &p.mm_train.labels,
        true,
        &STANDARD_C_GRID,
        &STANDARD_GAMMA_GRID,
        5,
        p.spec.seed,
    )?;
    let gamma = rbf_grid.best_gamma.expect("rbf search yields gamma");
    let k_test = crate::svm::classical_kernel(
        &p.mm_test.features,
        &p.mm_train.features,
        crate::svm::ClassicalKernel::Rbf { gamma },
    )?;
    let rbf_pred = predict(&rbf_model, &k_test)?;
    let rbf = BenchOutcome {
        name: "rbf".into(),
        metrics: Metrics::from_predictions(&p.mm_test.labels, &rbf_pred),
        grid: rbf_grid,
        model: rbf_model,
    };
    Ok((linear, rbf))
}

/// Hand-crafted feature maps from the benchmark suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HandcraftedMap {
    Z,
    Zz,
    Pauli,
    Raw,
    Efficient,
}

impl HandcraftedMap {
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "z" => HandcraftedMap::Z,
            "zz" => HandcraftedMap::Zz,
            "pauli" => HandcraftedMap::Pauli,
            "raw" => HandcraftedMap::Raw,
            "efficient" => HandcraftedMap::Efficient,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            HandcraftedMap::Z => "z",
            HandcraftedMap::Zz => "zz",
            HandcraftedMap::Pauli => "pauli",
            HandcraftedMap::Raw => "raw",
            HandcraftedMap::Efficient => "efficient",
        }
    }

    pub fn all() -> [HandcraftedMap; 5] {
        [
            HandcraftedMap::Z,
            HandcraftedMap::Zz,
            HandcraftedMap::Pauli,
            HandcraftedMap::Raw,
            HandcraftedMap::Efficient,
        ]
    }

    /// Register size: phase/rotation maps read one feature per qubit
    /// (Z and the rotation-entangler map on the strongest six features,
    /// the ZZ family on all ten), amplitude encoding packs all ten
    /// features into four qubits.
    pub fn n_qubits(&self) -> usize {
        match self {
            HandcraftedMap::Z | HandcraftedMap::Efficient => 6,
            HandcraftedMap::Zz | HandcraftedMap::Pauli => 10,
            HandcraftedMap::Raw => 4,
        }
    }

    pub fn reps(&self) -> usize {
        2
    }
}

/// QSVM with a hand-crafted map: quantum Gram matrix, C chosen on the
/// standard grid by 5-fold CV, refit, test metrics.
pub fn baseline_quantum(p: &Prepared, which: HandcraftedMap) -> Result<BenchOutcome> {
    let (map, train, test): (FeatureMap, &Dataset, &Dataset) = match which {
        HandcraftedMap::Z => (
            FeatureMap::Z {
                n_qubits: 6,
                reps: which.reps(),
            },
            &p.z_train,
            &p.z_test,
        ),
        HandcraftedMap::Zz => (
            FeatureMap::Zz {
                n_qubits: 10,
                reps: which.reps(),
            },
            &p.z_train,
            &p.z_test,
        ),
        HandcraftedMap::Pauli => (
            FeatureMap::Pauli {
                n_qubits: 10,
                reps: which.reps(),
            },
            &p.z_train,
            &p.z_test,
        ),
        HandcraftedMap::Efficient => (
            FeatureMap::EfficientLike {
                n_qubits: 6,
                reps: which.reps(),
            },
            &p.z_train,
            &p.z_test,
        ),
        HandcraftedMap::Raw => (
            FeatureMap::RawVector {
                n_features: p.mm_train.n_features(),
            },
            &p.mm_train,
            &p.mm_test,
        ),
    };
    let n_features = map_feature_count(&map);
    let train = slice_features(train, n_features);
    let test = slice_features(test, n_features);
    let k_train = gram_matrix(&map, &train.features, None, None)?;
    let (grid, model) =
        grid_search_precomputed(&k_train, &train.labels, &STANDARD_C_GRID, 5, p.spec.seed)?;
    let k_test = gram_matrix(&map, &test.features, Some(&train.features), None)?;
    let pred = predict(&model, &k_test)?;
    Ok(BenchOutcome {
        name: which.name().into(),
        metrics: Metrics::from_predictions(&test.labels, &pred),
        grid,
        model,
    })
}

fn map_feature_count(map: &FeatureMap) -> usize {
    match map {
        FeatureMap::RawVector { n_features } => *n_features,
        FeatureMap::Genome { .. } => usize::MAX, // full selected vector
        FeatureMap::Z { n_qubits, .. }
        | FeatureMap::Zz { n_qubits, .. }
        | FeatureMap::Pauli { n_qubits, .. }
        | FeatureMap::EfficientLike { n_qubits, .. } => *n_qubits,
    }
}

fn slice_features(data: &Dataset, k: usize) -> Dataset {
    if k >= data.n_features() {
        data.clone()
    } else {
        data.select_features(&(0..k).collect::<Vec<_>>())
    }
}

/// Full evaluation record for one genome on the prepared split.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenomeReport {
    pub evaluation: GenomeEvaluation,
    pub native_fraction: f64,
    pub transpiled: TranspileOutcome,
    pub gate_counts: std::collections::BTreeMap<String, usize>,
    pub n_qubits: usize,
    pub fixed_rz: bool,
}

/// Probe input for transpile estimates: generic angles, no accidental
/// zero-rotation cancellations.
pub fn probe_vector(d: usize) -> Vec<f64> {
    (0..d).map(|i| 0.7 + 0.13 * i as f64).collect()
}

/// Train/evaluate a genome QSVM and report hardware statistics.
pub fn eval_genome_pipeline(
    p: &Prepared,
    genome: &Genome,
    fixed_rz: bool,
    n_qubits: usize,
    noise: Option<&NoiseModel>,
    map: &CouplingMap,
) -> Result<GenomeReport> {
    if genome.min_register() > n_qubits {
        return Err(Error::Topology(format!(
            "genome touches qubit {} but the register has {n_qubits}",
            genome.min_register() - 1
        )));
    }
    let evaluation = evaluate_genome_on_split(
        genome,
        fixed_rz,
        n_qubits,
        noise,
        &p.z_train,
        &p.z_test,
        p.spec.seed,
    )?;
    let bound = crate::featuremap::bind_genome(
        genome,
        &probe_vector(p.z_train.n_features()),
        fixed_rz,
        n_qubits,
    )?;
    let transpiled = transpile_estimate(&bound, map)?;
    Ok(GenomeReport {
        evaluation,
        native_fraction: native_fraction_genome(genome)?,
        gate_counts: gate_counts(&bound),
        transpiled,
        n_qubits,
        fixed_rz,
    })
}

/// Run a search preset end to end on the bundled data.
pub fn nas_pipeline(config: &NasConfig) -> Result<SearchTrace> {
    let p = prepare(config.seed)?;
    let spec = SplitSpec {
        seed: config.seed,
        nas_subsample: config.subsample,
        ..SplitSpec::default()
    };
    let (subsample, _) = nas_subsample(&p.z_train, &spec)?;
    let data = NasData {
        subsample,
        train: p.z_train,
        test: p.z_test,
    };
    evolve(config, &data)
}

/// Kernel dump support: the named map over the prepared training set.
pub fn kernel_for_dump(
    p: &Prepared,
    which: HandcraftedMap,
    noise: Option<&NoiseModel>,
) -> Result<GramMatrix> {
    let (map, data): (FeatureMap, &Dataset) = match which {
        HandcraftedMap::Raw => (
            FeatureMap::RawVector {
                n_features: p.mm_train.n_features(),
            },
            &p.mm_train,
        ),
        HandcraftedMap::Z => (
            FeatureMap::Z {
                n_qubits: 6,
                reps: 2,
            },
            &p.z_train,
        ),
        HandcraftedMap::Zz => (
            FeatureMap::Zz {
                n_qubits: 10,
                reps: 2,
            },
            &p.z_train,
        ),
        HandcraftedMap::Pauli => (
            FeatureMap::Pauli {
                n_qubits: 10,
                reps: 2,
            },
            &p.z_train,
        ),
        HandcraftedMap::Efficient => (
            FeatureMap::EfficientLike {
                n_qubits: 6,
                reps: 2,
            },
            &p.z_train,
        ),
    };
    let data = slice_features(data, map_feature_count(&map));
    let mut k = gram_matrix(&map, &data.features, None, noise)?;
    k.set_ids(data.ids.clone(), data.ids.clone());
    Ok(k)
}
