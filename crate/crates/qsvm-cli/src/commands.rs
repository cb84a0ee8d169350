//! Command implementations. Every command resolves its configuration,
//! runs the corresponding pipeline from `qsvm_core`, and writes a
//! deterministic report plus CSV mirrors into the output directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use qsvm_core::data::{load_wdbc, nas_subsample, Dataset, SplitSpec};
use qsvm_core::featuremap::Genome;
use qsvm_core::fixtures;
use qsvm_core::hardware::{CouplingMap, GateVocabulary};
use qsvm_core::nas::NasConfig;
use qsvm_core::pipeline::{
    self, eval_genome_pipeline, kernel_for_dump, prepare_dataset, probe_vector, HandcraftedMap,
    Prepared,
};
use qsvm_core::qkernel::gram_matrix;
use qsvm_core::simcore::NoiseModel;
use qsvm_core::{Error, FeatureMap, Result};

use crate::report::{canonical_json, metrics_csv_row, write_report, RunReport, METRICS_CSV_HEADER};

pub struct Context {
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub data: Option<PathBuf>,
    pub config: Option<PathBuf>,
}

impl Context {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or_else(|| SplitSpec::default().seed)
    }

    fn dataset(&self) -> Result<(Dataset, String)> {
        match &self.data {
            Some(path) => Ok((load_wdbc(path)?, path.display().to_string())),
            None => Ok((Dataset::bundled(), "bundled".into())),
        }
    }

    fn prepared(&self) -> Result<(Prepared, Value)> {
        let seed = self.seed();
        let (dataset, source) = self.dataset()?;
        let prepared = prepare_dataset(&dataset, seed, 10)?;
        let config = json!({
            "seed": seed,
            "data": source,
            "selected_features": prepared.selected_features,
            "train_size": prepared.manifest.train_indices.len(),
            "test_size": prepared.manifest.test_indices.len(),
        });
        Ok((prepared, config))
    }

    fn command_dir(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

fn write_split_manifest(dir: &Path, p: &Prepared) -> Result<String> {
    fs::create_dir_all(dir)?;
    let path = dir.join("split_manifest.json");
    fs::write(&path, canonical_json(&p.manifest))?;
    Ok("split_manifest.json".into())
}

pub fn baseline_classical(ctx: &Context) -> Result<PathBuf> {
    let started = Instant::now();
    let (p, config) = ctx.prepared()?;
    let dir = ctx.command_dir("baseline-classical");
    fs::create_dir_all(&dir)?;
    let (linear, rbf) = pipeline::baseline_classical(&p)?;

    let mut csv = String::from(METRICS_CSV_HEADER);
    csv.push_str(&metrics_csv_row("linear", &linear.metrics));
    csv.push_str(&metrics_csv_row("rbf", &rbf.metrics));
    fs::write(dir.join("table1.csv"), &csv)?;
    fs::write(dir.join("linear_model.json"), linear.model.to_json())?;
    fs::write(dir.join("rbf_model.json"), rbf.model.to_json())?;
    let manifest = write_split_manifest(&dir, &p)?;

    let report = RunReport {
        command: "baseline-classical".into(),
        config,
        results: json!({ "linear": linear, "rbf": rbf }),
        artifacts: vec![
            "table1.csv".into(),
            "linear_model.json".into(),
            "rbf_model.json".into(),
            manifest,
        ],
    };
    Ok(write_report(&dir, &report, started)?)
}

pub fn baseline_quantum(ctx: &Context, map_name: &str) -> Result<PathBuf> {
    let started = Instant::now();
    let which = HandcraftedMap::from_name(map_name).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "unknown feature map {map_name:?}; expected z, zz, pauli, raw, or efficient"
        ))
    })?;
    let (p, config) = ctx.prepared()?;
    let dir = ctx.command_dir(&format!("baseline-quantum-{map_name}"));
    fs::create_dir_all(&dir)?;
    let outcome = pipeline::baseline_quantum(&p, which)?;

    let mut csv = String::from(METRICS_CSV_HEADER);
    csv.push_str(&metrics_csv_row(which.name(), &outcome.metrics));
    fs::write(dir.join("table2.csv"), &csv)?;
    fs::write(dir.join("model.json"), outcome.model.to_json())?;
    let manifest = write_split_manifest(&dir, &p)?;

    let report = RunReport {
        command: format!("baseline-quantum --map {map_name}"),
        config,
        results: json!({
            "map": which.name(),
            "n_qubits": which.n_qubits(),
            "reps": which.reps(),
            "outcome": outcome,
        }),
        artifacts: vec!["table2.csv".into(), "model.json".into(), manifest],
    };
    Ok(write_report(&dir, &report, started)?)
}

pub fn nas_run(ctx: &Context, variant: &str) -> Result<PathBuf> {
    let started = Instant::now();
    let mut config = NasConfig::preset(variant).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "unknown variant {variant:?}; expected hw-fixed-rz, hw-free, all-gates, noisy, or sparse"
        ))
    })?;
    if let Some(path) = &ctx.config {
        // Partial overrides: file keys replace preset values.
        let mut base = serde_json::to_value(&config)?;
        let file: Value = serde_json::from_str(&fs::read_to_string(path)?)?;
        if let (Some(base_map), Some(file_map)) = (base.as_object_mut(), file.as_object()) {
            for (k, v) in file_map {
                base_map.insert(k.clone(), v.clone());
            }
        }
        config = serde_json::from_value(base)?;
    }
    if let Some(seed) = ctx.seed {
        config.seed = seed;
    }
    config.validate()?;

    let dir = ctx.command_dir(&format!("nas-{variant}-seed{}", config.seed));
    fs::create_dir_all(&dir)?;

    let (dataset, source) = ctx.dataset()?;
    let p = prepare_dataset(&dataset, config.seed, 10)?;
    let spec = SplitSpec {
        seed: config.seed,
        nas_subsample: config.subsample,
        ..SplitSpec::default()
    };
    let (subsample, subsample_indices) = nas_subsample(&p.z_train, &spec)?;
    let data = qsvm_core::nas::NasData {
        subsample,
        train: p.z_train.clone(),
        test: p.z_test.clone(),
    };
    let trace = qsvm_core::nas::evolve(&config, &data)?;

    fs::write(dir.join("trace.jsonl"), trace.evaluations_jsonl())?;
    let summary = json!({
        "config": config,
        "generations": trace.generations,
        "best_fitness": trace.best_fitness,
        "best_cv_accuracy": trace.best_cv_accuracy,
        "test_metrics": trace.test_metrics,
        "test_c": trace.test_c,
    });
    fs::write(dir.join("summary.json"), canonical_json(&summary))?;
    fs::write(dir.join("best.genome"), &trace.best_genome)?;
    let mut artifacts = vec![
        "trace.jsonl".into(),
        "summary.json".into(),
        "best.genome".into(),
    ];
    if let Some(metrics) = &trace.test_metrics {
        let mut csv = String::from(METRICS_CSV_HEADER);
        csv.push_str(&metrics_csv_row(variant, metrics));
        fs::write(dir.join("table3.csv"), &csv)?;
        artifacts.push("table3.csv".into());
    }
    artifacts.push(write_split_manifest(&dir, &p)?);

    let report = RunReport {
        command: format!("nas run --variant {variant}"),
        config: json!({
            "nas": config,
            "data": source,
            "subsample_indices": subsample_indices,
            "selected_features": p.selected_features,
        }),
        results: json!({
            "best_fitness": trace.best_fitness,
            "best_cv_accuracy": trace.best_cv_accuracy,
            "best_genome": trace.best_genome,
            "generations": trace.generations,
            "test_metrics": trace.test_metrics,
            "test_c": trace.test_c,
        }),
        artifacts,
    };
    Ok(write_report(&dir, &report, started)?)
}

/// Resolve a coupling map argument: a bundled name or an edge-list file.
fn resolve_coupling(arg: Option<&str>, n_qubits: usize) -> Result<CouplingMap> {
    match arg {
        Some(name) => match CouplingMap::named(name) {
            Some(map) => Ok(map),
            None => CouplingMap::parse(&fs::read_to_string(name)?),
        },
        None => {
            for name in fixtures::bundled_map_names() {
                let map = CouplingMap::named(name).expect("bundled");
                if map.n_qubits() >= n_qubits {
                    return Ok(map);
                }
            }
            Err(Error::Topology(format!(
                "no bundled coupling map covers {n_qubits} qubits; pass --coupling"
            )))
        }
    }
}

pub fn eval_genome(
    ctx: &Context,
    file: &Path,
    fixed_rz: bool,
    qubits: Option<usize>,
    noisy: bool,
    coupling: Option<&str>,
) -> Result<PathBuf> {
    let started = Instant::now();
    let genome = Genome::parse(&fs::read_to_string(file)?)?;
    if genome.is_empty() {
        return Err(Error::DegenerateInput("genome file holds no tokens".into()));
    }
    let n_qubits = qubits.unwrap_or_else(|| genome.min_register().max(1));
    let map = resolve_coupling(coupling, n_qubits)?;
    let violations = qsvm_core::hardware::validate_genome(&genome, GateVocabulary::Extended, &map);
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::Topology(lines.join("; ")));
    }
    let noise = noisy.then(NoiseModel::standard);

    let (p, mut config) = ctx.prepared()?;
    config["genome_file"] = json!(file.display().to_string());
    config["fixed_rz"] = json!(fixed_rz);
    config["n_qubits"] = json!(n_qubits);
    config["noise"] = json!(noise);

    let stem = file
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "genome".into());
    let dir = ctx.command_dir(&format!("eval-{stem}"));
    fs::create_dir_all(&dir)?;

    let outcome = eval_genome_pipeline(&p, &genome, fixed_rz, n_qubits, noise.as_ref(), &map)?;
    fs::write(dir.join("model.json"), outcome.evaluation.model.to_json())?;
    let manifest = write_split_manifest(&dir, &p)?;

    let report = RunReport {
        command: format!("eval-genome --file {}", file.display()),
        config,
        results: serde_json::to_value(&outcome)?,
        artifacts: vec!["model.json".into(), manifest],
    };
    Ok(write_report(&dir, &report, started)?)
}

struct HardwareRow {
    name: String,
    n_qubits: usize,
    row: Value,
    csv: String,
}

fn hardware_row_for_circuit(
    name: &str,
    gates: &[qsvm_core::BoundGate],
    map: &CouplingMap,
    n_qubits: usize,
) -> Result<HardwareRow> {
    let out = qsvm_core::hardware::transpile_estimate(gates, map)?;
    let csv = format!(
        "{name},{},{:.4},{},{},{}\n",
        out.input_total,
        out.native_fraction_before,
        out.output_total,
        out.depth_before,
        out.depth_after
    );
    Ok(HardwareRow {
        name: name.into(),
        n_qubits,
        row: serde_json::to_value(&out)?,
        csv,
    })
}

pub fn report_hardware(ctx: &Context, files: &[PathBuf], maps: &[String]) -> Result<PathBuf> {
    let started = Instant::now();
    let dir = ctx.command_dir("report-hardware");
    fs::create_dir_all(&dir)?;

    let mut rows: Vec<HardwareRow> = Vec::new();
    let defaults = files.is_empty() && maps.is_empty();

    let genome_inputs: Vec<(String, Genome, bool, usize)> = if defaults {
        vec![
            (
                "hw-fixed-rz".into(),
                fixtures::hw_fixed_rz_genome(),
                true,
                6,
            ),
            ("hw-free".into(), fixtures::hw_free_genome(), false, 10),
            ("all-gates".into(), fixtures::all_gates_genome(), false, 10),
        ]
    } else {
        files
            .iter()
            .map(|f| {
                let genome = Genome::parse(&fs::read_to_string(f)?)?;
                let n = genome.min_register().max(1);
                Ok((
                    f.file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| "genome".into()),
                    genome,
                    false,
                    n,
                ))
            })
            .collect::<Result<_>>()?
    };
    for (name, genome, fixed_rz, n_qubits) in &genome_inputs {
        let map = resolve_coupling(None, *n_qubits)?;
        let bound =
            qsvm_core::featuremap::bind_genome(genome, &probe_vector(10), *fixed_rz, *n_qubits)?;
        rows.push(hardware_row_for_circuit(name, &bound, &map, *n_qubits)?);
    }

    let map_names: Vec<String> = if defaults {
        HandcraftedMap::all()
            .iter()
            .map(|m| m.name().to_string())
            .collect()
    } else {
        maps.to_vec()
    };
    for name in &map_names {
        let which = HandcraftedMap::from_name(name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown feature map {name:?}")))?;
        if which == HandcraftedMap::Raw {
            // Amplitude encoding has no gate circuit to transpile.
            rows.push(HardwareRow {
                name: name.clone(),
                n_qubits: which.n_qubits(),
                row: json!({ "note": "amplitude encoding, no circuit" }),
                csv: format!("{name},,,,,\n"),
            });
            continue;
        }
        let n = which.n_qubits();
        let feature_map = match which {
            HandcraftedMap::Z => FeatureMap::Z {
                n_qubits: n,
                reps: 2,
            },
            HandcraftedMap::Zz => FeatureMap::Zz {
                n_qubits: n,
                reps: 2,
            },
            HandcraftedMap::Pauli => FeatureMap::Pauli {
                n_qubits: n,
                reps: 2,
            },
            HandcraftedMap::Efficient => FeatureMap::EfficientLike {
                n_qubits: n,
                reps: 2,
            },
            HandcraftedMap::Raw => unreachable!(),
        };
        let probe = probe_vector(n);
        let bound = match feature_map.bind(&probe)? {
            qsvm_core::featuremap::BoundFeatureMap::Circuit { gates, .. } => gates,
            qsvm_core::featuremap::BoundFeatureMap::Amplitudes(_) => unreachable!(),
        };
        let map = resolve_coupling(None, n)?;
        rows.push(hardware_row_for_circuit(name, &bound, &map, n)?);
    }

    let mut csv =
        String::from("name,gates,native_fraction,transpiled_gates,depth_before,depth_after\n");
    let mut results = Vec::new();
    for r in &rows {
        csv.push_str(&r.csv);
        results.push(json!({ "name": r.name, "n_qubits": r.n_qubits, "transpile": r.row }));
    }
    fs::write(dir.join("hardware.csv"), &csv)?;

    let report = RunReport {
        command: "report-hardware".into(),
        config: json!({
            "genomes": genome_inputs.iter().map(|(n, ..)| n.clone()).collect::<Vec<_>>(),
            "maps": map_names,
            "probe": probe_vector(10),
        }),
        results: Value::Array(results),
        artifacts: vec!["hardware.csv".into()],
    };
    Ok(write_report(&dir, &report, started)?)
}

#[allow(clippy::too_many_arguments)]
pub fn kernel_dump(
    ctx: &Context,
    map_spec: &str,
    out: &Path,
    subsample: usize,
    noisy: bool,
    fixed_rz: bool,
    qubits: Option<usize>,
) -> Result<PathBuf> {
    let started = Instant::now();
    let (p, mut config) = ctx.prepared()?;
    let noise = noisy.then(NoiseModel::standard);
    let dir = ctx.command_dir("kernel-dump");
    fs::create_dir_all(&dir)?;

    let gram = if let Some(path) = map_spec.strip_prefix("genome:") {
        let genome = Genome::parse(&fs::read_to_string(path)?)?;
        let n_qubits = qubits.unwrap_or_else(|| genome.min_register().max(1));
        let feature_map = FeatureMap::Genome {
            genome,
            fixed_rz,
            n_qubits,
        };
        let data = if subsample > 0 {
            let spec = SplitSpec {
                seed: ctx.seed(),
                nas_subsample: subsample,
                ..SplitSpec::default()
            };
            nas_subsample(&p.z_train, &spec)?.0
        } else {
            p.z_train.clone()
        };
        let mut k = gram_matrix(&feature_map, &data.features, None, noise.as_ref())?;
        k.set_ids(data.ids.clone(), data.ids.clone());
        k
    } else {
        let which = HandcraftedMap::from_name(map_spec).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown map spec {map_spec:?}; expected a map name or genome:<path>"
            ))
        })?;
        if subsample > 0 {
            let spec = SplitSpec {
                seed: ctx.seed(),
                nas_subsample: subsample,
                ..SplitSpec::default()
            };
            // Subsample once, then reuse the same rows for either scaling.
            let (_, indices) = nas_subsample(&p.z_train, &spec)?;
            let reduced = Prepared {
                z_train: p.z_train.select(&indices),
                z_test: p.z_test.clone(),
                mm_train: p.mm_train.select(&indices),
                mm_test: p.mm_test.clone(),
                manifest: p.manifest.clone(),
                selected_features: p.selected_features.clone(),
                spec: p.spec.clone(),
            };
            kernel_for_dump(&reduced, which, noise.as_ref())?
        } else {
            kernel_for_dump(&p, which, noise.as_ref())?
        }
    };
    let csv = gram.to_csv();
    fs::write(out, &csv)?;
    // Round-trip guard on what was just written.
    let back = qsvm_core::GramMatrix::from_csv(&csv)?;
    if back != gram {
        return Err(Error::Shape("kernel CSV did not round-trip".into()));
    }

    config["map"] = json!(map_spec);
    config["noise"] = json!(noise);
    config["subsample"] = json!(subsample);
    let report = RunReport {
        command: format!("kernel-dump --map {map_spec}"),
        config,
        results: json!({
            "rows": gram.rows(),
            "cols": gram.cols(),
            "out": out.display().to_string(),
        }),
        artifacts: vec![out.display().to_string()],
    };
    Ok(write_report(&dir, &report, started)?)
}
