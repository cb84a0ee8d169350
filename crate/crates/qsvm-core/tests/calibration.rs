//! Scratch harness for the remaining empirical unknowns.
//! Run with: cargo test -p qsvm-core --release --test calibration -- --ignored --nocapture

use qsvm_core::data::{nas_subsample, SplitSpec};
use qsvm_core::featuremap::bind_genome;
use qsvm_core::fixtures;
use qsvm_core::hardware::{transpile_estimate, CouplingMap};
use qsvm_core::nas::NasConfig;
use qsvm_core::pipeline::{nas_pipeline, prepare, probe_vector};
use qsvm_core::qkernel::gram_matrix;
use qsvm_core::simcore::NoiseModel;
use qsvm_core::svm::cross_validate;
use qsvm_core::FeatureMap;

#[test]
#[ignore]
fn all_gates_transpile_count() {
    let genome = fixtures::all_gates_genome();
    let bound = bind_genome(&genome, &probe_vector(10), false, 10).unwrap();
    let out = transpile_estimate(&bound, &CouplingMap::chain(10)).unwrap();
    println!(
        "all-gates: input {} -> output {} (depth {} -> {}), counts {:?}",
        out.input_total, out.output_total, out.depth_before, out.depth_after, out.output_counts
    );
}

#[test]
#[ignore]
fn noisy_degradation_probe() {
    let p = prepare(9).unwrap();
    let spec = SplitSpec {
        seed: 9,
        nas_subsample: 120,
        ..SplitSpec::default()
    };
    let (sub, _) = nas_subsample(&p.z_train, &spec).unwrap();
    let map = FeatureMap::Genome {
        genome: fixtures::hw_fixed_rz_genome(),
        fixed_rz: true,
        n_qubits: 6,
    };
    let t0 = std::time::Instant::now();
    let clean = gram_matrix(&map, &sub.features, None, None).unwrap();
    let noisy = gram_matrix(&map, &sub.features, None, Some(&NoiseModel::standard())).unwrap();
    let elapsed = t0.elapsed();
    let acc_clean = cross_validate(&clean, &sub.labels, 1.0, 3, 9)
        .unwrap()
        .mean_accuracy;
    let acc_noisy = cross_validate(&noisy, &sub.labels, 1.0, 3, 9)
        .unwrap()
        .mean_accuracy;
    let max_diag = (0..noisy.rows())
        .map(|i| noisy.get(i, i))
        .fold(f64::NEG_INFINITY, f64::max);
    println!(
        "noisy probe ({elapsed:?}): clean acc {acc_clean:.4}, noisy acc {acc_noisy:.4}, max noisy diag {max_diag:.6}, min eig {:.2e}",
        noisy.min_eigenvalue()
    );
}

/// The depolarizing channel here distributes p uniformly over the 4^k - 1
/// non-identity Paulis. The other common convention (complete depolarization
/// toward I/2^k with probability p) equals the uniform form at
/// p' = p * (4^k - 1) / 4^k, so rescaling the probabilities measures how
/// sensitive noisy accuracy is to the choice.
#[test]
#[ignore]
fn depolarizing_convention_sensitivity() {
    let p = prepare(9).unwrap();
    let spec = SplitSpec {
        seed: 9,
        nas_subsample: 120,
        ..SplitSpec::default()
    };
    let (sub, _) = nas_subsample(&p.z_train, &spec).unwrap();
    let map = FeatureMap::Genome {
        genome: fixtures::hw_fixed_rz_genome(),
        fixed_rz: true,
        n_qubits: 6,
    };
    for (name, model) in [
        ("uniform-pauli", NoiseModel::new(0.01, 0.02, 0.005).unwrap()),
        (
            "complete-depolarizing",
            NoiseModel::new(0.01 * 3.0 / 4.0, 0.02 * 15.0 / 16.0, 0.005).unwrap(),
        ),
    ] {
        let gram = gram_matrix(&map, &sub.features, None, Some(&model)).unwrap();
        let acc = cross_validate(&gram, &sub.labels, 1.0, 3, 9)
            .unwrap()
            .mean_accuracy;
        let mean_diag: f64 =
            (0..gram.rows()).map(|i| gram.get(i, i)).sum::<f64>() / gram.rows() as f64;
        println!("{name}: cv accuracy {acc:.4}, mean diagonal {mean_diag:.4}");
    }
}

#[test]
#[ignore]
fn hw_free_ga_sweep() {
    for seed in 0..5u64 {
        let config = NasConfig {
            seed,
            ..NasConfig::preset("hw-free").unwrap()
        };
        let t0 = std::time::Instant::now();
        let trace = nas_pipeline(&config).unwrap();
        println!(
            "ga seed {seed}: best fitness {:.4}, test acc {:?}, wall {:?}",
            trace.best_fitness,
            trace.test_metrics.map(|m| m.accuracy),
            t0.elapsed()
        );
    }
}
