//! Shared inputs for the criterion benchmarks.

use qsvm_core::data::{nas_subsample, SplitSpec};
use qsvm_core::pipeline::prepare;
use qsvm_core::Result;

/// A seeded, scaled, stratified subsample of the training set.
pub fn bench_subsample(size: usize) -> Result<qsvm_core::data::Dataset> {
    let p = prepare(9)?;
    let spec = SplitSpec {
        seed: 9,
        nas_subsample: size,
        ..SplitSpec::default()
    };
    Ok(nas_subsample(&p.z_train, &spec)?.0)
}
