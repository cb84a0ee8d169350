//! Dense quantum-circuit simulation, fidelity quantum kernels, a
//! precomputed-kernel SVM, and a hardware-aware genetic search over
//! feature-map architectures, evaluated on the bundled breast-cancer
//! benchmark.
//!
//! The crate is organized around the pipeline stages:
//!
//! * [`simcore`] — statevector and density-matrix simulation of 1–12 qubit
//!   circuits, including depolarizing and amplitude-damping noise channels.
//! * [`featuremap`] — genomes and hand-crafted recipes turned into
//!   data-parameterized circuits.
//! * [`qkernel`] — fidelity kernels and Gram matrices, noiseless or noisy.
//! * [`svm`] — SMO solver for precomputed kernels, classical baselines,
//!   cross-validation and grid search.
//! * [`hardware`] — gate vocabularies, coupling maps, genome validation and
//!   native-gate transpilation estimates.
//! * [`nas`] — the genetic architecture search and its variant presets.
//! * [`data`] — dataset ingestion, feature selection, scaling and splits.

pub mod data;
pub mod error;
pub mod featuremap;
pub mod fixtures;
pub mod hardware;
pub mod linalg;
pub mod nas;
pub mod pipeline;
pub mod qkernel;
pub mod rng;
pub mod simcore;
pub mod svm;

pub use error::{Error, Result};
pub use featuremap::{FeatureMap, GateToken, Genome};
pub use qkernel::GramMatrix;
pub use simcore::{BoundGate, GateKind, NoiseModel, QuantumState};
pub use svm::{Metrics, SvmModel};
