//! Bundled regression fixtures: the three published genomes and the named
//! coupling maps, both as embedded text and as parsed values.

use crate::featuremap::Genome;
use crate::hardware::CouplingMap;

pub const HW_FIXED_RZ_GENOME: &str = include_str!("../fixtures/genomes/hw_fixed_rz.genome");
pub const HW_FREE_GENOME: &str = include_str!("../fixtures/genomes/hw_free.genome");
pub const ALL_GATES_GENOME: &str = include_str!("../fixtures/genomes/all_gates.genome");

/// The 11-gate native genome evaluated on 6 qubits with the fixed RZ layer.
pub fn hw_fixed_rz_genome() -> Genome {
    Genome::parse(HW_FIXED_RZ_GENOME).expect("bundled genome parses")
}

/// The 12-gate native genome evaluated on 10 qubits without the layer.
pub fn hw_free_genome() -> Genome {
    Genome::parse(HW_FREE_GENOME).expect("bundled genome parses")
}

/// The 12-gate extended-vocabulary circuit (6xCX, 2xRZ, RX, RY, SX, X).
pub fn all_gates_genome() -> Genome {
    Genome::parse(ALL_GATES_GENOME).expect("bundled genome parses")
}

/// Coupling maps shipped for the CLI: `chain6`, `chain10`, `heavyhex27`.
pub fn bundled_map_names() -> [&'static str; 3] {
    ["chain6", "chain10", "heavyhex27"]
}

pub fn bundled_map(name: &str) -> Option<CouplingMap> {
    CouplingMap::named(name)
}
