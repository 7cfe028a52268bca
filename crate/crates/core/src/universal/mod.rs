//! The universal series: catalog, block construction, weight, greedy
//! subseries selection and the verifier for the weighted tail estimates.

mod build;
mod catalog;
mod greedy;
mod verify;
mod weight;

pub use build::{block_eps, block_height, build_universal, verify_block, BlockRecord, BuildError, Construction, OnFailure};
pub use catalog::{generate_catalog, Catalog, CatalogParams};
pub use greedy::{greedy_subseries, ApproxTrace, StepStatus, TraceRow, Unreached};
pub use verify::{tail_checks, verify_construction, TAIL_EXPONENTS};
pub use weight::{build_weight, from_parts as weight_from_parts, level_value, weight_n0, WeightFunction, WeightLevel};
