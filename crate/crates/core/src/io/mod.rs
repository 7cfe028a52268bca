//! Persistence: the series file, target files and CSV traces.

mod file;
mod target;
mod trace;

pub use file::{write_atomic, BlockEntry, RunConfig, SeriesFile, WeightEntry, FORMAT_VERSION};
pub use target::{parse_target, Target};
pub use trace::{trace_csv, TRACE_COLUMNS};
