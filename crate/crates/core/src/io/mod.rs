//! Dataset ingestion, group construction and result serialization.

mod input;
mod output;
mod pairwise;
mod split;

pub use input::{read_csv_matrix, read_csv_reader, read_vector, CsvOptions, LabeledDataset};
pub use output::{read_power_table, render, write_results, Artifact, OutputFormat, PowerRecord};
pub use pairwise::{pairwise_compare, PvalueMatrix};
pub use split::{quantile_split, QuantileSplit};
