//! Data set ingestion and the file formats shared with external tools.

mod convert;
mod dataset;
mod predictions;
mod summary;
mod synth;

pub use convert::{convert, convert_files, ConvertOptions, ItemsLayout};
pub use dataset::{load_dataset, load_dataset_with, write_dataset, Dataset, LoadOptions};
pub use predictions::{
    load_predictions, read_predictions_from, write_predictions, write_predictions_to, PredictionRow,
    PREDICTION_COLUMNS,
};
pub use summary::{render_summary_table, summarize, DatasetSummary, LevelCount};
pub use synth::{generate_synthetic, Supervision, SyntheticConfig};
