//! Predictions CSV shared with external baseline methods.
//!
//! Header: `user_id,fold,item_id,predicted_level,actual_level,method`.
//! Folds are 0-based; levels are 1-based indices into the rating scale.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const PREDICTION_COLUMNS: [&str; 6] =
    ["user_id", "fold", "item_id", "predicted_level", "actual_level", "method"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub user_id: String,
    pub fold: usize,
    pub item_id: String,
    pub predicted_level: usize,
    pub actual_level: usize,
    pub method: String,
}

pub fn write_predictions_to<W: Write>(writer: W, rows: &[PredictionRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
    w.write_record(PREDICTION_COLUMNS).map_err(csv_error)?;
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::schema("predictions", e.to_string()))
}

pub fn write_predictions(path: impl AsRef<Path>, rows: &[PredictionRow]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_predictions_to(file, rows)
}

/// Reads and validates rows. Levels must lie in `1..=levels`; nothing is
/// clamped.
pub fn read_predictions_from<R: Read>(reader: R, levels: usize, context: &str) -> Result<Vec<PredictionRow>> {
    let mut r = csv::ReaderBuilder::new().from_reader(reader);
    let headers = r.headers().map_err(|e| Error::schema(context, e.to_string()))?.clone();
    for column in PREDICTION_COLUMNS {
        if !headers.iter().any(|h| h == column) {
            return Err(Error::schema(context, format!("missing column `{column}`")));
        }
    }
    let mut rows = Vec::new();
    for (k, record) in r.deserialize::<PredictionRow>().enumerate() {
        // header is line 1
        let line = k + 2;
        let row = record.map_err(|e| Error::schema(format!("{context}: row {line}"), e.to_string()))?;
        for (name, level) in [("predicted_level", row.predicted_level), ("actual_level", row.actual_level)] {
            if level == 0 || level > levels {
                return Err(Error::schema(
                    format!("{context}: row {line}"),
                    format!("{name} {level} outside 1..={levels}"),
                ));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn load_predictions(path: impl AsRef<Path>, levels: usize) -> Result<Vec<PredictionRow>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_predictions_from(file, levels, &path.display().to_string())
}

fn csv_error(e: csv::Error) -> Error {
    Error::schema("predictions", e.to_string())
}
