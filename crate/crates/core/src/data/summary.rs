use std::fmt::Write;

use serde::Serialize;

use super::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelCount {
    pub raw: f64,
    pub count: usize,
}

/// Per-user description: dimension, rating histogram, mean and sample
/// standard deviation of the raw ratings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub user_id: String,
    pub n: usize,
    pub items: usize,
    pub level_counts: Vec<LevelCount>,
    pub mean_rating: f64,
    pub std_deviation: f64,
}

pub fn summarize(dataset: &Dataset) -> Result<DatasetSummary> {
    let ratings = dataset.ratings();
    if ratings.is_empty() {
        return Err(Error::domain("cannot summarize an empty data set"));
    }
    let scale = dataset.space().scale();
    let mut counts = vec![0usize; scale.levels()];
    for r in ratings {
        counts[r.level - 1] += 1;
    }
    let raws: Vec<f64> = ratings.iter().map(|r| r.raw).collect();
    let k = raws.len() as f64;
    let mean = raws.iter().sum::<f64>() / k;
    let std = if raws.len() < 2 {
        0.0
    } else {
        (raws.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
    };
    Ok(DatasetSummary {
        user_id: dataset.user_id().to_string(),
        n: dataset.dim(),
        items: ratings.len(),
        level_counts: scale
            .raw_levels()
            .iter()
            .zip(counts)
            .map(|(&raw, count)| LevelCount { raw, count })
            .collect(),
        mean_rating: mean,
        std_deviation: std,
    })
}

/// Aligned table with one row per user: `user n <counts per level> average std`.
/// Summaries with different scales get their own header lines.
pub fn render_summary_table(summaries: &[DatasetSummary]) -> String {
    let mut out = String::new();
    let mut last_header: Option<String> = None;
    for s in summaries {
        let mut header = format!("{:<12} {:>5}", "user", "n");
        for lc in &s.level_counts {
            write!(header, " {:>5}", format!("{}*", trim_float(lc.raw))).unwrap();
        }
        write!(header, " {:>8} {:>8}", "average", "std").unwrap();
        if last_header.as_deref() != Some(header.as_str()) {
            out.push_str(&header);
            out.push('\n');
            last_header = Some(header);
        }
        let mut row = format!("{:<12} {:>5}", s.user_id, s.n);
        for lc in &s.level_counts {
            write!(row, " {:>5}", lc.count).unwrap();
        }
        write!(row, " {:>8.2} {:>8.2}", s.mean_rating, s.std_deviation).unwrap();
        out.push_str(&row);
        out.push('\n');
    }
    out
}

fn trim_float(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        format!("{x}")
    }
}
