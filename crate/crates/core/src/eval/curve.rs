use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::folds::{make_folds, FoldMode};
use super::predict::{mean_absolute_error, predict};
use super::{derive_seed, mean};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::solver::SolverConfig;
use crate::vector::Variant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub k: usize,
    pub seed: u64,
    #[serde(default)]
    pub fold_mode: FoldMode,
    pub solver: SolverConfig,
    /// Training set sizes, strictly increasing.
    pub sizes: Vec<usize>,
    /// Draw each size as a prefix of one permutation of the training set
    /// (`true`) or resample independently per size.
    pub nested: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub size: usize,
    pub mean_error: f64,
    pub mean_error_raw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveError {
    pub user_id: String,
    pub fold: usize,
    pub size: usize,
    pub error: f64,
    pub error_raw: f64,
    /// Seed of the permutation the training subset was cut from.
    pub subset_seed: u64,
    pub solver_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub method: String,
    pub k: usize,
    pub seed: u64,
    pub fold_mode: FoldMode,
    pub nested: bool,
    pub solver: SolverConfig,
    pub users: Vec<String>,
    pub points: Vec<CurvePoint>,
    /// Ordered by user, then fold, then size.
    pub errors: Vec<CurveError>,
}

impl CurveReport {
    pub fn mean_error_at(&self, size: usize) -> Option<f64> {
        self.points.iter().find(|p| p.size == size).map(|p| p.mean_error)
    }

    /// `user_id,fold,size,error,error_raw`, one row per cell.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(writer);
        let fail = |e: csv::Error| Error::schema("curve csv", e.to_string());
        w.write_record(["user_id", "fold", "size", "error", "error_raw"]).map_err(fail)?;
        for e in &self.errors {
            w.write_record([
                e.user_id.clone(),
                e.fold.to_string(),
                e.size.to_string(),
                e.error.to_string(),
                e.error_raw.to_string(),
            ])
            .map_err(fail)?;
        }
        w.flush().map_err(|e| Error::schema("curve csv", e.to_string()))
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory csv");
        String::from_utf8(buf).expect("utf-8 csv")
    }
}

/// Training curve over several users: for every fold and size, fit on a
/// seeded random subset of the fold's training items and score the fold's
/// test set. The solver seed depends only on (seed, user, fold), so the
/// point at the full training size reproduces cross-validation.
pub fn run_training_curve(datasets: &[Dataset], variant: Variant, config: &CurveConfig) -> Result<CurveReport> {
    if datasets.is_empty() {
        return Err(Error::domain("training curve needs at least one data set"));
    }
    if config.sizes.is_empty() {
        return Err(Error::domain("training curve needs at least one size"));
    }
    if config.sizes[0] == 0 || config.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("training sizes must be positive and strictly increasing"));
    }
    let largest = *config.sizes.last().expect("non-empty sizes");

    let mut errors = Vec::new();
    for dataset in datasets {
        let plan = make_folds(dataset, config.k, config.seed, config.fold_mode)?;
        let user = dataset.user_id();
        let scale = dataset.space().scale();
        for fold in 0..plan.k {
            let train = plan.train_indices(fold);
            if largest > train.len() {
                return Err(Error::domain(format!(
                    "training size {largest} exceeds the {} training items of user {user:?}, fold {fold}",
                    train.len()
                )));
            }
            let test = plan.test_indices(fold);
            let actual: Vec<usize> = test.iter().map(|&i| dataset.ratings()[i].level).collect();
            let solver_seed = derive_seed(config.seed, user, fold);
            let solver = config.solver.with_seed(solver_seed);
            let base_seed = derive_seed(config.seed ^ 0x5eed_c0de, user, fold);
            let mut permutation = train.clone();
            permutation.shuffle(&mut ChaCha8Rng::seed_from_u64(base_seed));
            for &size in &config.sizes {
                let subset_seed = if config.nested { base_seed } else { base_seed.wrapping_add(size as u64) };
                if !config.nested {
                    permutation = train.clone();
                    permutation.shuffle(&mut ChaCha8Rng::seed_from_u64(subset_seed));
                }
                let mut subset = permutation[..size].to_vec();
                subset.sort_unstable();
                let fit = solver.solve(&dataset.fit_instance(&subset)?, variant)?;
                let predicted = test
                    .iter()
                    .map(|&i| predict(&fit.model, &dataset.items()[i], dataset.space()))
                    .collect::<Result<Vec<_>>>()?;
                let mae = mean_absolute_error(&predicted, &actual, scale)?;
                errors.push(CurveError {
                    user_id: user.to_string(),
                    fold,
                    size,
                    error: mae.levels,
                    error_raw: mae.raw,
                    subset_seed,
                    solver_seed,
                });
            }
        }
    }
    let points = config
        .sizes
        .iter()
        .map(|&size| {
            let (lv, raw): (Vec<f64>, Vec<f64>) =
                errors.iter().filter(|e| e.size == size).map(|e| (e.error, e.error_raw)).unzip();
            CurvePoint { size, mean_error: mean(&lv), mean_error_raw: mean(&raw) }
        })
        .collect();
    Ok(CurveReport {
        method: variant.algorithm().to_string(),
        k: config.k,
        seed: config.seed,
        fold_mode: config.fold_mode,
        nested: config.nested,
        solver: config.solver.with_seed(config.seed),
        users: datasets.iter().map(|d| d.user_id().to_string()).collect(),
        points,
        errors,
    })
}
