//! k-fold partitions of a single-user data set.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FoldMode {
    /// Consecutive blocks in data set order.
    #[default]
    Contiguous,
    /// Blocks over a seeded permutation of the items.
    Random,
}

/// Assigns every item of a data set to one of `k` folds. Fold sizes differ
/// by at most one; the first `len % k` folds get the extra item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub user_id: String,
    pub k: usize,
    pub seed: u64,
    pub mode: FoldMode,
    pub assignments: Vec<FoldAssignment>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub item_id: String,
    pub fold: usize,
}

pub fn make_folds(dataset: &Dataset, k: usize, seed: u64, mode: FoldMode) -> Result<FoldPlan> {
    let len = dataset.len();
    if k < 2 {
        return Err(Error::domain(format!("need at least 2 folds, got {k}")));
    }
    if k > len {
        return Err(Error::domain(format!("{k} folds requested for only {len} items")));
    }
    let mut order: Vec<usize> = (0..len).collect();
    if mode == FoldMode::Random {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let (base, extra) = (len / k, len % k);
    let mut fold_of = vec![0usize; len];
    let mut pos = 0;
    for fold in 0..k {
        let size = base + usize::from(fold < extra);
        for &item in &order[pos..pos + size] {
            fold_of[item] = fold;
        }
        pos += size;
    }
    Ok(FoldPlan {
        user_id: dataset.user_id().to_string(),
        k,
        seed,
        mode,
        assignments: dataset
            .items()
            .iter()
            .zip(fold_of)
            .map(|(it, fold)| FoldAssignment { item_id: it.id.clone(), fold })
            .collect(),
    })
}

impl FoldPlan {
    /// Item indices outside fold `f`, in data set order.
    pub fn train_indices(&self, f: usize) -> Vec<usize> {
        self.indices(|fold| fold != f)
    }

    /// Item indices inside fold `f`, in data set order.
    pub fn test_indices(&self, f: usize) -> Vec<usize> {
        self.indices(|fold| fold == f)
    }

    fn indices(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        self.assignments.iter().enumerate().filter(|(_, a)| keep(a.fold)).map(|(k, _)| k).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for a in &self.assignments {
            sizes[a.fold] += 1;
        }
        sizes
    }

    /// Checks that the plan covers `dataset` item by item.
    pub fn check(&self, dataset: &Dataset) -> Result<()> {
        if self.assignments.len() != dataset.len() {
            return Err(Error::schema(
                "fold plan",
                format!("{} assignments for {} items", self.assignments.len(), dataset.len()),
            ));
        }
        for (k, (a, item)) in self.assignments.iter().zip(dataset.items()).enumerate() {
            if a.item_id != item.id {
                return Err(Error::schema(
                    format!("fold plan: assignments[{k}]"),
                    format!("item {:?} where the data set has {:?}", a.item_id, item.id),
                ));
            }
            if a.fold >= self.k {
                return Err(Error::schema(format!("fold plan: assignments[{k}]"), format!("fold {} >= k", a.fold)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("fold plan serializes");
        out.push('\n');
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_synthetic, SyntheticConfig};

    fn data(items: usize) -> Dataset {
        generate_synthetic(&SyntheticConfig::new(12, items, 1)).unwrap().0
    }

    #[test]
    fn restaurant_and_movie_shapes() {
        let plan = make_folds(&data(500), 10, 42, FoldMode::Contiguous).unwrap();
        assert_eq!(plan.fold_sizes(), vec![50; 10]);
        assert_eq!(plan.train_indices(3).len(), 450);
        let plan = make_folds(&data(50), 10, 42, FoldMode::Random).unwrap();
        assert_eq!(plan.fold_sizes(), vec![5; 10]);
        assert_eq!(plan.train_indices(0).len(), 45);
    }

    #[test]
    fn uneven_sizes_differ_by_one() {
        let plan = make_folds(&data(23), 4, 0, FoldMode::Random).unwrap();
        assert_eq!(plan.fold_sizes(), vec![6, 6, 6, 5]);
    }

    #[test]
    fn contiguous_blocks() {
        let plan = make_folds(&data(10), 5, 0, FoldMode::Contiguous).unwrap();
        assert_eq!(plan.test_indices(0), vec![0, 1]);
        assert_eq!(plan.test_indices(4), vec![8, 9]);
    }

    #[test]
    fn deterministic_partition() {
        let d = data(37);
        let a = make_folds(&d, 10, 9, FoldMode::Random).unwrap();
        assert_eq!(a, make_folds(&d, 10, 9, FoldMode::Random).unwrap());
        let mut all: Vec<usize> = (0..10).flat_map(|f| a.test_indices(f)).collect();
        all.sort();
        assert_eq!(all, (0..37).collect::<Vec<_>>());
        a.check(&d).unwrap();
    }

    #[test]
    fn too_many_folds() {
        assert!(make_folds(&data(5), 6, 0, FoldMode::Contiguous).is_err());
        assert!(make_folds(&data(5), 1, 0, FoldMode::Contiguous).is_err());
    }
}
