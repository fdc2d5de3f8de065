//! Depth-first branch-and-bound over coordinates in index order.
//!
//! With the first `k` coordinates fixed, item `i` has `c_i` decided
//! mismatches and `u = n - k` undecided coordinates, each of which can add
//! zero or one to its distance under either variant. Its deviation is then
//! at least `max(0, delta_i - c_i - u, c_i - delta_i)`; the node bound is the
//! sum over items.
//!
//! Ties between optima resolve to the lexicographically smallest vertex: a
//! node whose bound equals the incumbent is kept only if its prefix is not
//! greater than the incumbent's, and leaves replace the incumbent when
//! `(objective, coords)` is smaller.

use std::cmp::Ordering;
use std::time::Duration;

use num_rational::Rational64;

use super::budget::{Budget, Clock};
use super::local;
use super::prepared::{contributes, Prepared};
use super::{FitInstance, FitResult, Status};
use crate::error::{Error, Result};
use crate::vector::{UserModel, Variant};

/// Move evaluations granted to the root warm start when the search itself
/// is unlimited.
const WARM_START_MOVES: u64 = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchAndBound {
    /// An iteration is one expanded node.
    pub budget: Budget,
    /// Seed of the local-search warm start.
    pub seed: u64,
    /// Budget of the warm start. Defaults to a tenth of a time budget, the
    /// same count for an iteration budget, and a fixed number of moves when
    /// unlimited.
    pub warm_start: Option<Budget>,
}

impl BranchAndBound {
    pub fn new(budget: Budget, seed: u64) -> Self {
        BranchAndBound { budget, seed, warm_start: None }
    }

    pub fn unlimited() -> Self {
        Self::new(Budget::Unlimited, 0)
    }

    pub fn with_warm_start(mut self, warm_start: Budget) -> Self {
        self.warm_start = Some(warm_start);
        self
    }

    fn warm_start_budget(&self) -> Budget {
        self.warm_start.unwrap_or(match self.budget {
            Budget::Time(d) => Budget::Time((d / 10).max(Duration::from_nanos(1))),
            Budget::Iterations(k) => Budget::Iterations(k),
            Budget::Unlimited => Budget::Iterations(WARM_START_MOVES),
        })
    }

    pub fn solve(&self, inst: &FitInstance, variant: Variant) -> Result<FitResult> {
        if inst.is_empty() {
            return Err(Error::domain("cannot fit an empty instance"));
        }
        let budget = self.budget.validate()?;
        let prep = Prepared::new(inst);

        let mut clock = Clock::start(budget);
        let mut warm_clock = Clock::start(self.warm_start_budget());
        let (incumbent, incumbent_obj) = local::search(&prep, variant, self.seed, None, &mut warm_clock);

        let mut search = Search::new(&prep, variant, incumbent, incumbent_obj);
        search.dfs(0, &mut clock);
        let status = if clock.expired() { Status::TimeLimitBest } else { Status::Optimal };

        let model = UserModel::from_trusted(variant, search.best);
        let result = FitResult::new(inst, model, status, clock.used(), clock.elapsed())?;
        debug_assert_eq!(result.objective, prep.to_rational(search.best_obj));
        Ok(result)
    }
}

pub fn solve_branch_and_bound(
    inst: &FitInstance,
    variant: Variant,
    budget: Budget,
    seed: u64,
) -> Result<FitResult> {
    BranchAndBound::new(budget, seed).solve(inst, variant)
}

/// Lower bound on the objective of every completion of `prefix`.
pub fn node_lower_bound(inst: &FitInstance, variant: Variant, prefix: &[i8]) -> Result<Rational64> {
    if prefix.len() > inst.dim() {
        return Err(Error::DimensionMismatch { expected: inst.dim(), found: prefix.len() });
    }
    if prefix.iter().any(|c| !variant.values().contains(c)) {
        return Err(Error::domain(format!("prefix is not a partial {variant} vertex")));
    }
    let prep = Prepared::new(inst);
    let mut mism = vec![0i64; prep.m];
    for (j, &x) in prefix.iter().enumerate() {
        for (i, &bit) in prep.columns[j].iter().enumerate() {
            mism[i] += contributes(variant, bit, x) as i64;
        }
    }
    let bound = scaled_bound(&prep, &mism, (prep.n - prefix.len()) as i64);
    Ok(prep.to_rational(bound))
}

fn scaled_bound(prep: &Prepared, mism: &[i64], undecided: i64) -> i64 {
    mism.iter()
        .zip(&prep.targets)
        .map(|(&c, &t)| {
            let below = t - (c + undecided) * prep.scale;
            let above = c * prep.scale - t;
            below.max(above).max(0)
        })
        .sum()
}

struct Search<'a> {
    prep: &'a Prepared,
    variant: Variant,
    /// Child value order per coordinate.
    order: Vec<Vec<i8>>,
    path: Vec<i8>,
    mism: Vec<i64>,
    best: Vec<i8>,
    best_obj: i64,
}

impl<'a> Search<'a> {
    fn new(prep: &'a Prepared, variant: Variant, best: Vec<i8>, best_obj: i64) -> Self {
        Search {
            prep,
            variant,
            order: child_order(prep, variant),
            path: Vec::with_capacity(prep.n),
            mism: vec![0; prep.m],
            best,
            best_obj,
        }
    }

    fn dfs(&mut self, depth: usize, clock: &mut Clock) {
        if !clock.tick() {
            return;
        }
        let n = self.prep.n;
        let bound = scaled_bound(self.prep, &self.mism, (n - depth) as i64);
        if depth == n {
            // the bound of a full vertex is its objective
            if bound < self.best_obj || (bound == self.best_obj && self.path < self.best) {
                self.best_obj = bound;
                self.best.clone_from(&self.path);
            }
            return;
        }
        match bound.cmp(&self.best_obj) {
            Ordering::Greater => return,
            Ordering::Equal if self.path.as_slice() > &self.best[..depth] => return,
            _ => {}
        }
        for k in 0..self.order[depth].len() {
            let value = self.order[depth][k];
            self.assign(depth, value, 1);
            self.path.push(value);
            self.dfs(depth + 1, clock);
            self.path.pop();
            self.assign(depth, value, -1);
            if clock.expired() {
                return;
            }
        }
    }

    fn assign(&mut self, j: usize, value: i8, sign: i64) {
        for (i, &bit) in self.prep.columns[j].iter().enumerate() {
            if contributes(self.variant, bit, value) {
                self.mism[i] += sign;
            }
        }
    }
}

/// Tries first the value agreeing with the majority bit of the well-rated
/// items (d-rating at most n/2), falling back to all items when none is.
fn child_order(prep: &Prepared, variant: Variant) -> Vec<Vec<i8>> {
    let half = prep.n as i64 * prep.scale;
    let liked: Vec<usize> = (0..prep.m).filter(|&i| 2 * prep.targets[i] <= half).collect();
    let pool: Vec<usize> = if liked.is_empty() { (0..prep.m).collect() } else { liked };
    prep.columns
        .iter()
        .map(|col| {
            let ones = pool.iter().filter(|&&i| col[i]).count();
            let majority_one = 2 * ones > pool.len();
            match (variant, majority_one) {
                (Variant::Binary, true) => vec![1, 0],
                (Variant::Binary, false) => vec![0, 1],
                (Variant::Ternary, true) => vec![1, 0, -1],
                (Variant::Ternary, false) => vec![-1, 0, 1],
            }
        })
        .collect()
}
