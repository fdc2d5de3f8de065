//! Fitting a user vertex to a set of rated items.
//!
//! Both objectives are sums of absolute deviations between the distance of
//! each rated item to the model and that item's d-rating:
//! `f1` uses the Hamming distance over binary models and `f2` the don't-care
//! distance over ternary models. Four routes minimize them: exhaustive
//! enumeration (oracle), branch-and-bound (exact, anytime), multi-start
//! local search (heuristic, anytime) and an LP-format export for external
//! MILP solvers.

mod bnb;
mod brute;
mod budget;
mod local;
mod milp;
mod prepared;

use std::time::Duration;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use bnb::{node_lower_bound, solve_branch_and_bound, BranchAndBound};
pub use brute::{solve_brute_force, BINARY_ENUMERATION_LIMIT, TERNARY_ENUMERATION_LIMIT};
pub use budget::Budget;
pub use local::{solve_local_search, LocalSearch};
pub use milp::{export_milp, MilpExport, MilpSummary};

use crate::distance::{hamming, ternary_distance};
use crate::error::{Error, Result};
use crate::rating::DRating;
use crate::scale::AttributeSpace;
use crate::vector::{ItemVector, UserModel, Variant};

/// A rated item set and its d-ratings.
#[derive(Debug, Clone, PartialEq)]
pub struct FitInstance {
    space: AttributeSpace,
    items: Vec<ItemVector>,
    dratings: Vec<DRating>,
}

impl FitInstance {
    pub fn new(space: AttributeSpace, items: Vec<ItemVector>, dratings: Vec<DRating>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::domain("a fit instance needs at least one rated item"));
        }
        if items.len() != dratings.len() {
            return Err(Error::domain(format!(
                "{} items but {} d-ratings",
                items.len(),
                dratings.len()
            )));
        }
        let n = space.dim();
        for item in &items {
            if item.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: item.dim() });
            }
        }
        for d in &dratings {
            DRating::new(d.value(), n)?;
        }
        Ok(FitInstance { space, items, dratings })
    }

    pub fn space(&self) -> &AttributeSpace {
        &self.space
    }

    pub fn items(&self) -> &[ItemVector] {
        &self.items
    }

    pub fn dratings(&self) -> &[DRating] {
        &self.dratings
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// A copy with one more rated item.
    pub fn with_rating(&self, item: ItemVector, drating: DRating) -> Result<Self> {
        let mut items = self.items.clone();
        let mut dratings = self.dratings.clone();
        items.push(item);
        dratings.push(drating);
        FitInstance::new(self.space.clone(), items, dratings)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// The search completed; the objective is the global minimum.
    Optimal,
    /// The exact search was interrupted; the best incumbent is reported.
    TimeLimitBest,
    /// Best vertex found by the heuristic.
    HeuristicBest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: UserModel,
    pub objective: Rational64,
    pub status: Status,
    /// Nodes expanded (branch-and-bound), move evaluations (local search)
    /// or vertices enumerated (brute force).
    pub iterations: u64,
    pub elapsed: Duration,
}

impl FitResult {
    fn new(
        inst: &FitInstance,
        model: UserModel,
        status: Status,
        iterations: u64,
        elapsed: Duration,
    ) -> Result<Self> {
        let objective = objective(inst, &model)?;
        Ok(FitResult { model, objective, status, iterations, elapsed })
    }
}

/// `f1(x) = sum |d(v_i, x) - delta_i|` for a binary model.
pub fn objective_f1(inst: &FitInstance, x: &UserModel) -> Result<Rational64> {
    if x.variant() != Variant::Binary {
        return Err(Error::domain("f1 is defined for binary models"));
    }
    sum_deviations(inst, x, hamming)
}

/// `f2(x) = sum |d'(v_i, x) - delta_i|` for a ternary model.
pub fn objective_f2(inst: &FitInstance, x: &UserModel) -> Result<Rational64> {
    if x.variant() != Variant::Ternary {
        return Err(Error::domain("f2 is defined for ternary models"));
    }
    sum_deviations(inst, x, ternary_distance)
}

/// `f1` or `f2` depending on the model variant.
pub fn objective(inst: &FitInstance, x: &UserModel) -> Result<Rational64> {
    match x.variant() {
        Variant::Binary => objective_f1(inst, x),
        Variant::Ternary => objective_f2(inst, x),
    }
}

fn sum_deviations(
    inst: &FitInstance,
    x: &UserModel,
    dist: fn(&ItemVector, &UserModel) -> Result<usize>,
) -> Result<Rational64> {
    let mut total = Rational64::zero();
    for (item, delta) in inst.items.iter().zip(&inst.dratings) {
        let d = Rational64::from_integer(dist(item, x)? as i64);
        let dev = d - delta.value();
        total += if dev < Rational64::zero() { -dev } else { dev };
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    BruteForce,
    BranchAndBound,
    LocalSearch,
}

/// Solver choice plus its budget, as used by the evaluation harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub budget: Budget,
    pub seed: u64,
    /// Local search only: stop after this many restarts without improvement.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patience: Option<u32>,
}

impl SolverConfig {
    pub fn new(kind: SolverKind, budget: Budget, seed: u64) -> Self {
        SolverConfig { kind, budget, seed, patience: None }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SolverConfig { seed, ..self.clone() }
    }

    pub fn solve(&self, inst: &FitInstance, variant: Variant) -> Result<FitResult> {
        match self.kind {
            SolverKind::BruteForce => solve_brute_force(inst, variant),
            SolverKind::BranchAndBound => BranchAndBound::new(self.budget, self.seed).solve(inst, variant),
            SolverKind::LocalSearch => LocalSearch::new(self.budget, self.seed)
                .with_patience(self.patience)
                .solve(inst, variant),
        }
    }
}
