//! Multi-start first-improvement local search.
//!
//! The neighbourhood of a vertex is every vertex reachable by changing a
//! single coordinate (a bit flip for binary models, a reassignment to one of
//! the two other values for ternary ones). Coordinates are scanned
//! cyclically; the first improving move is applied at once. When a full
//! cycle brings no improvement the vertex is a local optimum and the search
//! restarts from a uniformly random vertex. A zero objective is a proven
//! global optimum and ends the run.
//!
//! The first start is a weighted vote: items rated close to the user pull
//! each coordinate towards their own bit, distant items push it away.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::budget::{Budget, Clock};
use super::prepared::{contributes, Prepared};
use super::{FitInstance, FitResult, Status};
use crate::error::Result;
use crate::vector::{UserModel, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalSearch {
    /// An iteration is one evaluated move.
    pub budget: Budget,
    pub seed: u64,
    /// Stop after this many consecutive restarts that do not improve the best
    /// vertex.
    pub patience: Option<u32>,
}

impl LocalSearch {
    pub fn new(budget: Budget, seed: u64) -> Self {
        LocalSearch { budget, seed, patience: None }
    }

    pub fn with_patience(mut self, patience: Option<u32>) -> Self {
        self.patience = patience;
        self
    }

    pub fn solve(&self, inst: &FitInstance, variant: Variant) -> Result<FitResult> {
        let budget = self.budget.validate()?;
        let prep = Prepared::new(inst);
        let mut clock = Clock::start(budget);
        let (coords, _) = search(&prep, variant, self.seed, self.patience, &mut clock);
        let model = UserModel::from_trusted(variant, coords);
        FitResult::new(inst, model, Status::HeuristicBest, clock.used(), clock.elapsed())
    }
}

pub fn solve_local_search(inst: &FitInstance, variant: Variant, budget: Budget, seed: u64) -> Result<FitResult> {
    LocalSearch::new(budget, seed).solve(inst, variant)
}

struct State<'a> {
    prep: &'a Prepared,
    variant: Variant,
    coords: Vec<i8>,
    dist: Vec<i64>,
    objective: i64,
}

impl<'a> State<'a> {
    fn at(prep: &'a Prepared, variant: Variant, coords: Vec<i8>) -> Self {
        let dist = prep.distances(variant, &coords);
        let objective = prep.total_error(&dist);
        State { prep, variant, coords, dist, objective }
    }

    fn random(prep: &'a Prepared, variant: Variant, rng: &mut ChaCha8Rng) -> Self {
        let values = variant.values();
        let coords = (0..prep.n).map(|_| values[rng.gen_range(0..values.len())]).collect();
        State::at(prep, variant, coords)
    }

    fn vote(prep: &'a Prepared, variant: Variant) -> Self {
        // weight of item i is n/2 - delta_i, doubled to stay integral
        let half = prep.n as i64 * prep.scale;
        let weights: Vec<i64> = prep.targets.iter().map(|t| half - 2 * t).collect();
        let coords = prep
            .columns
            .iter()
            .map(|col| {
                let score: i64 = col.iter().zip(&weights).map(|(&bit, w)| if bit { *w } else { -w }).sum();
                match (variant, score.signum()) {
                    (_, 1) => 1,
                    (Variant::Ternary, -1) => -1,
                    _ => 0,
                }
            })
            .collect();
        State::at(prep, variant, coords)
    }

    /// Objective change if coordinate `j` took value `to`.
    fn delta(&self, j: usize, to: i8) -> i64 {
        let from = self.coords[j];
        let col = &self.prep.columns[j];
        let mut delta = 0;
        for (i, &bit) in col.iter().enumerate() {
            let step = contributes(self.variant, bit, to) as i64 - contributes(self.variant, bit, from) as i64;
            if step != 0 {
                let d = self.dist[i];
                delta += self.prep.error(i, d + step) - self.prep.error(i, d);
            }
        }
        delta
    }

    fn apply(&mut self, j: usize, to: i8, delta: i64) {
        let from = self.coords[j];
        for (i, &bit) in self.prep.columns[j].iter().enumerate() {
            self.dist[i] +=
                contributes(self.variant, bit, to) as i64 - contributes(self.variant, bit, from) as i64;
        }
        self.coords[j] = to;
        self.objective += delta;
    }

    /// Descends to a local optimum. Returns `false` if the budget ran out.
    fn descend(&mut self, clock: &mut Clock) -> bool {
        let n = self.prep.n;
        let values = self.variant.values();
        let mut j = 0;
        let mut stale = 0;
        while stale < n && self.objective > 0 {
            let mut improved = false;
            for &to in values {
                if to == self.coords[j] {
                    continue;
                }
                if !clock.tick() {
                    return false;
                }
                let delta = self.delta(j, to);
                if delta < 0 {
                    self.apply(j, to, delta);
                    improved = true;
                    break;
                }
            }
            stale = if improved { 0 } else { stale + 1 };
            j = (j + 1) % n;
        }
        true
    }
}

/// Runs the search against an already started clock. Returns the best
/// coordinates and their scaled objective.
pub(crate) fn search(
    prep: &Prepared,
    variant: Variant,
    seed: u64,
    patience: Option<u32>,
    clock: &mut Clock,
) -> (Vec<i8>, i64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = State::vote(prep, variant);
    let mut best = (state.coords.clone(), state.objective);
    let mut idle_restarts = 0u32;
    loop {
        let finished = state.descend(clock);
        if state.objective < best.1 {
            best = (state.coords.clone(), state.objective);
            idle_restarts = 0;
        } else if finished {
            idle_restarts += 1;
        }
        if !finished || best.1 == 0 || clock.expired() {
            break;
        }
        if patience.is_some_and(|p| idle_restarts >= p) {
            break;
        }
        state = State::random(prep, variant, &mut rng);
        if state.objective < best.1 {
            best = (state.coords.clone(), state.objective);
        }
    }
    debug_assert_eq!(prep.total_error(&prep.distances(variant, &best.0)), best.1);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rating::DRating;
    use crate::scale::{AttributeSpace, RatingScale};
    use crate::vector::ItemVector;
    use num_rational::Rational64;
    use num_traits::Zero;

    fn planted(n: usize, m: usize, seed: u64) -> (FitInstance, Vec<bool>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        let items: Vec<ItemVector> = (0..m)
            .map(|k| ItemVector::new(format!("i{k}"), (0..n).map(|_| rng.gen()).collect()))
            .collect();
        let dratings = items
            .iter()
            .map(|it| {
                let d = it.bits().iter().zip(&w).filter(|(a, b)| a != b).count();
                DRating::from_integer(d, n).unwrap()
            })
            .collect();
        let space = AttributeSpace::anonymous(n, RatingScale::whole_stars(5).unwrap()).unwrap();
        (FitInstance::new(space, items, dratings).unwrap(), w)
    }

    #[test]
    fn recovers_planted_zero() {
        let (inst, _) = planted(30, 60, 7);
        let r = solve_local_search(&inst, Variant::Binary, Budget::Iterations(2_000_000), 1).unwrap();
        assert_eq!(r.objective, Rational64::zero());
        assert_eq!(r.status, Status::HeuristicBest);
    }

    #[test]
    fn deterministic_for_seed() {
        let (inst, _) = planted(12, 20, 3);
        let a = solve_local_search(&inst, Variant::Ternary, Budget::Iterations(5000), 9).unwrap();
        let b = solve_local_search(&inst, Variant::Ternary, Budget::Iterations(5000), 9).unwrap();
        assert_eq!(a.model, b.model);
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn rejects_empty_budget() {
        let (inst, _) = planted(4, 3, 1);
        assert!(solve_local_search(&inst, Variant::Binary, Budget::Iterations(0), 0).is_err());
    }

    #[test]
    fn tiny_budget_still_returns_a_vertex() {
        let (inst, _) = planted(8, 10, 2);
        let r = solve_local_search(&inst, Variant::Binary, Budget::Iterations(1), 0).unwrap();
        assert_eq!(r.model.dim(), 8);
        assert!(r.iterations <= 1);
    }
}
